#include "ddsc/safety.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "ddsc/lp.hpp"
#include "ddsc/reach.hpp"
#include "ddsc/setops.hpp"

namespace ddsc
{

std::string to_string(Verdict v)
{
    switch (v)
    {
    case Verdict::Safe:
        return "safe";
    case Verdict::UnsafeInput:
        return "unsafe_input";
    case Verdict::UnsafeReach:
        return "unsafe_reach";
    }
    return "?";
}

std::vector<Vector> SafetyModel::seeds() const
{
    std::vector<Vector> s;
    s.reserve(families.size());
    for (const auto& f : families)
        s.push_back(f.cell.x_e);
    return s;
}

Verdict verify(const Vector& u, const Vector& x, const MatrixZonotope& M, const HPolytope& U,
               const HPolytope& X_eta, const Zonotope& W)
{
    if (!u.allFinite() || !U.contains(u, kFeasTol))
        return Verdict::UnsafeInput;
    if (!contains_set(X_eta, rors_point(M, x, u, W)))
        return Verdict::UnsafeReach;
    return Verdict::Safe;
}

std::optional<Vector> project_onto_polytope(const Matrix& A, const Vector& b, const Vector& target)
{
    const Eigen::Index m = target.size();
    const double scale = 1e-10 * std::max(1.0, b.lpNorm<Eigen::Infinity>());
    auto feasible = [&](const Vector& u) { return ((A * u - b).array() <= scale).all(); };
    if (feasible(target))
        return target;

    std::optional<Vector> best;
    double best_d = std::numeric_limits<double>::infinity();
    const Eigen::Index rows = A.rows();
    // The projection is the closest feasible point among all equality-constrained
    // projections onto at most m active rows.
    std::vector<Eigen::Index> idx;
    std::function<void(Eigen::Index)> rec = [&](Eigen::Index start) {
        if (!idx.empty())
        {
            const auto k = static_cast<Eigen::Index>(idx.size());
            Matrix As(k, m);
            Vector bs(k);
            for (Eigen::Index i = 0; i < k; ++i)
            {
                As.row(i) = A.row(idx[static_cast<std::size_t>(i)]);
                bs(i) = b(idx[static_cast<std::size_t>(i)]);
            }
            const Matrix G = As * As.transpose();
            Eigen::FullPivLU<Matrix> lu(G);
            if (lu.isInvertible())
            {
                const Vector u = target - As.transpose() * lu.solve(As * target - bs);
                const double d = (u - target).squaredNorm();
                if (d < best_d && feasible(u))
                {
                    best_d = d;
                    best = u;
                }
            }
        }
        if (static_cast<Eigen::Index>(idx.size()) == m)
            return;
        for (Eigen::Index r = start; r < rows; ++r)
        {
            idx.push_back(r);
            rec(r + 1);
            idx.pop_back();
        }
    };
    rec(0);
    return best;
}

namespace
{

struct SlackChoice
{
    int cell = -1;
    int level = -1;
    double slack = std::numeric_limits<double>::infinity();
    Vector u;
};

// Split Xi rows into the u-slice at a fixed x.
std::pair<Matrix, Vector> slice(const HPolytope& Xi, const Vector& x)
{
    const Eigen::Index n = x.size();
    const Eigen::Index m = Xi.dim() - n;
    return {Xi.H().rightCols(m), Xi.h() - Xi.H().leftCols(n) * x};
}

SlackChoice least_violation(const Vector& x, const SafetyModel& model, int prefer)
{
    SlackChoice best;
    const auto L = static_cast<int>(model.families.size());
    std::vector<int> order(static_cast<std::size_t>(L));
    std::iota(order.begin(), order.end(), 0);
    std::stable_partition(order.begin(), order.end(), [&](int l) { return l == prefer; });
    for (int l : order)
    {
        const auto& fam = model.families[static_cast<std::size_t>(l)];
        for (int j = 1; j <= fam.levels(); ++j)
        {
            const auto [Hu, rhs] = slice(fam.Xi[static_cast<std::size_t>(j)], x);
            const Eigen::Index m = Hu.cols();
            Matrix A(Hu.rows() + 1, m + 1);
            A << Hu, -Vector::Ones(Hu.rows()), Matrix::Zero(1, m), -Matrix::Identity(1, 1);
            Vector b(Hu.rows() + 1);
            b << rhs, 0.0;
            const auto r = lp::minimize(Vector::Unit(m + 1, m), A, b);
            if (r.status == lp::Status::Optimal && r.value < best.slack - 1e-12)
                best = {l, j, r.value, r.x.head(m)};
        }
    }
    return best;
}

} // namespace

EcResult ec_step(const Vector& x, SafetyState st, const SafetyModel& model)
{
    if (model.families.empty())
        throw std::invalid_argument("ec_step: no families");
    const auto seeds = model.seeds();
    int l = (st.f == 0 && st.cell) ? *st.cell : voronoi_index(seeds, x);
    st.f = 0;
    st.alarm = false;

    auto lev = model.families[static_cast<std::size_t>(l)].level_of(x);
    if (!lev)
    {
        std::vector<int> order(seeds.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return (x - seeds[static_cast<std::size_t>(a)]).squaredNorm() <
                   (x - seeds[static_cast<std::size_t>(b)]).squaredNorm();
        });
        for (int c : order)
        {
            if (c == l)
                continue;
            if (auto lv = model.families[static_cast<std::size_t>(c)].level_of(x))
            {
                l = c;
                lev = lv;
                break;
            }
        }
    }

    if (lev)
    {
        const auto& fam = model.families[static_cast<std::size_t>(l)];
        st.cell = l;
        st.level = *lev;
        const Vector ut = fam.cell.terminal_input(x);
        if (*lev == 0)
        {
            st.f = 1;
            return {ut, st};
        }
        const auto [Hu, rhs] = slice(fam.Xi[static_cast<std::size_t>(*lev)], x);
        if (auto u = project_onto_polytope(Hu, rhs, ut))
        {
            if ((*u - ut).norm() > 0.0)
            {
                // nudge off the boundary toward the slice's Chebyshev center
                if (auto ball = HPolytope(Hu, rhs).chebyshev_center())
                    *u += 1e-6 * (ball->center - *u);
            }
            return {*u, st};
        }
    }

    const auto choice = least_violation(x, model, l);
    st.alarm = true;
    if (choice.cell < 0)
    {
        st.cell = l;
        st.level.reset();
        const auto& cell = model.families[static_cast<std::size_t>(l)].cell;
        Vector u = cell.terminal_input(x);
        const auto [lo, hi] = model.U.bounding_box();
        return {u.cwiseMax(lo).cwiseMin(hi), st};
    }
    st.cell = choice.cell;
    st.level = choice.level;
    const auto [lo, hi] = model.U.bounding_box();
    return {choice.u.cwiseMax(lo).cwiseMin(hi), st};
}

PlantSideResult plant_side_step(const Vector& u_recv, const Vector& x, const SafetyState& st,
                                const SafetyModel& model)
{
    const Verdict v = verify(u_recv, x, model.M, model.U, model.X_eta, model.W);
    if (st.f == 1 && v == Verdict::Safe)
    {
        SafetyState out;
        return {u_recv, v, out, false};
    }
    auto ec = ec_step(x, st, model);
    return {std::move(ec.u), v, std::move(ec.st), true};
}

} // namespace ddsc
