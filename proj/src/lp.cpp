#include "ddsc/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace ddsc::lp
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivTol = 1e-11;
constexpr double kCostTol = 1e-11;
constexpr int kDegenerateSwitch = 40;
constexpr long kMaxIter = 200000;

enum class PhaseOutcome
{
    Optimal,
    Unbounded
};

// Dense tableau over [A | I]; the identity block belongs to phase-1 artificials.
struct Tableau
{
    Eigen::Index m = 0;
    Eigen::Index n = 0; // structural columns
    Matrix T;           // m x (n + m)
    Vector xb;          // basic values
    Vector x;           // all values, nonbasic ones sit on a bound
    Vector lo, hi;
    std::vector<Eigen::Index> basis;
    std::vector<bool> is_basic;
    Vector d; // reduced costs

    Eigen::Index cols() const { return n + m; }

    void compute_reduced_costs(const Vector& cost)
    {
        d = cost;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            const double cb = cost(basis[i]);
            if (cb != 0.0)
                d.noalias() -= cb * T.row(i).transpose();
        }
    }

    void pivot(Eigen::Index r, Eigen::Index j)
    {
        const double p = T(r, j);
        T.row(r) /= p;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            if (i == r)
                continue;
            const double f = T(i, j);
            if (f != 0.0)
                T.row(i) -= f * T.row(r);
        }
        const double fd = d(j);
        if (fd != 0.0)
            d -= fd * T.row(r).transpose();
    }

    PhaseOutcome run(const Vector& cost)
    {
        compute_reduced_costs(cost);
        int degenerate_run = 0;
        bool bland = false;
        for (long iter = 0; iter < kMaxIter; ++iter)
        {
            // entering column
            Eigen::Index enter = -1;
            double best = 0.0;
            for (Eigen::Index j = 0; j < cols(); ++j)
            {
                if (is_basic[j] || hi(j) - lo(j) <= 0.0)
                    continue;
                const bool at_upper = x(j) >= hi(j) && std::isfinite(hi(j));
                const double gain = at_upper ? d(j) : -d(j);
                if (gain <= kCostTol)
                    continue;
                if (bland)
                {
                    enter = j;
                    break;
                }
                if (gain > best)
                {
                    best = gain;
                    enter = j;
                }
            }
            if (enter < 0)
                return PhaseOutcome::Optimal;

            const bool at_upper = x(enter) >= hi(enter) && std::isfinite(hi(enter));
            const double dir = at_upper ? -1.0 : 1.0;

            // ratio test
            double theta = hi(enter) - lo(enter);
            Eigen::Index leave = -1;
            bool leave_to_upper = false;
            double leave_pivot = 0.0;
            for (Eigen::Index i = 0; i < m; ++i)
            {
                const double alpha = dir * T(i, enter);
                const Eigen::Index bv = basis[i];
                double lim = kInf;
                bool to_upper = false;
                if (alpha > kPivTol)
                    lim = (xb(i) - lo(bv)) / alpha;
                else if (alpha < -kPivTol && std::isfinite(hi(bv)))
                {
                    lim = (hi(bv) - xb(i)) / (-alpha);
                    to_upper = true;
                }
                else
                    continue;
                lim = std::max(lim, 0.0);
                bool take = false;
                if (lim < theta - 1e-14)
                    take = true;
                else if (leave >= 0 && lim <= theta + 1e-14)
                {
                    if (bland)
                        take = bv < basis[leave];
                    else
                        take = std::abs(alpha) > leave_pivot;
                }
                if (take)
                {
                    theta = lim;
                    leave = i;
                    leave_to_upper = to_upper;
                    leave_pivot = std::abs(alpha);
                }
            }
            if (!std::isfinite(theta))
                return PhaseOutcome::Unbounded;

            if (theta <= 1e-13)
            {
                if (++degenerate_run > kDegenerateSwitch)
                    bland = true;
            }
            else
                degenerate_run = 0;

            xb -= dir * theta * T.col(enter);
            x(enter) += dir * theta;

            if (leave < 0)
            {
                // bound flip, basis unchanged
                x(enter) = at_upper ? lo(enter) : hi(enter);
                for (Eigen::Index i = 0; i < m; ++i)
                    x(basis[i]) = xb(i);
                continue;
            }

            const Eigen::Index out = basis[leave];
            x(out) = leave_to_upper ? hi(out) : lo(out);
            is_basic[out] = false;
            pivot(leave, enter);
            basis[leave] = enter;
            is_basic[enter] = true;
            xb(leave) = x(enter);
            for (Eigen::Index i = 0; i < m; ++i)
                x(basis[i]) = xb(i);
        }
        throw std::runtime_error("simplex: iteration limit reached");
    }
};

} // namespace

const char* to_string(Status s)
{
    switch (s)
    {
    case Status::Optimal:
        return "optimal";
    case Status::Infeasible:
        return "infeasible";
    case Status::Unbounded:
        return "unbounded";
    }
    return "?";
}

Result solve_bounded(const Matrix& A, const Vector& b, const Vector& c, const Vector& lo,
                     const Vector& hi, double feas_tol)
{
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    require_dim(b.size(), m, "solve_bounded b");
    require_dim(c.size(), n, "solve_bounded c");
    require_dim(lo.size(), n, "solve_bounded lo");
    require_dim(hi.size(), n, "solve_bounded hi");

    Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.lo.resize(n + m);
    tb.hi.resize(n + m);
    tb.x.resize(n + m);
    for (Eigen::Index j = 0; j < n; ++j)
    {
        if (!std::isfinite(lo(j)) && !std::isfinite(hi(j)))
            throw std::invalid_argument("solve_bounded: free variable without a finite bound");
        if (lo(j) > hi(j))
        {
            Result r;
            r.status = Status::Infeasible;
            r.infeasibility = kInf;
            return r;
        }
        tb.lo(j) = lo(j);
        tb.hi(j) = hi(j);
        tb.x(j) = std::isfinite(lo(j)) ? lo(j) : hi(j);
    }
    // A lower bound of -inf with a finite upper bound is handled by starting at
    // the upper bound; the ratio test never needs the missing bound.
    for (Eigen::Index j = 0; j < n; ++j)
        if (!std::isfinite(tb.lo(j)))
            tb.lo(j) = -kInf;

    const Vector resid = b - A * tb.x.head(n);
    Vector sign(m);
    for (Eigen::Index i = 0; i < m; ++i)
        sign(i) = resid(i) >= 0 ? 1.0 : -1.0;

    tb.T.resize(m, n + m);
    tb.T.leftCols(n) = sign.asDiagonal() * A;
    tb.T.rightCols(m).setIdentity();
    tb.xb = resid.cwiseAbs();
    tb.basis.resize(m);
    tb.is_basic.assign(n + m, false);
    for (Eigen::Index i = 0; i < m; ++i)
    {
        tb.basis[i] = n + i;
        tb.is_basic[n + i] = true;
        tb.lo(n + i) = 0.0;
        tb.hi(n + i) = kInf;
        tb.x(n + i) = tb.xb(i);
    }

    // Phase 1
    Vector cost1 = Vector::Zero(n + m);
    cost1.tail(m).setOnes();
    tb.run(cost1);

    Result res;
    res.infeasibility = tb.x.tail(m).sum();
    if (res.infeasibility > feas_tol)
    {
        res.status = Status::Infeasible;
        res.x = tb.x.head(n);
        return res;
    }

    // Phase 2: pin artificials to zero.
    for (Eigen::Index i = 0; i < m; ++i)
    {
        tb.hi(n + i) = 0.0;
        tb.x(n + i) = std::min(tb.x(n + i), 0.0);
    }
    for (Eigen::Index i = 0; i < m; ++i)
        if (tb.basis[i] >= n)
            tb.xb(i) = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
        tb.x(tb.basis[i]) = tb.xb(i);

    Vector cost2 = Vector::Zero(n + m);
    cost2.head(n) = c;
    const PhaseOutcome out = tb.run(cost2);
    res.x = tb.x.head(n);
    res.value = c.dot(res.x);
    if (out == PhaseOutcome::Unbounded)
    {
        res.status = Status::Unbounded;
        return res;
    }
    res.status = Status::Optimal;
    res.duals.resize(m);
    for (Eigen::Index i = 0; i < m; ++i)
        res.duals(i) = -sign(i) * tb.d(n + i);
    return res;
}

Result minimize(const Vector& c, const Matrix& H, const Vector& h)
{
    const Eigen::Index n = c.size();
    require_dim(H.cols(), n, "lp::minimize H");
    require_dim(h.size(), H.rows(), "lp::minimize h");
    const Eigen::Index q = H.rows();

    Result res;
    if (q == 0)
    {
        res.x = Vector::Zero(n);
        res.status = c.isZero(0.0) ? Status::Optimal : Status::Unbounded;
        return res;
    }

    // dual: min h'y  s.t. H'y = -c, y >= 0
    const Vector lo = Vector::Zero(q);
    const Vector hi = Vector::Constant(q, kInf);
    const double scale = std::max(1.0, c.lpNorm<Eigen::Infinity>());
    Result dual = solve_bounded(H.transpose(), -c, h, lo, hi, kFeasTol * 1e-2 * scale);

    if (dual.status == Status::Optimal)
    {
        res.status = Status::Optimal;
        res.x = dual.duals;
        res.value = c.dot(res.x);
        return res;
    }
    if (dual.status == Status::Unbounded)
    {
        res.status = Status::Infeasible;
        return res;
    }
    // dual infeasible: primal is unbounded or infeasible
    Result feas = minimize(Vector::Zero(n), H, h);
    res.status = feas.status == Status::Optimal ? Status::Unbounded : Status::Infeasible;
    res.x = feas.x;
    return res;
}

Result maximize(const Vector& c, const Matrix& H, const Vector& h)
{
    Result r = minimize(-c, H, h);
    r.value = -r.value;
    return r;
}

} // namespace ddsc::lp
