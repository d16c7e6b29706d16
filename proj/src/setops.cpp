#include "ddsc/setops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ddsc/lp.hpp"
#include "ddsc/rng.hpp"

namespace ddsc
{

namespace
{

double binomial(Eigen::Index n, Eigen::Index k)
{
    if (k < 0 || k > n)
        return 0.0;
    double r = 1.0;
    for (Eigen::Index i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Calls fn for every k-subset of {0..n-1} in lexicographic order.
void for_each_combination(Eigen::Index n, Eigen::Index k,
                          const std::function<void(const std::vector<Eigen::Index>&)>& fn)
{
    if (k > n || k < 0)
        return;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i)
        idx[static_cast<std::size_t>(i)] = i;
    while (true)
    {
        fn(idx);
        Eigen::Index i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i)
            --i;
        if (i < 0)
            return;
        ++idx[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

bool zonotope_membership_lp(const Zonotope& s, const Vector& x, double tol)
{
    const Vector d = x - s.center();
    const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
    if (s.order() == 0)
        return d.lpNorm<1>() <= tol * scale;
    const Eigen::Index g = s.order();
    const auto r = lp::solve_bounded(s.generators(), d, Vector::Zero(g), Vector::Constant(g, -1.0),
                                     Vector::Constant(g, 1.0), tol * scale);
    return r.status != lp::Status::Infeasible;
}

double box_volume(const Vector& lo, const Vector& hi)
{
    return (hi - lo).prod();
}

VolumeEstimate hit_ratio_volume(const Vector& lo, const Vector& hi, std::size_t n_samples,
                                std::uint64_t seed, const std::function<bool(const Vector&)>& inside)
{
    const double vbox = box_volume(lo, hi);
    if (vbox <= 0.0 || n_samples == 0)
        return {0.0, 0.0, n_samples, seed};
    const Eigen::Index n = lo.size();
    std::size_t hits = 0;
    Vector x(n);
    for (std::size_t k = 0; k < n_samples; ++k)
    {
        for (Eigen::Index i = 0; i < n; ++i)
            x(i) = lo(i) + (hi(i) - lo(i)) * uniform01(seed, static_cast<std::uint64_t>(i), k);
        if (inside(x))
            ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
    const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n_samples));
    return {p * vbox, se * vbox, n_samples, seed};
}

} // namespace

Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b)
{
    require_dim(b.dim(), a.dim(), "minkowski_sum");
    Matrix G(a.dim(), a.order() + b.order());
    G << a.generators(), b.generators();
    return Zonotope(a.center() + b.center(), std::move(G));
}

Zonotope linear_map(const Matrix& M, const Zonotope& s)
{
    require_dim(M.cols(), s.dim(), "linear_map");
    return Zonotope(M * s.center(), M * s.generators());
}

Zonotope matzono_map(const MatrixZonotope& M, const Vector& v)
{
    return M.map(v);
}

bool contains_point(const Zonotope& s, const Vector& x, double tol)
{
    require_dim(x.size(), s.dim(), "contains_point");
    return zonotope_membership_lp(s, x, tol);
}

bool contains_point(const HPolytope& s, const Vector& x, double tol)
{
    return s.contains(x, tol);
}

bool contains_set(const HPolytope& outer, const Zonotope& inner, double tol)
{
    require_dim(inner.dim(), outer.dim(), "contains_set");
    for (Eigen::Index r = 0; r < outer.rows(); ++r)
    {
        if (inner.support(outer.H().row(r).transpose()) > outer.h()(r) + tol)
            return false;
    }
    return true;
}

bool contains_set(const Zonotope& outer, const Zonotope& inner, double tol)
{
    return contains_set(to_hpolytope(outer), inner, tol);
}

HPolytope to_hpolytope(const Zonotope& z)
{
    const Zonotope zc = z.compact();
    const Eigen::Index n = zc.dim();
    if (zc.is_degenerate())
        throw std::invalid_argument("to_hpolytope: degenerate zonotope");
    const Matrix& G = zc.generators();
    if (n == 1)
    {
        const double r = G.cwiseAbs().sum();
        Matrix H(2, 1);
        H << 1.0, -1.0;
        Vector h(2);
        h << zc.center()(0) + r, -zc.center()(0) + r;
        return HPolytope(std::move(H), std::move(h));
    }
    if (binomial(G.cols(), n - 1) > 2e6)
        throw std::invalid_argument("to_hpolytope: too many generator combinations");

    std::vector<Vector> normals;
    for_each_combination(G.cols(), n - 1, [&](const std::vector<Eigen::Index>& idx) {
        Matrix M(n - 1, n);
        for (std::size_t k = 0; k < idx.size(); ++k)
            M.row(static_cast<Eigen::Index>(k)) = G.col(idx[k]).transpose();
        Eigen::FullPivLU<Matrix> lu(M);
        lu.setThreshold(1e-12);
        if (lu.rank() < n - 1)
            return;
        Vector v = lu.kernel().col(0);
        v.normalize();
        normals.push_back(v);
    });
    Matrix H(2 * static_cast<Eigen::Index>(normals.size()), n);
    Vector h(H.rows());
    for (std::size_t k = 0; k < normals.size(); ++k)
    {
        const auto i = static_cast<Eigen::Index>(2 * k);
        const Vector& v = normals[k];
        const double spread = (v.transpose() * G).cwiseAbs().sum();
        const double vc = v.dot(zc.center());
        H.row(i) = v.transpose();
        h(i) = vc + spread;
        H.row(i + 1) = -v.transpose();
        h(i + 1) = -vc + spread;
    }
    return HPolytope(std::move(H), std::move(h)).normalized();
}

HPolytope project(const HPolytope& p, const std::vector<Eigen::Index>& dims)
{
    const Eigen::Index n = p.dim();
    for (auto d : dims)
        if (d < 0 || d >= n)
            throw DimensionError("project: index out of range");
    const auto out_dim = static_cast<Eigen::Index>(dims.size());
    if (p.is_empty())
        return HPolytope::empty(out_dim);

    // Reorder so kept coordinates come first, then eliminate from the back.
    std::vector<Eigen::Index> order = dims;
    for (Eigen::Index i = 0; i < n; ++i)
        if (std::find(dims.begin(), dims.end(), i) == dims.end())
            order.push_back(i);
    Matrix H(p.rows(), n);
    for (Eigen::Index k = 0; k < n; ++k)
        H.col(k) = p.H().col(order[static_cast<std::size_t>(k)]);
    HPolytope cur = HPolytope(H, p.h()).remove_redundant();

    for (Eigen::Index var = n - 1; var >= out_dim; --var)
    {
        const Matrix& A = cur.H();
        const Vector& b = cur.h();
        std::vector<Eigen::Index> pos, neg, zero;
        for (Eigen::Index r = 0; r < A.rows(); ++r)
        {
            const double a = A(r, var);
            if (a > 1e-12)
                pos.push_back(r);
            else if (a < -1e-12)
                neg.push_back(r);
            else
                zero.push_back(r);
        }
        const auto rows = static_cast<Eigen::Index>(zero.size() + pos.size() * neg.size());
        Matrix An(rows, var);
        Vector bn(rows);
        Eigen::Index k = 0;
        for (auto r : zero)
        {
            An.row(k) = A.row(r).head(var);
            bn(k++) = b(r);
        }
        for (auto rp : pos)
            for (auto rn : neg)
            {
                const double ap = A(rp, var);
                const double an = -A(rn, var);
                An.row(k) = an * A.row(rp).head(var) + ap * A.row(rn).head(var);
                bn(k++) = an * b(rp) + ap * b(rn);
            }
        cur = HPolytope(std::move(An), std::move(bn)).remove_redundant();
    }
    if (!cur.is_bounded())
        throw UnboundedError("project: unbounded projection");
    return cur;
}

Zonotope project(const Zonotope& z, const std::vector<Eigen::Index>& dims)
{
    Vector c(static_cast<Eigen::Index>(dims.size()));
    Matrix G(static_cast<Eigen::Index>(dims.size()), z.order());
    for (std::size_t k = 0; k < dims.size(); ++k)
    {
        c(static_cast<Eigen::Index>(k)) = z.center()(dims[k]);
        G.row(static_cast<Eigen::Index>(k)) = z.generators().row(dims[k]);
    }
    return Zonotope(std::move(c), std::move(G));
}

HPolytope embed(const HPolytope& p, const std::vector<Eigen::Index>& dims, const Vector& lower,
                const Vector& upper)
{
    const Eigen::Index n = lower.size();
    require_dim(upper.size(), n, "embed bounds");
    require_dim(static_cast<Eigen::Index>(dims.size()), p.dim(), "embed dims");
    Matrix H = Matrix::Zero(p.rows(), n);
    for (std::size_t k = 0; k < dims.size(); ++k)
        H.col(dims[k]) = p.H().col(static_cast<Eigen::Index>(k));
    HPolytope lifted(std::move(H), p.h());
    return lifted.intersect(HPolytope::box(lower, upper));
}

double zonotope_volume(const Zonotope& z)
{
    const Zonotope zc = z.compact();
    const Eigen::Index n = zc.dim();
    const Matrix& G = zc.generators();
    if (G.cols() < n)
        return 0.0;
    if (binomial(G.cols(), n) > 2e6)
        throw std::invalid_argument("zonotope_volume: too many generator combinations");
    double acc = 0.0;
    for_each_combination(G.cols(), n, [&](const std::vector<Eigen::Index>& idx) {
        Matrix M(n, n);
        for (std::size_t k = 0; k < idx.size(); ++k)
            M.col(static_cast<Eigen::Index>(k)) = G.col(idx[k]);
        acc += std::abs(M.determinant());
    });
    return std::ldexp(acc, static_cast<int>(n));
}

Zonotope inner_zonotope(const HPolytope& p, const InnerZonotopeOptions& opts)
{
    const Eigen::Index d = p.dim();
    const auto ball = p.chebyshev_center();
    if (!ball)
        throw EmptySetError("inner_zonotope: empty polytope");
    if (!p.is_bounded())
        throw UnboundedError("inner_zonotope: unbounded polytope");
    if (ball->radius <= 1e-12)
        return Zonotope::point(ball->center);

    std::vector<Eigen::Index> focus = opts.focus;
    if (focus.empty())
        for (Eigen::Index i = 0; i < d; ++i)
            focus.push_back(i);

    std::vector<Vector> axis;
    for (Eigen::Index i = 0; i < d; ++i)
        axis.push_back(Vector::Unit(d, i));
    std::vector<Vector> with_chords = axis;
    for (auto i : focus)
    {
        const Vector e = Vector::Unit(d, i);
        Vector chord = p.maximizer(e) - p.maximizer(-e);
        const double nrm = chord.norm();
        if (nrm <= 1e-12)
            continue;
        chord /= nrm;
        bool parallel = false;
        for (const auto& t : with_chords)
            if (std::abs(std::abs(t.dot(chord)) - 1.0) <= 1e-9)
                parallel = true;
        if (!parallel)
            with_chords.push_back(chord);
    }

    const Matrix& H = p.H();
    const Vector& h = p.h();
    const Eigen::Index q = p.rows();

    auto fit = [&](const std::vector<Vector>& templ) -> std::optional<Zonotope> {
        std::vector<Vector> dirs;
        std::vector<double> sigma;
        for (const auto& t : templ)
        {
            const double s = 0.5 * (p.support(t) + p.support(-t));
            if (s > 1e-12)
            {
                dirs.push_back(t);
                sigma.push_back(s);
            }
        }
        const auto g = static_cast<Eigen::Index>(dirs.size());
        if (g == 0)
            return std::nullopt;
        Matrix D(d, g);
        for (Eigen::Index k = 0; k < g; ++k)
            D.col(k) = dirs[static_cast<std::size_t>(k)];
        const Matrix HD = (H * D).cwiseAbs();
        Vector sig(g);
        for (Eigen::Index k = 0; k < g; ++k)
            sig(k) = sigma[static_cast<std::size_t>(k)];

        // phase 1: uniform scale t
        Matrix A1(q + 1, d + 1);
        Vector b1(q + 1);
        A1.topLeftCorner(q, d) = H;
        A1.topRightCorner(q, 1) = HD * sig;
        b1.head(q) = h;
        A1.bottomRows(1).setZero();
        A1(q, d) = -1.0;
        b1(q) = 0.0;
        const auto r1 = lp::maximize(Vector::Unit(d + 1, d), A1, b1);
        if (r1.status != lp::Status::Optimal)
            return std::nullopt;
        const double t = std::max(r1.x(d), 0.0);

        // phase 2: individual scales above the uniform floor
        Matrix A2(q + g, d + g);
        Vector b2(q + g);
        A2.setZero();
        A2.topLeftCorner(q, d) = H;
        A2.topRightCorner(q, g) = HD;
        b2.head(q) = h;
        for (Eigen::Index k = 0; k < g; ++k)
        {
            A2(q + k, d + k) = -1.0;
            b2(q + k) = -t * sig(k) * (1.0 - 1e-9);
        }
        Vector obj = Vector::Zero(d + g);
        for (Eigen::Index k = 0; k < g; ++k)
        {
            double w = 0.0;
            for (auto i : focus)
                w += D(i, k) * D(i, k);
            obj(d + k) = std::sqrt(w) / sig(k);
        }
        const auto r2 = lp::maximize(obj, A2, b2);
        Vector c;
        Vector s;
        if (r2.status == lp::Status::Optimal)
        {
            c = r2.x.head(d);
            s = r2.x.tail(g).cwiseMax(0.0);
        }
        else
        {
            c = r1.x.head(d);
            s = t * sig;
        }
        return Zonotope(c, D * s.asDiagonal());
    };

    std::optional<Zonotope> best;
    double best_score = -1.0;
    for (const auto* templ : {&axis, &with_chords})
    {
        auto z = fit(*templ);
        if (!z)
            continue;
        double score = 0.0;
        try
        {
            score = zonotope_volume(project(*z, focus));
        }
        catch (const std::invalid_argument&)
        {
            score = 0.0;
        }
        if (score > best_score * (1.0 + 1e-9))
        {
            best_score = score;
            best = std::move(z);
        }
        if (templ == &axis && with_chords.size() == axis.size())
            break;
    }
    if (!best)
        return Zonotope::point(ball->center);
    return *best;
}

std::vector<Vector> vertices(const HPolytope& p)
{
    const Eigen::Index n = p.dim();
    if (n > 4)
        throw std::invalid_argument("vertices: dimension above 4");
    const HPolytope q = p.remove_redundant();
    if (q.is_empty())
        return {};
    if (!q.is_bounded())
        throw UnboundedError("vertices: unbounded polytope");
    if (binomial(q.rows(), n) > 5e6)
        throw std::invalid_argument("vertices: too many row combinations");
    const double scale = std::max(1.0, q.h().lpNorm<Eigen::Infinity>());
    std::vector<Vector> out;
    for_each_combination(q.rows(), n, [&](const std::vector<Eigen::Index>& idx) {
        Matrix A(n, n);
        Vector b(n);
        for (std::size_t k = 0; k < idx.size(); ++k)
        {
            A.row(static_cast<Eigen::Index>(k)) = q.H().row(idx[k]);
            b(static_cast<Eigen::Index>(k)) = q.h()(idx[k]);
        }
        Eigen::FullPivLU<Matrix> lu(A);
        if (!lu.isInvertible())
            return;
        const Vector x = lu.solve(b);
        if (q.violation(x) > 1e-9 * scale)
            return;
        for (const auto& v : out)
            if ((v - x).lpNorm<Eigen::Infinity>() <= 1e-9 * scale)
                return;
        out.push_back(x);
    });
    return out;
}

std::vector<Vector> vertices(const Zonotope& z)
{
    const Zonotope zc = z.compact();
    if (zc.order() == 0)
        return {zc.center()};
    if (zc.order() <= 16)
    {
        std::vector<Vector> out;
        const Eigen::Index g = zc.order();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g); ++mask)
        {
            Vector x = zc.center();
            for (Eigen::Index k = 0; k < g; ++k)
                x += ((mask >> k) & 1U ? 1.0 : -1.0) * zc.generators().col(k);
            out.push_back(std::move(x));
        }
        return out;
    }
    return vertices(to_hpolytope(zc));
}

SupDistance sup_distance(const Zonotope& s, const Vector& p)
{
    require_dim(p.size(), s.dim(), "sup_distance");
    const Zonotope zc = s.compact();
    if (zc.order() <= 20 || zc.dim() <= 4)
    {
        double best = 0.0;
        for (const auto& v : vertices(zc))
            best = std::max(best, (v - p).norm());
        return {best, best, best, true};
    }
    // sampled lower bound, interval-hull upper bound
    double lower = 0.0;
    const Eigen::Index g = zc.order();
    for (std::uint64_t k = 0; k < 4096; ++k)
    {
        Vector x = zc.center();
        for (Eigen::Index j = 0; j < g; ++j)
            x += (uniform01(17, static_cast<std::uint64_t>(j), k) < 0.5 ? -1.0 : 1.0) * zc.generators().col(j);
        lower = std::max(lower, (x - p).norm());
    }
    const Vector r = zc.radius();
    const Vector far = ((zc.center() - p).cwiseAbs() + r);
    const double upper = far.norm();
    return {lower, lower, upper, false};
}

SupDistance sup_distance(const HPolytope& s, const Vector& p)
{
    require_dim(p.size(), s.dim(), "sup_distance");
    if (s.is_empty())
        throw EmptySetError("sup_distance: empty set");
    if (s.dim() <= 4)
    {
        double best = 0.0;
        for (const auto& v : vertices(s))
            best = std::max(best, (v - p).norm());
        return {best, best, best, true};
    }
    const auto [lo, hi] = s.bounding_box();
    double lower = 0.0;
    for (const auto& x : sample_uniform(s, 4096, 17))
        lower = std::max(lower, (x - p).norm());
    const Vector far = (lo - p).cwiseAbs().cwiseMax((hi - p).cwiseAbs());
    return {lower, lower, far.norm(), false};
}

VolumeEstimate volume_estimate(const HPolytope& s, std::size_t n_samples, std::uint64_t seed)
{
    if (s.is_empty())
        return {0.0, 0.0, n_samples, seed};
    if (!s.is_bounded())
        throw UnboundedError("volume_estimate: unbounded set");
    const auto [lo, hi] = s.bounding_box();
    return hit_ratio_volume(lo, hi, n_samples, seed, [&](const Vector& x) { return s.contains(x, 0.0); });
}

VolumeEstimate volume_estimate(const Zonotope& s, std::size_t n_samples, std::uint64_t seed)
{
    const Zonotope zc = s.compact();
    if (zc.is_degenerate())
        return {0.0, 0.0, n_samples, seed};
    const Vector r = zc.radius();
    const Vector lo = zc.center() - r;
    const Vector hi = zc.center() + r;
    if (binomial(zc.order(), zc.dim() - 1) <= 1e5)
    {
        const HPolytope hp = to_hpolytope(zc);
        return hit_ratio_volume(lo, hi, n_samples, seed, [&](const Vector& x) { return hp.contains(x, 0.0); });
    }
    return hit_ratio_volume(lo, hi, n_samples, seed,
                            [&](const Vector& x) { return zonotope_membership_lp(zc, x, 0.0); });
}

LpSolution solve_lp(const Vector& c, const HPolytope& constraints)
{
    require_dim(c.size(), constraints.dim(), "solve_lp");
    const auto r = lp::minimize(c, constraints.H(), constraints.h());
    if (r.status == lp::Status::Infeasible)
        throw InfeasibleError("solve_lp: infeasible");
    if (r.status == lp::Status::Unbounded)
        throw UnboundedError("solve_lp: unbounded");
    return {r.x, r.value};
}

std::vector<Vector> sample_uniform(const HPolytope& p, std::size_t count, std::uint64_t seed,
                                   std::size_t max_tries)
{
    std::vector<Vector> out;
    if (p.is_empty() || count == 0)
        return out;
    const auto [lo, hi] = p.bounding_box();
    const Eigen::Index n = p.dim();
    if (max_tries == 0)
        max_tries = 1000 * count;
    Vector x(n);
    for (std::size_t k = 0; k < max_tries && out.size() < count; ++k)
    {
        for (Eigen::Index i = 0; i < n; ++i)
            x(i) = lo(i) + (hi(i) - lo(i)) * uniform01(seed, static_cast<std::uint64_t>(i), k);
        if (p.contains(x, 0.0))
            out.push_back(x);
    }
    return out;
}

} // namespace ddsc
