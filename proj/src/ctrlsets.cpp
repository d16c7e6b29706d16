#include "ddsc/ctrlsets.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "ddsc/setops.hpp"
#include "ddsc/sysid.hpp"

namespace ddsc
{

namespace
{

HPolytope stack_rows(const std::vector<Vector>& rows, const std::vector<double>& rhs, Eigen::Index dim)
{
    Matrix H(static_cast<Eigen::Index>(rows.size()), dim);
    Vector h(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k)
    {
        H.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
        h(static_cast<Eigen::Index>(k)) = rhs[k];
    }
    return HPolytope(std::move(H), std::move(h));
}

// H-form of a zonotope; flat zonotopes fall back to their interval hull.
HPolytope hull_hpolytope(const Zonotope& z)
{
    const Zonotope zc = z.compact();
    if (zc.is_degenerate())
    {
        const Vector r = zc.radius();
        return HPolytope::box(zc.center() - r, zc.center() + r);
    }
    return to_hpolytope(zc);
}

void append_block(std::vector<Vector>& rows, std::vector<double>& rhs, const HPolytope& p, Eigen::Index offset,
                  Eigen::Index dim)
{
    for (Eigen::Index r = 0; r < p.rows(); ++r)
    {
        Vector a = Vector::Zero(dim);
        a.segment(offset, p.dim()) = p.H().row(r).transpose();
        rows.push_back(std::move(a));
        rhs.push_back(p.h()(r));
    }
}

RoscStep finish_step(std::vector<Vector> rows, std::vector<double> rhs, const HPolytope& X, const HPolytope& U,
                     const RoscOptions& opts)
{
    const Eigen::Index n = X.dim();
    const Eigen::Index dim = n + U.dim();
    append_block(rows, rhs, X, 0, dim);
    append_block(rows, rhs, U, n, dim);
    HPolytope Xi = stack_rows(rows, rhs, dim).remove_redundant();
    if (Xi.is_empty())
        throw EmptySetError("rosc_step: empty augmented set");

    std::vector<Eigen::Index> xdims(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        xdims[static_cast<std::size_t>(i)] = i;

    if (opts.inner == InnerApprox::Zonotope)
    {
        const Zonotope z = project(inner_zonotope(Xi, {xdims}), xdims).compact();
        if (!z.is_degenerate())
            return {std::move(Xi), to_hpolytope(z)};
    }
    return {Xi, project(Xi, xdims)};
}

// Distinct directions among the row functionals, with parallel ones summed in magnitude.
std::vector<Vector> merge_functionals(const std::vector<Vector>& f)
{
    std::vector<Vector> dirs;
    std::vector<double> weight;
    for (const auto& v : f)
    {
        const double nrm = v.norm();
        if (nrm <= 1e-15)
            continue;
        const Vector u = v / nrm;
        bool merged = false;
        for (std::size_t k = 0; k < dirs.size(); ++k)
        {
            const double c = dirs[k].dot(u);
            if (std::abs(std::abs(c) - 1.0) <= 1e-12)
            {
                weight[k] += nrm;
                merged = true;
                break;
            }
        }
        if (!merged)
        {
            dirs.push_back(u);
            weight.push_back(nrm);
        }
    }
    for (std::size_t k = 0; k < dirs.size(); ++k)
        dirs[k] *= weight[k];
    return dirs;
}

std::vector<Matrix> vertices_of(const MatrixZonotope& M)
{
    return M.vertices(std::max<std::size_t>(M.order(), 1));
}

} // namespace

std::optional<int> RoscFamily::level_of(const Vector& x, double tol) const
{
    for (std::size_t j = 0; j < C.size(); ++j)
        if (C[j].contains(x, tol))
            return static_cast<int>(j);
    return std::nullopt;
}

std::vector<HPolytope> voronoi_partition(const HPolytope& X_eta, const std::vector<Vector>& seeds)
{
    for (std::size_t a = 0; a < seeds.size(); ++a)
    {
        require_dim(seeds[a].size(), X_eta.dim(), "voronoi seed");
        for (std::size_t b = 0; b < a; ++b)
            if ((seeds[a] - seeds[b]).norm() <= 1e-12)
                throw std::invalid_argument("voronoi_partition: duplicate seeds");
    }
    std::vector<HPolytope> cells;
    for (std::size_t l = 0; l < seeds.size(); ++l)
    {
        const auto others = static_cast<Eigen::Index>(seeds.size() - 1);
        Matrix H(others, X_eta.dim());
        Vector h(others);
        Eigen::Index r = 0;
        for (std::size_t j = 0; j < seeds.size(); ++j)
        {
            if (j == l)
                continue;
            H.row(r) = 2.0 * (seeds[j] - seeds[l]).transpose();
            h(r) = seeds[j].squaredNorm() - seeds[l].squaredNorm();
            ++r;
        }
        cells.push_back(X_eta.intersect(HPolytope(std::move(H), std::move(h))).remove_redundant());
    }
    return cells;
}

int voronoi_index(const std::vector<Vector>& seeds, const Vector& x)
{
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < seeds.size(); ++l)
    {
        const double d = (x - seeds[l]).squaredNorm();
        if (d < best_d)
        {
            best_d = d;
            best = static_cast<int>(l);
        }
    }
    return best;
}

Vector tilde_h(const Matrix& H, const Vector& h, const Zonotope& W)
{
    require_dim(H.cols(), W.dim(), "tilde_h");
    return h - H * W.center() - (H * W.generators()).cwiseAbs().rowwise().sum();
}

RoscStep rosc_step(const HPolytope& target, const MatrixZonotope& M_full, const HPolytope& X, const HPolytope& U,
                   const Zonotope& W, const RoscOptions& opts)
{
    const MatrixZonotope M = M_full.order() > 6 ? M_full.reduce(6) : M_full;
    require_dim(target.dim(), M.rows(), "rosc_step target");
    require_dim(X.dim() + U.dim(), M.cols(), "rosc_step model");
    if (target.is_empty())
        throw EmptySetError("rosc_step: empty target");
    const Vector ht = tilde_h(target.H(), target.h(), W);

    std::vector<Vector> rows;
    std::vector<double> rhs;
    for (Eigen::Index r = 0; r < target.rows(); ++r)
    {
        const Vector base = (target.H().row(r) * M.center()).transpose();
        std::vector<Vector> f;
        for (const auto& G : M.generators())
            f.push_back((target.H().row(r) * G).transpose());
        const auto dirs = merge_functionals(f);
        if (dirs.size() > 12)
            throw std::invalid_argument("rosc_step: reduce the matrix zonotope first");
        const std::size_t combos = std::size_t{1} << dirs.size();
        for (std::size_t mask = 0; mask < combos; ++mask)
        {
            Vector a = base;
            for (std::size_t k = 0; k < dirs.size(); ++k)
                a += ((mask >> k) & 1U ? 1.0 : -1.0) * dirs[k];
            rows.push_back(std::move(a));
            rhs.push_back(ht(r));
        }
    }
    return finish_step(std::move(rows), std::move(rhs), X, U, opts);
}

RoscStep rosc_step(const HPolytope& target, const std::vector<Matrix>& vertices, const HPolytope& X,
                   const HPolytope& U, const Zonotope& W, const RoscOptions& opts)
{
    if (vertices.empty())
        throw std::invalid_argument("rosc_step: no vertex matrices");
    if (target.is_empty())
        throw EmptySetError("rosc_step: empty target");
    const Vector ht = tilde_h(target.H(), target.h(), W);
    std::vector<Vector> rows;
    std::vector<double> rhs;
    for (const auto& V : vertices)
    {
        require_dim(V.cols(), X.dim() + U.dim(), "rosc_step vertex");
        const Matrix HV = target.H() * V;
        for (Eigen::Index r = 0; r < HV.rows(); ++r)
        {
            rows.push_back(HV.row(r).transpose());
            rhs.push_back(ht(r));
        }
    }
    return finish_step(std::move(rows), std::move(rhs), X, U, opts);
}

Matrix dlqr(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R)
{
    Matrix P = Q;
    for (int it = 0; it < 100000; ++it)
    {
        const Matrix S = R + B.transpose() * P * B;
        const Matrix Kp = S.ldlt().solve(B.transpose() * P * A);
        Matrix Pn = Q + A.transpose() * P * (A - B * Kp);
        Pn = 0.5 * (Pn + Pn.transpose());
        const double diff = (Pn - P).cwiseAbs().maxCoeff();
        P = std::move(Pn);
        if (diff <= 1e-13 * std::max(1.0, P.cwiseAbs().maxCoeff()))
            break;
    }
    return -(R + B.transpose() * P * B).ldlt().solve(B.transpose() * P * A);
}

namespace
{

struct BoxFixedPoint
{
    bool ok = false;
    Vector b;
};

BoxFixedPoint iterate_box(const std::vector<Matrix>& F, const std::vector<Vector>& delta, const Vector& rw,
                          double tol, int max_iter)
{
    const Eigen::Index n = rw.size();
    Vector b = Vector::Zero(n);
    for (int it = 0; it < max_iter; ++it)
    {
        Vector nb = Vector::Zero(n);
        for (std::size_t i = 0; i < F.size(); ++i)
            nb = nb.cwiseMax(F[i].cwiseAbs() * b + delta[i].cwiseAbs());
        nb += rw;
        const double inc = (nb - b).lpNorm<Eigen::Infinity>();
        b = std::move(nb);
        if (!b.allFinite() || b.maxCoeff() > 1e8)
            return {};
        if (inc < tol)
            return {true, b};
    }
    return {};
}

} // namespace

RciResult synthesize_rci(const MatrixZonotope& M, const Vector& x_e, const Vector& u_e, const Zonotope& W,
                         const HPolytope& U, const HPolytope& X_eta, const RciOptions& opts)
{
    const Eigen::Index n = x_e.size();
    const Eigen::Index m = u_e.size();
    require_dim(M.cols(), n + m, "synthesize_rci");
    const Matrix Ac = M.center().leftCols(n);
    const Matrix Bc = M.center().rightCols(m);
    const auto verts = vertices_of(M.reduce(6));

    std::vector<Matrix> gains;
    if (opts.K)
        gains.push_back(*opts.K);
    else
        for (double rho : {1.0, 0.1, 10.0, 0.01})
            gains.push_back(dlqr(Ac, Bc, Matrix::Identity(n, n), rho * Matrix::Identity(m, m)));

    Vector z(n + m);
    z << x_e, u_e;
    std::string last_reason = "no stabilizing gain";
    std::optional<RciResult> best;
    double best_vol = std::numeric_limits<double>::infinity();
    for (const auto& K : gains)
    {
        std::vector<Matrix> Acl;
        std::vector<Vector> d;
        bool stable = true;
        for (const auto& V : verts)
        {
            Acl.push_back(V.leftCols(n) + V.rightCols(m) * K);
            d.push_back(V * z - x_e);
            if (Acl.back().eigenvalues().cwiseAbs().maxCoeff() >= 1.0)
                stable = false;
        }
        if (!stable)
            continue;

        std::vector<Matrix> bases{Matrix::Identity(n, n)};
        Eigen::EigenSolver<Matrix> es(Ac + Bc * K);
        if (es.eigenvalues().imag().cwiseAbs().maxCoeff() == 0.0)
        {
            Matrix P = es.eigenvectors().real();
            Eigen::JacobiSVD<Matrix> svd(P);
            const Vector s = svd.singularValues();
            if (s(n - 1) > 1e-6 * s(0))
                bases.push_back(P);
        }
        for (const auto& P : bases)
        {
            const Matrix Pi = P.inverse();
            std::vector<Matrix> F;
            std::vector<Vector> delta;
            for (std::size_t i = 0; i < Acl.size(); ++i)
            {
                F.push_back(Pi * Acl[i] * P);
                delta.push_back(Pi * d[i]);
            }
            const Vector rw = (Pi * W.center()).cwiseAbs() + (Pi * W.generators()).cwiseAbs().rowwise().sum();
            const auto fp = iterate_box(F, delta, rw, opts.tol, opts.max_iter);
            if (!fp.ok)
            {
                last_reason = "error box iteration diverged";
                continue;
            }
            Zonotope T0 = Zonotope(x_e, P * fp.b.asDiagonal()).compact();
            if (!contains_set(X_eta, T0, 1e-9))
            {
                last_reason = "T0 not inside X_eta";
                continue;
            }
            if (!contains_set(U, Zonotope(u_e, K * T0.generators()), 1e-9))
            {
                last_reason = "terminal law leaves U on T0";
                continue;
            }
            const double vol = T0.is_degenerate() ? 0.0 : zonotope_volume(T0);
            if (vol < best_vol)
            {
                best_vol = vol;
                best = RciResult{K, std::move(T0)};
            }
        }
    }
    if (!best)
        throw SynthesisError("synthesize_rci: " + last_reason);

    // one-step invariance under every vertex model
    const HPolytope hull = hull_hpolytope(best->T0);
    const Zonotope E(Vector::Zero(n), best->T0.generators());
    for (const auto& V : verts)
    {
        const Matrix Acl = V.leftCols(n) + V.rightCols(m) * best->K;
        Zonotope img = minkowski_sum(linear_map(Acl, E), W);
        img = Zonotope(img.center() + V * z, img.generators());
        if (!contains_set(hull, img, 1e-9))
            throw SynthesisError("synthesize_rci: invariance check failed");
    }
    return *best;
}

std::pair<Vector, Vector> snap_equilibrium(const Matrix& A, const Matrix& B, const Vector& x_e, const Vector& u_lo,
                                           const Vector& u_hi)
{
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.cols();
    const Matrix G = (Matrix::Identity(n, n) - A).fullPivLu().solve(B);
    // Enumerate which inputs sit on a bound; the free ones solve a least-squares problem.
    std::size_t combos = 1;
    for (Eigen::Index i = 0; i < m; ++i)
        combos *= 3;
    double best = std::numeric_limits<double>::infinity();
    Vector best_u = 0.5 * (u_lo + u_hi);
    for (std::size_t c = 0; c < combos; ++c)
    {
        std::size_t code = c;
        Vector u = Vector::Zero(m);
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < m; ++i)
        {
            const std::size_t s = code % 3;
            code /= 3;
            if (s == 0)
                free.push_back(i);
            else
                u(i) = s == 1 ? u_lo(i) : u_hi(i);
        }
        if (!free.empty())
        {
            Matrix Gf(n, static_cast<Eigen::Index>(free.size()));
            for (std::size_t k = 0; k < free.size(); ++k)
                Gf.col(static_cast<Eigen::Index>(k)) = G.col(free[k]);
            const Vector rhs = x_e - G * u;
            const Vector uf = Gf.completeOrthogonalDecomposition().solve(rhs);
            for (std::size_t k = 0; k < free.size(); ++k)
                u(free[k]) = uf(static_cast<Eigen::Index>(k));
        }
        if (((u - u_lo).array() < -1e-12).any() || ((u_hi - u).array() < -1e-12).any())
            continue;
        const double err = (G * u - x_e).squaredNorm();
        if (err < best - 1e-15)
        {
            best = err;
            best_u = u;
        }
    }
    return {G * best_u, best_u};
}

RoscFamily build_family(const EquilibriumCell& cell, const MatrixZonotope& M, const HPolytope& X,
                        const HPolytope& U, const Zonotope& W, const FamilyOptions& opts)
{
    RoscFamily fam;
    fam.cell = cell;
    fam.C.push_back(hull_hpolytope(cell.T0));
    fam.Xi.push_back(HPolytope(Matrix(0, X.dim() + U.dim()), Vector(0)));

    const auto samples = sample_uniform(cell.V, opts.coverage_samples, opts.seed);
    std::vector<bool> covered(samples.size(), false);
    std::size_t n_cov = 0;
    std::vector<bool> extra_cov(opts.extra_targets.size(), false);
    std::size_t n_extra = 0;
    auto absorb = [&](const HPolytope& C) {
        for (std::size_t s = 0; s < samples.size(); ++s)
            if (!covered[s] && C.contains(samples[s], kFeasTol))
            {
                covered[s] = true;
                ++n_cov;
            }
        for (std::size_t s = 0; s < opts.extra_targets.size(); ++s)
            if (!extra_cov[s] && C.contains(opts.extra_targets[s], kFeasTol))
            {
                extra_cov[s] = true;
                ++n_extra;
            }
    };
    auto coverage = [&] { return samples.empty() ? 1.0 : static_cast<double>(n_cov) / samples.size(); };

    absorb(fam.C[0]);
    fam.coverage = coverage();
    std::optional<int> reached;
    if (fam.coverage >= opts.coverage_target)
        reached = 0;

    int idle = 0;
    for (int j = 1; j <= opts.j_max; ++j)
    {
        if (reached && n_extra == opts.extra_targets.size())
            break;
        RoscStep step;
        try
        {
            step = rosc_step(fam.C.back(), M, X, U, W, opts.rosc);
        }
        catch (const EmptySetError&)
        {
            fam.stalled = true;
            break;
        }
        const std::size_t before = n_cov + n_extra;
        fam.C.push_back(std::move(step.C));
        fam.Xi.push_back(std::move(step.Xi));
        absorb(fam.C.back());
        fam.coverage = coverage();
        if (!reached && fam.coverage >= opts.coverage_target)
            reached = j;
        idle = (n_cov + n_extra == before) ? idle + 1 : 0;
        if (idle >= opts.stall_window)
        {
            fam.stalled = !reached.has_value();
            break;
        }
    }
    if (!reached)
        fam.stalled = true;
    fam.N = reached.value_or(fam.levels());
    return fam;
}

} // namespace ddsc
