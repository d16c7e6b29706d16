#include "ddsc/reach.hpp"

#include "ddsc/setops.hpp"

namespace ddsc
{

Zonotope rors_point(const MatrixZonotope& M, const Vector& x, const Vector& u, const Zonotope& W)
{
    require_dim(x.size() + u.size(), M.cols(), "rors_point");
    Vector z(x.size() + u.size());
    z << x, u;
    return minkowski_sum(M.map(z), W);
}

Zonotope rors_set(const MatrixZonotope& M, const Zonotope& X, const Zonotope& U, const Zonotope& W,
                  std::size_t max_order)
{
    const Eigen::Index n = X.dim();
    const Eigen::Index m = U.dim();
    require_dim(n + m, M.cols(), "rors_set");
    require_dim(W.dim(), M.rows(), "rors_set disturbance");

    Vector cz(n + m);
    cz << X.center(), U.center();
    Matrix Gz = Matrix::Zero(n + m, X.order() + U.order());
    Gz.topLeftCorner(n, X.order()) = X.generators();
    Gz.bottomRightCorner(m, U.order()) = U.generators();

    const auto& Gm = M.generators();
    const auto q = static_cast<Eigen::Index>(Gm.size());
    Vector cross = Vector::Zero(M.rows());
    for (const auto& G : Gm)
        cross += (G * Gz).cwiseAbs().rowwise().sum();

    Matrix gens(M.rows(), Gz.cols() + q + W.order());
    gens.leftCols(Gz.cols()) = M.center() * Gz;
    for (Eigen::Index i = 0; i < q; ++i)
        gens.col(Gz.cols() + i) = Gm[static_cast<std::size_t>(i)] * cz;
    gens.rightCols(W.order()) = W.generators();
    Zonotope out(M.center() * cz + W.center(), std::move(gens));
    if (cross.maxCoeff() > 0.0)
        out = minkowski_sum(out, Zonotope::centered_box(Vector::Zero(M.rows()), cross));
    out = out.compact();
    if (max_order > 0 && out.order() > static_cast<Eigen::Index>(max_order))
        out = out.reduce(static_cast<Eigen::Index>(max_order));
    return out;
}

Zonotope rors_set(const MatrixZonotope& M, const Zonotope& X, const Vector& u, const Zonotope& W,
                  std::size_t max_order)
{
    return rors_set(M, X, Zonotope::point(u), W, max_order);
}

ReachTube reset_tube(const Vector& x_trusted, int k)
{
    ReachTube t;
    t.anchor_time = k;
    t.sets.push_back(Zonotope::point(x_trusted));
    return t;
}

ReachTube extend_tube(ReachTube tube, const MatrixZonotope& M, const Zonotope& u, const Zonotope& W,
                      std::size_t max_order)
{
    if (tube.sets.empty())
        throw std::invalid_argument("extend_tube: empty tube");
    Zonotope next = rors_set(M, tube.back(), u, W, max_order);
    tube.sets.push_back(std::move(next));
    tube.inputs.push_back(u);
    return tube;
}

ReachTube extend_tube(ReachTube tube, const MatrixZonotope& M, const Vector& u, const Zonotope& W,
                      std::size_t max_order)
{
    return extend_tube(std::move(tube), M, Zonotope::point(u), W, max_order);
}

} // namespace ddsc
