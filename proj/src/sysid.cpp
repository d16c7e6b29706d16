#include "ddsc/sysid.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace ddsc
{

Eigen::Index TrajectoryBank::state_dim() const
{
    return trajectories.empty() ? noise_center.size() : trajectories.front().x.rows();
}

Eigen::Index TrajectoryBank::input_dim() const
{
    return trajectories.empty() ? 0 : trajectories.front().u.rows();
}

Eigen::Index TrajectoryBank::total_samples() const
{
    Eigen::Index T = 0;
    for (const auto& t : trajectories)
        T += t.u.cols();
    return T;
}

DataMatrices assemble(const TrajectoryBank& bank)
{
    if (bank.trajectories.empty())
        throw std::invalid_argument("assemble: empty trajectory bank");
    const Eigen::Index n = bank.state_dim();
    const Eigen::Index m = bank.input_dim();
    const Eigen::Index T = bank.total_samples();
    DataMatrices d{Matrix(n, T), Matrix(m, T), Matrix(n, T)};
    Eigen::Index col = 0;
    for (const auto& t : bank.trajectories)
    {
        require_dim(t.x.rows(), n, "assemble: state dimension");
        require_dim(t.u.rows(), m, "assemble: input dimension");
        if (t.x.cols() != t.u.cols() + 1)
            throw DimensionError("assemble: states must have one more sample than inputs");
        const Eigen::Index N = t.u.cols();
        d.X_minus.middleCols(col, N) = t.x.leftCols(N);
        d.X_plus.middleCols(col, N) = t.x.rightCols(N);
        d.U_minus.middleCols(col, N) = t.u;
        col += N;
    }
    return d;
}

bool check_rank(const DataMatrices& d, double eps)
{
    const Eigen::Index rows = d.X_minus.rows() + d.U_minus.rows();
    if (d.X_minus.cols() < rows)
        return false;
    Matrix Z(rows, d.X_minus.cols());
    Z << d.X_minus, d.U_minus;
    Eigen::JacobiSVD<Matrix> svd(Z);
    const Vector& s = svd.singularValues();
    return s(0) > 0.0 && s(rows - 1) > eps * s(0);
}

MatrixZonotope noise_matrix_zonotope(const TrajectoryBank& bank)
{
    const Eigen::Index n = bank.state_dim();
    const Eigen::Index T = bank.total_samples();
    Vector cw = bank.noise_center.size() ? bank.noise_center : Vector::Zero(n);
    require_dim(cw.size(), n, "noise center");
    Matrix C = cw.replicate(1, T);
    std::vector<Matrix> gens;
    gens.reserve(bank.noise_generators.size() * static_cast<std::size_t>(T));
    for (const auto& g : bank.noise_generators)
    {
        require_dim(g.size(), n, "noise generator");
        for (Eigen::Index j = 0; j < T; ++j)
        {
            Matrix G = Matrix::Zero(n, T);
            G.col(j) = g;
            gens.push_back(std::move(G));
        }
    }
    return MatrixZonotope(std::move(C), std::move(gens));
}

MatrixZonotope identify(const DataMatrices& d, const MatrixZonotope& Mw)
{
    if (!check_rank(d))
        throw RankError("identify: [X_-; U_-] does not have full row rank");
    require_dim(Mw.rows(), d.X_plus.rows(), "identify: noise rows");
    require_dim(Mw.cols(), d.X_plus.cols(), "identify: noise cols");
    Matrix Z(d.X_minus.rows() + d.U_minus.rows(), d.X_minus.cols());
    Z << d.X_minus, d.U_minus;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Z);
    cod.setThreshold(kRankTol);
    const Matrix pinv = cod.pseudoInverse();

    std::vector<Matrix> gens;
    gens.reserve(Mw.order());
    for (const auto& G : Mw.generators())
        gens.push_back(G * pinv);
    return MatrixZonotope((d.X_plus - Mw.center()) * pinv, std::move(gens));
}

MatrixZonotope identify(const TrajectoryBank& bank)
{
    return identify(assemble(bank), noise_matrix_zonotope(bank));
}

bool membership_check(const MatrixZonotope& M, const Matrix& AB, double tol)
{
    return M.contains(AB, tol);
}

std::vector<Matrix> vertex_matrices(const MatrixZonotope& M, std::size_t g_max)
{
    return M.vertices(g_max);
}

} // namespace ddsc
