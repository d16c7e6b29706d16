#include "ddsc/matrix_zonotope.hpp"

#include <algorithm>
#include <numeric>

#include "ddsc/lp.hpp"

namespace ddsc
{

MatrixZonotope::MatrixZonotope(Matrix center, std::vector<Matrix> generators)
    : C_(std::move(center)), G_(std::move(generators))
{
    for (const auto& g : G_)
    {
        require_dim(g.rows(), C_.rows(), "MatrixZonotope generator rows");
        require_dim(g.cols(), C_.cols(), "MatrixZonotope generator cols");
    }
}

Zonotope MatrixZonotope::map(const Vector& v) const
{
    require_dim(v.size(), cols(), "MatrixZonotope::map");
    Matrix G(rows(), static_cast<Eigen::Index>(G_.size()));
    for (std::size_t i = 0; i < G_.size(); ++i)
        G.col(static_cast<Eigen::Index>(i)) = G_[i] * v;
    return Zonotope(C_ * v, std::move(G));
}

bool MatrixZonotope::contains(const Matrix& M, double tol) const
{
    require_dim(M.rows(), rows(), "MatrixZonotope::contains rows");
    require_dim(M.cols(), cols(), "MatrixZonotope::contains cols");
    const Eigen::Index q = rows() * cols();
    const Matrix D = M - C_;
    if (G_.empty())
        return D.cwiseAbs().sum() <= tol;
    Matrix A(q, static_cast<Eigen::Index>(G_.size()));
    for (std::size_t i = 0; i < G_.size(); ++i)
        A.col(static_cast<Eigen::Index>(i)) = G_[i].reshaped();
    const Eigen::Index g = A.cols();
    const auto r = lp::solve_bounded(A, D.reshaped(), Vector::Zero(g), Vector::Constant(g, -1.0),
                                     Vector::Constant(g, 1.0), tol);
    return r.status != lp::Status::Infeasible;
}

Matrix MatrixZonotope::interval_radius() const
{
    Matrix R = Matrix::Zero(rows(), cols());
    for (const auto& g : G_)
        R += g.cwiseAbs();
    return R;
}

MatrixZonotope MatrixZonotope::reduce(std::size_t g_max) const
{
    if (G_.size() <= g_max)
        return *this;

    std::vector<std::size_t> idx(G_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [this](std::size_t a, std::size_t b) { return G_[a].norm() > G_[b].norm(); });

    // Find the largest keep count whose boxed remainder fits the budget.
    std::size_t keep = 0;
    for (std::size_t k = std::min(g_max, G_.size()); k > 0; --k)
    {
        Matrix rest = Matrix::Zero(rows(), cols());
        for (std::size_t i = k; i < idx.size(); ++i)
            rest += G_[idx[i]].cwiseAbs();
        const auto nnz = static_cast<std::size_t>((rest.array() > 0.0).count());
        if (k + nnz <= g_max)
        {
            keep = k;
            break;
        }
    }

    std::vector<Matrix> gens;
    Matrix box = Matrix::Zero(rows(), cols());
    for (std::size_t i = 0; i < idx.size(); ++i)
    {
        if (i < keep)
            gens.push_back(G_[idx[i]]);
        else
            box += G_[idx[i]].cwiseAbs();
    }
    for (Eigen::Index c = 0; c < cols(); ++c)
        for (Eigen::Index r = 0; r < rows(); ++r)
            if (box(r, c) > 0.0)
            {
                Matrix e = Matrix::Zero(rows(), cols());
                e(r, c) = box(r, c);
                gens.push_back(std::move(e));
            }
    return MatrixZonotope(C_, std::move(gens));
}

std::vector<Matrix> MatrixZonotope::vertices(std::size_t g_max) const
{
    const MatrixZonotope red = reduce(g_max);
    const std::size_t g = red.G_.size();
    if (g > 24)
        throw std::invalid_argument("MatrixZonotope::vertices: too many generators to enumerate");
    std::vector<Matrix> out;
    out.reserve(std::size_t{1} << g);
    for (std::size_t mask = 0; mask < (std::size_t{1} << g); ++mask)
    {
        Matrix V = red.C_;
        for (std::size_t i = 0; i < g; ++i)
            V += ((mask >> i) & 1U ? 1.0 : -1.0) * red.G_[i];
        out.push_back(std::move(V));
    }
    return out;
}

} // namespace ddsc
