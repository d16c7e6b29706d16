#ifndef DDSC_MATRIX_ZONOTOPE_HPP_
#define DDSC_MATRIX_ZONOTOPE_HPP_

#include <vector>

#include "ddsc/types.hpp"
#include "ddsc/zonotope.hpp"

namespace ddsc
{

/// Set of matrices {C + sum_i b_i G_i : |b_i| <= 1}.
class MatrixZonotope
{
  public:
    MatrixZonotope() = default;
    MatrixZonotope(Matrix center, std::vector<Matrix> generators);

    Eigen::Index rows() const { return C_.rows(); }
    Eigen::Index cols() const { return C_.cols(); }
    std::size_t order() const { return G_.size(); }
    const Matrix& center() const { return C_; }
    const std::vector<Matrix>& generators() const { return G_; }

    /// {M v : M in this set}; exact.
    Zonotope map(const Vector& v) const;

    /// LP over the generator weights; tol bounds the l1 residual.
    bool contains(const Matrix& M, double tol = kFeasTol) const;

    /// Entrywise sum_i |G_i|, the half-widths of the interval hull.
    Matrix interval_radius() const;

    /**
     * Outer order reduction. Keeps the (g_max - nnz) largest generators by
     * Frobenius norm, where nnz is the number of entries touched by the rest,
     * and replaces the rest by their entrywise interval hull (one generator per
     * nonzero entry). When g_max is smaller than nnz everything is boxed.
     */
    MatrixZonotope reduce(std::size_t g_max) const;

    /// All 2^g sign combinations of the (reduced) generator set.
    std::vector<Matrix> vertices(std::size_t g_max) const;

  private:
    Matrix C_;
    std::vector<Matrix> G_;
};

} // namespace ddsc

#endif
