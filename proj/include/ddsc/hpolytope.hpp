#ifndef DDSC_HPOLYTOPE_HPP_
#define DDSC_HPOLYTOPE_HPP_

#include <optional>
#include <utility>

#include "ddsc/types.hpp"

namespace ddsc
{

/// Half-space representation {x : H x <= h}.
class HPolytope
{
  public:
    HPolytope() = default;
    HPolytope(Matrix H, Vector h);

    static HPolytope box(const Vector& lower, const Vector& upper);
    /// Canonical empty set in dimension n (the single row 0'x <= -1).
    static HPolytope empty(Eigen::Index n);

    Eigen::Index dim() const { return H_.cols(); }
    Eigen::Index rows() const { return H_.rows(); }
    const Matrix& H() const { return H_; }
    const Vector& h() const { return h_; }

    /// Inequality check with an additive slack of tol per row.
    bool contains(const Vector& x, double tol = kFeasTol) const;
    /// Largest row violation max_r (H_r x - h_r); <= 0 inside.
    double violation(const Vector& x) const;

    /// max dir'x over the set. Throws EmptySetError / UnboundedError.
    double support(const Vector& dir) const;
    /// Maximizer of dir'x.
    Vector maximizer(const Vector& dir) const;

    bool is_empty() const;
    /// Support function finite along every +-unit direction.
    bool is_bounded() const;
    std::pair<Vector, Vector> bounding_box() const;

    struct Ball
    {
        Vector center;
        double radius;
    };
    /// Largest inscribed Euclidean ball; nullopt when empty.
    std::optional<Ball> chebyshev_center() const;

    HPolytope intersect(const HPolytope& other) const;
    /// Rows normalized to unit norm and exact duplicates collapsed (no LP).
    HPolytope normalized() const;
    /// Removes rows implied by the others (one LP per row).
    HPolytope remove_redundant() const;

  private:
    Matrix H_;
    Vector h_;
};

} // namespace ddsc

#endif
