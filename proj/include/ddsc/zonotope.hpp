#ifndef DDSC_ZONOTOPE_HPP_
#define DDSC_ZONOTOPE_HPP_

#include "ddsc/types.hpp"

namespace ddsc
{

/**
 * Zonotope {c + G b : ||b||_inf <= 1}.
 *
 * Immutable once built. A zonotope with zero generators is the singleton {c}.
 */
class Zonotope
{
  public:
    Zonotope() = default;
    Zonotope(Vector center, Matrix generators);

    static Zonotope point(Vector center);
    static Zonotope box(const Vector& lower, const Vector& upper);
    static Zonotope centered_box(const Vector& center, const Vector& radius);

    Eigen::Index dim() const { return c_.size(); }
    Eigen::Index order() const { return G_.cols(); }
    const Vector& center() const { return c_; }
    const Matrix& generators() const { return G_; }

    /// Half-widths of the interval hull.
    Vector radius() const;
    /// max over the set of dir'x.
    double support(const Vector& dir) const;
    bool is_point(double tol = 0.0) const;
    /// true when the generators do not span the ambient space.
    bool is_degenerate() const;

    /// Drops zero generators and merges parallel ones. Same set, fewer columns.
    Zonotope compact(double tol = 1e-14) const;

    /**
     * Girard-style outer reduction: keeps the (max_generators - n) longest
     * generators and replaces the rest by their interval hull.
     */
    Zonotope reduce(Eigen::Index max_generators) const;

  private:
    Vector c_;
    Matrix G_;
};

} // namespace ddsc

#endif
