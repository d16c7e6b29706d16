#ifndef DDSC_SETOPS_HPP_
#define DDSC_SETOPS_HPP_

#include <cstdint>
#include <vector>

#include "ddsc/hpolytope.hpp"
#include "ddsc/matrix_zonotope.hpp"
#include "ddsc/zonotope.hpp"

namespace ddsc
{

Zonotope minkowski_sum(const Zonotope& a, const Zonotope& b);
Zonotope linear_map(const Matrix& M, const Zonotope& s);
Zonotope matzono_map(const MatrixZonotope& M, const Vector& v);

bool contains_point(const Zonotope& s, const Vector& x, double tol = kFeasTol);
bool contains_point(const HPolytope& s, const Vector& x, double tol = kFeasTol);

/// Exact for zonotope-in-polytope: support of inner on every facet normal of outer.
bool contains_set(const HPolytope& outer, const Zonotope& inner, double tol = kFeasTol);
bool contains_set(const Zonotope& outer, const Zonotope& inner, double tol = kFeasTol);

/// Facet enumeration. Throws for degenerate (flat) zonotopes.
HPolytope to_hpolytope(const Zonotope& z);

/// Orthogonal projection onto the listed coordinates (Fourier-Motzkin + LP pruning).
HPolytope project(const HPolytope& p, const std::vector<Eigen::Index>& dims);
Zonotope project(const Zonotope& z, const std::vector<Eigen::Index>& dims);
/// Inverse of project for boxes: lifts p into R^n with free extra coordinates bounded by [lo, hi].
HPolytope embed(const HPolytope& p, const std::vector<Eigen::Index>& dims, const Vector& lower,
                const Vector& upper);

struct InnerZonotopeOptions
{
    /// Coordinates whose projected size should be maximized (empty: all).
    std::vector<Eigen::Index> focus;
};

/**
 * Zonotopic inner approximation. Template generators (axis-aligned, and
 * axis-aligned plus extreme-point chords) are scaled about an LP-chosen center,
 * first uniformly, then individually; the candidate with the largest
 * (projected) volume wins.
 */
Zonotope inner_zonotope(const HPolytope& p, const InnerZonotopeOptions& opts = {});

/// Vertex enumeration for dim <= 4.
std::vector<Vector> vertices(const HPolytope& p);
std::vector<Vector> vertices(const Zonotope& z);

/// Exact volume of a zonotope (sum of |det| over generator subsets).
double zonotope_volume(const Zonotope& z);

struct SupDistance
{
    double value; ///< exact when lower == upper
    double lower;
    double upper;
    bool exact;
};
SupDistance sup_distance(const Zonotope& s, const Vector& p);
SupDistance sup_distance(const HPolytope& s, const Vector& p);

struct VolumeEstimate
{
    double volume;
    double std_error;
    std::size_t samples;
    std::uint64_t seed;
};
VolumeEstimate volume_estimate(const HPolytope& s, std::size_t n_samples = 100000,
                               std::uint64_t seed = 0);
VolumeEstimate volume_estimate(const Zonotope& s, std::size_t n_samples = 100000,
                               std::uint64_t seed = 0);

struct LpSolution
{
    Vector x;
    double value;
};

class InfeasibleError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// min c'x over the polytope. Throws InfeasibleError or UnboundedError.
LpSolution solve_lp(const Vector& c, const HPolytope& constraints);

/// Uniform samples from a bounded polytope by bounding-box rejection.
std::vector<Vector> sample_uniform(const HPolytope& p, std::size_t count, std::uint64_t seed,
                                   std::size_t max_tries = 0);

} // namespace ddsc

#endif
