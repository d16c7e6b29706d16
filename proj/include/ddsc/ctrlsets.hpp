#ifndef DDSC_CTRLSETS_HPP_
#define DDSC_CTRLSETS_HPP_

#include <optional>
#include <vector>

#include "ddsc/hpolytope.hpp"
#include "ddsc/matrix_zonotope.hpp"
#include "ddsc/zonotope.hpp"

namespace ddsc
{

struct EquilibriumCell
{
    int index = 0;
    Vector x_e;
    Vector u_e;
    Matrix K;
    Zonotope T0;
    HPolytope V;

    Vector terminal_input(const Vector& x) const { return K * (x - x_e) + u_e; }
};

struct RoscFamily
{
    EquilibriumCell cell;
    /// C[0] is the H-form of T0; C[j] the level-j controllable set.
    std::vector<HPolytope> C;
    /// Xi[j] lives over (x, u); Xi[0] is unused and left empty.
    std::vector<HPolytope> Xi;
    /// First level at which the union of C[0..N] covers the Voronoi cell.
    int N = 0;
    double coverage = 0.0;
    bool stalled = false;

    int levels() const { return static_cast<int>(C.size()) - 1; }
    /// Smallest j with x in C[j], or nullopt.
    std::optional<int> level_of(const Vector& x, double tol = kFeasTol) const;
};

/// Cell l = X_eta intersected with the bisector half-spaces toward every other seed.
std::vector<HPolytope> voronoi_partition(const HPolytope& X_eta, const std::vector<Vector>& seeds);

/// Nearest seed, lowest index on ties.
int voronoi_index(const std::vector<Vector>& seeds, const Vector& x);

/// h_r minus the support of W along H_r.
Vector tilde_h(const Matrix& H, const Vector& h, const Zonotope& W);

enum class InnerApprox
{
    Zonotope, ///< In_z on Xi, projected as a zonotope
    Exact     ///< Fourier-Motzkin projection of Xi itself
};

struct RoscOptions
{
    InnerApprox inner = InnerApprox::Exact;
};

struct RoscStep
{
    HPolytope Xi;
    HPolytope C;
};

/**
 * Robust one-step controllable set toward target. The matrix zonotope is used
 * directly: for each target facet the per-generator functionals are merged when
 * parallel and every sign pattern becomes a row, which is the intersection over
 * all vertex matrices. Throws EmptySetError when Xi is empty.
 */
RoscStep rosc_step(const HPolytope& target, const MatrixZonotope& M, const HPolytope& X,
                   const HPolytope& U, const Zonotope& W, const RoscOptions& opts = {});

/// Same construction from an explicit list of vertex matrices.
RoscStep rosc_step(const HPolytope& target, const std::vector<Matrix>& vertices, const HPolytope& X,
                   const HPolytope& U, const Zonotope& W, const RoscOptions& opts = {});

struct RciOptions
{
    std::optional<Matrix> K;
    double tol = 1e-12;
    int max_iter = 20000;
};

struct RciResult
{
    Matrix K;
    Zonotope T0;
};

class SynthesisError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Discrete LQR gain (u = K x) for (A, B) by Riccati iteration.
Matrix dlqr(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R);

/**
 * Terminal gain and RCI set around (x_e, u_e). The error box is iterated in the
 * coordinates that work best (identity or the center closed-loop eigenbasis)
 * until it stops growing; invariance, T0 in X_eta and K T0 in U are verified.
 */
RciResult synthesize_rci(const MatrixZonotope& M, const Vector& x_e, const Vector& u_e, const Zonotope& W,
                         const HPolytope& U, const HPolytope& X_eta, const RciOptions& opts = {});

/// Equilibrium of the center model nearest to x_e with u in U_box (bounded least squares).
std::pair<Vector, Vector> snap_equilibrium(const Matrix& A, const Matrix& B, const Vector& x_e,
                                           const Vector& u_lo, const Vector& u_hi);

struct FamilyOptions
{
    double coverage_target = 0.99;
    std::size_t coverage_samples = 10000;
    int j_max = 50;
    int stall_window = 5;
    std::uint64_t seed = 1;
    /// Extra points (other cells' T0 samples) the family keeps growing to cover.
    std::vector<Vector> extra_targets;
    RoscOptions rosc;
};

RoscFamily build_family(const EquilibriumCell& cell, const MatrixZonotope& M, const HPolytope& X,
                        const HPolytope& U, const Zonotope& W, const FamilyOptions& opts = {});

} // namespace ddsc

#endif
