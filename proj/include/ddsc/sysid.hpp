#ifndef DDSC_SYSID_HPP_
#define DDSC_SYSID_HPP_

#include <vector>

#include "ddsc/matrix_zonotope.hpp"

namespace ddsc
{

/// One input-state run. Columns are time samples: u is m x N, x is n x (N+1).
struct Trajectory
{
    Matrix u;
    Matrix x;
};

struct TrajectoryBank
{
    std::vector<Trajectory> trajectories;
    Vector noise_center;
    /// Per-step noise generators g_w^(i), each of length n.
    std::vector<Vector> noise_generators;

    Eigen::Index state_dim() const;
    Eigen::Index input_dim() const;
    Eigen::Index total_samples() const;
};

struct DataMatrices
{
    Matrix X_minus;
    Matrix U_minus;
    Matrix X_plus;
};

DataMatrices assemble(const TrajectoryBank& bank);

/// Full row rank of [X_-; U_-] with threshold sigma_min > eps * sigma_max.
bool check_rank(const DataMatrices& d, double eps = kRankTol);

/// M_w: q*T generators; generator j + i*T carries g_w^(i) in column j.
MatrixZonotope noise_matrix_zonotope(const TrajectoryBank& bank);

/// M_AB = (X_+ - M_w) [X_-; U_-]^+. Throws RankError when the data are not informative.
MatrixZonotope identify(const DataMatrices& d, const MatrixZonotope& Mw);

/// Convenience: assemble, rank check, noise zonotope, identify.
MatrixZonotope identify(const TrajectoryBank& bank);

bool membership_check(const MatrixZonotope& M, const Matrix& AB, double tol = kFeasTol);

/// Vertices after outer reduction to at most g_max generators (or one per touched entry).
std::vector<Matrix> vertex_matrices(const MatrixZonotope& M, std::size_t g_max = 6);

class RankError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace ddsc

#endif
