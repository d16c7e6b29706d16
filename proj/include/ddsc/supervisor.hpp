#ifndef DDSC_SUPERVISOR_HPP_
#define DDSC_SUPERVISOR_HPP_

#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ddsc/ctrlsets.hpp"
#include "ddsc/reach.hpp"

namespace ddsc
{

struct IndexTable
{
    Matrix I;
    Matrix I1;
    Matrix I2;
    double alpha = 1.0;
    double beta = 0.0;
    /// sorted_rows[r] lists cells l in ascending I(l, r).
    std::vector<std::vector<int>> sorted_rows;
};

/// Worst-case distance from T0 of cell li to the equilibrium of cell lj.
double index_I1(const std::vector<RoscFamily>& fams, int li, int lj);

/// Smallest p with T0^li inside C^lj_0 .. C^lj_p (checked on samples); levels+1 when none.
int index_I2(const std::vector<RoscFamily>& fams, int li, int lj, std::size_t samples = 1000,
             std::uint64_t seed = 3);

IndexTable build_index_table(const std::vector<RoscFamily>& fams, double alpha, double beta);

struct JEstimate
{
    double value;
    double std_error;
};

/**
 * Volume-weighted tracking index of a tube set: uniform samples of the set are
 * classified into Voronoi cells and the index column I(., l_r) is averaged.
 * Flat sets classify their center with weight 1.
 */
JEstimate index_J(const Zonotope& tube_next, const std::vector<Vector>& seeds, const Vector& I_col,
                  std::size_t n_samples = 2000, std::uint64_t seed = 0);

/// Reachability-consistency detector with a clearing streak.
struct DetectorState
{
    int d = 0;
    int streak = 0;
    std::optional<Vector> prev_x;
    std::optional<Zonotope> prev_u;
    int tau = 5;
    int clear_streak = 3;
};

struct DetectorOutput
{
    bool consistent = true;
    bool raised = false;
    bool cleared = false;
};

/// Anomaly flag: true when x_recv lies outside the one-step set of the previous measurement.
bool detect(const Vector& x_recv, const Zonotope& tube_1step);

enum class SupervisorMode
{
    Normal,
    Tracking,
    Stopped
};

std::string to_string(SupervisorMode m);

enum class StopReason
{
    None,
    Safety,
    Performance
};

std::string to_string(StopReason r);

using TrackingLaw = std::function<Vector(const Vector& x, const Vector& r)>;

struct SupervisorConfig
{
    MatrixZonotope M;
    Zonotope W;
    HPolytope U;
    HPolytope X_eta;
    std::vector<Vector> seeds;
    IndexTable table;
    int tau = 5;
    int clear_streak = 3;
    bool enable_ts = true;
    std::size_t j_samples = 2000;
    std::uint64_t seed = 0;
};

/// Per-step controller-side record.
struct SupervisorStep
{
    Vector u_sent;
    int d = 0;
    SupervisorMode mode = SupervisorMode::Normal;
    StopReason stop = StopReason::None;
    double J = std::numeric_limits<double>::quiet_NaN();
    double J_se = std::numeric_limits<double>::quiet_NaN();
    bool tube_reset = false;
    bool detection = false;
    std::optional<Vector> x_hat;
};

/**
 * Controller side of the loop: anomaly detector plus tracking supervisor.
 * While the detector is raised the supervisor tracks on the tube center, and
 * sends an input outside U when the next tube set leaves X_eta or J grows.
 * After a stop the invalid input is repeated until the detector clears.
 */
class Supervisor
{
  public:
    Supervisor(SupervisorConfig cfg, TrackingLaw law);

    SupervisorStep step(int k, const Vector& x_recv, const Vector& r);

    const std::optional<ReachTube>& tube() const { return tube_; }
    const DetectorState& detector() const { return det_; }
    Vector invalid_input() const;

  private:
    struct Logged
    {
        int k;
        Vector x;
        Zonotope u;
    };

    DetectorOutput run_detector(const Vector& x_recv);
    void start_tube(int k);
    Zonotope input_record(const Vector& u_sent) const;
    JEstimate J_of(const Zonotope& set, int lr, std::uint64_t step_seed) const;

    SupervisorConfig cfg_;
    TrackingLaw law_;
    DetectorState det_;
    SupervisorMode mode_ = SupervisorMode::Normal;
    std::optional<ReachTube> tube_;
    double J_prev_ = std::numeric_limits<double>::infinity();
    int lr_prev_ = -1;
    std::deque<Logged> log_;
    Zonotope U_zono_;
};

} // namespace ddsc

#endif
