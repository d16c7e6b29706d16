#ifndef DDSC_SIM_HPP_
#define DDSC_SIM_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ddsc/hpolytope.hpp"
#include "ddsc/sysid.hpp"
#include "ddsc/zonotope.hpp"

namespace ddsc
{

struct PlantConfig
{
    Matrix A;
    Matrix B;
    Zonotope W;
    HPolytope X;
    HPolytope U;
    Vector x0;
};

/// a_k = gain * (k - k0) + offset for start <= k <= end.
struct AttackWindow
{
    int start = 0;
    int end = -1;
    int k0 = 0;
    Vector gain;
    Vector offset;
};

enum class Channel
{
    Measurement,
    Actuation
};

struct AttackSpec
{
    std::string name;
    Channel channel = Channel::Measurement;
    std::vector<AttackWindow> windows;
};

struct Waypoint
{
    int k = 0;
    Vector r;
};

struct SynthesisSettings
{
    double coverage_target = 0.99;
    std::size_t coverage_samples = 10000;
    int j_max = 50;
    double equilibrium_input_margin = 0.9;
    bool exact_projection = true;
};

struct DataSettings
{
    int trajectories = 4;
    int length = 25;
    std::uint64_t seed = 7;
};

struct ScenarioConfig
{
    PlantConfig plant;
    std::optional<Matrix> Kt;
    HPolytope X_eta;
    std::vector<Vector> cell_states;
    double alpha = 1.0;
    double beta = 0.0;
    int tau = 5;
    int clear_streak = 3;
    std::vector<AttackSpec> attacks;
    std::vector<Waypoint> reference;
    int horizon = 500;
    std::uint64_t seed = 1;
    SynthesisSettings synthesis;
    DataSettings data;
};

/// Throws std::invalid_argument on inconsistent dimensions or overlapping windows.
void validate(const ScenarioConfig& cfg);

Vector inject(const AttackSpec& attack, int k, const Vector& clean);
Vector reference_at(const std::vector<Waypoint>& ref, int k);

/// x_next = A x + B u + w, with w drawn uniformly over the generator box of W.
Vector plant_step(const PlantConfig& p, const Vector& x, const Vector& u, std::uint64_t seed, int k,
                  Vector* w_out = nullptr);

/// Open-loop data runs with inputs uniform in the bounding box of U.
TrajectoryBank collect_data(const PlantConfig& p, const DataSettings& s);

struct TraceRow
{
    int k = 0;
    Vector x_true, x_recv, u_sent, u_recv, u_applied;
    int d = 0;
    int f = 1;
    int l_bar = -1;
    int j_bar = -1;
    double J = 0.0;
    double J_se = 0.0;
    std::string stop_reason = "none";
    Vector r;
    std::string verdict;
    std::string mode;
    int tube_reset = 0;
    int ec_active = 0;
    int alarm = 0;
    int detection = 0;
    Vector x_hat;
};

struct ScenarioTrace
{
    std::vector<TraceRow> rows;
};

/// Mean ||x_k - r_k|| over k = 1..N.
double metric_er(const ScenarioTrace& trace);

struct SynthesisBundle;

class TrackingController
{
  public:
    TrackingController(Matrix A_model, Matrix B_model, Matrix Kt, HPolytope U);
    Vector operator()(const Vector& x, const Vector& r) const;
    Vector reference_input(const Vector& r) const;
    const Matrix& gain() const { return Kt_; }

  private:
    Matrix A_, B_, Kt_;
    Vector lo_, hi_;
};

struct RunOptions
{
    bool enable_ts = true;
    bool attacks = true;
};

ScenarioTrace run_scenario(const ScenarioConfig& cfg, const SynthesisBundle& bundle, std::uint64_t seed,
                           const RunOptions& opts = {});
ScenarioTrace baseline_ec_only(const ScenarioConfig& cfg, const SynthesisBundle& bundle, std::uint64_t seed);

std::string trace_csv_header(Eigen::Index n, Eigen::Index m);
std::string trace_to_csv(const ScenarioTrace& trace);

} // namespace ddsc

#endif
