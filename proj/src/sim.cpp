#include "ddsc/sim.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ddsc/bundle.hpp"
#include "ddsc/rng.hpp"
#include "ddsc/safety.hpp"
#include "ddsc/supervisor.hpp"

namespace ddsc
{

namespace
{

constexpr std::uint64_t kNoiseStream = 0x5eed0000;
constexpr std::uint64_t kDataStream = 0xda7a0000;

bool window_active(const AttackWindow& w, int k)
{
    return k >= w.start && k <= w.end;
}

} // namespace

void validate(const ScenarioConfig& cfg)
{
    const Eigen::Index n = cfg.plant.A.rows();
    const Eigen::Index m = cfg.plant.B.cols();
    require_dim(cfg.plant.A.cols(), n, "plant A");
    require_dim(cfg.plant.B.rows(), n, "plant B");
    require_dim(cfg.plant.W.dim(), n, "plant W");
    require_dim(cfg.plant.X.dim(), n, "plant X");
    require_dim(cfg.plant.U.dim(), m, "plant U");
    require_dim(cfg.plant.x0.size(), n, "plant x0");
    require_dim(cfg.X_eta.dim(), n, "controller X_eta");
    if (cfg.Kt)
    {
        require_dim(cfg.Kt->rows(), m, "controller Kt rows");
        require_dim(cfg.Kt->cols(), n, "controller Kt cols");
    }
    if (!cfg.plant.X.contains(cfg.plant.x0))
        throw std::invalid_argument("scenario: x0 outside X");
    if (cfg.cell_states.empty())
        throw std::invalid_argument("scenario: no equilibrium cells");
    for (const auto& x : cfg.cell_states)
        require_dim(x.size(), n, "cell x_e");
    if (cfg.reference.empty())
        throw std::invalid_argument("scenario: empty reference");
    for (const auto& w : cfg.reference)
        require_dim(w.r.size(), n, "reference waypoint");
    if (cfg.horizon <= 0)
        throw std::invalid_argument("scenario: horizon must be positive");
    if (cfg.tau < 0 || cfg.clear_streak < 1)
        throw std::invalid_argument("scenario: invalid detector settings");

    for (Channel ch : {Channel::Measurement, Channel::Actuation})
    {
        std::vector<const AttackWindow*> ws;
        for (const auto& a : cfg.attacks)
        {
            if (a.channel != ch)
                continue;
            const Eigen::Index dim = ch == Channel::Measurement ? n : m;
            for (const auto& w : a.windows)
            {
                require_dim(w.gain.size(), dim, "attack gain");
                require_dim(w.offset.size(), dim, "attack offset");
                ws.push_back(&w);
            }
        }
        for (std::size_t i = 0; i < ws.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (ws[i]->start <= ws[j]->end && ws[j]->start <= ws[i]->end)
                    throw std::invalid_argument("scenario: overlapping attack windows on one channel");
    }
}

Vector inject(const AttackSpec& attack, int k, const Vector& clean)
{
    for (const auto& w : attack.windows)
        if (window_active(w, k))
            return clean + w.gain * static_cast<double>(k - w.k0) + w.offset;
    return clean;
}

Vector reference_at(const std::vector<Waypoint>& ref, int k)
{
    const Waypoint* cur = &ref.front();
    for (const auto& w : ref)
        if (w.k <= k)
            cur = &w;
    return cur->r;
}

Vector plant_step(const PlantConfig& p, const Vector& x, const Vector& u, std::uint64_t seed, int k,
                  Vector* w_out)
{
    const Eigen::Index g = p.W.order();
    Vector beta(g);
    for (Eigen::Index i = 0; i < g; ++i)
        beta(i) = 2.0 * uniform01(seed, kNoiseStream + static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k)) -
                  1.0;
    const Vector w = p.W.center() + p.W.generators() * beta;
    if (w_out)
        *w_out = w;
    return p.A * x + p.B * u + w;
}

TrajectoryBank collect_data(const PlantConfig& p, const DataSettings& s)
{
    TrajectoryBank bank;
    const Eigen::Index n = p.A.rows();
    const Eigen::Index m = p.B.cols();
    const auto [lo, hi] = p.U.bounding_box();
    std::uint64_t counter = 0;
    for (int t = 0; t < s.trajectories; ++t)
    {
        Trajectory tr{Matrix(m, s.length), Matrix(n, s.length + 1)};
        tr.x.col(0) = p.x0;
        for (int k = 0; k < s.length; ++k)
        {
            for (Eigen::Index i = 0; i < m; ++i)
                tr.u(i, k) = lo(i) + (hi(i) - lo(i)) * uniform01(s.seed, kDataStream + static_cast<std::uint64_t>(i), counter);
            tr.x.col(k + 1) = plant_step(p, tr.x.col(k), tr.u.col(k), s.seed + 1, static_cast<int>(counter));
            ++counter;
        }
        bank.trajectories.push_back(std::move(tr));
    }
    bank.noise_center = p.W.center();
    for (Eigen::Index i = 0; i < p.W.order(); ++i)
        bank.noise_generators.push_back(p.W.generators().col(i));
    return bank;
}

double metric_er(const ScenarioTrace& trace)
{
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& row : trace.rows)
    {
        if (row.k < 1)
            continue;
        sum += (row.x_true - row.r).norm();
        ++count;
    }
    return count ? sum / static_cast<double>(count) : 0.0;
}

TrackingController::TrackingController(Matrix A_model, Matrix B_model, Matrix Kt, HPolytope U)
    : A_(std::move(A_model)), B_(std::move(B_model)), Kt_(std::move(Kt))
{
    std::tie(lo_, hi_) = U.bounding_box();
}

Vector TrackingController::reference_input(const Vector& r) const
{
    const Eigen::Index n = A_.rows();
    const Vector rhs = (Matrix::Identity(n, n) - A_) * r;
    return B_.completeOrthogonalDecomposition().solve(rhs).cwiseMax(lo_).cwiseMin(hi_);
}

Vector TrackingController::operator()(const Vector& x, const Vector& r) const
{
    return (Kt_ * (x - r) + reference_input(r)).cwiseMax(lo_).cwiseMin(hi_);
}

ScenarioTrace run_scenario(const ScenarioConfig& cfg, const SynthesisBundle& bundle, std::uint64_t seed,
                           const RunOptions& opts)
{
    validate(cfg);
    const TrackingController ctrl(bundle.A_model(), bundle.B_model(), bundle.Kt, bundle.U);
    SupervisorConfig sc{bundle.M,         bundle.W,  bundle.U,      bundle.X_eta, bundle.seeds(),
                        bundle.table,     cfg.tau,   cfg.clear_streak, opts.enable_ts, 2000, seed ^ 0x9e37ULL};
    Supervisor sup(std::move(sc), [&ctrl](const Vector& x, const Vector& r) { return ctrl(x, r); });
    const SafetyModel model = bundle.safety_model();

    ScenarioTrace trace;
    SafetyState st;
    Vector x = cfg.plant.x0;
    for (int k = 0; k <= cfg.horizon; ++k)
    {
        TraceRow row;
        row.k = k;
        row.r = reference_at(cfg.reference, k);
        row.x_true = x;

        Vector x_recv = x;
        if (opts.attacks)
            for (const auto& a : cfg.attacks)
                if (a.channel == Channel::Measurement)
                    x_recv = inject(a, k, x_recv);
        row.x_recv = x_recv;

        const SupervisorStep s = sup.step(k, x_recv, row.r);
        row.u_sent = s.u_sent;
        Vector u_recv = s.u_sent;
        if (opts.attacks)
            for (const auto& a : cfg.attacks)
                if (a.channel == Channel::Actuation)
                    u_recv = inject(a, k, u_recv);
        row.u_recv = u_recv;

        const PlantSideResult ps = plant_side_step(u_recv, x, st, model);
        st = ps.st;
        row.u_applied = ps.u_applied;
        row.verdict = to_string(ps.verdict);
        row.f = st.f;
        row.l_bar = ps.ec_active && st.cell ? *st.cell : -1;
        row.j_bar = ps.ec_active && st.level ? *st.level : -1;
        row.ec_active = ps.ec_active ? 1 : 0;
        row.alarm = st.alarm ? 1 : 0;
        row.d = s.d;
        row.detection = s.detection ? 1 : 0;
        row.J = s.J;
        row.J_se = s.J_se;
        row.stop_reason = to_string(s.stop);
        row.mode = to_string(s.mode);
        row.tube_reset = s.tube_reset ? 1 : 0;
        row.x_hat = s.x_hat.value_or(Vector::Constant(x.size(), std::numeric_limits<double>::quiet_NaN()));
        trace.rows.push_back(std::move(row));

        x = plant_step(cfg.plant, x, ps.u_applied, seed, k);
    }
    return trace;
}

ScenarioTrace baseline_ec_only(const ScenarioConfig& cfg, const SynthesisBundle& bundle, std::uint64_t seed)
{
    return run_scenario(cfg, bundle, seed, RunOptions{false, true});
}

namespace
{

void put_vec(std::ostringstream& os, const Vector& v)
{
    char buf[40];
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        std::snprintf(buf, sizeof buf, ",%.17g", v(i));
        os << buf;
    }
}

void put_vec_header(std::ostringstream& os, const char* name, Eigen::Index len)
{
    for (Eigen::Index i = 0; i < len; ++i)
        os << ',' << name << i;
}

} // namespace

std::string trace_csv_header(Eigen::Index n, Eigen::Index m)
{
    std::ostringstream os;
    os << 'k';
    put_vec_header(os, "x_true", n);
    put_vec_header(os, "x_recv", n);
    put_vec_header(os, "u_sent", m);
    put_vec_header(os, "u_recv", m);
    put_vec_header(os, "u_applied", m);
    os << ",d,f,l_bar,j_bar,J,J_se,stop_reason";
    put_vec_header(os, "r", n);
    os << ",verdict,mode,tube_reset,ec_active,alarm,detection";
    put_vec_header(os, "x_hat", n);
    return os.str();
}

std::string trace_to_csv(const ScenarioTrace& trace)
{
    std::ostringstream os;
    if (trace.rows.empty())
        return os.str();
    const auto& r0 = trace.rows.front();
    os << trace_csv_header(r0.x_true.size(), r0.u_sent.size()) << '\n';
    char buf[40];
    for (const auto& row : trace.rows)
    {
        os << row.k;
        put_vec(os, row.x_true);
        put_vec(os, row.x_recv);
        put_vec(os, row.u_sent);
        put_vec(os, row.u_recv);
        put_vec(os, row.u_applied);
        os << ',' << row.d << ',' << row.f << ',' << row.l_bar << ',' << row.j_bar;
        std::snprintf(buf, sizeof buf, ",%.17g", row.J);
        os << buf;
        std::snprintf(buf, sizeof buf, ",%.17g", row.J_se);
        os << buf << ',' << row.stop_reason;
        put_vec(os, row.r);
        os << ',' << row.verdict << ',' << row.mode << ',' << row.tube_reset << ',' << row.ec_active << ','
           << row.alarm << ',' << row.detection;
        put_vec(os, row.x_hat);
        os << '\n';
    }
    return os.str();
}

} // namespace ddsc
