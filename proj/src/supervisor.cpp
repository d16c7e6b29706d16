#include "ddsc/supervisor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ddsc/rng.hpp"
#include "ddsc/setops.hpp"

namespace ddsc
{

double index_I1(const std::vector<RoscFamily>& fams, int li, int lj)
{
    return sup_distance(fams.at(static_cast<std::size_t>(li)).cell.T0, fams.at(static_cast<std::size_t>(lj)).cell.x_e)
        .value;
}

int index_I2(const std::vector<RoscFamily>& fams, int li, int lj, std::size_t samples, std::uint64_t seed)
{
    const Zonotope T0 = fams.at(static_cast<std::size_t>(li)).cell.T0.compact();
    const auto& fam = fams.at(static_cast<std::size_t>(lj));
    const Eigen::Index g = T0.order();

    std::vector<Vector> pts;
    if (g <= 8)
        for (const auto& v : vertices(T0))
            pts.push_back(v);
    for (std::size_t k = 0; pts.size() < std::max<std::size_t>(samples, 1); ++k)
    {
        Vector b(g);
        for (Eigen::Index i = 0; i < g; ++i)
            b(i) = 2.0 * uniform01(seed, static_cast<std::uint64_t>(i), k) - 1.0;
        pts.push_back(T0.center() + T0.generators() * b);
    }

    int p = 0;
    for (const auto& x : pts)
    {
        const auto lev = fam.level_of(x, 1e-8);
        if (!lev)
            return fam.levels() + 1;
        p = std::max(p, *lev);
    }
    return p;
}

IndexTable build_index_table(const std::vector<RoscFamily>& fams, double alpha, double beta)
{
    const auto L = static_cast<Eigen::Index>(fams.size());
    IndexTable t;
    t.alpha = alpha;
    t.beta = beta;
    t.I1 = Matrix::Zero(L, L);
    t.I2 = Matrix::Zero(L, L);
    for (Eigen::Index i = 0; i < L; ++i)
        for (Eigen::Index j = 0; j < L; ++j)
        {
            t.I1(i, j) = index_I1(fams, static_cast<int>(i), static_cast<int>(j));
            t.I2(i, j) = index_I2(fams, static_cast<int>(i), static_cast<int>(j));
        }
    t.I = alpha * t.I1 + beta * t.I2;
    for (Eigen::Index r = 0; r < L; ++r)
    {
        std::vector<int> order(static_cast<std::size_t>(L));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return t.I(a, r) < t.I(b, r); });
        t.sorted_rows.push_back(std::move(order));
    }
    return t;
}

JEstimate index_J(const Zonotope& tube_next, const std::vector<Vector>& seeds, const Vector& I_col,
                  std::size_t n_samples, std::uint64_t seed)
{
    const Zonotope z = tube_next.compact();
    auto at_center = [&] {
        return JEstimate{I_col(voronoi_index(seeds, z.center())), 0.0};
    };
    if (z.is_degenerate() || n_samples == 0)
        return at_center();

    std::function<bool(const Vector&)> inside;
    std::optional<HPolytope> hp;
    if (z.dim() <= 3)
    {
        hp = to_hpolytope(z);
        inside = [&](const Vector& x) { return hp->contains(x, 0.0); };
    }
    else
        inside = [&](const Vector& x) { return contains_point(z, x, 0.0); };

    const Vector r = z.radius();
    const Eigen::Index n = z.dim();
    double sum = 0.0;
    double sum2 = 0.0;
    std::size_t hits = 0;
    Vector x(n);
    const std::size_t max_tries = 50 * n_samples;
    for (std::size_t k = 0; k < max_tries && hits < n_samples; ++k)
    {
        for (Eigen::Index i = 0; i < n; ++i)
            x(i) = z.center()(i) + r(i) * (2.0 * uniform01(seed, static_cast<std::uint64_t>(i), k) - 1.0);
        if (!inside(x))
            continue;
        const double v = I_col(voronoi_index(seeds, x));
        sum += v;
        sum2 += v * v;
        ++hits;
    }
    if (hits == 0)
        return at_center();
    const double N = static_cast<double>(hits);
    const double mean = sum / N;
    const double var = std::max(sum2 / N - mean * mean, 0.0);
    return {mean, std::sqrt(var / N)};
}

bool detect(const Vector& x_recv, const Zonotope& tube_1step)
{
    return !contains_point(tube_1step, x_recv);
}

std::string to_string(SupervisorMode m)
{
    switch (m)
    {
    case SupervisorMode::Normal:
        return "normal";
    case SupervisorMode::Tracking:
        return "tracking";
    case SupervisorMode::Stopped:
        return "stopped";
    }
    return "?";
}

std::string to_string(StopReason r)
{
    switch (r)
    {
    case StopReason::None:
        return "none";
    case StopReason::Safety:
        return "safety";
    case StopReason::Performance:
        return "performance";
    }
    return "?";
}

Supervisor::Supervisor(SupervisorConfig cfg, TrackingLaw law) : cfg_(std::move(cfg)), law_(std::move(law))
{
    det_.tau = cfg_.tau;
    det_.clear_streak = cfg_.clear_streak;
    const auto [lo, hi] = cfg_.U.bounding_box();
    U_zono_ = Zonotope::box(lo, hi);
}

Vector Supervisor::invalid_input() const
{
    Vector u = U_zono_.center();
    u(0) += 2.0 * U_zono_.radius()(0);
    return u;
}

Zonotope Supervisor::input_record(const Vector& u_sent) const
{
    if (cfg_.U.contains(u_sent, kFeasTol))
        return Zonotope::point(u_sent);
    return U_zono_;
}

DetectorOutput Supervisor::run_detector(const Vector& x_recv)
{
    DetectorOutput out;
    if (det_.prev_x && det_.prev_u)
    {
        const Zonotope one = det_.prev_u->order() == 0
                                 ? rors_point(cfg_.M, *det_.prev_x, det_.prev_u->center(), cfg_.W)
                                 : rors_set(cfg_.M, Zonotope::point(*det_.prev_x), *det_.prev_u, cfg_.W, 0);
        out.consistent = !detect(x_recv, one);
    }
    if (det_.d == 0)
    {
        if (!out.consistent)
        {
            det_.d = 1;
            det_.streak = 0;
            out.raised = true;
        }
    }
    else
    {
        det_.streak = out.consistent ? det_.streak + 1 : 0;
        if (det_.streak >= det_.clear_streak)
        {
            det_.d = 0;
            det_.streak = 0;
            out.cleared = true;
        }
    }
    return out;
}

void Supervisor::start_tube(int k)
{
    // log_ holds earlier steps with their input records; the newest entry is step k.
    const int anchor = k - cfg_.tau - 1;
    std::size_t first = 0;
    while (first + 1 < log_.size() && log_[first].k < anchor)
        ++first;
    if (log_.size() < 2 || log_[first].k >= k)
    {
        tube_ = reset_tube(log_.back().x, k);
        return;
    }
    ReachTube t = reset_tube(log_[first].x, log_[first].k);
    for (std::size_t i = first; i + 1 < log_.size(); ++i)
        t = extend_tube(std::move(t), cfg_.M, log_[i].u, cfg_.W);
    tube_ = std::move(t);
}

JEstimate Supervisor::J_of(const Zonotope& set, int lr, std::uint64_t step_seed) const
{
    return index_J(set, cfg_.seeds, cfg_.table.I.col(lr), cfg_.j_samples, step_seed);
}

SupervisorStep Supervisor::step(int k, const Vector& x_recv, const Vector& r)
{
    SupervisorStep out;
    const DetectorOutput det = run_detector(x_recv);
    log_.push_back({k, x_recv, U_zono_});
    const int lr = voronoi_index(cfg_.seeds, r);

    if (det.cleared)
    {
        out.tube_reset = tube_.has_value() || mode_ != SupervisorMode::Normal;
        tube_.reset();
        mode_ = SupervisorMode::Normal;
        J_prev_ = std::numeric_limits<double>::infinity();
    }
    if (det.raised)
    {
        out.detection = true;
        if (cfg_.enable_ts)
        {
            mode_ = SupervisorMode::Tracking;
            start_tube(k);
            J_prev_ = std::numeric_limits<double>::infinity();
            lr_prev_ = lr;
        }
        else
        {
            mode_ = SupervisorMode::Stopped;
            out.stop = StopReason::Safety;
        }
    }

    Vector u;
    switch (mode_)
    {
    case SupervisorMode::Normal:
        u = law_(x_recv, r);
        break;
    case SupervisorMode::Tracking:
    {
        const Vector x_hat = tube_->back().center();
        out.x_hat = x_hat;
        u = law_(x_hat, r);
        if (lr != lr_prev_ && std::isfinite(J_prev_))
            J_prev_ = J_of(tube_->back(), lr, cfg_.seed).value;
        Zonotope next = rors_set(cfg_.M, tube_->back(), u, cfg_.W);
        if (tube_->steps() >= kTubeHorizonCap || !contains_set(cfg_.X_eta, next))
            out.stop = StopReason::Safety;
        else
        {
            const JEstimate J = J_of(next, lr, cfg_.seed);
            out.J = J.value;
            out.J_se = J.std_error;
            if (J.value > J_prev_ + J.std_error)
                out.stop = StopReason::Performance;
            else
                J_prev_ = J.value;
        }
        if (out.stop != StopReason::None)
        {
            mode_ = SupervisorMode::Stopped;
            u = invalid_input();
        }
        else
        {
            tube_->sets.push_back(std::move(next));
            tube_->inputs.push_back(Zonotope::point(u));
        }
        break;
    }
    case SupervisorMode::Stopped:
        u = invalid_input();
        break;
    }
    lr_prev_ = lr;

    const Zonotope rec = input_record(u);
    log_.back().u = rec;
    det_.prev_x = x_recv;
    det_.prev_u = rec;
    while (log_.size() > static_cast<std::size_t>(cfg_.tau) + 2)
        log_.pop_front();

    out.u_sent = u;
    out.d = det_.d;
    out.mode = mode_;
    return out;
}

} // namespace ddsc
