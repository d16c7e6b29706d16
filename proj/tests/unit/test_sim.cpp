#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ddsc/bundle.hpp"
#include "ddsc/serialize.hpp"
#include "ddsc/setops.hpp"
#include "ddsc/sim.hpp"
#include "helpers.hpp"

using namespace ddsc;
using testutil::m;
using testutil::v;

namespace
{

const char* kToyScenario = R"({
  "plant": {
    "A": [[0.5, 0.0], [0.0, 0.5]],
    "B": [[1.0, 0.0], [0.0, 1.0]],
    "W": {"lower": [-0.01, -0.01], "upper": [0.01, 0.01]},
    "X": {"lower": [-4, -4], "upper": [4, 4]},
    "U": {"lower": [-2, -2], "upper": [2, 2]},
    "x0": [0.1, 0.0]
  },
  "controller": {"X_eta": {"lower": [-3.5, -3.5], "upper": [3.5, 3.5]}},
  "cells": [{"x_e": [-2, 0]}, {"x_e": [2, 0]}],
  "weights": {"alpha": 1.0, "beta": 0.0},
  "detector": {"tau": 3, "clear_streak": 3},
  "attacks": [{"name": "ramp", "channel": "measurement",
               "windows": [{"start": 30, "end": 40, "gain": [0.05, 0.0]}]}],
  "reference": [{"k": 0, "r": [2, 0]}, {"k": 50, "r": [-2, 0]}],
  "horizon": 70,
  "seed": 4,
  "synthesis": {"coverage_samples": 1000, "j_max": 20},
  "data": {"trajectories": 3, "length": 10, "seed": 2}
})";

const ScenarioConfig& toy_cfg()
{
    static const ScenarioConfig cfg = parse_scenario(kToyScenario);
    return cfg;
}

const SynthesisBundle& toy_bundle()
{
    static const SynthesisBundle b = synthesize(collect_data(toy_cfg().plant, toy_cfg().data), toy_cfg());
    return b;
}

} // namespace

TEST_CASE("plant_step")
{
    PlantConfig p;
    p.A = Matrix::Identity(2, 2);
    p.B = Matrix::Zero(2, 2);
    p.W = Zonotope::point(v({0, 0}));
    p.X = HPolytope::box(v({-1, -1}), v({1, 1}));
    p.U = p.X;
    p.x0 = v({0, 0});
    CHECK(plant_step(p, v({0.3, -0.7}), v({1, 1}), 1, 0).isApprox(v({0.3, -0.7})));

    p.A = testutil::cstr_A();
    p.B = testutil::cstr_B();
    const Vector x1 = plant_step(p, v({0.01, -0.01}), v({0, 0}), 1, 0);
    CHECK(x1(0) == doctest::Approx(0.009706));
    CHECK(x1(1) == doctest::Approx(-0.008288));

    p.W = Zonotope::box(v({-0.001, -0.001}), v({0.001, 0.001}));
    for (int k = 0; k < 200; ++k)
    {
        Vector w;
        const Vector x = plant_step(p, v({0, 0}), v({0, 0}), 3, k, &w);
        CHECK(x.isApprox(w));
        CHECK(contains_point(p.W, w));
    }
    Vector w0, w1;
    plant_step(p, v({0, 0}), v({0, 0}), 3, 5, &w0);
    plant_step(p, v({0, 0}), v({0, 0}), 3, 5, &w1);
    CHECK(w0 == w1);
}

TEST_CASE("inject")
{
    AttackSpec a;
    a.windows.push_back({10, 20, 9, v({0.1, 0}), v({0, 0})});
    a.windows.push_back({30, 32, 29, v({0, 0}), v({1, 2})});
    const Vector x = v({1, 1});
    CHECK(inject(a, 9, x) == x);
    CHECK(inject(a, 10, x).isApprox(v({1.1, 1})));
    CHECK(inject(a, 20, x).isApprox(v({2.1, 1})));
    CHECK(inject(a, 21, x) == x);
    CHECK(inject(a, 31, x).isApprox(v({2, 3})));
    CHECK(inject(a, 33, x) == x);
}

TEST_CASE("reference_at")
{
    const std::vector<Waypoint> ref = {{0, v({1})}, {10, v({2})}, {20, v({3})}};
    CHECK(reference_at(ref, 0)(0) == 1);
    CHECK(reference_at(ref, 9)(0) == 1);
    CHECK(reference_at(ref, 10)(0) == 2);
    CHECK(reference_at(ref, 100)(0) == 3);
}

TEST_CASE("metric_er")
{
    ScenarioTrace t;
    for (int k = 0; k <= 4; ++k)
    {
        TraceRow r;
        r.k = k;
        r.x_true = v({1, 1});
        r.r = v({1, 1});
        t.rows.push_back(r);
    }
    CHECK(metric_er(t) == 0.0);
    for (auto& r : t.rows)
        r.x_true = v({4, 5});
    CHECK(metric_er(t) == doctest::Approx(5.0));
    t.rows[0].x_true = v({100, 100});
    CHECK(metric_er(t) == doctest::Approx(5.0));
}

TEST_CASE("TrackingController")
{
    const Matrix A = testutil::cstr_A();
    const Matrix B = testutil::cstr_B();
    const Matrix Kt = dlqr(A, B, Matrix::Identity(2, 2), 0.1 * Matrix::Identity(2, 2));
    const TrackingController ctrl(A, B, Kt, HPolytope::box(v({-2, -10}), v({2, 10})));
    const Vector r = v({1.0, 3.0});
    const Vector ur = ctrl.reference_input(r);
    CHECK((A * r + B * ur).isApprox(r, 1e-9));
    CHECK(ctrl(r, r).isApprox(ur));
    const Vector sat = ctrl(v({-100, -100}), r);
    CHECK(sat(0) <= 2.0);
    CHECK(sat(1) <= 10.0);
}

TEST_CASE("validate")
{
    ScenarioConfig cfg = toy_cfg();
    CHECK_NOTHROW(validate(cfg));

    SUBCASE("x0 outside X")
    {
        cfg.plant.x0 = v({9, 9});
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SUBCASE("wrong gain length")
    {
        cfg.attacks[0].windows[0].gain = v({1, 2, 3});
        CHECK_THROWS(validate(cfg));
    }
    SUBCASE("overlapping windows on one channel")
    {
        cfg.attacks[0].windows.push_back({35, 45, 34, v({0, 0}), v({0, 0})});
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SUBCASE("the same interval on different channels is allowed")
    {
        AttackSpec act;
        act.channel = Channel::Actuation;
        act.windows.push_back({35, 45, 34, v({0, 0}), v({0, 0})});
        cfg.attacks.push_back(act);
        CHECK_NOTHROW(validate(cfg));
    }
    SUBCASE("no cells")
    {
        cfg.cell_states.clear();
        CHECK_THROWS(validate(cfg));
    }
}

TEST_CASE("parse_scenario")
{
    const ScenarioConfig& cfg = toy_cfg();
    CHECK(cfg.plant.A.isApprox(0.5 * Matrix::Identity(2, 2)));
    CHECK(cfg.cell_states.size() == 2);
    CHECK(cfg.tau == 3);
    CHECK(cfg.attacks.size() == 1);
    CHECK(cfg.attacks[0].windows[0].k0 == 29);
    CHECK(cfg.attacks[0].windows[0].offset.isZero());
    CHECK_FALSE(cfg.Kt.has_value());
    CHECK(cfg.synthesis.coverage_samples == 1000);
    CHECK(cfg.data.length == 10);
    CHECK_THROWS(parse_scenario("{\"plant\": 3}"));
    CHECK_THROWS(parse_scenario("not json"));
}

TEST_CASE("set JSON round trips")
{
    const Zonotope z(v({1, 2}), m({{1, 0.5, 0}, {0, 0.25, 2}}));
    const Zonotope z2 = zonotope_from_json(set_to_json(z));
    CHECK(z2.center() == z.center());
    CHECK(z2.generators() == z.generators());

    const HPolytope p = HPolytope::box(v({-1, 0, 2}), v({1, 3, 4}));
    const HPolytope p2 = hpolytope_from_json(set_to_json(p));
    CHECK(p2.H() == p.H());
    CHECK(p2.h() == p.h());

    Matrix G = Matrix::Zero(2, 4);
    G(0, 3) = 0.2;
    const MatrixZonotope M(m({{0.5, 0, 1, 0}, {0, 0.5, 0, 1}}), {G, Matrix::Constant(2, 4, 1e-3)});
    const MatrixZonotope M2 = matrix_zonotope_from_json(set_to_json(M));
    CHECK(M2.center() == M.center());
    REQUIRE(M2.order() == M.order());
    CHECK(M2.generators() == M.generators());
}

TEST_CASE("trajectory bank round trip")
{
    const TrajectoryBank bank = collect_data(toy_cfg().plant, toy_cfg().data);
    CHECK(bank.trajectories.size() == 3);
    CHECK(bank.total_samples() == 30);
    const TrajectoryBank back = parse_bank(dump_bank(bank));
    REQUIRE(back.trajectories.size() == bank.trajectories.size());
    for (std::size_t i = 0; i < bank.trajectories.size(); ++i)
    {
        CHECK(back.trajectories[i].x == bank.trajectories[i].x);
        CHECK(back.trajectories[i].u == bank.trajectories[i].u);
    }
    CHECK(back.noise_generators.size() == 2);
    CHECK(identify(back).center().isApprox(identify(bank).center()));
}

TEST_CASE("trace CSV")
{
    CHECK(trace_csv_header(2, 1) ==
          "k,x_true0,x_true1,x_recv0,x_recv1,u_sent0,u_recv0,u_applied0,d,f,l_bar,j_bar,J,J_se,stop_reason,r0,r1,"
          "verdict,mode,tube_reset,ec_active,alarm,detection,x_hat0,x_hat1");
    CHECK(trace_to_csv(ScenarioTrace{}).empty());
}

TEST_CASE("synthesis and simulation on the toy scenario")
{
    const SynthesisBundle& b = toy_bundle();
    REQUIRE(b.families.size() == 2);
    for (const auto& f : b.families)
    {
        CHECK(f.levels() >= 1);
        CHECK(contains_set(f.C.back(), f.cell.T0));
    }
    CHECK(b.Kt.rows() == 2);

    SUBCASE("bundle JSON round trip")
    {
        const SynthesisBundle c = parse_bundle(dump_bundle(b));
        CHECK(c.M.center() == b.M.center());
        CHECK(c.table.I == b.table.I);
        CHECK(c.table.sorted_rows == b.table.sorted_rows);
        REQUIRE(c.families.size() == b.families.size());
        for (std::size_t l = 0; l < b.families.size(); ++l)
        {
            CHECK(c.families[l].levels() == b.families[l].levels());
            CHECK(c.families[l].C.back().h() == b.families[l].C.back().h());
            CHECK(c.families[l].cell.K == b.families[l].cell.K);
        }
        CHECK(trace_to_csv(run_scenario(toy_cfg(), c, 3)) == trace_to_csv(run_scenario(toy_cfg(), b, 3)));
        CHECK_THROWS(parse_bundle("{\"format\": \"other\"}"));
    }
    SUBCASE("runs are deterministic in the seed")
    {
        const ScenarioTrace t1 = run_scenario(toy_cfg(), b, 11);
        const ScenarioTrace t2 = run_scenario(toy_cfg(), b, 11);
        CHECK(trace_to_csv(t1) == trace_to_csv(t2));
        CHECK(t1.rows.size() == 71);
        const ScenarioTrace t3 = run_scenario(toy_cfg(), b, 12);
        CHECK(trace_to_csv(t1) != trace_to_csv(t3));
    }
    SUBCASE("states stay in X_eta and applied inputs in U")
    {
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
            for (const auto& r : run_scenario(toy_cfg(), b, seed).rows)
            {
                CHECK(b.X_eta.contains(r.x_true, 1e-7));
                CHECK(b.U.contains(r.u_applied, 1e-7));
            }
    }
    SUBCASE("the attack is detected and the clean run is untouched")
    {
        const ScenarioTrace t = run_scenario(toy_cfg(), b, 1);
        int det = 0;
        for (const auto& r : t.rows)
            det += r.detection;
        CHECK(det >= 1);
        for (const auto& r : run_scenario(toy_cfg(), b, 1, RunOptions{true, false}).rows)
        {
            CHECK(r.detection == 0);
            CHECK(r.u_applied.isApprox(r.u_sent));
        }
    }
    SUBCASE("CSV parse keeps the report columns")
    {
        const ScenarioTrace t = run_scenario(toy_cfg(), b, 2);
        const ScenarioTrace back = parse_trace_csv(trace_to_csv(t));
        REQUIRE(back.rows.size() == t.rows.size());
        CHECK(metric_er(back) == doctest::Approx(metric_er(t)).epsilon(1e-12));
        for (std::size_t i = 0; i < t.rows.size(); ++i)
        {
            CHECK(back.rows[i].mode == t.rows[i].mode);
            CHECK(back.rows[i].detection == t.rows[i].detection);
            CHECK(back.rows[i].ec_active == t.rows[i].ec_active);
        }
    }
}
