#include <doctest.h>

#include <cmath>

#include "ddsc/reach.hpp"
#include "ddsc/rng.hpp"
#include "ddsc/setops.hpp"
#include "ddsc/supervisor.hpp"
#include "toy.hpp"

using namespace ddsc;
using testutil::toy_safety;
using testutil::v;

namespace
{

RoscFamily point_family(const Vector& x_e)
{
    RoscFamily f;
    f.cell.x_e = x_e;
    f.cell.u_e = Vector::Zero(x_e.size());
    f.cell.T0 = Zonotope::point(x_e);
    f.C.push_back(HPolytope::box(x_e, x_e));
    return f;
}

SupervisorConfig toy_config(bool enable_ts)
{
    const SafetyModel& s = toy_safety();
    SupervisorConfig c;
    c.M = s.M;
    c.W = s.W;
    c.U = s.U;
    c.X_eta = s.X_eta;
    for (const auto& f : s.families)
        c.seeds.push_back(f.cell.x_e);
    c.table = build_index_table(s.families, 1.0, 0.0);
    c.enable_ts = enable_ts;
    c.j_samples = 500;
    c.seed = 5;
    return c;
}

Vector toy_law(const Vector& x, const Vector& r)
{
    return 0.5 * r - 0.3 * (x - r);
}

Vector toy_plant(const Vector& x, const Vector& u, int k)
{
    const auto kk = static_cast<std::uint64_t>(k);
    const Vector w = v({0.02 * uniform01(9, 0, kk) - 0.01, 0.02 * uniform01(9, 1, kk) - 0.01});
    return v({0.505 * x(0), 0.495 * x(1)}) + u + w;
}

} // namespace

TEST_CASE("index_I1")
{
    SUBCASE("singleton terminal sets give the point distance")
    {
        const std::vector<RoscFamily> fams = {point_family(v({0, 0})), point_family(v({3, 4}))};
        CHECK(index_I1(fams, 0, 1) == doctest::Approx(5.0));
        CHECK(index_I1(fams, 1, 0) == doctest::Approx(5.0));
        CHECK(index_I1(fams, 0, 0) == doctest::Approx(0.0));
    }
    SUBCASE("a box of half-width delta around its own equilibrium gives delta sqrt(n)")
    {
        RoscFamily f = point_family(v({1, -1, 2}));
        f.cell.T0 = Zonotope::box(v({0.9, -1.1, 1.9}), v({1.1, -0.9, 2.1}));
        CHECK(index_I1({f}, 0, 0) == doctest::Approx(0.1 * std::sqrt(3.0)));
    }
    SUBCASE("toy families agree with a vertex oracle")
    {
        const auto& fams = toy_safety().families;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
            {
                double best = 0.0;
                for (const auto& p : vertices(fams[static_cast<std::size_t>(i)].cell.T0))
                    best = std::max(best, (p - fams[static_cast<std::size_t>(j)].cell.x_e).norm());
                CHECK(index_I1(fams, i, j) == doctest::Approx(best).epsilon(1e-9));
            }
    }
}

TEST_CASE("index_I2")
{
    const auto& fams = toy_safety().families;
    CHECK(index_I2(fams, 0, 0) == 0);
    CHECK(index_I2(fams, 1, 1) == 0);
    const int p = index_I2(fams, 0, 1);
    CHECK(p >= 1);
    CHECK(p <= fams[1].levels() + 1);

    const std::vector<RoscFamily> far = {point_family(v({0, 0})), point_family(v({5, 5}))};
    CHECK(index_I2(far, 0, 1) == far[1].levels() + 1);
}

TEST_CASE("build_index_table")
{
    const auto& fams = toy_safety().families;
    const IndexTable t = build_index_table(fams, 2.0, 0.5);
    CHECK(t.I.isApprox(2.0 * t.I1 + 0.5 * t.I2));
    REQUIRE(t.sorted_rows.size() == 2);
    for (std::size_t r = 0; r < 2; ++r)
    {
        const auto& row = t.sorted_rows[r];
        CHECK(row.front() == static_cast<int>(r));
        for (std::size_t i = 1; i < row.size(); ++i)
            CHECK(t.I(row[i - 1], static_cast<Eigen::Index>(r)) <= t.I(row[i], static_cast<Eigen::Index>(r)));
    }
}

TEST_CASE("index_J")
{
    const std::vector<Vector> seeds = {v({-1, 0}), v({1, 0})};
    const Vector col = v({0, 2});
    SUBCASE("a set inside one cell returns that cell's entry exactly")
    {
        const JEstimate J = index_J(Zonotope::box(v({0.5, -0.2}), v({0.9, 0.2})), seeds, col, 400, 1);
        CHECK(J.value == doctest::Approx(2.0));
        CHECK(J.std_error == doctest::Approx(0.0));
    }
    SUBCASE("a set split in half averages the two entries")
    {
        const JEstimate J = index_J(Zonotope::box(v({-1, -1}), v({1, 1})), seeds, col, 4000, 1);
        CHECK(std::abs(J.value - 1.0) <= 4.0 * J.std_error);
        CHECK(J.std_error > 0.0);
    }
    SUBCASE("a singleton classifies its center")
    {
        const JEstimate J = index_J(Zonotope::point(v({-0.3, 5})), seeds, col, 100, 1);
        CHECK(J.value == 0.0);
        CHECK(J.std_error == 0.0);
    }
    SUBCASE("the same sampling seed reproduces the estimate")
    {
        const Zonotope z(v({0.1, 0}), testutil::m({{1, 0.3}, {0.2, 1}}));
        CHECK(index_J(z, seeds, col, 300, 7).value == index_J(z, seeds, col, 300, 7).value);
    }
}

TEST_CASE("detect")
{
    const SafetyModel& s = toy_safety();
    const Zonotope one = rors_point(s.M, v({1, 1}), v({0.2, 0}), s.W);
    CHECK_FALSE(detect(one.center(), one));
    CHECK_FALSE(detect(v({0.705, 0.495}), one));
    CHECK(detect(one.center() + v({0.5, 0}), one));
}

TEST_CASE("Supervisor without attacks applies the plain law")
{
    Supervisor sup(toy_config(true), toy_law);
    Vector x = v({0.3, -0.2});
    const Vector r = v({2, 0});
    for (int k = 0; k < 60; ++k)
    {
        const SupervisorStep s = sup.step(k, x, r);
        CHECK(s.d == 0);
        CHECK_FALSE(s.detection);
        CHECK(s.mode == SupervisorMode::Normal);
        CHECK(s.stop == StopReason::None);
        CHECK(s.u_sent.isApprox(toy_law(x, r)));
        x = toy_plant(x, s.u_sent, k);
    }
    CHECK_FALSE(sup.tube().has_value());
}

TEST_CASE("Supervisor reaction to an inconsistent measurement")
{
    const SafetyModel& s = toy_safety();
    const Vector r = v({2, 0});
    auto run = [&](Supervisor& sup, std::vector<SupervisorStep>& out) {
        Vector x = v({1.8, 0.1});
        for (int k = 0; k < 20; ++k)
        {
            const Vector x_recv = k >= 10 ? Vector(x + v({0.3, 0})) : x;
            out.push_back(sup.step(k, x_recv, r));
            x = toy_plant(x, s.U.contains(out.back().u_sent) ? out.back().u_sent : Vector::Zero(2), k);
        }
    };

    SUBCASE("without the tracking supervisor the input is invalidated at once")
    {
        Supervisor sup(toy_config(false), toy_law);
        std::vector<SupervisorStep> steps;
        run(sup, steps);
        CHECK_FALSE(steps[9].detection);
        CHECK(steps[10].detection);
        CHECK(steps[10].d == 1);
        CHECK(steps[10].mode == SupervisorMode::Stopped);
        CHECK(steps[10].stop == StopReason::Safety);
        CHECK_FALSE(s.U.contains(steps[10].u_sent));
        CHECK(steps[11].u_sent.isApprox(sup.invalid_input()));
    }
    SUBCASE("with the tracking supervisor the tube center drives the law")
    {
        Supervisor sup(toy_config(true), toy_law);
        std::vector<SupervisorStep> steps;
        run(sup, steps);
        REQUIRE(steps[10].detection);
        CHECK(steps[10].mode != SupervisorMode::Normal);
        if (steps[10].mode == SupervisorMode::Tracking)
        {
            REQUIRE(steps[10].x_hat);
            CHECK(steps[10].u_sent.isApprox(toy_law(*steps[10].x_hat, r)));
            CHECK(std::isfinite(steps[10].J));
        }
        REQUIRE(sup.tube());
        CHECK(sup.tube()->steps() >= 1);
    }
}

TEST_CASE("invalid_input lies outside U")
{
    Supervisor sup(toy_config(true), toy_law);
    CHECK_FALSE(toy_safety().U.contains(sup.invalid_input()));
    CHECK(sup.invalid_input().isApprox(v({4, 0})));
}
