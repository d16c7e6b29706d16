#include <doctest.h>

#include "ddsc/ctrlsets.hpp"
#include "ddsc/rng.hpp"
#include "ddsc/setops.hpp"
#include "ddsc/sysid.hpp"
#include "helpers.hpp"

using namespace ddsc;
using testutil::m;
using testutil::v;

namespace
{

HPolytope box2(double r)
{
    return HPolytope::box(Vector::Constant(2, -r), Vector::Constant(2, r));
}

// x+ = 0.5 x + u with a little model uncertainty.
MatrixZonotope toy_model()
{
    Matrix C(2, 4);
    C << 0.5, 0, 1, 0, 0, 0.5, 0, 1;
    Matrix G = Matrix::Zero(2, 4);
    G(0, 0) = 0.01;
    G(1, 1) = 0.01;
    return MatrixZonotope(C, {G});
}

} // namespace

TEST_CASE("voronoi_partition")
{
    SUBCASE("one seed keeps the whole set")
    {
        const auto cells = voronoi_partition(box2(2), {v({0.3, 0.1})});
        REQUIRE(cells.size() == 1);
        CHECK(cells[0].contains(v({2, 2})));
        CHECK(cells[0].contains(v({-2, -2})));
    }
    SUBCASE("two seeds split at the bisector")
    {
        const auto cells = voronoi_partition(box2(2), {v({-1, 0}), v({1, 0})});
        REQUIRE(cells.size() == 2);
        const auto [lo0, hi0] = cells[0].bounding_box();
        const auto [lo1, hi1] = cells[1].bounding_box();
        CHECK(hi0(0) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(lo0(0) == doctest::Approx(-2.0));
        CHECK(lo1(0) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(hi1(0) == doctest::Approx(2.0));
    }
    SUBCASE("the five case-study seeds cover the inner box")
    {
        const HPolytope Xeta = HPolytope::box(v({-9, -27}), v({9, 27}));
        const std::vector<Vector> seeds = {v({4, 15}), v({-6, 15}), v({0, 0}), v({6, -20}), v({-4, -20})};
        const auto cells = voronoi_partition(Xeta, seeds);
        REQUIRE(cells.size() == 5);
        for (std::size_t k = 0; k < 2000; ++k)
        {
            const Vector x = v({-9 + 18 * uniform01(2, 0, k), -27 + 54 * uniform01(2, 1, k)});
            int hits = 0;
            for (const auto& c : cells)
                hits += c.contains(x, 1e-9) ? 1 : 0;
            CHECK(hits >= 1);
            const int l = voronoi_index(seeds, x);
            CHECK(cells[static_cast<std::size_t>(l)].contains(x, 1e-9));
        }
    }
    SUBCASE("duplicate seeds are rejected")
    {
        CHECK_THROWS(voronoi_partition(box2(2), {v({0, 0}), v({0, 0})}));
    }
    SUBCASE("ties go to the lowest index")
    {
        CHECK(voronoi_index({v({-1, 0}), v({1, 0})}, v({0, 5})) == 0);
    }
}

TEST_CASE("tilde_h")
{
    const Zonotope W = Zonotope::box(v({-0.001, -0.001}), v({0.001, 0.001}));
    CHECK(tilde_h(m({{1, 0}}), v({1}), W)(0) == doctest::Approx(0.999));
    CHECK(tilde_h(m({{1, 1}}), v({2}), W)(0) == doctest::Approx(1.998));
    CHECK(tilde_h(m({{1, 1}}), v({2}), Zonotope::point(v({0, 0})))(0) == doctest::Approx(2.0));
}

TEST_CASE("synthesize_rci")
{
    const MatrixZonotope M(m({{0.5, 1}}), {});
    const HPolytope U = HPolytope::box(v({-10}), v({10}));
    const HPolytope Xeta = HPolytope::box(v({-5}), v({5}));
    SUBCASE("deadbeat scalar loop gives the noise interval")
    {
        RciOptions o;
        o.K = m({{-0.5}});
        const RciResult r = synthesize_rci(M, v({0}), v({0}), Zonotope::box(v({-0.1}), v({0.1})), U, Xeta, o);
        CHECK(r.T0.center()(0) == doctest::Approx(0.0));
        CHECK(r.T0.radius()(0) == doctest::Approx(0.1));
    }
    SUBCASE("noise-free terminal set is the equilibrium")
    {
        const RciResult r = synthesize_rci(M, v({1}), v({0.5}), Zonotope::point(v({0})), U, Xeta);
        CHECK(r.T0.center()(0) == doctest::Approx(1.0));
        CHECK(r.T0.radius()(0) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("uncertain 2-D model: invariance under every vertex")
    {
        const MatrixZonotope Mt = toy_model();
        const Zonotope W = Zonotope::box(v({-0.01, -0.01}), v({0.01, 0.01}));
        const RciResult r = synthesize_rci(Mt, v({0.4, -0.2}), v({0.2, -0.1}), W, box2(1), box2(4));
        CHECK(contains_set(box2(4), r.T0));
        const HPolytope T = to_hpolytope(r.T0);
        for (const auto& V : vertex_matrices(Mt))
            for (std::size_t k = 0; k < 200; ++k)
            {
                Vector b(r.T0.order());
                for (Eigen::Index i = 0; i < b.size(); ++i)
                    b(i) = 2 * uniform01(4, static_cast<std::uint64_t>(i), k) - 1;
                const Vector x = r.T0.center() + r.T0.generators() * b;
                Vector z(4);
                z << x, r.K * (x - v({0.4, -0.2})) + v({0.2, -0.1});
                const Vector w = v({0.02 * uniform01(5, 0, k) - 0.01, 0.02 * uniform01(5, 1, k) - 0.01});
                CHECK(T.contains(V * z + w, 1e-9));
            }
    }
    SUBCASE("terminal set outside the constraint set fails")
    {
        CHECK_THROWS_AS(synthesize_rci(M, v({0}), v({0}), Zonotope::box(v({-8}), v({8})), U, Xeta),
                        SynthesisError);
    }
}

TEST_CASE("snap_equilibrium")
{
    const Matrix A = m({{0.5, 0}, {0, 0.5}});
    const Matrix B = Matrix::Identity(2, 2);
    SUBCASE("admissible points stay put")
    {
        const auto [x, u] = snap_equilibrium(A, B, v({1, -1}), v({-1, -1}), v({1, 1}));
        CHECK(x.isApprox(v({1, -1})));
        CHECK(u.isApprox(v({0.5, -0.5})));
    }
    SUBCASE("points needing too much input move to the nearest admissible one")
    {
        const auto [x, u] = snap_equilibrium(A, B, v({4, 0}), v({-1, -1}), v({1, 1}));
        CHECK(x(0) == doctest::Approx(2.0));
        CHECK(u(0) == doctest::Approx(1.0));
        CHECK(((Matrix::Identity(2, 2) - A) * x - B * u).norm() < 1e-9);
    }
}

TEST_CASE("rosc_step")
{
    SUBCASE("scalar A = 0 makes every state controllable")
    {
        const MatrixZonotope M(m({{0, 1}}), {});
        const RoscStep s = rosc_step(HPolytope::box(v({-1}), v({1})), M, HPolytope::box(v({-5}), v({5})),
                                     HPolytope::box(v({-1}), v({1})), Zonotope::point(v({0})));
        const auto [lo, hi] = s.C.bounding_box();
        CHECK(lo(0) == doctest::Approx(-5.0));
        CHECK(hi(0) == doctest::Approx(5.0));
    }
    SUBCASE("empty target")
    {
        const MatrixZonotope M(m({{0, 1}}), {});
        CHECK_THROWS_AS(rosc_step(HPolytope::empty(1), M, HPolytope::box(v({-5}), v({5})),
                                  HPolytope::box(v({-1}), v({1})), Zonotope::point(v({0}))),
                        EmptySetError);
    }
    SUBCASE("model-based predecessor on a grid")
    {
        const Matrix A = m({{1.1, 0.2}, {0, 0.9}});
        const Matrix B = m({{0}, {1}});
        Matrix AB(2, 3);
        AB << A, B;
        const HPolytope target = box2(1);
        const HPolytope X = box2(3);
        const HPolytope U = HPolytope::box(v({-0.5}), v({0.5}));
        const RoscStep s = rosc_step(target, MatrixZonotope(AB, {}), X, U, Zonotope::point(v({0, 0})));
        for (int i = 0; i <= 40; ++i)
            for (int j = 0; j <= 40; ++j)
            {
                const Vector x = v({-3 + 0.15 * i, -3 + 0.15 * j});
                // exists u in [-0.5,0.5] with A x + B u in the unit box
                const Vector ax = A * x;
                const bool row0 = std::abs(ax(0)) <= 1;
                const double ulo = std::max(-0.5, -1 - ax(1));
                const double uhi = std::min(0.5, 1 - ax(1));
                const bool oracle = row0 && ulo <= uhi;
                if (s.C.violation(x) < -1e-9 || !oracle)
                    CHECK(s.C.contains(x, 1e-9) == oracle);
            }
    }
    SUBCASE("every augmented point steers into the target for every vertex model")
    {
        const MatrixZonotope M = toy_model();
        const Zonotope W = Zonotope::box(v({-0.01, -0.01}), v({0.01, 0.01}));
        const HPolytope target = box2(0.2);
        const RoscStep s = rosc_step(target, M, box2(4), box2(1), W);
        const auto pts = sample_uniform(s.Xi, 300, 9);
        for (const auto& z : pts)
            for (const auto& V : vertex_matrices(M))
                for (double a : {-0.01, 0.01})
                    for (double b : {-0.01, 0.01})
                        CHECK(target.contains(V * z + v({a, b}), 1e-9));
        const auto xs = sample_uniform(s.C, 200, 10);
        const HPolytope Xi = s.Xi;
        for (const auto& x : xs)
        {
            // the slice of Xi at x is nonempty
            Matrix Hu = Xi.H().rightCols(2);
            Vector hu = Xi.h() - Xi.H().leftCols(2) * x;
            CHECK_FALSE(HPolytope(Hu, hu).is_empty());
        }
    }
    SUBCASE("inner zonotope mode is contained in the exact projection")
    {
        const MatrixZonotope M = toy_model();
        const Zonotope W = Zonotope::box(v({-0.01, -0.01}), v({0.01, 0.01}));
        RoscOptions in;
        in.inner = InnerApprox::Zonotope;
        const RoscStep a = rosc_step(box2(0.2), M, box2(4), box2(1), W, in);
        const RoscStep b = rosc_step(box2(0.2), M, box2(4), box2(1), W);
        for (const auto& x : sample_uniform(a.C, 200, 12))
            CHECK(b.C.contains(x, 1e-7));
    }
}

TEST_CASE("build_family")
{
    const MatrixZonotope M = toy_model();
    const Zonotope W = Zonotope::box(v({-0.01, -0.01}), v({0.01, 0.01}));
    const HPolytope X = box2(4);
    const HPolytope U = box2(1);
    EquilibriumCell cell;
    cell.x_e = v({0, 0});
    cell.u_e = v({0, 0});
    const RciResult rci = synthesize_rci(M, cell.x_e, cell.u_e, W, U, X);
    cell.K = rci.K;
    cell.T0 = rci.T0;

    SUBCASE("cell equal to T0 needs no levels")
    {
        cell.V = to_hpolytope(cell.T0);
        const RoscFamily f = build_family(cell, M, X, U, W);
        CHECK(f.N == 0);
        CHECK(f.levels() == 0);
        CHECK(f.coverage == doctest::Approx(1.0));
    }
    SUBCASE("covers the cell and nests")
    {
        cell.V = box2(3.5);
        FamilyOptions o;
        o.coverage_samples = 2000;
        const RoscFamily f = build_family(cell, M, X, U, W, o);
        CHECK_FALSE(f.stalled);
        CHECK(f.coverage >= 0.99);
        CHECK(f.N >= 1);
        CHECK(f.level_of(cell.x_e) == 0);
        CHECK(f.level_of(v({3.4, -3.4})).has_value());
        for (int j = 1; j <= f.levels(); ++j)
            for (const auto& x : sample_uniform(f.C[static_cast<std::size_t>(j) - 1], 50, 20 + j))
                CHECK(f.C[static_cast<std::size_t>(j)].contains(x, 1e-7));
    }
    SUBCASE("too much disturbance stalls")
    {
        // unstable model with little input authority
        Matrix C(2, 4);
        C << 1.3, 0, 1, 0, 0, 1.3, 0, 1;
        const MatrixZonotope Mu(C, {});
        const HPolytope Us = box2(0.1);
        EquilibriumCell c2;
        c2.x_e = v({0, 0});
        c2.u_e = v({0, 0});
        c2.V = box2(3.5);
        const RciResult r2 = synthesize_rci(Mu, c2.x_e, c2.u_e, W, Us, X);
        c2.K = r2.K;
        c2.T0 = r2.T0;
        FamilyOptions o;
        o.coverage_samples = 2000;
        const RoscFamily f = build_family(c2, Mu, X, Us, W, o);
        CHECK(f.stalled);
        CHECK(f.coverage < 0.99);
    }
}

TEST_CASE("dlqr stabilizes")
{
    const Matrix A = m({{1.1, 0.3}, {0, 0.95}});
    const Matrix B = m({{0}, {1}});
    const Matrix K = dlqr(A, B, Matrix::Identity(2, 2), Matrix::Identity(1, 1));
    const auto ev = (A + B * K).eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        CHECK(std::abs(ev(i)) < 1.0);
}
