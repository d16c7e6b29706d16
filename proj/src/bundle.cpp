#include "ddsc/bundle.hpp"

#include <ostream>

#include "ddsc/rng.hpp"
#include "ddsc/setops.hpp"

namespace ddsc
{

Matrix SynthesisBundle::A_model() const
{
    return M.center().leftCols(M.rows());
}

Matrix SynthesisBundle::B_model() const
{
    return M.center().rightCols(M.cols() - M.rows());
}

std::vector<Vector> SynthesisBundle::seeds() const
{
    std::vector<Vector> s;
    for (const auto& f : families)
        s.push_back(f.cell.x_e);
    return s;
}

SafetyModel SynthesisBundle::safety_model() const
{
    return SafetyModel{M, W, U, X_eta, families};
}

namespace
{

// Vertices plus random interior points of T0, used as growth targets for other families.
std::vector<Vector> probe_points(const Zonotope& T0, std::size_t count, std::uint64_t seed)
{
    const Zonotope z = T0.compact();
    std::vector<Vector> pts;
    if (z.order() <= 8)
        pts = vertices(z);
    for (std::size_t k = 0; k < count; ++k)
    {
        Vector b(z.order());
        for (Eigen::Index i = 0; i < z.order(); ++i)
            b(i) = 2.0 * uniform01(seed, static_cast<std::uint64_t>(i), k) - 1.0;
        pts.push_back(z.center() + z.generators() * b);
    }
    return pts;
}

} // namespace

SynthesisBundle synthesize(const TrajectoryBank& bank, const ScenarioConfig& cfg, std::ostream* log)
{
    validate(cfg);
    SynthesisBundle out;
    out.W = cfg.plant.W;
    out.X = cfg.plant.X;
    out.U = cfg.plant.U;
    out.X_eta = cfg.X_eta;

    out.M = identify(bank);
    const Eigen::Index n = out.M.rows();
    const Eigen::Index m = out.M.cols() - n;
    const Matrix Ac = out.A_model();
    const Matrix Bc = out.B_model();
    if (log)
        *log << "identified M_AB with " << out.M.order() << " generators from " << bank.total_samples()
             << " samples\n";

    const auto [u_lo, u_hi] = cfg.plant.U.bounding_box();
    const Vector u_mid = 0.5 * (u_lo + u_hi);
    const Vector u_rad = 0.5 * cfg.synthesis.equilibrium_input_margin * (u_hi - u_lo);

    std::vector<EquilibriumCell> cells;
    std::vector<Vector> seeds;
    for (std::size_t l = 0; l < cfg.cell_states.size(); ++l)
    {
        auto [xe, ue] = snap_equilibrium(Ac, Bc, cfg.cell_states[l], u_mid - u_rad, u_mid + u_rad);
        if (log && (xe - cfg.cell_states[l]).norm() > 1e-9)
            *log << "cell " << l << ": x_e moved to an admissible equilibrium (" << xe.transpose() << ")\n";
        EquilibriumCell c;
        c.index = static_cast<int>(l);
        c.x_e = xe;
        c.u_e = ue;
        cells.push_back(std::move(c));
        seeds.push_back(std::move(xe));
    }
    const auto V = voronoi_partition(cfg.X_eta, seeds);
    for (std::size_t l = 0; l < cells.size(); ++l)
    {
        cells[l].V = V[l];
        const RciResult rci = synthesize_rci(out.M, cells[l].x_e, cells[l].u_e, out.W, out.U, out.X_eta);
        cells[l].K = rci.K;
        cells[l].T0 = rci.T0;
        if (log)
            *log << "cell " << l << ": T0 radius " << rci.T0.radius().transpose() << "\n";
    }

    for (std::size_t l = 0; l < cells.size(); ++l)
    {
        FamilyOptions fo;
        fo.coverage_target = cfg.synthesis.coverage_target;
        fo.coverage_samples = cfg.synthesis.coverage_samples;
        fo.j_max = cfg.synthesis.j_max;
        fo.seed = 101 + l;
        fo.rosc.inner = cfg.synthesis.exact_projection ? InnerApprox::Exact : InnerApprox::Zonotope;
        for (std::size_t o = 0; o < cells.size(); ++o)
            if (o != l)
                for (auto& p : probe_points(cells[o].T0, 32, 11 + o))
                    fo.extra_targets.push_back(std::move(p));
        RoscFamily fam = build_family(cells[l], out.M, out.X, out.U, out.W, fo);
        if (log)
            *log << "cell " << l << ": " << fam.levels() << " levels, N=" << fam.N << ", coverage "
                 << fam.coverage << (fam.stalled ? " (stalled)" : "") << "\n";
        out.families.push_back(std::move(fam));
    }

    out.table = build_index_table(out.families, cfg.alpha, cfg.beta);
    out.Kt = cfg.Kt ? *cfg.Kt : dlqr(Ac, Bc, Matrix::Identity(n, n), 0.1 * Matrix::Identity(m, m));
    return out;
}

} // namespace ddsc
