#include "ddsc/serialize.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ddsc/setops.hpp"

namespace ddsc
{

using nlohmann::json;

namespace
{

json vec_json(const Vector& v)
{
    json j = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        j.push_back(v(i));
    return j;
}

Vector vec_from(const json& j)
{
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

json mat_json(const Matrix& M)
{
    json j = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r)
        j.push_back(vec_json(M.row(r).transpose()));
    return j;
}

Matrix mat_from(const json& j, Eigen::Index cols_if_empty = 0)
{
    if (j.empty())
        return Matrix(0, cols_if_empty);
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
    {
        if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols)
            throw DimensionError("ragged matrix in JSON");
        for (Eigen::Index c = 0; c < cols; ++c)
            M(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
    return M;
}

json zono_json(const Zonotope& z)
{
    json g = json::array();
    for (Eigen::Index i = 0; i < z.order(); ++i)
        g.push_back(vec_json(z.generators().col(i)));
    return {{"type", "zonotope"}, {"center", vec_json(z.center())}, {"generators", g}};
}

Zonotope zono_from(const json& j)
{
    if (j.contains("lower"))
        return Zonotope::box(vec_from(j.at("lower")), vec_from(j.at("upper")));
    const Vector c = vec_from(j.at("center"));
    Matrix G(c.size(), static_cast<Eigen::Index>(j.at("generators").size()));
    for (std::size_t i = 0; i < j.at("generators").size(); ++i)
    {
        const Vector g = vec_from(j.at("generators")[i]);
        require_dim(g.size(), c.size(), "zonotope generator");
        G.col(static_cast<Eigen::Index>(i)) = g;
    }
    return Zonotope(c, G);
}

json hpoly_json(const HPolytope& p)
{
    return {{"type", "hpolytope"}, {"dim", p.dim()}, {"H", mat_json(p.H())}, {"h", vec_json(p.h())}};
}

HPolytope hpoly_from(const json& j)
{
    if (j.contains("lower"))
        return HPolytope::box(vec_from(j.at("lower")), vec_from(j.at("upper")));
    if (j.value("type", "") == "zonotope")
        return to_hpolytope(zono_from(j));
    const Eigen::Index dim = j.value("dim", Eigen::Index{0});
    return HPolytope(mat_from(j.at("H"), dim), vec_from(j.at("h")));
}

json matzono_json(const MatrixZonotope& M)
{
    json g = json::array();
    for (const auto& G : M.generators())
        g.push_back(mat_json(G));
    return {{"type", "matrix_zonotope"}, {"center", mat_json(M.center())}, {"generators", g}};
}

MatrixZonotope matzono_from(const json& j)
{
    const Matrix C = mat_from(j.at("center"));
    std::vector<Matrix> gens;
    for (const auto& g : j.at("generators"))
        gens.push_back(g.empty() ? Matrix::Zero(C.rows(), C.cols()) : mat_from(g));
    return MatrixZonotope(C, std::move(gens));
}

// Sample-major list [[...], ...] to a column-per-sample matrix.
Matrix columns_from(const json& j, Eigen::Index rows_if_empty)
{
    const Matrix M = mat_from(j, rows_if_empty);
    return M.transpose();
}

json cell_json(const EquilibriumCell& c)
{
    return {{"index", c.index},       {"x_e", vec_json(c.x_e)}, {"u_e", vec_json(c.u_e)},
            {"K", mat_json(c.K)},     {"T0", zono_json(c.T0)},  {"V", hpoly_json(c.V)}};
}

EquilibriumCell cell_from(const json& j)
{
    EquilibriumCell c;
    c.index = j.at("index").get<int>();
    c.x_e = vec_from(j.at("x_e"));
    c.u_e = vec_from(j.at("u_e"));
    c.K = mat_from(j.at("K"));
    c.T0 = zono_from(j.at("T0"));
    c.V = hpoly_from(j.at("V"));
    return c;
}

json parse_json(const std::string& text, const char* what)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw std::invalid_argument(std::string(what) + ": " + e.what());
    }
}

} // namespace

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string set_to_json(const Zonotope& z)
{
    return zono_json(z).dump();
}

std::string set_to_json(const HPolytope& p)
{
    return hpoly_json(p).dump();
}

std::string set_to_json(const MatrixZonotope& M)
{
    return matzono_json(M).dump();
}

Zonotope zonotope_from_json(const std::string& text)
{
    return zono_from(parse_json(text, "zonotope"));
}

HPolytope hpolytope_from_json(const std::string& text)
{
    return hpoly_from(parse_json(text, "hpolytope"));
}

MatrixZonotope matrix_zonotope_from_json(const std::string& text)
{
    return matzono_from(parse_json(text, "matrix zonotope"));
}

TrajectoryBank parse_bank(const std::string& text)
{
    const json j = parse_json(text, "trajectory bank");
    TrajectoryBank bank;
    const json& noise = j.at("noise");
    bank.noise_center = vec_from(noise.at("center"));
    for (const auto& g : noise.at("generators"))
        bank.noise_generators.push_back(vec_from(g));
    const Eigen::Index n = bank.noise_center.size();
    for (const auto& t : j.at("trajectories"))
    {
        Trajectory tr;
        tr.x = columns_from(t.at("x"), n);
        const Eigen::Index m = t.at("u").empty() ? 0 : static_cast<Eigen::Index>(t.at("u")[0].size());
        tr.u = columns_from(t.at("u"), m);
        bank.trajectories.push_back(std::move(tr));
    }
    return bank;
}

std::string dump_bank(const TrajectoryBank& bank)
{
    json trajs = json::array();
    for (const auto& t : bank.trajectories)
        trajs.push_back({{"u", mat_json(t.u.transpose())}, {"x", mat_json(t.x.transpose())}});
    json gens = json::array();
    for (const auto& g : bank.noise_generators)
        gens.push_back(vec_json(g));
    json j = {{"trajectories", trajs}, {"noise", {{"center", vec_json(bank.noise_center)}, {"generators", gens}}}};
    return j.dump(1);
}

ScenarioConfig parse_scenario(const std::string& text)
{
    const json j = parse_json(text, "scenario");
    ScenarioConfig cfg;
    const json& p = j.at("plant");
    cfg.plant.A = mat_from(p.at("A"));
    cfg.plant.B = mat_from(p.at("B"));
    cfg.plant.W = zono_from(p.at("W"));
    cfg.plant.X = hpoly_from(p.at("X"));
    cfg.plant.U = hpoly_from(p.at("U"));
    cfg.plant.x0 = vec_from(p.at("x0"));

    const json& c = j.at("controller");
    if (c.contains("Kt") && !c.at("Kt").is_null())
        cfg.Kt = mat_from(c.at("Kt"));
    cfg.X_eta = hpoly_from(c.at("X_eta"));

    for (const auto& cell : j.at("cells"))
        cfg.cell_states.push_back(vec_from(cell.at("x_e")));

    if (j.contains("weights"))
    {
        cfg.alpha = j.at("weights").value("alpha", 1.0);
        cfg.beta = j.at("weights").value("beta", 0.0);
    }
    if (j.contains("detector"))
    {
        cfg.tau = j.at("detector").value("tau", 5);
        cfg.clear_streak = j.at("detector").value("clear_streak", 3);
    }
    const Eigen::Index n = cfg.plant.A.rows();
    const Eigen::Index m = cfg.plant.B.cols();
    for (const auto& a : j.value("attacks", json::array()))
    {
        AttackSpec spec;
        spec.name = a.value("name", "");
        const std::string ch = a.value("channel", "measurement");
        if (ch == "measurement")
            spec.channel = Channel::Measurement;
        else if (ch == "actuation")
            spec.channel = Channel::Actuation;
        else
            throw std::invalid_argument("scenario: unknown attack channel " + ch);
        const Eigen::Index dim = spec.channel == Channel::Measurement ? n : m;
        for (const auto& w : a.at("windows"))
        {
            AttackWindow win;
            win.start = w.at("start").get<int>();
            win.end = w.at("end").get<int>();
            win.k0 = w.value("k0", win.start - 1);
            win.gain = w.contains("gain") ? vec_from(w.at("gain")) : Vector::Zero(dim);
            win.offset = w.contains("offset") ? vec_from(w.at("offset")) : Vector::Zero(dim);
            spec.windows.push_back(std::move(win));
        }
        cfg.attacks.push_back(std::move(spec));
    }
    for (const auto& w : j.at("reference"))
        cfg.reference.push_back({w.at("k").get<int>(), vec_from(w.at("r"))});
    cfg.horizon = j.value("horizon", 500);
    cfg.seed = j.value("seed", std::uint64_t{1});

    if (j.contains("synthesis"))
    {
        const json& s = j.at("synthesis");
        cfg.synthesis.coverage_target = s.value("coverage_target", cfg.synthesis.coverage_target);
        cfg.synthesis.coverage_samples = s.value("coverage_samples", cfg.synthesis.coverage_samples);
        cfg.synthesis.j_max = s.value("j_max", cfg.synthesis.j_max);
        cfg.synthesis.equilibrium_input_margin =
            s.value("equilibrium_input_margin", cfg.synthesis.equilibrium_input_margin);
        cfg.synthesis.exact_projection = s.value("exact_projection", cfg.synthesis.exact_projection);
    }
    if (j.contains("data"))
    {
        const json& d = j.at("data");
        cfg.data.trajectories = d.value("trajectories", cfg.data.trajectories);
        cfg.data.length = d.value("length", cfg.data.length);
        cfg.data.seed = d.value("seed", cfg.data.seed);
    }
    validate(cfg);
    return cfg;
}

std::string dump_bundle(const SynthesisBundle& b)
{
    json fams = json::array();
    for (const auto& f : b.families)
    {
        json C = json::array();
        json Xi = json::array();
        for (const auto& p : f.C)
            C.push_back(hpoly_json(p));
        for (const auto& p : f.Xi)
            Xi.push_back(hpoly_json(p));
        fams.push_back({{"cell", cell_json(f.cell)},
                        {"C", C},
                        {"Xi", Xi},
                        {"N", f.N},
                        {"coverage", f.coverage},
                        {"stalled", f.stalled}});
    }
    json table = {{"I", mat_json(b.table.I)},          {"I1", mat_json(b.table.I1)},
                  {"I2", mat_json(b.table.I2)},        {"alpha", b.table.alpha},
                  {"beta", b.table.beta},              {"sorted_rows", b.table.sorted_rows}};
    json j = {{"format", "ddsc-bundle"},
              {"version", 1},
              {"M_AB", matzono_json(b.M)},
              {"W", zono_json(b.W)},
              {"X", hpoly_json(b.X)},
              {"U", hpoly_json(b.U)},
              {"X_eta", hpoly_json(b.X_eta)},
              {"Kt", mat_json(b.Kt)},
              {"index_table", table},
              {"families", fams}};
    return j.dump();
}

SynthesisBundle parse_bundle(const std::string& text)
{
    const json j = parse_json(text, "bundle");
    if (j.value("format", "") != "ddsc-bundle")
        throw std::invalid_argument("bundle: unrecognized format");
    SynthesisBundle b;
    b.M = matzono_from(j.at("M_AB"));
    b.W = zono_from(j.at("W"));
    b.X = hpoly_from(j.at("X"));
    b.U = hpoly_from(j.at("U"));
    b.X_eta = hpoly_from(j.at("X_eta"));
    b.Kt = mat_from(j.at("Kt"));
    const json& t = j.at("index_table");
    b.table.I = mat_from(t.at("I"));
    b.table.I1 = mat_from(t.at("I1"));
    b.table.I2 = mat_from(t.at("I2"));
    b.table.alpha = t.at("alpha").get<double>();
    b.table.beta = t.at("beta").get<double>();
    b.table.sorted_rows = t.at("sorted_rows").get<std::vector<std::vector<int>>>();
    for (const auto& f : j.at("families"))
    {
        RoscFamily fam;
        fam.cell = cell_from(f.at("cell"));
        for (const auto& p : f.at("C"))
            fam.C.push_back(hpoly_from(p));
        for (const auto& p : f.at("Xi"))
            fam.Xi.push_back(hpoly_from(p));
        fam.N = f.at("N").get<int>();
        fam.coverage = f.at("coverage").get<double>();
        fam.stalled = f.at("stalled").get<bool>();
        b.families.push_back(std::move(fam));
    }
    return b;
}

ScenarioTrace parse_trace_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("trace: empty file");
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ','))
            header.push_back(cell);
    }
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i)
        col[header[i]] = i;
    auto count_prefix = [&](const std::string& p) {
        Eigen::Index c = 0;
        while (col.count(p + std::to_string(c)))
            ++c;
        return c;
    };
    const Eigen::Index n = count_prefix("x_true");
    const Eigen::Index m = count_prefix("u_applied");
    if (n == 0 || !col.count("k"))
        throw std::invalid_argument("trace: missing columns");

    ScenarioTrace trace;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            f.push_back(cell);
        if (f.size() != header.size())
            throw std::invalid_argument("trace: ragged row");
        auto num = [&](const std::string& name) { return std::stod(f[col.at(name)]); };
        auto vec = [&](const std::string& p, Eigen::Index len) {
            Vector v(len);
            for (Eigen::Index i = 0; i < len; ++i)
                v(i) = num(p + std::to_string(i));
            return v;
        };
        TraceRow row;
        row.k = std::stoi(f[col.at("k")]);
        row.x_true = vec("x_true", n);
        row.x_recv = vec("x_recv", n);
        row.u_sent = vec("u_sent", m);
        row.u_recv = vec("u_recv", m);
        row.u_applied = vec("u_applied", m);
        row.r = vec("r", n);
        row.d = static_cast<int>(num("d"));
        row.f = static_cast<int>(num("f"));
        row.l_bar = static_cast<int>(num("l_bar"));
        row.j_bar = static_cast<int>(num("j_bar"));
        row.J = num("J");
        row.J_se = num("J_se");
        row.stop_reason = f[col.at("stop_reason")];
        row.verdict = f[col.at("verdict")];
        row.mode = f[col.at("mode")];
        row.tube_reset = static_cast<int>(num("tube_reset"));
        row.ec_active = static_cast<int>(num("ec_active"));
        row.alarm = static_cast<int>(num("alarm"));
        row.detection = static_cast<int>(num("detection"));
        row.x_hat = vec("x_hat", n);
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

} // namespace ddsc
