#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ddsc/bundle.hpp"
#include "ddsc/serialize.hpp"

namespace
{

using namespace ddsc;

struct TraceSummary
{
    std::string path;
    double er = 0.0;
    int steps = 0;
    int detections = 0;
    int tube_resets = 0;
    int ec_steps = 0;
    int tracking_steps = 0;
    int stops_safety = 0;
    int stops_performance = 0;
    int alarms = 0;
};

TraceSummary summarize(const std::string& path, const ScenarioTrace& t)
{
    TraceSummary s;
    s.path = path;
    s.er = metric_er(t);
    s.steps = static_cast<int>(t.rows.size());
    for (const auto& r : t.rows)
    {
        s.detections += r.detection;
        s.tube_resets += r.tube_reset;
        s.ec_steps += r.ec_active;
        s.alarms += r.alarm;
        s.tracking_steps += r.mode == "tracking" ? 1 : 0;
        s.stops_safety += r.stop_reason == "safety" ? 1 : 0;
        s.stops_performance += r.stop_reason == "performance" ? 1 : 0;
    }
    return s;
}

int cmd_collect(const std::string& scenario, const std::string& out)
{
    const ScenarioConfig cfg = parse_scenario(read_file(scenario));
    const TrajectoryBank bank = collect_data(cfg.plant, cfg.data);
    write_file(out, dump_bank(bank));
    std::cerr << "wrote " << bank.trajectories.size() << " trajectories (" << bank.total_samples() << " samples) to "
              << out << "\n";
    return 0;
}

int cmd_identify(const std::string& data, const std::string& out)
{
    const TrajectoryBank bank = parse_bank(read_file(data));
    const MatrixZonotope M = identify(bank);
    const std::string text = set_to_json(M);
    if (out.empty())
        std::cout << text << "\n";
    else
        write_file(out, text);
    return 0;
}

int cmd_synth(const std::string& data, const std::string& scenario, const std::string& out)
{
    const TrajectoryBank bank = parse_bank(read_file(data));
    const ScenarioConfig cfg = parse_scenario(read_file(scenario));
    const SynthesisBundle b = synthesize(bank, cfg, &std::cerr);
    write_file(out, dump_bundle(b));
    bool stalled = false;
    for (const auto& f : b.families)
        stalled = stalled || f.stalled;
    if (stalled)
        std::cerr << "warning: at least one family stalled before the coverage target\n";
    return 0;
}

int cmd_simulate(const std::string& bundle, const std::string& scenario, std::uint64_t seed, const std::string& out,
                 bool baseline, bool no_attacks)
{
    const SynthesisBundle b = parse_bundle(read_file(bundle));
    const ScenarioConfig cfg = parse_scenario(read_file(scenario));
    const RunOptions opts{!baseline, !no_attacks};
    const ScenarioTrace t = run_scenario(cfg, b, seed, opts);
    write_file(out, trace_to_csv(t));
    std::printf("e_r = %.6f\n", metric_er(t));
    return 0;
}

int cmd_report(const std::vector<std::string>& traces, const std::string& csv_out)
{
    std::vector<TraceSummary> rows;
    for (const auto& p : traces)
        rows.push_back(summarize(p, parse_trace_csv(read_file(p))));

    std::printf("%-40s %10s %6s %6s %6s %6s %8s %6s %6s\n", "trace", "e_r", "steps", "det", "reset", "ec", "track",
                "stop1", "stop2");
    for (const auto& s : rows)
        std::printf("%-40s %10.4f %6d %6d %6d %6d %8d %6d %6d\n", s.path.c_str(), s.er, s.steps, s.detections,
                    s.tube_resets, s.ec_steps, s.tracking_steps, s.stops_safety, s.stops_performance);

    if (!csv_out.empty())
    {
        std::string text = "trace,e_r,steps,detections,tube_resets,ec_steps,tracking_steps,stops_safety,"
                           "stops_performance,alarms\n";
        char buf[512];
        for (const auto& s : rows)
        {
            std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%d,%d,%d,%d,%d,%d,%d\n", s.path.c_str(), s.er, s.steps,
                          s.detections, s.tube_resets, s.ec_steps, s.tracking_steps, s.stops_safety,
                          s.stops_performance, s.alarms);
            text += buf;
        }
        write_file(csv_out, text);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Data-driven safe control under false-data injection"};
    app.require_subcommand(1);

    std::string scenario, data, out, bundle, csv_out;
    std::uint64_t seed = 1;
    bool baseline = false, no_attacks = false;
    std::vector<std::string> traces;

    auto* collect = app.add_subcommand("collect", "Record open-loop trajectories from the scenario plant");
    collect->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
    collect->add_option("--out", out, "Output trajectory bank JSON")->required();

    auto* ident = app.add_subcommand("identify", "Identify the matrix zonotope of models consistent with data");
    ident->add_option("--data", data, "Trajectory bank JSON")->required()->check(CLI::ExistingFile);
    ident->add_option("--out", out, "Output JSON (stdout when omitted)");

    auto* synth = app.add_subcommand("synth", "Synthesize terminal sets, ROSC families and index tables");
    synth->add_option("--data", data, "Trajectory bank JSON")->required()->check(CLI::ExistingFile);
    synth->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
    synth->add_option("--out", out, "Output bundle JSON")->required();

    auto* sim = app.add_subcommand("simulate", "Run the closed-loop scenario and write a trace CSV");
    sim->add_option("--bundle", bundle, "Synthesis bundle JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--seed", seed, "Disturbance seed");
    sim->add_option("--out", out, "Output trace CSV")->required();
    sim->add_flag("--baseline", baseline, "Disable the tracking supervisor (EC-only)");
    sim->add_flag("--no-attacks", no_attacks, "Ignore the scenario's attacks");

    auto* rep = app.add_subcommand("report", "Summarize trace CSVs");
    rep->add_option("--traces", traces, "Trace CSV files")->required()->check(CLI::ExistingFile);
    rep->add_option("--csv", csv_out, "Also write the summary table as CSV");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*collect)
            return cmd_collect(scenario, out);
        if (*ident)
            return cmd_identify(data, out);
        if (*synth)
            return cmd_synth(data, scenario, out);
        if (*sim)
            return cmd_simulate(bundle, scenario, seed, out, baseline, no_attacks);
        if (*rep)
            return cmd_report(traces, csv_out);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
