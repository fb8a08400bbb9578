#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "engage/analysis.h"
#include "engage/engine.h"
#include "engage/scenario_io.h"

namespace fs = std::filesystem;
using namespace engage;

namespace {

ScenarioConfig load_scenario(const std::string& spec) {
    if (fs::exists(spec)) {
        std::ifstream in(spec);
        if (!in) throw std::runtime_error("cannot read " + spec);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_scenario(ss.str());
    }
    try {
        return preset(spec);
    } catch (const ValidationError&) {
        throw std::runtime_error("\"" + spec +
                                 "\": no such file, and not a preset name "
                                 "(list them with `simcli presets`)");
    }
}

struct Overrides {
    double dt = 0.0;          // 0 = keep the scenario's value
    std::string method;       // empty = keep
    bool perfect_ap = false;  // force the observer off
};

void apply(const Overrides& o, ScenarioConfig& cfg) {
    if (o.dt > 0.0) cfg.sim.dt = o.dt;
    if (o.method == "rk4") cfg.sim.method = Method::RK4;
    else if (o.method == "euler") cfg.sim.method = Method::Euler;
    if (o.perfect_ap) cfg.observer.enabled = false;
}

void write_outputs(const SimResult& res, const ScenarioConfig& cfg, const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path trace_path = dir / (cfg.name + ".trace.csv");
    const fs::path summary_path = dir / (cfg.name + ".summary.json");
    std::ofstream trace(trace_path);
    if (!trace) throw std::runtime_error("cannot write " + trace_path.string());
    write_trace(res, trace);
    std::ofstream summary(summary_path);
    if (!summary) throw std::runtime_error("cannot write " + summary_path.string());
    summary << write_summary(res, cfg);
}

std::string outcome_line(const ScenarioConfig& cfg, const SimResult& res) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: %s at t=%.4f s, evader miss %.1f m",
                  cfg.name.c_str(), outcome_name(res.outcome), res.event_time,
                  res.evader_miss_distance);
    return buf;
}

// Expands a shell-style pattern against the filesystem; plain names pass
// through untouched so preset names survive.
std::vector<std::string> expand_pattern(const std::string& pat) {
    if (pat.find_first_of("*?[") == std::string::npos) return {pat};
    const fs::path p(pat);
    const fs::path dir = p.parent_path().empty() ? fs::path(".") : p.parent_path();
    std::vector<std::string> out;
    if (fs::is_directory(dir))
        for (const auto& entry : fs::directory_iterator(dir))
            if (fnmatch(p.filename().c_str(), entry.path().filename().c_str(), 0) == 0)
                out.push_back(entry.path().string());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw std::runtime_error("no files match \"" + pat + "\"");
    return out;
}

PlotKind plot_kind(const std::string& name) {
    if (name == "traj") return PlotKind::Trajectories;
    if (name == "sigma") return PlotKind::Manifolds;
    if (name == "accel") return PlotKind::Accelerations;
    return PlotKind::TimeToGo;
}

int cmd_run(const std::string& scenario, const Overrides& over, const std::string& out_dir) {
    ScenarioConfig cfg = load_scenario(scenario);
    apply(over, cfg);
    const SimResult res = run_scenario(cfg);
    write_outputs(res, cfg, out_dir);
    std::cout << outcome_line(cfg, res) << "\n";
    return mission_success(res.outcome, cfg.mode.stance) ? 0 : 2;
}

int cmd_batch(const std::vector<std::string>& patterns, const std::string& out_dir,
              int parallel) {
    std::vector<std::string> specs;
    for (const auto& pat : patterns)
        for (auto& s : expand_pattern(pat)) specs.push_back(std::move(s));

    // Configs load serially so errors surface with a stable order; the runs
    // themselves are independent and fan out over the pool.
    std::vector<ScenarioConfig> cfgs;
    for (const auto& s : specs) cfgs.push_back(load_scenario(s));

    std::vector<std::string> lines(cfgs.size());
    std::vector<std::string> errors(cfgs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < cfgs.size(); i = next.fetch_add(1)) {
            try {
                const SimResult res = run_scenario(cfgs[i]);
                write_outputs(res, cfgs[i], out_dir);
                lines[i] = outcome_line(cfgs[i], res);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int n = std::clamp<int>(parallel, 1, static_cast<int>(std::max<size_t>(cfgs.size(), 1)));
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    bool failed = false;
    for (size_t i = 0; i < cfgs.size(); ++i) {
        if (errors[i].empty()) {
            std::cout << lines[i] << "\n";
        } else {
            std::cerr << cfgs[i].name << ": error: " << errors[i] << "\n";
            failed = true;
        }
    }
    return failed ? 1 : 0;
}

int cmd_plot(const std::string& trace_path, const std::string& kind, std::string out_path) {
    std::ifstream in(trace_path);
    if (!in) throw std::runtime_error("cannot read " + trace_path);
    const std::vector<TraceRecord> trace = read_trace(in);
    const std::string svg = emit_plot(trace, plot_kind(kind));
    if (out_path.empty()) {
        fs::path p(trace_path);
        p.replace_extension();       // drop .csv
        p.replace_extension();       // drop .trace
        out_path = p.string() + "." + kind + ".svg";
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << svg;
    std::cout << out_path << "\n";
    return 0;
}

int cmd_presets() {
    for (const auto& name : preset_names()) {
        const ScenarioConfig c = preset(name);
        const bool agg = c.mode.stance == Stance::Aggressive;
        const bool ind = c.mode.cooperation == Cooperation::Indirect;
        char timing[40];
        if (ind) std::snprintf(timing, sizeof timing, "impact_time=%g", c.mode.impact_time);
        else std::snprintf(timing, sizeof timing, "time_margin=%g", c.mode.time_margin);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-10s %-10s %-9s %-16s pursuer=%s", name.c_str(),
                      agg ? "aggressive" : "defensive", ind ? "indirect" : "direct", timing,
                      c.pursuer_strategy.kind == PursuerKind::ProNav ? "pronav"
                      : c.pursuer_strategy.kind == PursuerKind::Scripted
                          ? "scripted"
                          : "pronav+script");
        std::cout << buf << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic three-agent engagement simulator"};
    app.require_subcommand(1);

    std::string scenario, out_dir = ".", method, trace_path, kind, plot_out;
    std::vector<std::string> patterns;
    Overrides over;
    int parallel = 1;

    CLI::App* run = app.add_subcommand("run", "Run one scenario, write trace and summary");
    run->add_option("--scenario", scenario, "Preset name or scenario file")->required();
    run->add_option("--dt", over.dt, "Integration step override, s");
    run->add_option("--method", method, "Integrator override")
        ->check(CLI::IsMember({"rk4", "euler"}));
    run->add_flag("--perfect-ap", over.perfect_ap,
                  "Feed the laws the true pursuer acceleration");
    run->add_option("--out", out_dir, "Output directory (default .)");

    CLI::App* batch = app.add_subcommand("batch", "Run several scenarios");
    batch->add_option("--scenarios", patterns, "Preset names, files, or globs")
        ->required()
        ->expected(-1);
    batch->add_option("--out", out_dir, "Output directory")->required();
    batch->add_option("--parallel", parallel, "Worker threads (default 1)");

    CLI::App* plot = app.add_subcommand("plot", "Render a trace to SVG");
    plot->add_option("--trace", trace_path, "Trace CSV file")->required();
    plot->add_option("--kind", kind, "traj, sigma, accel, or tgo")
        ->required()
        ->check(CLI::IsMember({"traj", "sigma", "accel", "tgo"}));
    plot->add_option("--out", plot_out, "Output SVG path");

    app.add_subcommand("presets", "List built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        over.method = method;
        if (run->parsed()) return cmd_run(scenario, over, out_dir);
        if (batch->parsed()) return cmd_batch(patterns, out_dir, parallel);
        if (plot->parsed()) return cmd_plot(trace_path, kind, plot_out);
        return cmd_presets();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
