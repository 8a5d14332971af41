// xymark.cpp — Command line entry point
//
// Exit codes: 0 success, 1 validation or numerical failure, 2 config error, 3 engine capability refusal.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xymark/runner.hpp"

namespace {

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    int jobs{0};
    double dt{0.0};
    double tfin{-1.0};
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "key=value config file with [system] [environment] [run] sections");
    sub->add_option("--set", c.sets, "override KEY=VALUE or section.KEY=VALUE (repeatable)");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--jobs", c.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--dt", c.dt, "time step")->check(CLI::PositiveNumber);
    sub->add_option("--tfin", c.tfin, "final time")->check(CLI::NonNegativeNumber);
}

xymark::RunConfig build_config(const Common& c, const std::string& scenario) {
    xymark::KeyValues kv;
    if (!c.config.empty()) kv = xymark::parse_config_file(c.config);
    for (const auto& s : c.sets) xymark::apply_override(kv, s);
    kv["scenario"] = scenario;
    if (!c.out.empty()) kv["out"] = c.out;
    if (c.jobs > 0) kv["jobs"] = std::to_string(c.jobs);
    if (c.dt > 0.0) kv["dt"] = xymark::format_number(c.dt);
    if (c.tfin >= 0.0) kv["t_fin"] = xymark::format_number(c.tfin);
    return xymark::make_config(kv);
}

void list(const std::vector<std::string>& files) {
    for (const auto& f : files) std::cout << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Emitter coupled to an XY spin chain: dynamical maps and non-Markovianity"};
    app.require_subcommand(1);
    Common traj, phase, sweep, corr, val;
    std::vector<int> checks;
    auto* t = app.add_subcommand("trajectory", "channel, rates and measures for one configuration");
    auto* p = app.add_subcommand("phase-diagram", "non-Markovianity over a Delta_h x Omega grid");
    auto* s = app.add_subcommand("sweep", "non-Markovianity over a Delta_h line at fixed Omega");
    auto* c = app.add_subcommand("correlations", "chain correlation functions, kernels and correlation times");
    auto* v = app.add_subcommand("validate", "acceptance checks with a JSON report");
    add_common(t, traj);
    add_common(p, phase);
    add_common(s, sweep);
    add_common(c, corr);
    add_common(v, val);
    v->add_option("--check", checks, "check ids to run (default: all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (t->parsed()) {
            list(xymark::run_trajectory(build_config(traj, "trajectory")));
        } else if (p->parsed()) {
            list(xymark::run_phase_diagram(build_config(phase, "phase_diagram")));
        } else if (s->parsed()) {
            list(xymark::run_phase_diagram(build_config(sweep, "sweep")));
        } else if (c->parsed()) {
            list(xymark::run_correlations(build_config(corr, "correlations")));
        } else if (v->parsed()) {
            const auto outcome = xymark::run_validate(build_config(val, "validate"), checks);
            for (const auto& r : outcome.results) {
                std::printf("[%s] %d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
            }
            list(outcome.files);
            return outcome.pass ? 0 : 1;
        }
    } catch (const xymark::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const xymark::CapabilityError& e) {
        std::cerr << "engine refused: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
