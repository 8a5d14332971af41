// runner.cpp — Scenario orchestration and serialization

#include "xymark/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "xymark/analytic.hpp"
#include "xymark/dense.hpp"
#include "xymark/gaussian.hpp"
#include "xymark/sector.hpp"

namespace xymark {

namespace {

using nlohmann::json;

double max_deviation(const ChannelTrajectory& x, const ChannelTrajectory& y) {
    double worst = 0.0;
    const std::size_t n = std::min(x.samples.size(), y.samples.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = x.samples[i];
        const auto& q = y.samples[i];
        worst = std::max({worst, std::abs(p.a - q.a), std::abs(p.c - q.c), std::abs(p.b - q.b)});
    }
    return worst;
}

ChannelTrajectory channel_with(const RunConfig& cfg, const std::string& engine) {
    const SystemSpec spec = cfg.system();
    const TimeGrid grid = cfg.grid();
    if (engine == "sector") return evolve_vacuum(spec, grid);
    if (engine == "gaussian") return channel_m01(spec, cfg.environment(), grid);
    if (engine == "dense") return tomography(spec, cfg.environment(), grid, cfg.dense_cap);
    if (engine == "analytic") return analytic_vacuum_channel(spec, grid, cfg.eta);
    throw ConfigError("unknown engine " + engine);
}

ConvergenceReport convergence(const RunConfig& cfg, const std::string& engine, const ChannelTrajectory& base) {
    ConvergenceReport rep;
    RunConfig ref = cfg;
    if (engine == "analytic") {
        ref.eta = cfg.eta / 2.0;
        rep.method = "eta halved";
        rep.reference = "eta=" + format_number(ref.eta);
    } else if (engine == "dense") {
        ref.N = cfg.N - 2;
        rep.method = "N reduced by 2 (dense size cap)";
        rep.reference = "N=" + std::to_string(ref.N);
    } else {
        ref.N = 2 * cfg.N;
        rep.method = "N doubled";
        rep.reference = "N=" + std::to_string(ref.N);
    }
    try {
        make_config(to_key_values(ref));
        rep.max_deviation = max_deviation(base, channel_with(ref, engine));
        rep.available = true;
    } catch (const std::exception& e) {
        rep.note = std::string("reference run unavailable: ") + e.what();
    }
    return rep;
}

std::filesystem::path prepare_out(const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir)) throw ConfigError("cannot create output directory " + cfg.out);
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text, std::vector<std::string>& files) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    files.push_back(path.string());
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json config_json(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& [k, v] : to_key_values(cfg)) j[k] = v;
    return j;
}

std::string flags_of(const RateSample& r, double t, const ChannelTrajectory& tr) {
    std::string f;
    auto add = [&](const char* s) {
        if (!f.empty()) f += '|';
        f += s;
    };
    if (r.divergent) add("divergent");
    if (r.phase_unwrap) add("phase_unwrap");
    if (r.mu_infinite) add("mu_inf");
    if (tr.echo_horizon > 0.0 && t > tr.echo_horizon) add("echo");
    return f;
}

std::vector<double> linspace(double lo, double hi, int steps) {
    std::vector<double> v;
    for (int i = 0; i < steps; ++i) v.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
    return v;
}

const char* kPlotScript = R"(# Companion plot for trajectory.csv; needs matplotlib.
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "trajectory.csv"
with open(path) as fh:
    rows = list(csv.DictReader(fh))
t = [float(r["t"]) for r in rows]
fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
top.plot(t, [float(r["a"]) for r in rows], label="a")
top.plot(t, [float(r["c"]) for r in rows], label="c")
top.legend()
for key in ("gamma1", "gamma2", "gamma3"):
    bottom.plot(t, [float(r[key]) for r in rows], label=key)
bottom.axhline(0.0, color="k", lw=0.5)
bottom.set_xlabel("t J")
bottom.legend()
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
)";

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);  // folds -0 into 0
    return buf;
}

ChannelTrajectory compute_channel(const RunConfig& cfg) { return channel_with(cfg, resolve_engine(cfg)); }

TrajectoryAnalysis analyze_trajectory(const RunConfig& cfg, bool with_convergence) {
    TrajectoryAnalysis out;
    out.engine = resolve_engine(cfg);
    out.channel = channel_with(cfg, out.engine);
    out.rates = rates_analytic(out.channel);
    out.robustness = robustness_trajectory(out.channel);
    out.robustness_rates = degree(out.rates);
    out.N_BLP = blp_measure(out.channel).N_BLP;
    if (cfg.blp_states > 1) out.N_BLP = std::max(out.N_BLP, blp_grid_search(out.channel, cfg.blp_states).N_BLP);
    out.backflow = backflow_witness(out.channel);
    if (with_convergence) out.convergence = convergence(cfg, out.engine, out.channel);
    return out;
}

std::vector<PhasePoint> phase_diagram(const RunConfig& cfg) {
    const auto dhs = linspace(cfg.Delta_h_min, cfg.Delta_h_max, cfg.Delta_h_steps);
    const auto oms = cfg.scenario == "sweep" ? std::vector<double>{cfg.Omega}
                                             : linspace(cfg.Omega_min, cfg.Omega_max, cfg.Omega_steps);
    std::vector<PhasePoint> points;
    for (double om : oms)
        for (double dh : dhs) points.push_back({dh, om, "", 0.0, 0.0, ""});

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            PhasePoint& p = points[i];
            RunConfig local = cfg;
            local.Delta_h = p.Delta_h;
            local.Omega = p.Omega;
            try {
                p.engine = resolve_engine(local);
                const auto tr = channel_with(local, p.engine);
                p.N_degree = robustness_trajectory(tr).degree;
                p.N_BLP = blp_measure(tr).N_BLP;
            } catch (const std::exception& e) {
                p.error = e.what();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(points.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return points;
}

CorrelationRun compute_correlations(const RunConfig& cfg) {
    const SystemSpec spec = cfg.system();
    const TimeGrid grid = cfg.grid();
    const auto env = cfg.environment();
    std::string method = cfg.correlation_method;
    if (method == "auto") method = (cfg.env == "thermal") ? "gaussian" : "ns";
    CorrelationRun out;
    if (method == "closed_form") {
        out.series = closed_form_infinite_T(spec, grid);
    } else if (method == "gaussian") {
        if (cfg.env != "thermal") throw CapabilityError("Gaussian traces need a thermal environment");
        out.series = cfg.thermodynamic_limit ? correlation_gaussian_converged(spec, cfg.beta, grid).series
                                             : correlation_gaussian(spec, cfg.beta, grid);
    } else {
        if (!spec.edge_coupled() && cfg.env != "vacuum") {
            throw CapabilityError("mode sum omits the string operator; it is exact only for m0 = 1 or the vacuum");
        }
        out.series = correlation_ns(spec, occupations(spec, diagonalize_environment(spec), env), grid);
    }
    out.kernels = kernels(out.series, spec.Delta);
    out.time_plus = correlation_time(out.kernels.t, out.kernels.z_plus, spec.Omega);
    out.time_minus = correlation_time(out.kernels.t, out.kernels.z_minus, spec.Omega);
    return out;
}

std::vector<std::string> run_trajectory(const RunConfig& cfg) {
    const auto an = analyze_trajectory(cfg);
    const auto dir = prepare_out(cfg);
    std::vector<std::string> files;

    std::string csv = "t,a,c,Re_b,Im_b,E_LS,gamma1,gamma2,gamma3,mu,flags\n";
    for (std::size_t n = 0; n < an.channel.samples.size(); ++n) {
        const auto& s = an.channel.samples[n];
        const auto& r = an.rates[n];
        for (double v : {s.t, s.a, s.c, s.b.real(), s.b.imag(), r.E_LS, r.gamma1, r.gamma2, r.gamma3, r.mu}) {
            csv += format_number(v);
            csv += ',';
        }
        csv += flags_of(r, s.t, an.channel);
        csv += '\n';
    }
    write_text(dir / "trajectory.csv", csv, files);

    json backflow = json::array();
    for (const auto& iv : an.backflow.intervals) {
        backflow.push_back({{"t_start", iv.t_start}, {"t_end", iv.t_end}, {"population", iv.population},
                            {"coherence", iv.coherence}});
    }
    json conv = {{"method", an.convergence.method},
                 {"reference", an.convergence.reference},
                 {"available", an.convergence.available},
                 {"max_deviation", number_or_null(an.convergence.max_deviation)}};
    if (!an.convergence.note.empty()) conv["note"] = an.convergence.note;
    conv["echo_warning"] = an.channel.echo_warning;
    const json summary = {
        {"N_degree", an.robustness.degree},
        {"N_degree_rates", an.robustness_rates.degree},
        {"mu_bar", an.robustness.mu_bar},
        {"mu_infinite", an.robustness.any_infinite},
        {"N_BLP", an.N_BLP},
        {"engine", an.engine},
        {"echo_horizon", number_or_null(an.channel.echo_horizon)},
        {"convergence_report", conv},
        {"backflow_intervals", backflow},
        {"negative_gap", an.backflow.negative_gap},
        {"step_flags",
         {{"nonhermitian_log", an.robustness.flags.nonhermitian_log},
          {"negative_real_eigenvalue", an.robustness.flags.negative_real_eigenvalue},
          {"singular_map", an.robustness.flags.singular_map}}},
        {"config", config_json(cfg)},
    };
    write_text(dir / "summary.json", summary.dump(2) + "\n", files);
    if (cfg.plot) write_text(dir / "plot_trajectory.py", kPlotScript, files);
    return files;
}

std::vector<std::string> run_phase_diagram(const RunConfig& cfg) {
    const auto points = phase_diagram(cfg);
    const auto dir = prepare_out(cfg);
    std::vector<std::string> files;
    std::string csv = "Delta_h,Omega,N_degree,N_BLP,engine,error\n";
    std::size_t failures = 0;
    for (const auto& p : points) {
        std::string err = p.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        if (!p.error.empty()) ++failures;
        csv += format_number(p.Delta_h) + ',' + format_number(p.Omega) + ',' +
               (p.error.empty() ? format_number(p.N_degree) : "nan") + ',' +
               (p.error.empty() ? format_number(p.N_BLP) : "nan") + ',' + p.engine + ',' + err + '\n';
    }
    const std::string stem = cfg.scenario == "sweep" ? "sweep" : "phase_diagram";
    write_text(dir / (stem + ".csv"), csv, files);
    const json meta = {{"points", points.size()}, {"failed_points", failures}, {"config", config_json(cfg)}};
    write_text(dir / (stem + ".json"), meta.dump(2) + "\n", files);
    return files;
}

std::vector<std::string> run_correlations(const RunConfig& cfg) {
    const auto run = compute_correlations(cfg);
    const auto dir = prepare_out(cfg);
    std::vector<std::string> files;
    std::string csv = "t,Re_alpha_plus,Im_alpha_plus,Re_alpha_minus,Im_alpha_minus,K_plus,K_minus\n";
    for (std::size_t i = 0; i < run.series.t.size(); ++i) {
        for (double v : {run.series.t[i], run.series.plus[i].real(), run.series.plus[i].imag(),
                         run.series.minus[i].real(), run.series.minus[i].imag(), run.kernels.plus[i]}) {
            csv += format_number(v);
            csv += ',';
        }
        csv += format_number(run.kernels.minus[i]) + '\n';
    }
    write_text(dir / "correlations.csv", csv, files);
    auto timing = [](const CorrelationTime& c) {
        return json{{"tau_c", number_or_null(c.tau_c)},
                    {"omega_tau", number_or_null(c.omega_tau)},
                    {"no_decay", c.no_decay},
                    {"power_law", c.power_law}};
    };
    const json summary = {{"provenance", run.series.provenance},
                          {"plus", timing(run.time_plus)},
                          {"minus", timing(run.time_minus)},
                          {"config", config_json(cfg)}};
    write_text(dir / "correlations.json", summary.dump(2) + "\n", files);
    return files;
}

ValidateOutcome run_validate(const RunConfig& cfg, const std::vector<int>& ids) {
    ValidateOutcome out;
    out.results = run_checks(ids.empty() ? all_check_ids() : ids);
    const auto dir = prepare_out(cfg);
    out.pass = std::all_of(out.results.begin(), out.results.end(), [](const CheckResult& r) { return r.pass; });
    json checks = json::array();
    for (const auto& r : out.results) {
        json metrics = json::object();
        for (const auto& [k, v] : r.metrics) metrics[k] = number_or_null(v);
        checks.push_back({{"id", r.id},
                          {"name", r.name},
                          {"pass", r.pass},
                          {"detail", r.detail},
                          {"metrics", metrics},
                          {"seconds", r.seconds}});
    }
    const json report = {{"pass", out.pass}, {"checks", checks}};
    write_text(dir / "validate.json", report.dump(2) + "\n", out.files);
    return out;
}

}  // namespace xymark
