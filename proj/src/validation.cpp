// validation.cpp — Acceptance checks with pinned tolerances

#include "xymark/validation.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <variant>

#include <unsupported/Eigen/MatrixFunctions>

#include "xymark/analytic.hpp"
#include "xymark/blp.hpp"
#include "xymark/channel.hpp"
#include "xymark/correlations.hpp"
#include "xymark/dense.hpp"
#include "xymark/gaussian.hpp"
#include "xymark/sector.hpp"

namespace xymark {

namespace {

// Pinned tolerances.
constexpr double kTolEngineDense = 1e-8;
constexpr double kTolEngineSector = 1e-10;
constexpr double kTolGamma3Floor = 1e-4;      // J units
constexpr double kTolDegreeCenter = 1e-3;
constexpr double kTolPlateau = 0.01;
constexpr double kTolFrequency = 0.10;        // relative
constexpr double kTolMonotone = 1e-9;
constexpr double kTolEnvSpread = 1e-12;
constexpr double kTolGamma1Zero = 1e-8;
constexpr double kGapResolved = 1e-6;          // smallest a - c at which gamma1 is judged
constexpr double kTolGaussianEnvelope = 0.01;  // absolute, 2% of the peak value 1/2
constexpr double kTolBessel = 1e-6;
constexpr double kTolDecayRatio = 0.20;
constexpr double kTolMarkovDegree = 1e-6;
constexpr double kTolNoiseClosedForm = 1e-8;
constexpr double kTolTraceOracle = 1e-8;

constexpr double kDt = 0.05;

struct Recorder {
    CheckResult r;
    std::ostringstream detail;
    bool ok{true};

    void metric(const std::string& key, double v) { r.metrics.emplace_back(key, v); }
    // Records a named condition; the check passes only if all conditions hold.
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << "FAILED " << what;
        }
    }
    void note(const std::string& text) {
        if (detail.tellp() > 0) detail << "; ";
        detail << text;
    }
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double max_deviation(const ChannelTrajectory& x, const ChannelTrajectory& y) {
    if (x.samples.size() != y.samples.size()) throw std::runtime_error("trajectory lengths differ");
    double worst = 0.0;
    for (std::size_t n = 0; n < x.samples.size(); ++n) {
        const auto& p = x.samples[n];
        const auto& q = y.samples[n];
        worst = std::max({worst, std::abs(p.a - q.a), std::abs(p.c - q.c), std::abs(p.b - q.b)});
    }
    return worst;
}

double max_gap(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

ChannelTrajectory truncate(const ChannelTrajectory& tr, double t_max) {
    ChannelTrajectory out = tr;
    out.samples.clear();
    for (const auto& s : tr.samples)
        if (s.t <= t_max + 1e-9) out.samples.push_back(s);
    return out;
}

void engine_triangle(Recorder& rec) {
    const auto grid = TimeGrid::from_final(5.0, kDt);
    const auto spec = SystemSpec::with_detuning(6, 1.0, 0.0, 0.4, 1.0, 1);
    const auto g_vac = channel_m01(spec, VacuumEnv{}, grid);
    const auto g_th = channel_m01(spec, ThermalEnv{1.0}, grid);
    const double dv = max_deviation(g_vac, tomography(spec, VacuumEnv{}, grid));
    const double dth = max_deviation(g_th, tomography(spec, ThermalEnv{1.0}, grid));
    const double sv = max_deviation(g_vac, evolve_vacuum(spec, grid));
    rec.metric("dense_vs_gaussian_vacuum", dv);
    rec.metric("dense_vs_gaussian_thermal", dth);
    rec.metric("sector_vs_gaussian_vacuum", sv);
    rec.note("dense-gaussian vacuum " + num(dv) + ", thermal " + num(dth) + "; sector-gaussian " + num(sv));
    rec.require(dv <= kTolEngineDense, "dense vs gaussian (vacuum)");
    rec.require(dth <= kTolEngineDense, "dense vs gaussian (thermal)");
    rec.require(sv <= kTolEngineSector, "sector vs gaussian (vacuum)");
}

SystemSpec center_spec(double Delta_h) { return SystemSpec::with_detuning(300, 1.0, 0.0, 0.4, Delta_h, 150); }

void band_center(Recorder& rec) {
    const auto full = evolve_vacuum(center_spec(0.0), TimeGrid::from_final(30.0, kDt));
    const auto rates = rates_analytic(full);
    double min20 = 0.0, first_negative = -1.0;
    for (const auto& r : rates) {
        if (r.t <= 20.0 + 1e-9) min20 = std::min(min20, r.gamma3);
        if (first_negative < 0.0 && r.gamma3 < -kTolGamma3Floor) first_negative = r.t;
    }
    const auto part = truncate(full, 20.0);
    const double deg_generic = robustness_trajectory(part).degree;
    const double deg_rates = degree(rates_analytic(part)).degree;
    rec.metric("min_gamma3_t_le_20", min20);
    rec.metric("N_degree_generic", deg_generic);
    rec.metric("N_degree_rates", deg_rates);
    rec.metric("first_negative_gamma3_t", first_negative);
    rec.note("min gamma3 " + num(min20) + ", N(20) " + num(deg_generic) + ", gamma3 first negative at t=" +
             num(first_negative));
    rec.require(min20 >= -kTolGamma3Floor, "gamma3 >= -1e-4 J for tJ <= 20");
    rec.require(deg_generic <= kTolDegreeCenter && deg_rates <= kTolDegreeCenter, "N(t_fin=20) <= 1e-3");
    rec.require(first_negative >= 20.0 && first_negative <= 30.0, "gamma3 first negative within tJ in [20, 30]");
}

void band_edge(Recorder& rec) {
    const auto grid = TimeGrid::from_final(20.0, kDt);
    for (double Dh : {-2.0, -1.9}) {
        const auto tr = evolve_vacuum(center_spec(Dh), grid);
        const auto rates = rates_analytic(tr);
        double min_g3 = 0.0;
        for (const auto& r : rates)
            if (r.t < 20.0) min_g3 = std::min(min_g3, r.gamma3);
        const double deg = robustness_trajectory(tr).degree;
        const std::string tag = "Delta_h=" + num(Dh);
        rec.metric("N_degree[" + tag + "]", deg);
        rec.metric("min_gamma3[" + tag + "]", min_g3);
        rec.note(tag + ": N " + num(deg) + ", min gamma3 " + num(min_g3));
        rec.require(deg > 0.0, "N > 0 at " + tag);
        rec.require(min_g3 < 0.0, "gamma3 < 0 before tJ = 20 at " + tag);
        if (Dh == -2.0) {
            const double plateau = tr.samples.back().a;
            rec.metric("a_t20[" + tag + "]", plateau);
            rec.note("|C_e|^2(20) " + num(plateau));
            rec.require(plateau > kTolPlateau, "|C_e|^2(20) > 0.01 at " + tag);
        }
    }
}

// Leading peak of a rate series in a window; non-finite samples are clipped to the bound.
double leading_frequency(const std::vector<RateSample>& rates, double t0, double t1, double clip) {
    std::vector<double> v;
    for (const auto& r : rates) {
        double g = r.gamma3;
        if (std::isnan(g)) g = 0.0;
        v.push_back(std::clamp(g, -clip, clip));
    }
    const auto spec = frequency_analysis(v, kDt, t0, t1, 1);
    if (spec.peaks.empty()) throw std::runtime_error("no spectral peak");
    return spec.peaks.front().omega;
}

void frequencies(Recorder& rec) {
    const auto early = rates_analytic(evolve_vacuum(center_spec(0.0), TimeGrid::from_final(20.0, kDt)));
    const double w_early = leading_frequency(early, 2.0, 15.0, std::numeric_limits<double>::infinity());
    // Late window of the edge-coupled vacuum run. Near the zeros of a the rates spike, so the series is
    // clipped at the band half-width before the transform.
    const auto spec = SystemSpec::with_detuning(300, 1.0, 0.0, 0.4, 0.0, 1);
    const auto late = rates_analytic(channel_m01(spec, VacuumEnv{}, TimeGrid::from_final(100.0, kDt)));
    const double w_late = leading_frequency(late, 40.0, 100.0, 2.0);
    rec.metric("peak_early", w_early);
    rec.metric("peak_late", w_late);
    rec.note("gamma3 peak [2,15] " + num(w_early) + " J, late window [40,100] " + num(w_late) + " J");
    rec.require(std::abs(w_early - 2.0) <= kTolFrequency * 2.0, "early peak at 2J +- 10%");
    rec.require(std::abs(w_late - 4.0) <= kTolFrequency * 4.0, "late peak at 4J +- 10%");
}

void blp_markovian_point(Recorder& rec) {
    const auto grid = TimeGrid::from_final(100.0, kDt);
    const auto spec = SystemSpec::with_detuning(300, 1.0, 0.0, 1.0, 1.0, 1);
    const auto vac = channel_m01(spec, VacuumEnv{}, grid);
    double rise = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 1; n < vac.samples.size(); ++n) rise = std::max(rise, vac.samples[n].a - vac.samples[n - 1].a);
    rec.metric("max_population_rise", rise);
    rec.note("max rise of a " + num(rise));
    rec.require(rise <= kTolMonotone, "a(t) nonincreasing in vacuum");

    const std::vector<std::pair<std::string, EnvInitialState>> envs{
        {"vacuum", VacuumEnv{}}, {"ground(h=-J/2)", GroundEnv{-0.5}}, {"thermal(beta=1)", ThermalEnv{1.0}}};
    for (const auto& [label, env] : envs) {
        const auto tr = std::holds_alternative<VacuumEnv>(env) ? vac : channel_m01(spec, env, grid);
        const double nb = std::max(blp_measure(tr).N_BLP, blp_grid_search(tr, 40).N_BLP);
        rec.metric("N_BLP[" + label + "]", nb);
        rec.require(nb == 0.0, "N_BLP = 0 for " + label);
        if (label.rfind("ground", 0) == 0) {
            const auto rates = rates_analytic(tr);
            double min_g2 = 0.0;
            for (const auto& r : rates) min_g2 = std::min(min_g2, r.gamma2);
            const double deg = robustness_trajectory(tr).degree;
            rec.metric("min_gamma2[ground]", min_g2);
            rec.metric("N_degree[ground]", deg);
            rec.note("ground: min gamma2 " + num(min_g2) + ", N " + num(deg) + ", N_BLP " + num(nb));
            rec.require(min_g2 < 0.0, "gamma2 < 0 for the ground state");
            rec.require(deg > 0.0, "N > 0 for the ground state");
        }
    }
}

void env_independence(Recorder& rec) {
    const auto grid = TimeGrid::from_final(50.0, kDt);
    const auto spec = SystemSpec::with_detuning(120, 1.0, 0.1, 0.5, 0.2, 1);
    const std::vector<EnvInitialState> envs{VacuumEnv{}, GroundEnv{-0.5}, ThermalEnv{1.0}, ThermalEnv{0.1},
                                            SingleModeEnv{60}};
    const double spread = env_independence_check(spec, envs, grid);
    // gamma1 is a log-derivative of (a - c) / |b|^2. Where a - c is tiny next to c, the subtraction
    // leaves only eps c / (a - c) relative precision, so those samples are reported but not judged.
    double g1 = 0.0, g1_unresolved = 0.0;
    int unresolved = 0;
    for (const auto& env : envs) {
        const auto tr = channel_m01(spec, env, grid);
        const auto rates = rates_analytic(tr);
        for (std::size_t n = 0; n < rates.size(); ++n) {
            double gap = 1.0;
            for (std::size_t j = (n == 0 ? 0 : n - 1); j <= std::min(n + 1, rates.size() - 1); ++j)
                gap = std::min(gap, std::abs(tr.samples[j].a - tr.samples[j].c));
            if (gap >= kGapResolved) {
                g1 = std::max(g1, std::abs(rates[n].gamma1));
            } else {
                ++unresolved;
                g1_unresolved = std::max(g1_unresolved, std::abs(rates[n].gamma1));
            }
        }
    }
    rec.metric("max_spread_a_minus_c", spread);
    rec.metric("max_abs_gamma1", g1);
    rec.metric("unresolved_samples", unresolved);
    rec.metric("max_abs_gamma1_unresolved", g1_unresolved);
    rec.note("spread of a-c " + num(spread) + ", max |gamma1| " + num(g1) + " (" + std::to_string(unresolved) +
             " samples with a-c < 1e-6 excluded, max there " + num(g1_unresolved) + ")");
    rec.require(spread <= kTolEnvSpread, "spread of a - c <= 1e-12");
    rec.require(g1 <= kTolGamma1Zero, "gamma1 = 0 within 1e-8");
}

void closed_forms(Recorder& rec) {
    // Center coupling at high temperature.
    const auto short_grid = TimeGrid::from_final(3.0, kDt);
    const SystemSpec center{120, 1.0, 0.0, 0.4, 0.0, 60};
    const auto g = correlation_gaussian(center, 0.05, short_grid);
    double env_dev = 0.0;
    for (std::size_t i = 0; i < short_grid.size(); ++i) {
        const double ref = 0.5 * std::exp(-short_grid.t(i) * short_grid.t(i));
        env_dev = std::max({env_dev, std::abs(std::abs(g.plus[i]) - ref), std::abs(std::abs(g.minus[i]) - ref)});
    }
    // Edge coupling at half filling.
    const auto grid = TimeGrid::from_final(20.0, kDt);
    const SystemSpec edge{2000, 1.0, 0.0, 0.4, 0.0, 1};
    const auto ns = correlation_ns(edge, Occupations{Vec::Constant(edge.N, 0.5)}, grid);
    const auto cf = closed_form_infinite_T(edge, grid);
    const double bessel = std::max(max_gap(ns.plus, cf.plus), max_gap(ns.minus, cf.minus));
    // Kernel decay times at two detunings; the chain correlations do not depend on the detuning.
    const auto long_grid = TimeGrid::from_final(10.0, kDt);
    const auto corr = correlation_gaussian(center, 1.0, long_grid);
    const double tau0 = correlation_time(corr.t, kernels(corr, 0.0).z_plus, 0.4).tau_c;
    const double tau2 = correlation_time(corr.t, kernels(corr, -2.0).z_plus, 0.4).tau_c;
    const double ratio = std::abs(tau0 - tau2) / std::max(tau0, tau2);
    rec.metric("gaussian_envelope_deviation", env_dev);
    rec.metric("bessel_deviation", bessel);
    rec.metric("tau_c[Delta_h=0]", tau0);
    rec.metric("tau_c[Delta_h=-2]", tau2);
    rec.note("Gaussian envelope dev " + num(env_dev) + ", Bessel dev " + num(bessel) + ", tau_c " + num(tau0) +
             " vs " + num(tau2));
    rec.require(env_dev <= kTolGaussianEnvelope, "center envelope within 2% of 1/2 e^{-J^2 t^2}");
    rec.require(bessel <= kTolBessel, "edge mode sum vs Bessel form <= 1e-6");
    rec.require(tau0 > 0.0 && tau2 > 0.0 && ratio <= kTolDecayRatio, "decay times agree within 20%");
}

struct CrossingScan {
    bool found{false};
    double Delta_h{0.0};
    double t_cross{0.0};
    double gamma1{0.0};
    double first_backflow{std::numeric_limits<double>::infinity()};
};

// a - c changes sign before tJ = 10, gamma1 < 0 with the divergent flag next to the crossing,
// and no BLP backflow interval starts before the crossing.
CrossingScan crossing_at(double Delta_h, int N) {
    CrossingScan out;
    out.Delta_h = Delta_h;
    const auto spec = SystemSpec::with_detuning(N, 1.0, 1.0, 0.4, Delta_h, (N + 1) / 2);
    const auto tr = tomography(spec, ThermalEnv{10.0}, TimeGrid::from_final(10.0, kDt), N);
    const auto& s = tr.samples;
    std::size_t cross = 0;
    for (std::size_t n = 1; n < s.size(); ++n) {
        if ((s[n].a - s[n].c > 0.0) != (s[n - 1].a - s[n - 1].c > 0.0)) {
            cross = n;
            break;
        }
    }
    if (cross == 0) return out;
    const double t_cross = s[cross - 1].t + (s[cross - 1].a - s[cross - 1].c) /
                                                ((s[cross - 1].a - s[cross - 1].c) - (s[cross].a - s[cross].c)) * tr.dt;
    const auto rates = rates_analytic(tr);
    bool flagged = false;
    double g1 = 0.0;
    for (std::size_t n = (cross >= 3 ? cross - 3 : 0); n < cross; ++n) {
        if (rates[n].divergent) flagged = true;
        g1 = std::min(g1, rates[n].gamma1);
    }
    const auto witness = backflow_witness(tr);
    if (!witness.intervals.empty()) out.first_backflow = witness.intervals.front().t_start;
    out.t_cross = t_cross;
    out.gamma1 = g1;
    out.found = flagged && g1 < 0.0 && t_cross < out.first_backflow;
    return out;
}

void crossing(Recorder& rec) {
    const int N = 8;
    CrossingScan hit;
    int scanned = 0;
    for (int i = 0; i <= 14 && !hit.found; ++i) {
        hit = crossing_at(-2.1 + 0.05 * i, N);
        ++scanned;
    }
    rec.metric("points_scanned", scanned);
    if (hit.found) {
        rec.metric("Delta_h", hit.Delta_h);
        rec.metric("t_cross", hit.t_cross);
        rec.metric("gamma1_before_crossing", hit.gamma1);
        rec.metric("first_backflow_t", hit.first_backflow);
        rec.note("N=8, Delta_h=" + num(hit.Delta_h) + ": crossing at t=" + num(hit.t_cross) + ", gamma1 " +
                 num(hit.gamma1) + ", first backflow at t=" + num(hit.first_backflow));
    }
    rec.require(hit.found, "crossing with gamma1 < 0 before any backflow in Delta_h in [-2.1, -1.4]");
}

void synthetic_measure(Recorder& rec) {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double dt = kDt;
    const int pieces = 10, per_piece = 20;
    double worst_markov = 0.0, worst_noise = 0.0, min_injected = 1.0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<std::array<double, 4>> rates(pieces);
        for (auto& r : rates) r = {4.0 * u(rng) - 2.0, 0.5 * u(rng), 0.5 * u(rng), 0.5 * u(rng)};

        auto run = [&](const std::vector<std::array<double, 4>>& rs) {
            ChannelTrajectory tr;
            tr.dt = dt;
            CMat T = CMat::Identity(4, 4);
            tr.samples.push_back(sample_from_map(T, 0.0));
            for (int p = 0; p < pieces; ++p) {
                const CMat step = (dt * block_generator(rs[p][0], rs[p][1], rs[p][2], rs[p][3])).exp();
                for (int k = 0; k < per_piece; ++k) {
                    T = step * T;
                    tr.samples.push_back(sample_from_map(T, tr.samples.size() * dt));
                }
            }
            return tr;
        };
        worst_markov = std::max(worst_markov, robustness_trajectory(run(rates)).degree);

        // One piece with a single negative rate; the channel stays block shaped.
        const int piece = 1 + static_cast<int>(u(rng) * (pieces - 1));
        const int which = 1 + static_cast<int>(u(rng) * 3.0);
        const double g = 0.05 + 0.3 * u(rng);
        auto injected = rates;
        injected[piece][which] = -g;
        const auto tr = run(injected);
        min_injected = std::min(min_injected, robustness_trajectory(tr).degree);
        const double trace_LL = (which == 1) ? 2.0 : 1.0;  // tau_z unnormalized, tau+- normalized
        const double closed = 2.0 * g * trace_LL;
        for (int k = 0; k < per_piece; ++k) {
            const std::size_t n = static_cast<std::size_t>(piece * per_piece + k);
            const auto step = step_channel(build_map_matrix(tr.samples[n]), build_map_matrix(tr.samples[n + 1]));
            worst_noise = std::max(worst_noise, std::abs(robustness_step(step.dT, dt).mu - closed));
        }
    }
    rec.metric("max_degree_markovian", worst_markov);
    rec.metric("min_degree_injected", min_injected);
    rec.metric("max_mu_deviation", worst_noise);
    rec.note("100 runs: max N " + num(worst_markov) + ", injected min N " + num(min_injected) +
             ", mu vs closed form " + num(worst_noise));
    rec.require(worst_markov <= kTolMarkovDegree, "N <= 1e-6 for nonnegative rates");
    rec.require(min_injected > 0.0, "N > 0 with a negative-rate interval");
    rec.require(worst_noise <= kTolNoiseClosedForm, "generic mu matches the closed form");
}

void trace_oracle(Recorder& rec) {
    const auto grid = TimeGrid::from_final(5.0, kDt);
    double worst = 0.0;
    for (int m0 : {1, 4}) {
        for (double beta : {0.05, 1.0, 10.0}) {
            const SystemSpec spec{8, 1.0, 0.0, 0.4, 0.0, m0};
            const auto g = correlation_gaussian(spec, beta, grid);
            const auto d = dense_correlations(spec, ThermalEnv{beta}, grid);
            worst = std::max({worst, max_gap(g.plus, d.plus), max_gap(g.minus, d.minus)});
        }
    }
    rec.metric("max_deviation", worst);
    rec.note("Gaussian trace vs dense trace " + num(worst));
    rec.require(worst <= kTolTraceOracle, "Gaussian trace vs dense trace <= 1e-8");
}

struct Definition {
    int id;
    const char* name;
    void (*body)(Recorder&);
};

const std::vector<Definition>& definitions() {
    static const std::vector<Definition> defs{
        {1, "engine equivalence", engine_triangle},
        {2, "band-center near-Markovianity", band_center},
        {3, "band-edge non-Markovianity", band_edge},
        {4, "frequency ledger", frequencies},
        {5, "BLP-Markovian point", blp_markovian_point},
        {6, "environment independence", env_independence},
        {7, "high-temperature closed forms", closed_forms},
        {8, "crossing phenomenon", crossing},
        {9, "measure self-consistency", synthetic_measure},
        {10, "Gaussian-trace oracle", trace_oracle},
    };
    return defs;
}

}  // namespace

std::vector<int> all_check_ids() {
    std::vector<int> ids;
    for (const auto& d : definitions()) ids.push_back(d.id);
    return ids;
}

CheckResult run_check(int id) {
    const auto& defs = definitions();
    const auto it = std::find_if(defs.begin(), defs.end(), [&](const Definition& d) { return d.id == id; });
    if (it == defs.end()) throw std::invalid_argument("no check with id " + std::to_string(id));
    Recorder rec;
    rec.r.id = id;
    rec.r.name = it->name;
    const auto start = std::chrono::steady_clock::now();
    try {
        it->body(rec);
    } catch (const std::exception& e) {
        rec.require(false, std::string("exception: ") + e.what());
    }
    rec.r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.r.pass = rec.ok;
    rec.r.detail = rec.detail.str();
    return rec.r;
}

std::vector<CheckResult> run_checks(const std::vector<int>& ids) {
    std::vector<CheckResult> out;
    for (int id : ids) out.push_back(run_check(id));
    return out;
}

}  // namespace xymark
