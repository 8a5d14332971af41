// runner.hpp — Scenario orchestration and serialization

#pragma once

#include <string>
#include <vector>

#include "xymark/blp.hpp"
#include "xymark/channel.hpp"
#include "xymark/config.hpp"
#include "xymark/correlations.hpp"
#include "xymark/validation.hpp"

namespace xymark {

// Channel from the engine chosen by resolve_engine.
ChannelTrajectory compute_channel(const RunConfig& cfg);

struct ConvergenceReport {
    std::string method;       // how the reference run differs
    std::string reference;    // parameters of the reference run
    double max_deviation{0.0};  // max over t of |a|, |c|, |b| differences
    bool available{false};
    std::string note;
};

struct TrajectoryAnalysis {
    std::string engine;
    ChannelTrajectory channel;
    std::vector<RateSample> rates;
    RobustnessResult robustness;        // generic step-map path
    RobustnessResult robustness_rates;  // block-rate path
    double N_BLP{0.0};
    BackflowReport backflow;
    ConvergenceReport convergence;
};

TrajectoryAnalysis analyze_trajectory(const RunConfig& cfg, bool with_convergence = true);

struct PhasePoint {
    double Delta_h{0.0};
    double Omega{0.0};
    std::string engine;
    double N_degree{0.0};
    double N_BLP{0.0};
    std::string error;  // empty on success
};

// Grid over Delta_h x Omega (Omega outer), evaluated by cfg.jobs workers; output order is the grid order.
std::vector<PhasePoint> phase_diagram(const RunConfig& cfg);

struct CorrelationRun {
    CorrelationSeries series;
    KernelSeries kernels;
    CorrelationTime time_plus;
    CorrelationTime time_minus;
};

CorrelationRun compute_correlations(const RunConfig& cfg);

// Number formatting used in every CSV: 12 significant digits.
std::string format_number(double x);

// Writers return the paths they created. They throw ConfigError when the output directory is unusable.
std::vector<std::string> run_trajectory(const RunConfig& cfg);
std::vector<std::string> run_phase_diagram(const RunConfig& cfg);
std::vector<std::string> run_correlations(const RunConfig& cfg);

struct ValidateOutcome {
    std::vector<CheckResult> results;
    std::vector<std::string> files;
    bool pass{false};
};

ValidateOutcome run_validate(const RunConfig& cfg, const std::vector<int>& ids);

}  // namespace xymark
