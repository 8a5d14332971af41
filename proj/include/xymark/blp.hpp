// blp.hpp — Trace-distance backflow for qubit block channels

#pragma once

#include <string>
#include <vector>

#include "xymark/channel.hpp"

namespace xymark {

// rho = (1 + v . sigma) / 2 with the excited level as +z.
struct BlochState {
    double v1{0.0};
    double v2{0.0};
    double v3{0.0};

    static BlochState excited() { return {0.0, 0.0, 1.0}; }
    static BlochState ground() { return {0.0, 0.0, -1.0}; }
    static BlochState x_plus() { return {1.0, 0.0, 0.0}; }
    static BlochState x_minus() { return {-1.0, 0.0, 0.0}; }
    static BlochState y_plus() { return {0.0, 1.0, 0.0}; }

    double rho_ee() const { return 0.5 * (1.0 + v3); }
    cplx rho_ge() const { return 0.5 * cplx(v1, v2); }
    double norm() const;
};

double trace_distance(const BlochState& s1, const BlochState& s2);

BlochState apply_channel(const ChannelSample& sample, const BlochState& initial);

struct StatePair {
    BlochState first;
    BlochState second;
    std::string label;
};

// (e, g) witnesses population backflow, (x+, x-) coherence backflow.
std::vector<StatePair> default_pairs();

struct BlpResult {
    double N_BLP{0.0};
    std::vector<double> contributions;   // per pair
    std::size_t best_pair{0};
    bool negative_gap{false};           // a - c < 0 somewhere
};

BlpResult blp_measure(const ChannelTrajectory& traj, const std::vector<StatePair>& pairs = default_pairs(),
                      double tol = 1e-10);

// Verification path: all pairs of n quasi-uniform pure states on the Bloch sphere.
BlpResult blp_grid_search(const ChannelTrajectory& traj, int n_states = 40, double tol = 1e-10);

struct BackflowInterval {
    double t_start{0.0};
    double t_end{0.0};
    bool population{false};  // d(a - c)/dt > tol somewhere inside
    bool coherence{false};   // d|b|^2/dt > tol somewhere inside
};

struct BackflowReport {
    std::vector<BackflowInterval> intervals;
    bool negative_gap{false};
};

BackflowReport backflow_witness(const ChannelTrajectory& traj, double tol = 1e-10);

}  // namespace xymark
