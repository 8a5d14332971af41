// blp.cpp — Trace-distance backflow

#include "xymark/blp.hpp"

#include <algorithm>
#include <cmath>

#include "xymark/numeric.hpp"

namespace xymark {

double BlochState::norm() const { return std::sqrt(v1 * v1 + v2 * v2 + v3 * v3); }

double trace_distance(const BlochState& s1, const BlochState& s2) {
    const double d1 = s1.v1 - s2.v1, d2 = s1.v2 - s2.v2, d3 = s1.v3 - s2.v3;
    return 0.5 * std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
}

BlochState apply_channel(const ChannelSample& s, const BlochState& in) {
    // rho_ge picks up conj(b) since rho_eg picks up b.
    const cplx coh = std::conj(s.b) * in.rho_ge();
    return {2.0 * coh.real(), 2.0 * coh.imag(), 2.0 * (s.a - s.c) * in.rho_ee() + 2.0 * s.c - 1.0};
}

std::vector<StatePair> default_pairs() {
    return {{BlochState::excited(), BlochState::ground(), "e,g"},
            {BlochState::x_plus(), BlochState::x_minus(), "x+,x-"}};
}

namespace {

double pair_backflow(const ChannelTrajectory& traj, const StatePair& p, double tol) {
    double total = 0.0;
    double prev = trace_distance(apply_channel(traj.samples.front(), p.first),
                                 apply_channel(traj.samples.front(), p.second));
    for (std::size_t n = 1; n < traj.samples.size(); ++n) {
        const double d = trace_distance(apply_channel(traj.samples[n], p.first),
                                        apply_channel(traj.samples[n], p.second));
        if (d - prev > tol) total += d - prev;
        prev = d;
    }
    return total;
}

bool has_negative_gap(const ChannelTrajectory& traj) {
    return std::any_of(traj.samples.begin(), traj.samples.end(),
                       [](const ChannelSample& s) { return s.a - s.c < 0.0; });
}

}  // namespace

BlpResult blp_measure(const ChannelTrajectory& traj, const std::vector<StatePair>& pairs, double tol) {
    if (traj.samples.empty()) throw std::invalid_argument("empty channel trajectory");
    BlpResult out;
    out.negative_gap = has_negative_gap(traj);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        out.contributions.push_back(pair_backflow(traj, pairs[i], tol));
        if (out.contributions.back() > out.N_BLP) {
            out.N_BLP = out.contributions.back();
            out.best_pair = i;
        }
    }
    return out;
}

BlpResult blp_grid_search(const ChannelTrajectory& traj, int n_states, double tol) {
    if (n_states < 2) throw std::invalid_argument("grid search needs at least two states");
    // Fibonacci lattice on the sphere, plus the poles.
    std::vector<BlochState> states{BlochState::excited(), BlochState::ground()};
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n_states; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n_states;
        const double r = std::sqrt(1.0 - z * z);
        states.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
    }
    std::vector<StatePair> pairs;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j) pairs.push_back({states[i], states[j], ""});
    return blp_measure(traj, pairs, tol);
}

BackflowReport backflow_witness(const ChannelTrajectory& traj, double tol) {
    traj.validate();
    BackflowReport out;
    out.negative_gap = has_negative_gap(traj);
    const std::size_t n = traj.samples.size();
    std::vector<double> gap(n), coh(n);
    for (std::size_t i = 0; i < n; ++i) {
        gap[i] = traj.samples[i].a - traj.samples[i].c;
        coh[i] = std::norm(traj.samples[i].b);
    }
    const auto dgap = derivative(gap, traj.dt);
    const auto dcoh = derivative(coh, traj.dt);
    bool open = false;
    for (std::size_t i = 0; i < n; ++i) {
        const bool pop = dgap[i] > tol;
        const bool cf = dcoh[i] > tol;
        if (pop || cf) {
            if (!open) {
                out.intervals.push_back({traj.samples[i].t, traj.samples[i].t, false, false});
                open = true;
            }
            auto& iv = out.intervals.back();
            iv.t_end = traj.samples[i].t;
            iv.population = iv.population || pop;
            iv.coherence = iv.coherence || cf;
        } else {
            open = false;
        }
    }
    return out;
}

}  // namespace xymark
