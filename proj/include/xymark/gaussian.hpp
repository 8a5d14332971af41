// gaussian.hpp — Free-fermion channel for the edge-coupled emitter (m0 = 1)

#pragma once

#include <vector>

#include "xymark/channel.hpp"
#include "xymark/model.hpp"

namespace xymark {

// (N+1)x(N+1) tridiagonal: diagonal (Delta, 2h, ..., 2h), off-diagonal (Omega, J, ..., J).
Mat single_particle_hamiltonian(const SystemSpec& spec);

// <c_i c_j^dagger> of the chain in the site basis.
Mat env_hole_matrix(const SystemSpec& spec, const EnvInitialState& env);

// Refuses (CapabilityError) unless m0 = 1.
ChannelTrajectory channel_m01(const SystemSpec& spec, const EnvInitialState& env, const TimeGrid& grid);

// Largest pairwise spread of a - c over the environment list, over all times.
double env_independence_check(const SystemSpec& spec, const std::vector<EnvInitialState>& envs,
                              const TimeGrid& grid);

struct MarkovPoint {
    double Delta_h{0.0};
    bool out_of_range{false};  // Omega / J > 1
};

// Detuning at which the vacuum population decays monotonically.
MarkovPoint blp_markov_point(double Omega, double J);

}  // namespace xymark
