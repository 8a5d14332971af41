// analytic.hpp — Infinite-chain resolvent: self-energy, vacuum amplitude, bound states, frequency ledger

#pragma once

#include <string>
#include <vector>

#include "xymark/channel.hpp"
#include "xymark/model.hpp"

namespace xymark {

struct ResolventPoint {
    cplx z;
    cplx sigma;
    cplx G;
    bool branch_point{false};
};

// Retarded self-energy of the infinite chain seen from the coupling site.
// Center coupling: Omega^2 / sqrt((z-2h)^2 - 4J^2); edge coupling is supported as well.
// Other sites throw CapabilityError.
ResolventPoint self_energy(cplx z, const SystemSpec& spec);

struct TdlAmplitude {
    std::vector<double> t;
    std::vector<cplx> C;
    double eta{1e-3};
    std::size_t panels{0};
    double cutoff{0.0};  // integration half-width around the band center
};

// C_e(t) from the resolvent on the line Im z = eta. Throws std::runtime_error when the
// adaptive panels do not converge.
TdlAmplitude vacuum_amplitude_tdl(const SystemSpec& spec, const TimeGrid& grid, double eta = 1e-3);

// Vacuum channel a = |C|^2, c = 0, b = C with engine tag "analytic".
ChannelTrajectory analytic_vacuum_channel(const SystemSpec& spec, const TimeGrid& grid, double eta = 1e-3);

struct BoundState {
    double energy{0.0};
    bool upper{false};
};

// Real roots of z - Delta - Sigma(z) = 0 outside the band.
std::vector<BoundState> bound_states(const SystemSpec& spec);

struct Frequency {
    std::string label;
    double value{0.0};
};

struct Beat {
    std::string first;
    std::string second;
    double value{0.0};
};

struct FrequencyLedger {
    std::vector<Frequency> lines;  // nu_r, nu_e+, nu_e-, nu_b+, nu_b-
    std::vector<Beat> beats;       // all |nu_i - nu_j|

    double line(const std::string& label) const;
    double beat(const std::string& a, const std::string& b) const;
};

FrequencyLedger contribution_frequencies(const SystemSpec& spec);

}  // namespace xymark
