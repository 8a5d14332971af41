// model.hpp — Emitter + XY chain model: parameters, environment modes, occupations,
// densities of states and the weak-coupling self-consistency metric.
//
// Energies and times are in units where J sets the scale; nothing here assumes J = 1,
// but the CLI feeds J-scaled values.

#pragma once

#include <string>
#include <variant>

#include "xymark/types.hpp"

namespace xymark {

struct SystemSpec {
    int N{1};             // chain length
    double J{1.0};        // hopping
    double h{0.0};        // field along z
    double Omega{0.0};    // emitter-chain exchange coupling
    double Delta{0.0};    // emitter splitting
    int m0{1};            // coupling site, 1-based

    // Delta_h = Delta - 2h, always derived.
    double detuning() const { return Delta - 2.0 * h; }

    // Build from a detuning instead of the bare splitting.
    static SystemSpec with_detuning(int N, double J, double h, double Omega, double Delta_h, int m0) {
        return SystemSpec{N, J, h, Omega, Delta_h + 2.0 * h, m0};
    }

    bool edge_coupled() const { return m0 == 1; }
    // m0 = N/2 (even N) or (N+1)/2 (odd N).
    bool center_coupled() const { return m0 == (N + 1) / 2 || (N % 2 == 0 && m0 == N / 2); }

    void validate() const;
};

// Environment initial states. All of them commute with the fermion number.
struct VacuumEnv {};
struct GroundEnv {
    double h_prep{0.0};  // field at which the chain ground state is prepared
};
struct ThermalEnv {
    double beta{1.0};
};
struct SingleModeEnv {
    int k{1};  // 1-based mode index (k = N is the lowest mode)
};
using EnvInitialState = std::variant<VacuumEnv, GroundEnv, ThermalEnv, SingleModeEnv>;

std::string describe(const EnvInitialState& env);
bool is_vacuum(const EnvInitialState& env);
void validate(const EnvInitialState& env, const SystemSpec& spec);

// Sine transform W (symmetric, orthogonal) and mode energies E_k, k = 1..N stored at k-1.
struct ModeBasis {
    Mat W;
    Vec E;
};

ModeBasis diagonalize_environment(const SystemSpec& spec);

// Time at which excitations leaving m0 return from a chain end (the far end for edge coupling).
double echo_horizon(const SystemSpec& spec);

// Tridiagonal single-particle chain matrix: diagonal 2h, off-diagonal J.
Mat single_particle_environment(const SystemSpec& spec);

struct Occupations {
    Vec f;
};

Occupations occupations(const SystemSpec& spec, const ModeBasis& basis, const EnvInitialState& env);

// Occupation of a continuum level at energy E. Single-mode states have no continuum form.
double occupation_at(double E, const SystemSpec& spec, const EnvInitialState& env);

// Stable logistic 1 / (1 + exp(x)).
double fermi(double x);

struct DensityValue {
    double value{0.0};
    bool divergent{false};
};

DensityValue density_of_states(double E, const SystemSpec& spec);

// Continuum spectral density D(E) for center (D = n) or edge (m0 = 1) coupling.
DensityValue spectral_density(double E, const SystemSpec& spec);

// Finite-N estimate sum_k |W_{m0,k}|^2 g_eta(E - E_k) with a Gaussian of width eta.
double spectral_density_broadened(double E, const SystemSpec& spec, const ModeBasis& basis,
                                  double eta = 0.01);

struct SelfConsistency {
    double Gamma_plus{0.0};
    double Gamma_minus{0.0};
    double metric_plus{0.0};
    double metric_minus{0.0};
    double metric{0.0};
    bool divergent{false};
};

SelfConsistency self_consistency_metric(const SystemSpec& spec, const EnvInitialState& env);

}  // namespace xymark
