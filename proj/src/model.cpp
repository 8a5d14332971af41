// model.cpp — Chain diagonalization, occupations and spectral densities

#include "xymark/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace xymark {

void SystemSpec::validate() const {
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (!(J > 0.0)) throw std::invalid_argument("J must be > 0");
    if (m0 < 1 || m0 > N) throw std::invalid_argument("m0 must satisfy 1 <= m0 <= N");
    if (!std::isfinite(h) || !std::isfinite(Omega) || !std::isfinite(Delta)) {
        throw std::invalid_argument("h, Omega and Delta must be finite");
    }
}

std::string describe(const EnvInitialState& env) {
    std::ostringstream os;
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, VacuumEnv>) {
                os << "vacuum";
            } else if constexpr (std::is_same_v<T, GroundEnv>) {
                os << "ground(h=" << e.h_prep << ")";
            } else if constexpr (std::is_same_v<T, ThermalEnv>) {
                os << "thermal(beta=" << e.beta << ")";
            } else {
                os << "single_mode(k=" << e.k << ")";
            }
        },
        env);
    return os.str();
}

bool is_vacuum(const EnvInitialState& env) { return std::holds_alternative<VacuumEnv>(env); }

void validate(const EnvInitialState& env, const SystemSpec& spec) {
    if (const auto* t = std::get_if<ThermalEnv>(&env); t && !(t->beta > 0.0)) {
        throw std::invalid_argument("thermal state needs beta > 0");
    }
    if (const auto* s = std::get_if<SingleModeEnv>(&env); s && (s->k < 1 || s->k > spec.N)) {
        throw std::invalid_argument("single-mode index must satisfy 1 <= k <= N");
    }
}

ModeBasis diagonalize_environment(const SystemSpec& spec) {
    spec.validate();
    const int N = spec.N;
    ModeBasis basis{Mat(N, N), Vec(N)};
    const double norm = std::sqrt(2.0 / (N + 1));
    for (int k = 1; k <= N; ++k) {
        basis.E(k - 1) = 2.0 * spec.J * std::cos(kPi * k / (N + 1)) + 2.0 * spec.h;
        for (int j = 1; j <= N; ++j) {
            basis.W(k - 1, j - 1) = norm * std::sin(kPi * k * j / static_cast<double>(N + 1));
        }
    }
    return basis;
}

double echo_horizon(const SystemSpec& spec) {
    if (spec.m0 == 1 || spec.m0 == spec.N) return spec.N / spec.J;
    return std::min(spec.m0, spec.N + 1 - spec.m0) / spec.J;
}

Mat single_particle_environment(const SystemSpec& spec) {
    const int N = spec.N;
    Mat H = Mat::Zero(N, N);
    for (int i = 0; i < N; ++i) {
        H(i, i) = 2.0 * spec.h;
        if (i + 1 < N) H(i, i + 1) = H(i + 1, i) = spec.J;
    }
    return H;
}

double fermi(double x) {
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

namespace {

// Ground-state filling with the zero mode shared.
double step_filling(double E, double scale) {
    const double tol = 1e-12 * scale;
    if (E < -tol) return 1.0;
    if (E > tol) return 0.0;
    return 0.5;
}

}  // namespace

Occupations occupations(const SystemSpec& spec, const ModeBasis& basis, const EnvInitialState& env) {
    validate(env, spec);
    const int N = static_cast<int>(basis.E.size());
    Occupations occ{Vec::Zero(N)};
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, ThermalEnv>) {
                for (int k = 0; k < N; ++k) occ.f(k) = fermi(e.beta * basis.E(k));
            } else if constexpr (std::is_same_v<T, GroundEnv>) {
                for (int k = 0; k < N; ++k) {
                    const double Ek = basis.E(k) - 2.0 * spec.h + 2.0 * e.h_prep;
                    occ.f(k) = step_filling(Ek, spec.J);
                }
            } else if constexpr (std::is_same_v<T, SingleModeEnv>) {
                occ.f(e.k - 1) = 1.0;
            }
        },
        env);
    return occ;
}

double occupation_at(double E, const SystemSpec& spec, const EnvInitialState& env) {
    return std::visit(
        [&](const auto& e) -> double {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, VacuumEnv>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, ThermalEnv>) {
                return fermi(e.beta * E);
            } else if constexpr (std::is_same_v<T, GroundEnv>) {
                return step_filling(E - 2.0 * spec.h + 2.0 * e.h_prep, spec.J);
            } else {
                throw std::invalid_argument("single-mode states have no continuum occupation");
            }
        },
        env);
}

DensityValue density_of_states(double E, const SystemSpec& spec) {
    const double w = E - 2.0 * spec.h;
    const double gap = 4.0 * spec.J * spec.J - w * w;
    if (std::abs(w) > 2.0 * spec.J) return {0.0, false};
    if (gap <= 0.0) return {std::numeric_limits<double>::infinity(), true};
    return {1.0 / (kPi * std::sqrt(gap)), false};
}

DensityValue spectral_density(double E, const SystemSpec& spec) {
    if (spec.center_coupled()) return density_of_states(E, spec);
    if (spec.edge_coupled()) {
        const double w = E - 2.0 * spec.h;
        const double gap = 4.0 * spec.J * spec.J - w * w;
        if (gap <= 0.0) return {0.0, false};
        return {std::sqrt(gap) / (2.0 * kPi * spec.J * spec.J), false};
    }
    throw CapabilityError(
        "continuum spectral density is only available for center or edge coupling");
}

double spectral_density_broadened(double E, const SystemSpec& spec, const ModeBasis& basis,
                                  double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("broadening width must be > 0");
    const double norm = 1.0 / (std::sqrt(2.0 * kPi) * eta);
    double sum = 0.0;
    for (int k = 0; k < basis.E.size(); ++k) {
        const double w = basis.W(spec.m0 - 1, k);
        const double x = (E - basis.E(k)) / eta;
        sum += w * w * norm * std::exp(-0.5 * x * x);
    }
    return sum;
}

SelfConsistency self_consistency_metric(const SystemSpec& spec, const EnvInitialState& env) {
    spec.validate();
    SelfConsistency out;
    const double E0 = spec.Delta;
    const double w = E0 - 2.0 * spec.h;
    if (spec.Omega == 0.0) return out;
    if (std::abs(w) >= 2.0 * spec.J) {
        out.divergent = true;
        out.metric = out.metric_plus = out.metric_minus = std::numeric_limits<double>::infinity();
        return out;
    }
    auto alpha_plus = [&](double E) { return spectral_density(E, spec).value * occupation_at(E, spec, env); };
    auto alpha_minus = [&](double E) {
        return spectral_density(E, spec).value * (1.0 - occupation_at(E, spec, env));
    };
    const double D = spectral_density(E0, spec).value;
    const double f = occupation_at(E0, spec, env);
    const double two_pi_omega2 = 2.0 * kPi * spec.Omega * spec.Omega;
    out.Gamma_plus = two_pi_omega2 * D * f;
    out.Gamma_minus = two_pi_omega2 * D * (1.0 - f);
    const double Gamma = std::max(out.Gamma_plus, out.Gamma_minus);

    // Keep the stencil inside the band.
    const double room = 2.0 * spec.J - std::abs(w);
    const double step = std::min(1e-5 * spec.J, 0.25 * room);
    const double dplus = (alpha_plus(E0 + step) - alpha_plus(E0 - step)) / (2.0 * step);
    const double dminus = (alpha_minus(E0 + step) - alpha_minus(E0 - step)) / (2.0 * step);
    out.metric_plus = std::abs(dplus) * Gamma;
    out.metric_minus = std::abs(dminus) * Gamma;
    out.metric = std::max(out.metric_plus, out.metric_minus);
    return out;
}

}  // namespace xymark
