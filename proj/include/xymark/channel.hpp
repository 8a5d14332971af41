// channel.hpp — Qubit dynamical maps: map matrices, Choi states, step maps,
// log-branch robustness, rate extraction and the non-Markovianity degree.
//
// Superoperators act on column-stacked density matrices, vec(rho)[i + d*j] = rho_ij,
// with the excited level first (e = 0, g = 1). Then vec(A rho B) = (B^T kron A) vec(rho).

#pragma once

#include <string>
#include <vector>

#include "xymark/types.hpp"

namespace xymark {

struct ChannelSample {
    double t{0.0};
    double a{1.0};   // excited population, excited start
    double c{0.0};   // excited population, ground start
    cplx b{1.0};     // rho_eg(t) = b rho_eg(0)
};

struct ChannelTrajectory {
    double dt{0.0};
    std::vector<ChannelSample> samples;
    std::string engine;
    double echo_horizon{0.0};   // time after which finite-size echoes are expected (0 = none)
    bool echo_warning{false};   // grid extends past echo_horizon

    double t_fin() const { return samples.empty() ? 0.0 : samples.back().t; }
    // Uniform spacing and identity first sample; throws std::invalid_argument otherwise.
    void validate(double tol = 1e-9) const;
};

CMat build_map_matrix(const ChannelSample& s);
ChannelSample sample_from_map(const CMat& T, double t = 0.0);

// Reshuffled matrix <ij|T^G|kl> = <ik|T|jl> in the column-stacked convention.
CMat choi(const CMat& T);
// d from a d^2 x d^2 superoperator.
int map_dimension(const CMat& T);
// |omega> = sum_i |ii> / sqrt(d).
CVec omega_vector(int d);
// Operator L_{jl} = v[j*d + l].
CMat reshape_operator(const CVec& v, int d);

struct StepMap {
    CMat dT;
    bool singular{false};
};

// dT = T_next T_t^{-1}; pseudoinverse below 1e-10 sigma_max.
StepMap step_channel(const CMat& T_t, const CMat& T_next, double rcond = 1e-10);

struct StepFlags {
    bool nonhermitian_log{false};
    bool negative_real_eigenvalue{false};
    bool singular_map{false};
};

struct StepRobustness {
    double mu{0.0};          // rate-normalized robustness (1/time)
    bool infinite{false};
    StepFlags flags;
    double lambda_min{0.0};  // smallest eigenvalue of the best branch, per step
    double max_branch_norm{0.0};  // largest |A_c| encountered
    int branch_pairs{0};
};

StepRobustness robustness_step(const CMat& dT, double dt, int branch_window = 2,
                               double zero_tol = 1e-12);

struct LindbladTerm {
    double gamma{0.0};
    CMat L;
};

struct GenericRates {
    std::vector<LindbladTerm> terms;   // nonzero rates, |lambda| > tol
    std::vector<double> spectrum;      // all d^2 - 1 rates orthogonal to omega, ascending
    bool nonhermitian{false};
};

GenericRates extract_rates_generic(const CMat& dT, double dt, double tol = 1e-12);

struct RateSample {
    double t{0.0};
    double E_LS{0.0};
    double gamma1{0.0};
    double gamma2{0.0};
    double gamma3{0.0};
    double mu{0.0};
    bool mu_infinite{false};
    bool divergent{false};     // a - c vanishes or changes sign in the stencil
    bool phase_unwrap{false};  // |b| too small for a reliable phase
};

// Finite-difference rates of the block master equation.
std::vector<RateSample> rates_analytic(const ChannelTrajectory& traj, double rate_tol = 1e-9);

struct RobustnessResult {
    std::vector<double> mu;   // per step (n = 1..K), finite entries only meaningful
    std::vector<bool> infinite;
    double mu_bar{0.0};
    double degree{0.0};
    bool any_infinite{false};
    StepFlags flags;
};

RobustnessResult degree(const std::vector<double>& mu, const std::vector<bool>& infinite, int d = 2);
// Samples 1..K of an analytic rate series.
RobustnessResult degree(const std::vector<RateSample>& rates, int d = 2);
// Step-by-step generic path over the whole trajectory.
RobustnessResult robustness_trajectory(const ChannelTrajectory& traj, int branch_window = 2);

double degree_from_mu_bar(double mu_bar, int d = 2);

// Generator for d rho/dt = -i[H, rho] + sum_i gamma_i D[L_i] rho.
CMat lindblad_generator(const CMat& H, const std::vector<LindbladTerm>& terms);

// Qubit operators in the (e, g) basis.
CMat tau_z();
CMat tau_plus();
CMat tau_minus();

// Block generator with energy E_LS and rates on tau_z, tau+, tau-.
CMat block_generator(double E_LS, double gamma1, double gamma2, double gamma3);

// Integrates the block master equation with the given rate series (linear
// interpolation between samples, RK4), starting from the identity channel.
ChannelTrajectory reintegrate(const std::vector<RateSample>& rates, int substeps = 1);

}  // namespace xymark
