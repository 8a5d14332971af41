// correlations.hpp — Chain correlation functions at the coupling site, kernels and correlation times
//
// alpha_plus(t)  = tr(rho_E sigma+_{m0}(0) sigma-_{m0}(-t))
// alpha_minus(t) = tr(rho_E sigma-_{m0}(0) sigma+_{m0}(-t)),  X(-t) = e^{-iHt} X e^{iHt}.

#pragma once

#include <string>
#include <vector>

#include "xymark/model.hpp"

namespace xymark {

struct CorrelationSeries {
    std::vector<double> t;
    std::vector<cplx> plus;
    std::vector<cplx> minus;
    std::string provenance;  // "ns_sum", "gaussian_trace", "closed_form_infinite_T"
};

// Mode sum without the string operator; exact for m0 = 1 or the vacuum.
CorrelationSeries correlation_ns(const SystemSpec& spec, const Occupations& occ, const TimeGrid& grid);

// Thermal chain, any m0. Fermionic Gaussian traces with the string as a sign flip of sites < m0.
CorrelationSeries correlation_gaussian(const SystemSpec& spec, double beta, const TimeGrid& grid);

struct ConvergedCorrelation {
    CorrelationSeries series;
    int N{0};
    double deviation{0.0};  // last doubling change, max over t
    bool converged{false};
};

// Doubles N (keeping edge or center coupling) until the result changes by less than tol.
ConvergedCorrelation correlation_gaussian_converged(const SystemSpec& spec, double beta, const TimeGrid& grid,
                                                    double tol = 1e-6, int N_max = 512);

// Infinite-temperature closed forms for center (Gaussian) and edge (Bessel) coupling.
CorrelationSeries closed_form_infinite_T(const SystemSpec& spec, const TimeGrid& grid);

struct KernelSeries {
    std::vector<double> t;
    std::vector<double> plus;   // Re z_plus
    std::vector<double> minus;  // Re z_minus
    std::vector<cplx> z_plus;   // alpha_plus e^{-i Delta t}
    std::vector<cplx> z_minus;  // alpha_minus e^{+i Delta t}
};

KernelSeries kernels(const CorrelationSeries& series, double Delta);

struct CorrelationTime {
    double tau_c{0.0};
    double omega_tau{0.0};
    bool no_decay{false};   // envelope never settles below e^{-1} of its maximum
    bool power_law{false};  // tail of the envelope above 1e-3 of its maximum
};

// tau_c is the first time after which |z| stays below e^{-1} max|z|.
CorrelationTime correlation_time(const std::vector<double>& t, const std::vector<cplx>& z, double Omega);

}  // namespace xymark
