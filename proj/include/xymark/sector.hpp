// sector.hpp — Exact evolution in the one-excitation sector, plus spectral peak finding

#pragma once

#include <vector>

#include "xymark/channel.hpp"
#include "xymark/model.hpp"

namespace xymark {

// Basis {|e,0>, |g,k>, k = 1..N}: diagonal (Delta, E_k), couplings Omega W_{m0,k}.
Mat sector_hamiltonian(const SystemSpec& spec);

// Time after which a wave front leaving m0 can return from the chain ends.
double sector_echo_horizon(const SystemSpec& spec);

class SectorPropagator {
public:
    explicit SectorPropagator(const SystemSpec& spec);

    // <i| e^{-iHt} |j> in the sector basis (0 = |e,0>, k = |g,k>).
    cplx amplitude(std::size_t i, std::size_t j, double t) const;
    // Full state at time t from basis vector |j>.
    CVec evolve(std::size_t j, double t) const;

    const Vec& energies() const { return eps_; }
    const Mat& eigenvectors() const { return Q_; }

private:
    Vec eps_;
    Mat Q_;
};

// a = |C_e|^2, b = C_e, c = 0.
ChannelTrajectory evolve_vacuum(const SystemSpec& spec, const TimeGrid& grid);

struct RealSeries {
    std::vector<double> t;
    std::vector<double> values;
    double echo_horizon{0.0};
    bool echo_warning{false};
};

// c(t) = |<e,0| e^{-iHt} |g,k>|^2 for one initially occupied mode k (1-based).
RealSeries evolve_single_mode_c(const SystemSpec& spec, int k, const TimeGrid& grid);

struct SpectralPeak {
    double omega{0.0};      // angular frequency
    double magnitude{0.0};
};

struct SpectrumResult {
    std::vector<SpectralPeak> peaks;   // strongest first
    bool low_resolution{false};
};

// Peaks of the Hann-windowed, mean-removed spectrum of values[n] at t = n dt,
// restricted to t in [t_start, t_end].
SpectrumResult frequency_analysis(const std::vector<double>& values, double dt, double t_start, double t_end,
                                  std::size_t max_peaks = 3, int zero_pad = 16);

}  // namespace xymark
