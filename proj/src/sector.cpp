// sector.cpp — One-excitation sector engine and frequency analysis

#include "xymark/sector.hpp"

#include <algorithm>
#include <cmath>

namespace xymark {

Mat sector_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    const auto basis = diagonalize_environment(spec);
    const int N = spec.N;
    Mat H = Mat::Zero(N + 1, N + 1);
    H(0, 0) = spec.Delta;
    for (int k = 0; k < N; ++k) {
        H(k + 1, k + 1) = basis.E(k);
        H(0, k + 1) = H(k + 1, 0) = spec.Omega * basis.W(spec.m0 - 1, k);
    }
    return H;
}

double sector_echo_horizon(const SystemSpec& spec) { return echo_horizon(spec); }

SectorPropagator::SectorPropagator(const SystemSpec& spec) {
    Eigen::SelfAdjointEigenSolver<Mat> es(sector_hamiltonian(spec));
    eps_ = es.eigenvalues();
    Q_ = es.eigenvectors();
}

cplx SectorPropagator::amplitude(std::size_t i, std::size_t j, double t) const {
    cplx sum = 0.0;
    for (int n = 0; n < eps_.size(); ++n) sum += Q_(i, n) * Q_(j, n) * std::exp(cplx(0.0, -eps_(n) * t));
    return sum;
}

CVec SectorPropagator::evolve(std::size_t j, double t) const {
    CVec phases(eps_.size());
    for (int n = 0; n < eps_.size(); ++n) phases(n) = Q_(j, n) * std::exp(cplx(0.0, -eps_(n) * t));
    return Q_.cast<cplx>() * phases;
}

ChannelTrajectory evolve_vacuum(const SystemSpec& spec, const TimeGrid& grid) {
    const SectorPropagator prop(spec);
    ChannelTrajectory tr;
    tr.dt = grid.dt;
    tr.engine = "sector";
    tr.echo_horizon = sector_echo_horizon(spec);
    tr.echo_warning = grid.t_fin() > tr.echo_horizon;
    tr.samples.reserve(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double t = grid.t(n);
        const cplx Ce = (n == 0) ? cplx(1.0) : prop.amplitude(0, 0, t);
        tr.samples.push_back({t, std::norm(Ce), 0.0, Ce});
    }
    return tr;
}

RealSeries evolve_single_mode_c(const SystemSpec& spec, int k, const TimeGrid& grid) {
    if (k < 1 || k > spec.N) throw std::invalid_argument("mode index must satisfy 1 <= k <= N");
    const SectorPropagator prop(spec);
    RealSeries out;
    out.echo_horizon = sector_echo_horizon(spec);
    out.echo_warning = grid.t_fin() > out.echo_horizon;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        out.t.push_back(grid.t(n));
        out.values.push_back(n == 0 ? 0.0 : std::norm(prop.amplitude(0, static_cast<std::size_t>(k), grid.t(n))));
    }
    return out;
}

SpectrumResult frequency_analysis(const std::vector<double>& values, double dt, double t_start, double t_end,
                                  std::size_t max_peaks, int zero_pad) {
    if (!(dt > 0.0) || !(t_end > t_start)) throw std::invalid_argument("invalid analysis window");
    const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil(t_start / dt - 1e-9)));
    const auto hi = std::min(values.size() - 1, static_cast<std::size_t>(std::floor(t_end / dt + 1e-9)));
    if (values.empty() || hi <= lo + 2) throw std::invalid_argument("analysis window holds too few samples");
    const std::size_t M = hi - lo + 1;
    const double T = (M - 1) * dt;

    double mean = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) mean += values[i];
    mean /= static_cast<double>(M);
    std::vector<double> x(M);
    for (std::size_t i = 0; i < M; ++i) {
        const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * i / (M - 1)));
        x[i] = w * (values[lo + i] - mean);
    }

    const double w_min = 2.0 * kPi / T;
    const double w_max = kPi / dt;
    const double dw = 2.0 * kPi / (zero_pad * M * dt);
    std::vector<double> omega, mag;
    for (double w = 0.0; w <= w_max; w += dw) {
        cplx s = 0.0;
        const cplx step = std::exp(cplx(0.0, -w * dt));
        cplx ph = 1.0;
        for (std::size_t i = 0; i < M; ++i) {
            s += x[i] * ph;
            ph *= step;
        }
        omega.push_back(w);
        mag.push_back(std::abs(s));
    }

    SpectrumResult out;
    for (std::size_t i = 1; i + 1 < mag.size(); ++i) {
        if (omega[i] < w_min) continue;
        if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) {
            const double ym = mag[i - 1], y0 = mag[i], yp = mag[i + 1];
            const double denom = ym - 2.0 * y0 + yp;
            const double shift = (denom != 0.0) ? 0.5 * (ym - yp) / denom : 0.0;
            out.peaks.push_back({omega[i] + shift * dw, y0 - 0.25 * (ym - yp) * shift});
        }
    }
    std::sort(out.peaks.begin(), out.peaks.end(),
              [](const SpectralPeak& p, const SpectralPeak& q) { return p.magnitude > q.magnitude; });
    if (out.peaks.size() > max_peaks) out.peaks.resize(max_peaks);
    out.low_resolution = out.peaks.empty() || T < 2.0 * (2.0 * kPi / out.peaks.front().omega);
    return out;
}

}  // namespace xymark
