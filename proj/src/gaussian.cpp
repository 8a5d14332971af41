// gaussian.cpp — Single-particle propagation for the edge-coupled channel

#include "xymark/gaussian.hpp"

#include <algorithm>
#include <cmath>

namespace xymark {

Mat single_particle_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    const int N = spec.N;
    Mat H = Mat::Zero(N + 1, N + 1);
    H(0, 0) = spec.Delta;
    H(0, 1) = H(1, 0) = spec.Omega;
    H.bottomRightCorner(N, N) = single_particle_environment(spec);
    return H;
}

Mat env_hole_matrix(const SystemSpec& spec, const EnvInitialState& env) {
    const auto basis = diagonalize_environment(spec);
    const auto occ = occupations(spec, basis, env);
    const Vec holes = (1.0 - occ.f.array()).matrix();
    return basis.W.transpose() * holes.asDiagonal() * basis.W;
}

ChannelTrajectory channel_m01(const SystemSpec& spec, const EnvInitialState& env, const TimeGrid& grid) {
    spec.validate();
    if (!spec.edge_coupled()) throw CapabilityError("gaussian engine needs edge coupling (m0 = 1)");
    validate(env, spec);
    const int N = spec.N;
    Eigen::SelfAdjointEigenSolver<Mat> es(single_particle_hamiltonian(spec));
    const Vec& lam = es.eigenvalues();
    const Mat& V = es.eigenvectors();

    // Row 0 of P(t) = V e^{-i lam t} V^T is p_j = sum_n V_0n e^{-i lam_n t} V_jn. Its chain part in the
    // mode basis is q = G^T e^{-i lam t}. Unitarity gives |p_0|^2 + |q|^2 = 1, so the hole term
    // 1 - a = sum (1 - f) |q|^2 is replaced by c = sum f |q|^2, which keeps relative precision when a is tiny.
    const auto basis = diagonalize_environment(spec);
    const auto occ = occupations(spec, basis, env);
    const Vec v0 = V.row(0).transpose();
    const Mat G = v0.asDiagonal() * (V.bottomRows(N).transpose() * basis.W.transpose());  // (N+1) x N
    std::vector<int> filled;
    for (int k = 0; k < N; ++k)
        if (occ.f(k) > 0.0) filled.push_back(k);
    Mat Gf(N + 1, filled.size());
    Vec ff(filled.size());
    for (std::size_t i = 0; i < filled.size(); ++i) {
        Gf.col(i) = G.col(filled[i]);
        ff(i) = occ.f(filled[i]);
    }

    ChannelTrajectory tr;
    tr.dt = grid.dt;
    tr.engine = "gaussian";
    tr.echo_horizon = echo_horizon(spec);
    tr.echo_warning = grid.t_fin() > tr.echo_horizon;
    tr.samples.reserve(grid.size());
    CVec ph(N + 1);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double t = grid.t(n);
        for (int k = 0; k <= N; ++k) ph(k) = std::exp(cplx(0.0, -lam(k) * t));
        const cplx b = (n == 0) ? cplx(1.0) : (v0.cwiseAbs2().cast<cplx>().array() * ph.array()).sum();
        const double c = (n == 0 || filled.empty())
                             ? 0.0
                             : (ff.array() * (Gf.transpose().cast<cplx>() * ph).array().abs2()).sum();
        const double a = std::norm(b) + c;
        tr.samples.push_back({t, a, c, b});
    }
    return tr;
}

double env_independence_check(const SystemSpec& spec, const std::vector<EnvInitialState>& envs,
                              const TimeGrid& grid) {
    std::vector<ChannelTrajectory> runs;
    for (const auto& e : envs) runs.push_back(channel_m01(spec, e, grid));
    double worst = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& r : runs) {
            const double d = r.samples[n].a - r.samples[n].c;
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        if (!runs.empty()) worst = std::max(worst, hi - lo);
    }
    return worst;
}

MarkovPoint blp_markov_point(double Omega, double J) {
    if (!(J > 0.0) || !(Omega >= 0.0)) throw std::invalid_argument("need J > 0 and Omega >= 0");
    return {2.0 * J - Omega * Omega / J, Omega / J > 1.0};
}

}  // namespace xymark
