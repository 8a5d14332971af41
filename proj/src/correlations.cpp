// correlations.cpp — Correlation functions, kernels and correlation times

#include "xymark/correlations.hpp"

#include <algorithm>
#include <cmath>

namespace xymark {

namespace {

// e^{i s h t} for real symmetric h = Q diag(e) Q^T.
CMat expi(const Mat& Q, const Vec& e, double s) {
    CVec ph(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) ph(k) = std::exp(cplx(0.0, s * e(k)));
    return Q.cast<cplx>() * ph.asDiagonal() * Q.transpose().cast<cplx>();
}

// det(M) M^{-1}. LU when M is well conditioned, otherwise the SVD so it stays finite near singular M.
CMat adjugate(const CMat& M, cplx& det) {
    const auto n = M.rows();
    Eigen::PartialPivLU<CMat> lu(M);
    if (lu.rcond() > 1e-8) {
        det = lu.determinant();
        return det * lu.inverse();
    }
    Eigen::BDCSVD<CMat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec& s = svd.singularValues();
    const cplx phase = svd.matrixU().determinant() * std::conj(svd.matrixV().determinant());
    Vec cof(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double p = 1.0;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) p *= s(j);
        cof(i) = p;
    }
    det = phase * s.prod();
    return phase * svd.matrixV() * cof.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

SystemSpec resized(const SystemSpec& spec, int N) {
    SystemSpec s = spec;
    s.N = N;
    s.m0 = spec.edge_coupled() ? 1 : (N + 1) / 2;
    return s;
}

}  // namespace

CorrelationSeries correlation_ns(const SystemSpec& spec, const Occupations& occ, const TimeGrid& grid) {
    const auto basis = diagonalize_environment(spec);
    if (occ.f.size() != spec.N) throw std::invalid_argument("occupation vector size must equal N");
    CorrelationSeries out;
    out.provenance = "ns_sum";
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double t = grid.t(n);
        cplx p = 0.0, m = 0.0;
        for (int k = 0; k < spec.N; ++k) {
            const double w2 = basis.W(spec.m0 - 1, k) * basis.W(spec.m0 - 1, k);
            p += w2 * occ.f(k) * std::exp(cplx(0.0, basis.E(k) * t));
            m += w2 * (1.0 - occ.f(k)) * std::exp(cplx(0.0, -basis.E(k) * t));
        }
        out.t.push_back(t);
        out.plus.push_back(p);
        out.minus.push_back(m);
    }
    return out;
}

CorrelationSeries correlation_gaussian(const SystemSpec& spec, double beta, const TimeGrid& grid) {
    spec.validate();
    if (!(beta > 0.0)) throw std::invalid_argument("thermal state needs beta > 0");
    const int N = spec.N;
    const int m = spec.m0 - 1;
    const auto basis = diagonalize_environment(spec);
    const Mat& W = basis.W;  // rows are modes
    const Mat Q = W.transpose();
    Vec f(N);
    for (int k = 0; k < N; ++k) f(k) = fermi(beta * basis.E(k));
    const CMat n = (Q * f.asDiagonal() * Q.transpose()).cast<cplx>();
    // Sites before m0 carry the string: h' = V h V with V = diag(-1 for i < m0).
    Mat Qv = Q;
    Qv.topRows(m) *= -1.0;

    const CMat one = CMat::Identity(N, N);
    CorrelationSeries out;
    out.provenance = "gaussian_trace";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.t(i);
        const CMat fwd = expi(Q, basis.E, t);     // e^{iht}
        const CMat bwd = expi(Q, basis.E, -t);    // e^{-iht}
        const CMat K = expi(Qv, basis.E, -t) * fwd;
        const CMat M = one - n + n * K;
        cplx det;
        const CMat adj = adjugate(M, det);
        const cplx p = (fwd * adj * n)(m, m);
        const cplx mi = det * (K * bwd)(m, m) - (K * adj * n * K * bwd)(m, m);
        out.t.push_back(t);
        out.plus.push_back(p);
        out.minus.push_back(mi);
    }
    return out;
}

ConvergedCorrelation correlation_gaussian_converged(const SystemSpec& spec, double beta, const TimeGrid& grid,
                                                    double tol, int N_max) {
    ConvergedCorrelation out;
    out.N = spec.N;
    out.series = correlation_gaussian(spec, beta, grid);
    out.deviation = std::numeric_limits<double>::infinity();
    while (2 * out.N <= N_max) {
        const int N2 = 2 * out.N;
        auto next = correlation_gaussian(resized(spec, N2), beta, grid);
        double dev = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            dev = std::max({dev, std::abs(next.plus[i] - out.series.plus[i]),
                            std::abs(next.minus[i] - out.series.minus[i])});
        }
        out.series = std::move(next);
        out.N = N2;
        out.deviation = dev;
        if (dev < tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

CorrelationSeries closed_form_infinite_T(const SystemSpec& spec, const TimeGrid& grid) {
    spec.validate();
    const bool center = spec.center_coupled() && !spec.edge_coupled();
    if (!center && !spec.edge_coupled()) {
        throw CapabilityError("infinite-temperature closed forms exist for center or edge coupling only");
    }
    CorrelationSeries out;
    out.provenance = "closed_form_infinite_T";
    const double J = spec.J;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.t(i);
        double env;
        if (center) {
            env = 0.5 * std::exp(-J * J * t * t);
        } else {
            const double x = 2.0 * J * t;
            env = (x == 0.0) ? 0.5 : std::cyl_bessel_j(1.0, x) / x;
        }
        out.t.push_back(t);
        out.plus.push_back(env * std::exp(cplx(0.0, 2.0 * spec.h * t)));
        out.minus.push_back(env * std::exp(cplx(0.0, -2.0 * spec.h * t)));
    }
    return out;
}

KernelSeries kernels(const CorrelationSeries& series, double Delta) {
    KernelSeries k;
    k.t = series.t;
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        const cplx rot = std::exp(cplx(0.0, -Delta * series.t[i]));
        k.z_plus.push_back(series.plus[i] * rot);
        k.z_minus.push_back(series.minus[i] * std::conj(rot));
        k.plus.push_back(k.z_plus.back().real());
        k.minus.push_back(k.z_minus.back().real());
    }
    return k;
}

CorrelationTime correlation_time(const std::vector<double>& t, const std::vector<cplx>& z, double Omega) {
    if (t.size() != z.size() || t.empty()) throw std::invalid_argument("kernel series is empty or misaligned");
    std::vector<double> env(z.size());
    std::transform(z.begin(), z.end(), env.begin(), [](cplx v) { return std::abs(v); });
    const double peak = *std::max_element(env.begin(), env.end());
    CorrelationTime out;
    if (peak == 0.0) return out;
    const double thr = peak * std::exp(-1.0);
    if (env.back() >= thr) {
        out.no_decay = true;
        out.tau_c = out.omega_tau = std::numeric_limits<double>::infinity();
    } else {
        std::size_t last = env.size() - 1;
        while (last > 0 && env[last - 1] < thr) --last;
        // Linear interpolation of the crossing.
        if (last > 0) {
            const double e0 = env[last - 1], e1 = env[last];
            out.tau_c = t[last - 1] + (e0 - thr) / (e0 - e1) * (t[last] - t[last - 1]);
        } else {
            out.tau_c = t[0];
        }
        out.omega_tau = Omega * out.tau_c;
    }
    const std::size_t tail = env.size() - std::max<std::size_t>(1, env.size() / 10);
    out.power_law = *std::max_element(env.begin() + static_cast<long>(tail), env.end()) > 1e-3 * peak;
    return out;
}

}  // namespace xymark
