// channel.cpp — Map matrices, Choi states, robustness and rate extraction

#include "xymark/channel.hpp"
#include "xymark/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace xymark {

void ChannelTrajectory::validate(double tol) const {
    if (samples.empty()) throw std::invalid_argument("empty channel trajectory");
    if (!(dt > 0.0)) throw std::invalid_argument("trajectory dt must be > 0");
    const auto& s0 = samples.front();
    if (std::abs(s0.t) > tol || std::abs(s0.a - 1.0) > tol || std::abs(s0.c) > tol ||
        std::abs(s0.b - 1.0) > tol) {
        throw std::invalid_argument("first sample must be the identity channel at t = 0");
    }
    for (std::size_t n = 1; n < samples.size(); ++n) {
        if (std::abs(samples[n].t - samples[n - 1].t - dt) > tol * std::max(1.0, dt)) {
            throw std::invalid_argument("trajectory samples are not uniformly spaced");
        }
    }
}

CMat build_map_matrix(const ChannelSample& s) {
    CMat T = CMat::Zero(4, 4);
    T(0, 0) = s.a;
    T(0, 3) = s.c;
    T(1, 1) = std::conj(s.b);
    T(2, 2) = s.b;
    T(3, 0) = 1.0 - s.a;
    T(3, 3) = 1.0 - s.c;
    return T;
}

ChannelSample sample_from_map(const CMat& T, double t) {
    return ChannelSample{t, T(0, 0).real(), T(0, 3).real(), T(2, 2)};
}

int map_dimension(const CMat& T) {
    const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(T.rows()))));
    if (d * d != T.rows() || T.rows() != T.cols()) {
        throw std::invalid_argument("superoperator must be d^2 x d^2");
    }
    return d;
}

CMat choi(const CMat& T) {
    const int d = map_dimension(T);
    CMat C(d * d, d * d);
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s) C(p * d + r, q * d + s) = T(p + d * q, r + d * s);
    return C;
}

CVec omega_vector(int d) {
    CVec w = CVec::Zero(d * d);
    for (int i = 0; i < d; ++i) w(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    return w;
}

CMat reshape_operator(const CVec& v, int d) {
    CMat L(d, d);
    for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) L(j, l) = v(j * d + l);
    return L;
}

StepMap step_channel(const CMat& T_t, const CMat& T_next, double rcond) {
    Eigen::JacobiSVD<CMat> svd(T_t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = rcond * sv(0);
    StepMap out;
    Vec inv = Vec::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut) {
            inv(i) = 1.0 / sv(i);
        } else {
            out.singular = true;
        }
    }
    const CMat pinv = svd.matrixV() * inv.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
    out.dT = T_next * pinv;
    return out;
}

namespace {

CMat hermitian_part(const CMat& A) { return 0.5 * (A + A.adjoint()); }

bool is_hermitian(const CMat& A) {
    return (A - A.adjoint()).norm() <= 1e-10 + 1e-8 * A.norm();
}

CMat omega_perp(int d) {
    const CVec w = omega_vector(d);
    return CMat::Identity(d * d, d * d) - w * w.adjoint();
}

double min_eigenvalue(const CMat& A) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(A), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

}  // namespace

StepRobustness robustness_step(const CMat& dT, double dt, int branch_window, double zero_tol) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    if (branch_window < 0) throw std::invalid_argument("branch window must be >= 0");
    const int d = map_dimension(dT);
    const int n = d * d;
    StepRobustness out;

    Eigen::ComplexEigenSolver<CMat> es(dT);
    const CVec lam = es.eigenvalues();
    const CMat V = es.eigenvectors();

    std::vector<int> partner(n, -1);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(lam(i)));
        if (std::abs(lam(i).imag()) <= tol) {
            if (lam(i).real() < 0.0) out.flags.negative_real_eigenvalue = true;
            continue;
        }
        if (partner[i] >= 0 || lam(i).imag() < 0.0) continue;
        int best = -1;
        double dist = 1e-9 * std::max(1.0, std::abs(lam(i)));
        for (int j = 0; j < n; ++j) {
            if (j == i || partner[j] >= 0 || lam(j).imag() >= 0.0) continue;
            const double dj = std::abs(lam(j) - std::conj(lam(i)));
            if (dj <= dist) {
                dist = dj;
                best = j;
            }
        }
        if (best < 0) {
            out.flags.nonhermitian_log = true;
            continue;
        }
        partner[i] = best;
        partner[best] = i;
        pairs.emplace_back(i, best);
    }
    for (int i = 0; i < n; ++i) {
        if (std::abs(lam(i).imag()) > 1e-12 * std::max(1.0, std::abs(lam(i))) && partner[i] < 0) {
            out.flags.nonhermitian_log = true;
        }
    }
    if (out.flags.negative_real_eigenvalue || out.flags.nonhermitian_log) {
        out.infinite = true;
        out.mu = std::numeric_limits<double>::infinity();
        return out;
    }

    const CMat L0 = dT.log();
    const CMat C0 = choi(L0);
    if (!is_hermitian(C0)) {
        out.flags.nonhermitian_log = true;
        out.infinite = true;
        out.mu = std::numeric_limits<double>::infinity();
        return out;
    }
    const CMat Wp = omega_perp(d);
    const CMat A0 = hermitian_part(Wp * C0 * Wp);

    std::vector<CMat> Ac;
    if (!pairs.empty()) {
        Eigen::FullPivLU<CMat> lu(V);
        const CMat Vinv = lu.inverse();
        for (const auto& [c, cbar] : pairs) {
            const CMat P = V.col(c) * Vinv.row(c) - V.col(cbar) * Vinv.row(cbar);
            CMat A = hermitian_part(2.0 * kPi * kI * (Wp * choi(P) * Wp));
            out.max_branch_norm = std::max(out.max_branch_norm, A.norm());
            Ac.push_back(std::move(A));
        }
    }
    out.branch_pairs = static_cast<int>(Ac.size());

    double best = min_eigenvalue(A0);
    if (!Ac.empty() && branch_window > 0) {
        std::vector<int> m(Ac.size(), -branch_window);
        for (;;) {
            CMat A = A0;
            for (std::size_t c = 0; c < Ac.size(); ++c) A += static_cast<double>(m[c]) * Ac[c];
            best = std::max(best, min_eigenvalue(A));
            std::size_t k = 0;
            while (k < m.size() && m[k] == branch_window) m[k++] = -branch_window;
            if (k == m.size()) break;
            ++m[k];
        }
    }
    out.lambda_min = best;
    out.mu = (-best > zero_tol) ? d * (-best) / dt : 0.0;
    return out;
}

GenericRates extract_rates_generic(const CMat& dT, double dt, double tol) {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
    const int d = map_dimension(dT);
    GenericRates out;
    const CMat C = choi(dT.log());
    if (!is_hermitian(C)) out.nonhermitian = true;
    const CMat Wp = omega_perp(d);
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(Wp * C * Wp));
    const CVec w = omega_vector(d);

    int skip = 0;
    double overlap = -1.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double o = std::abs(w.dot(es.eigenvectors().col(i)));
        if (o > overlap) {
            overlap = o;
            skip = i;
        }
    }
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        if (i == skip) continue;
        const double lambda = es.eigenvalues()(i);
        const CVec v = es.eigenvectors().col(i);
        out.spectrum.push_back(lambda / dt);
        if (std::abs(lambda) > tol) {
            CMat L = reshape_operator(v, d);
            const double norm = (L.adjoint() * L).trace().real();
            out.terms.push_back({lambda / (norm * dt), std::move(L)});
        }
    }
    return out;
}

std::vector<RateSample> rates_analytic(const ChannelTrajectory& traj, double rate_tol) {
    traj.validate();
    const auto& s = traj.samples;
    const std::size_t n = s.size();
    const double dt = traj.dt;

    std::vector<double> a(n), c(n), log_gap(n), log_b2(n);
    std::vector<cplx> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = s[i].a;
        c[i] = s[i].c;
        b[i] = s[i].b;
        log_gap[i] = std::log(std::abs(s[i].a - s[i].c));
        log_b2[i] = std::log(std::norm(s[i].b));
    }
    const auto phase = unwrapped_phase(b);
    const auto da = derivative(a, dt);
    const auto dc = derivative(c, dt);
    const auto dphase = derivative(phase, dt);
    const auto dgap = derivative(log_gap, dt);
    const auto db2 = derivative(log_b2, dt);

    std::vector<RateSample> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        RateSample& r = out[i];
        r.t = s[i].t;
        const double gap = a[i] - c[i];
        const std::size_t lo = (i == 0) ? 0 : i - 1;
        const std::size_t hi = std::min(n - 1, i + 1);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double g = a[j] - c[j];
            if (std::abs(g) < 1e-12 || (g > 0.0) != (gap > 0.0)) r.divergent = true;
        }
        for (std::size_t j = lo; j <= hi; ++j) {
            if (std::abs(s[j].b) < 1e-8) r.phase_unwrap = true;
        }
        r.E_LS = -dphase[i];
        r.gamma1 = 0.25 * (dgap[i] - db2[i]);
        r.gamma2 = (a[i] * dc[i] - c[i] * da[i]) / gap;
        r.gamma3 = (dc[i] * (1.0 - a[i]) - da[i] * (1.0 - c[i])) / gap;
        const double gmin = std::min({2.0 * r.gamma1, r.gamma2, r.gamma3});
        if (!std::isfinite(gmin)) {
            r.mu_infinite = true;
            r.mu = std::numeric_limits<double>::infinity();
        } else {
            r.mu = (gmin < -rate_tol) ? -2.0 * gmin : 0.0;
        }
    }
    return out;
}

double degree_from_mu_bar(double mu_bar, int d) {
    return 1.0 - std::exp(mu_bar * (1.0 - static_cast<double>(d) * d));
}

RobustnessResult degree(const std::vector<double>& mu, const std::vector<bool>& infinite, int d) {
    if (mu.size() != infinite.size()) throw std::invalid_argument("mu and flag lengths differ");
    RobustnessResult out;
    out.mu = mu;
    out.infinite = infinite;
    double sum = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (infinite[i]) {
            out.any_infinite = true;
        } else {
            sum += mu[i];
        }
    }
    out.mu_bar = mu.empty() ? 0.0 : sum / static_cast<double>(mu.size());
    out.degree = out.any_infinite ? 1.0 : degree_from_mu_bar(out.mu_bar, d);
    return out;
}

RobustnessResult degree(const std::vector<RateSample>& rates, int d) {
    std::vector<double> mu;
    std::vector<bool> inf;
    for (std::size_t i = 1; i < rates.size(); ++i) {
        mu.push_back(rates[i].mu_infinite ? 0.0 : rates[i].mu);
        inf.push_back(rates[i].mu_infinite);
    }
    return degree(mu, inf, d);
}

RobustnessResult robustness_trajectory(const ChannelTrajectory& traj, int branch_window) {
    traj.validate();
    std::vector<double> mu;
    std::vector<bool> inf;
    StepFlags flags;
    CMat prev = build_map_matrix(traj.samples.front());
    for (std::size_t n = 1; n < traj.samples.size(); ++n) {
        const CMat next = build_map_matrix(traj.samples[n]);
        const StepMap step = step_channel(prev, next);
        StepRobustness r = robustness_step(step.dT, traj.dt, branch_window);
        r.flags.singular_map = step.singular;
        flags.singular_map |= r.flags.singular_map;
        flags.nonhermitian_log |= r.flags.nonhermitian_log;
        flags.negative_real_eigenvalue |= r.flags.negative_real_eigenvalue;
        mu.push_back(r.infinite ? 0.0 : r.mu);
        inf.push_back(r.infinite);
        prev = next;
    }
    RobustnessResult out = degree(mu, inf, 2);
    out.flags = flags;
    return out;
}

CMat lindblad_generator(const CMat& H, const std::vector<LindbladTerm>& terms) {
    const int d = static_cast<int>(H.rows());
    const CMat I = CMat::Identity(d, d);
    CMat G = -kI * (CMat(Eigen::kroneckerProduct(I, H)) - CMat(Eigen::kroneckerProduct(H.transpose(), I)));
    for (const auto& term : terms) {
        const CMat LdL = term.L.adjoint() * term.L;
        G += term.gamma * (CMat(Eigen::kroneckerProduct(term.L.conjugate(), term.L)) -
                           0.5 * CMat(Eigen::kroneckerProduct(I, LdL)) -
                           0.5 * CMat(Eigen::kroneckerProduct(LdL.transpose(), I)));
    }
    return G;
}

CMat tau_z() {
    CMat m = CMat::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

CMat tau_plus() {
    CMat m = CMat::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

CMat tau_minus() {
    CMat m = CMat::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

CMat block_generator(double E_LS, double gamma1, double gamma2, double gamma3) {
    const CMat H = E_LS * tau_plus() * tau_minus();
    return lindblad_generator(H, {{gamma1, tau_z()}, {gamma2, tau_plus()}, {gamma3, tau_minus()}});
}

namespace {

struct BlockState {
    double a, c;
    cplx b;
};

BlockState operator+(const BlockState& x, const BlockState& y) { return {x.a + y.a, x.c + y.c, x.b + y.b}; }
BlockState operator*(double s, const BlockState& x) { return {s * x.a, s * x.c, s * x.b}; }

BlockState block_rhs(const BlockState& y, double E, double g1, double g2, double g3) {
    const double s = g2 + g3;
    return {g2 - s * y.a, g2 - s * y.c, -(kI * E + 2.0 * g1 + 0.5 * s) * y.b};
}

}  // namespace

ChannelTrajectory reintegrate(const std::vector<RateSample>& rates, int substeps) {
    if (rates.size() < 2) throw std::invalid_argument("need at least two rate samples");
    if (substeps < 1) throw std::invalid_argument("substeps must be >= 1");
    ChannelTrajectory out;
    out.dt = rates[1].t - rates[0].t;
    out.engine = "reintegrated";
    BlockState y{1.0, 0.0, cplx{1.0, 0.0}};
    out.samples.push_back({rates[0].t, y.a, y.c, y.b});
    for (std::size_t n = 0; n + 1 < rates.size(); ++n) {
        const RateSample& r0 = rates[n];
        const RateSample& r1 = rates[n + 1];
        const double span = r1.t - r0.t;
        const double h = span / substeps;
        auto f = [&](double x, const BlockState& st) {
            const double w = x / span;
            auto lerp = [&](double p, double q) { return (1.0 - w) * p + w * q; };
            return block_rhs(st, lerp(r0.E_LS, r1.E_LS), lerp(r0.gamma1, r1.gamma1),
                             lerp(r0.gamma2, r1.gamma2), lerp(r0.gamma3, r1.gamma3));
        };
        for (int k = 0; k < substeps; ++k) {
            const double x = k * h;
            const BlockState k1 = f(x, y);
            const BlockState k2 = f(x + 0.5 * h, y + (0.5 * h) * k1);
            const BlockState k3 = f(x + 0.5 * h, y + (0.5 * h) * k2);
            const BlockState k4 = f(x + h, y + h * k3);
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.samples.push_back({r1.t, y.a, y.c, y.b});
    }
    return out;
}

}  // namespace xymark
