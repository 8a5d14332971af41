// test_channel.cpp — Map matrices, Choi states, robustness and rate extraction

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "xymark/channel.hpp"

using namespace xymark;

namespace {

// Smooth block trajectory with known closed form; a - c > 0 throughout.
ChannelSample smooth_sample(double t) {
    const double c = 0.2 * (1.0 - std::exp(-0.5 * t));
    const double gap = std::exp(-0.4 * t) * (1.0 + 0.2 * std::sin(2.0 * t));
    const double mag = std::sqrt(gap) * std::exp(-0.1 * t);
    const double phase = -(1.5 * t + 0.3 * std::sin(t));
    return {t, c + gap, c, std::polar(mag, phase)};
}

ChannelTrajectory smooth_trajectory(double dt, double t_fin) {
    ChannelTrajectory tr;
    tr.dt = dt;
    const auto n = static_cast<std::size_t>(std::llround(t_fin / dt));
    for (std::size_t i = 0; i <= n; ++i) tr.samples.push_back(smooth_sample(i * dt));
    return tr;
}

// Smallest eigenvalue of A on the complement of omega, via an explicit basis.
double min_on_complement(const CMat& A) {
    const int n = static_cast<int>(A.rows());
    const CVec w = omega_vector(static_cast<int>(std::lround(std::sqrt(n))));
    CMat basis(n, n);
    basis.col(0) = w;
    int filled = 1;
    for (int i = 0; i < n && filled < n; ++i) {
        CVec v = CVec::Unit(n, i);
        for (int j = 0; j < filled; ++j) v -= basis.col(j).dot(v) * basis.col(j);
        if (v.norm() > 1e-8) basis.col(filled++) = v.normalized();
    }
    const CMat B = basis.rightCols(n - 1);
    CMat R = B.adjoint() * A * B;
    R = 0.5 * (R + R.adjoint());
    return Eigen::SelfAdjointEigenSolver<CMat>(R).eigenvalues()(0);
}

// Bisection for the smallest isotropic noise making the projected Choi PSD.
double noise_oracle(const CMat& dT, double dt) {
    const CMat C = choi(dT.log());
    double lo = 0.0, hi = 10.0;
    if (min_on_complement(C) >= 0.0) return 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const CMat shifted = C + (mid / 2.0) * CMat::Identity(4, 4);
        (min_on_complement(shifted) >= 0.0 ? hi : lo) = mid;
    }
    return hi / dt;
}

}  // namespace

TEST_CASE("map matrix layout") {
    CHECK((build_map_matrix({0.0, 1.0, 0.0, 1.0}) - CMat::Identity(4, 4)).norm() == 0.0);

    const CMat T0 = build_map_matrix({0.0, 0.0, 0.0, 0.0});
    CVec rho(4);
    rho << 0.3, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.7;
    const CVec out = T0 * rho;
    CHECK(std::abs(out(3) - 1.0) < 1e-15);
    CHECK(out.head(3).norm() < 1e-15);

    const ChannelSample s{0.0, 0.5, 0.25, cplx(0.3, 0.1)};
    const CMat T = build_map_matrix(s);
    CHECK(T(0, 0) == cplx(0.5));
    CHECK(T(0, 3) == cplx(0.25));
    CHECK(T(1, 1) == cplx(0.3, -0.1));
    CHECK(T(2, 2) == cplx(0.3, 0.1));
    CHECK(T(3, 0) == cplx(0.5));
    CHECK(T(3, 3) == cplx(0.75));
    // rho_eg sits at index 2 and picks up b.
    CVec coh = CVec::Zero(4);
    coh(2) = 1.0;
    CHECK(std::abs((T * coh)(2) - s.b) < 1e-15);
    // Trace row matches the identity map.
    CHECK(std::abs(T(0, 0) + T(3, 0) - 1.0) < 1e-12);
    CHECK(std::abs(T(0, 3) + T(3, 3) - 1.0) < 1e-12);
    const auto back = sample_from_map(T);
    CHECK(back.a == 0.5);
    CHECK(back.b == s.b);
}

TEST_CASE("Choi states") {
    Eigen::SelfAdjointEigenSolver<CMat> id(choi(CMat::Identity(4, 4)));
    CHECK(id.eigenvalues()(3) == doctest::Approx(2.0));
    CHECK(id.eigenvalues().head(3).cwiseAbs().maxCoeff() < 1e-14);

    CVec half = CVec::Zero(4), tr = CVec::Zero(4);
    half(0) = half(3) = 0.5;
    tr(0) = tr(3) = 1.0;
    const CMat depol = half * tr.transpose();
    Eigen::SelfAdjointEigenSolver<CMat> dp(choi(depol));
    CHECK((dp.eigenvalues().array() - 0.5).abs().maxCoeff() < 1e-14);

    std::mt19937 rng(7);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 20; ++rep) {
        CMat Z(6, 2);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 2; ++j) Z(i, j) = cplx(g(rng), g(rng));
        const CMat iso = Eigen::HouseholderQR<CMat>(Z).householderQ() * CMat::Identity(6, 2);
        CMat T = CMat::Zero(4, 4);
        for (int k = 0; k < 3; ++k) {
            const CMat K = iso.middleRows(2 * k, 2);
            T += CMat(Eigen::kroneckerProduct(K.conjugate(), K));
        }
        Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (choi(T) + choi(T).adjoint()));
        CHECK(es.eigenvalues()(0) > -1e-12);
        // Trace preservation of the isometry channel.
        CHECK(std::abs(T(0, 0) + T(3, 0) - 1.0) < 1e-12);
    }
}

TEST_CASE("step maps") {
    const CMat T = build_map_matrix({0.0, 0.7, 0.1, cplx(0.5, 0.3)});
    CHECK((step_channel(T, T).dT - CMat::Identity(4, 4)).norm() < 1e-12);

    const ChannelSample s1{0.0, 0.7, 0.1, cplx(0.5, 0.3)};
    const ChannelSample s2{0.0, 0.6, 0.15, cplx(0.4, 0.35)};
    const auto step = step_channel(build_map_matrix(s1), build_map_matrix(s2));
    CHECK_FALSE(step.singular);
    CHECK(std::abs(step.dT(2, 2) - s2.b / s1.b) < 1e-12);
    CHECK(std::abs(step.dT(1, 2)) < 1e-12);
    CHECK(std::abs(step.dT(0, 1)) < 1e-12);

    const ChannelSample sing{0.0, 0.4, 0.4, 0.0};
    const ChannelSample after{0.0, 0.45, 0.41, cplx(0.01, 0.0)};
    const CMat Ts = build_map_matrix(sing), Ta = build_map_matrix(after);
    const auto ps = step_channel(Ts, Ta);
    CHECK(ps.singular);
    // On the support of T_t the step reproduces the image of T_t.
    const Eigen::JacobiSVD<CMat> svd(Ts, Eigen::ComputeFullV);
    const CMat support = svd.matrixV().leftCols(1);
    CHECK((ps.dT * Ts * support - Ta * support).norm() < 1e-10);
}

TEST_CASE("robustness of valid and invalid steps") {
    CHECK(robustness_step(CMat::Identity(4, 4), 0.05).mu == 0.0);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
        const double dt = 0.05;
        CMat H = CMat::Zero(2, 2);
        H(0, 0) = u(rng);
        H(0, 1) = cplx(u(rng), u(rng));
        H(1, 0) = std::conj(H(0, 1));
        std::vector<LindbladTerm> terms;
        for (int k = 0; k < 3; ++k) {
            CMat L(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) L(i, j) = cplx(u(rng) - 0.5, u(rng) - 0.5);
            terms.push_back({u(rng), L});
        }
        const CMat dT = (dt * lindblad_generator(H, terms)).exp();
        const auto r = robustness_step(dT, dt);
        CHECK(r.mu == 0.0);
        CHECK_FALSE(r.infinite);
    }

    for (double g : {0.01, 0.3, 1.7}) {
        const double dt = 0.02;
        const CMat amp = (dt * lindblad_generator(CMat::Zero(2, 2), {{0.4, tau_z()}, {-g, tau_minus()}})).exp();
        const auto r = robustness_step(amp, dt);
        CHECK(r.mu == doctest::Approx(2.0 * g * 1.0).epsilon(1e-9));
        CHECK(r.mu == doctest::Approx(noise_oracle(amp, dt)).epsilon(1e-9));
        // Adding the computed noise restores positivity.
        const CMat fixed = choi(amp.log()) + (r.mu * dt / 2.0) * CMat::Identity(4, 4);
        CHECK(min_on_complement(fixed) > -1e-12);

        const CMat deph = (dt * lindblad_generator(CMat::Zero(2, 2), {{-g, tau_z()}})).exp();
        CHECK(robustness_step(deph, dt).mu == doctest::Approx(2.0 * g * 2.0).epsilon(1e-9));
    }

    // Negative real eigenvalue.
    CMat flip = CMat::Identity(4, 4);
    flip(1, 1) = flip(2, 2) = -1.0;
    const auto bad = robustness_step(flip, 0.05);
    CHECK(bad.infinite);
    CHECK(bad.flags.negative_real_eigenvalue);

    // Unpaired complex eigenvalue: not hermiticity preserving.
    CMat skew = CMat::Identity(4, 4);
    skew(2, 2) = cplx(0.9, 0.1);
    const auto np = robustness_step(skew, 0.05);
    CHECK(np.infinite);
    CHECK(np.flags.nonhermitian_log);
}

TEST_CASE("branch matrices vanish for block channels") {
    const auto tr = smooth_trajectory(0.05, 4.0);
    for (std::size_t n = 1; n < tr.samples.size(); ++n) {
        const auto step = step_channel(build_map_matrix(tr.samples[n - 1]), build_map_matrix(tr.samples[n]));
        const auto r = robustness_step(step.dT, tr.dt, 2);
        CHECK(r.branch_pairs == 1);
        CHECK(r.max_branch_norm < 1e-10);
    }
}

TEST_CASE("generic rate extraction") {
    const double dt = 0.01, g = 0.7;
    CHECK(extract_rates_generic(CMat::Identity(4, 4), dt).terms.empty());

    const CMat deph = (dt * lindblad_generator(CMat::Zero(2, 2), {{g, tau_z()}})).exp();
    const auto rd = extract_rates_generic(deph, dt);
    REQUIRE(rd.terms.size() == 1);
    const CMat Ld = rd.terms[0].L;
    // gamma |L><L| reproduces g |tau_z><tau_z|.
    CHECK((rd.terms[0].gamma * Ld * Ld.adjoint() - g * tau_z() * tau_z().adjoint()).norm() < 1e-10);
    CHECK(std::abs(Ld(0, 1)) + std::abs(Ld(1, 0)) < 1e-12);

    const CMat damp = (dt * block_generator(0.0, 0.0, 0.0, g)).exp();
    const auto ra = extract_rates_generic(damp, dt);
    REQUIRE(ra.terms.size() == 1);
    CHECK(ra.terms[0].gamma == doctest::Approx(g).epsilon(1e-10));
    CHECK(std::abs(std::abs(ra.terms[0].L(1, 0)) - 1.0) < 1e-10);
    CHECK(ra.spectrum.size() == 3);
}

TEST_CASE("analytic rates on simple trajectories") {
    const double Gamma = 0.3, Delta = 1.1, dt = 0.01;
    ChannelTrajectory vac;
    vac.dt = dt;
    ChannelTrajectory coherent = vac;
    for (int n = 0; n <= 500; ++n) {
        const double t = n * dt;
        const cplx b = std::exp(cplx(-0.5 * Gamma, -Delta) * t);
        vac.samples.push_back({t, std::norm(b), 0.0, b});
        coherent.samples.push_back({t, 1.0, 0.0, std::exp(cplx(0.0, -Delta * t))});
    }
    for (const auto& r : rates_analytic(vac)) {
        CHECK(std::abs(r.gamma1) < 1e-9);
        CHECK(std::abs(r.gamma2) < 1e-12);
        CHECK(r.gamma3 == doctest::Approx(Gamma).epsilon(1e-6));
        CHECK(r.E_LS == doctest::Approx(Delta).epsilon(1e-9));
        CHECK(r.mu == 0.0);
    }
    for (const auto& r : rates_analytic(coherent)) {
        CHECK(std::abs(r.gamma1) + std::abs(r.gamma2) + std::abs(r.gamma3) < 1e-12);
        CHECK(r.E_LS == doctest::Approx(Delta).epsilon(1e-9));
    }
    CHECK(degree(rates_analytic(vac)).degree == 0.0);

    // a - c crossing.
    ChannelTrajectory cross;
    cross.dt = dt;
    for (int n = 0; n <= 200; ++n) {
        const double t = n * dt;
        const double a = 1.0 - 0.8 * t, c = 0.5 * t;
        cross.samples.push_back({t, a, c, std::exp(-0.1 * t)});
    }
    const auto rc = rates_analytic(cross);
    bool flagged = false;
    for (const auto& r : rc) {
        const double gap = 1.0 - 1.3 * r.t;
        if (std::abs(gap) < 0.5 * 1.3 * dt) flagged = flagged || r.divergent;
        if (std::abs(gap) > 3.0 * 1.3 * dt) CHECK_FALSE(r.divergent);
    }
    CHECK(flagged);
}

TEST_CASE("degree formula") {
    CHECK(degree({0.0, 0.0, 0.0}, {false, false, false}).degree == 0.0);
    const auto d = degree({0.1, 0.1}, {false, false});
    CHECK(d.degree == doctest::Approx(1.0 - std::exp(-0.3)).epsilon(1e-12));
    CHECK(d.degree == doctest::Approx(0.2592).epsilon(1e-4));
    const auto inf = degree({0.0, 0.0}, {false, true});
    CHECK(inf.degree == 1.0);
    CHECK(inf.any_infinite);
    CHECK(std::isfinite(inf.mu_bar));
}

TEST_CASE("generic and analytic extractors agree") {
    const double dt = 1e-3;
    const auto fine = smooth_trajectory(0.5 * dt, 4.0);
    const auto rates = rates_analytic(fine);
    double scale = 0.0;
    for (const auto& r : rates) scale = std::max({scale, std::abs(r.gamma1), std::abs(r.gamma2), std::abs(r.gamma3)});
    double worst = 0.0;
    for (std::size_t n = 1; n + 1 < fine.samples.size(); n += 2) {
        const auto step = step_channel(build_map_matrix(fine.samples[n - 1]), build_map_matrix(fine.samples[n + 1]));
        auto gen = extract_rates_generic(step.dT, dt, -1.0).spectrum;
        std::vector<double> ana{2.0 * rates[n].gamma1, rates[n].gamma2, rates[n].gamma3};
        std::sort(ana.begin(), ana.end());
        REQUIRE(gen.size() == 3);
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(gen[i] - ana[i]) / std::max(std::abs(ana[i]), scale));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("reintegration closes with second-order error") {
    auto error_at = [](double dt) {
        const auto tr = smooth_trajectory(dt, 5.0);
        const auto back = reintegrate(rates_analytic(tr));
        const auto& x = back.samples.back();
        const auto& y = tr.samples.back();
        return std::abs(x.a - y.a) + std::abs(x.c - y.c) + std::abs(x.b - y.b);
    };
    const double e1 = error_at(0.02), e2 = error_at(0.01);
    CHECK(e1 < 1e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}
