// test_model.cpp — Model parameters, modes, occupations and densities of states

#include "doctest.h"

#include <cmath>

#include "xymark/model.hpp"

using namespace xymark;

TEST_CASE("mode energies for a three-site chain") {
    SystemSpec s{3, 1.0, 0.0, 0.0, 0.0, 1};
    const auto b = diagonalize_environment(s);
    CHECK(b.E(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(b.E(1)) < 1e-14);
    CHECK(b.E(2) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));

    s.h = 2.0;
    const auto shifted = diagonalize_environment(s);
    for (int k = 0; k < 3; ++k) CHECK(shifted.E(k) - b.E(k) == doctest::Approx(4.0));
}

TEST_CASE("sine transform diagonalizes the chain matrix") {
    for (int N : {1, 2, 7, 64, 500}) {
        SystemSpec s{N, 1.3, -0.4, 0.0, 0.0, 1};
        const auto b = diagonalize_environment(s);
        const Mat H = single_particle_environment(s);
        CHECK((b.W.transpose() * b.W - Mat::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((b.W * b.E.asDiagonal() * b.W.transpose() - H).cwiseAbs().maxCoeff() < 1e-10);
        for (int k = 0; k + 1 < N; ++k) CHECK(b.E(k) > b.E(k + 1));
        // Numerical eigenvalues, ascending, against the closed form.
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        for (int k = 0; k < N; ++k) CHECK(std::abs(es.eigenvalues()(k) - b.E(N - 1 - k)) < 1e-10);
    }
}

TEST_CASE("occupations") {
    SystemSpec s{40, 1.0, 0.3, 0.1, 0.0, 1};
    const auto b = diagonalize_environment(s);
    CHECK(occupations(s, b, VacuumEnv{}).f.cwiseAbs().maxCoeff() == 0.0);

    const auto hot = occupations(s, b, ThermalEnv{1e-9});
    CHECK((hot.f.array() - 0.5).abs().maxCoeff() < 1e-8);

    const auto warm = occupations(s, b, ThermalEnv{2.0});
    for (int k = 0; k + 1 < 40; ++k) CHECK(warm.f(k) <= warm.f(k + 1));
    CHECK(warm.f.minCoeff() >= 0.0);
    CHECK(warm.f.maxCoeff() <= 1.0);

    // Ground state at h_prep equals the zero-temperature limit of the chain at h_prep.
    SystemSpec prep = s;
    prep.h = 0.95;
    const auto bp = diagonalize_environment(prep);
    const auto ground = occupations(s, b, GroundEnv{0.95});
    const auto cold = occupations(prep, bp, ThermalEnv{1e4});
    CHECK((ground.f - cold.f).cwiseAbs().maxCoeff() < 1e-12);
    for (int k = 0; k < 40; ++k) CHECK(ground.f(k) == (bp.E(k) < 0.0 ? 1.0 : 0.0));

    const auto one = occupations(s, b, SingleModeEnv{40});
    CHECK(one.f.sum() == 1.0);
    CHECK(one.f(39) == 1.0);
    CHECK_THROWS_AS(occupations(s, b, SingleModeEnv{41}), std::invalid_argument);
    CHECK_THROWS_AS(occupations(s, b, ThermalEnv{0.0}), std::invalid_argument);
}

TEST_CASE("zero mode at the Fermi level is half filled") {
    SystemSpec s{3, 1.0, 0.0, 0.0, 0.0, 1};
    const auto b = diagonalize_environment(s);
    const auto g = occupations(s, b, GroundEnv{0.0});
    CHECK(g.f(0) == 0.0);
    CHECK(g.f(1) == 0.5);
    CHECK(g.f(2) == 1.0);
}

TEST_CASE("density of states") {
    SystemSpec s{1, 1.0, 0.7, 0.0, 0.0, 1};
    CHECK(density_of_states(1.4, s).value == doctest::Approx(1.0 / (2.0 * kPi)));
    CHECK(density_of_states(1.4 + 3.0, s).value == 0.0);
    CHECK(density_of_states(1.4 + 2.0, s).divergent);

    // Midpoint quadrature in E with an endpoint-integrable singularity, refined toward the edges.
    double total = 0.0;
    const int n = 400000;
    for (int i = 0; i < n; ++i) {
        const double u = -1.0 + (i + 0.5) * 2.0 / n;
        const double E = 1.4 + 2.0 * std::sin(0.5 * kPi * u);
        const double dE = 2.0 * std::cos(0.5 * kPi * u) * 0.5 * kPi * (2.0 / n);
        total += density_of_states(E, s).value * dE;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("spectral density") {
    SystemSpec center{2000, 1.0, 0.2, 0.0, 0.0, 1000};
    CHECK(spectral_density(0.4, center).value == doctest::Approx(1.0 / (2.0 * kPi)));
    const auto bc = diagonalize_environment(center);
    const double est = spectral_density_broadened(0.4, center, bc);
    CHECK(std::abs(est / (1.0 / (2.0 * kPi)) - 1.0) < 0.02);

    SystemSpec edge{2000, 1.0, 0.2, 0.0, 0.0, 1};
    const auto be = diagonalize_environment(edge);
    CHECK(spectral_density(0.4 + 2.0, edge).value == 0.0);
    CHECK(spectral_density(0.4 + 1.9999, edge).value < 0.01);
    for (double w : {-1.5, -0.3, 0.0, 0.9, 1.7}) {
        const double exact = spectral_density(0.4 + w, edge).value;
        CHECK(std::abs(spectral_density_broadened(0.4 + w, edge, be) - exact) < 0.02 * exact);
    }
    // Near the edge the broadened histogram stays small as well.
    CHECK(spectral_density_broadened(0.4 + 1.99, edge, be) < 0.05);

    // Broadened estimate integrates to one for any coupling site.
    SystemSpec any{30, 1.0, 0.0, 0.0, 0.0, 11};
    const auto ba = diagonalize_environment(any);
    double total = 0.0;
    for (double E = -4.0; E <= 4.0; E += 1e-4) total += spectral_density_broadened(E, any, ba, 0.05) * 1e-4;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(spectral_density(0.0, any), CapabilityError);
}

TEST_CASE("self-consistency metric") {
    auto center = SystemSpec::with_detuning(300, 1.0, 0.0, 0.2, 0.0, 150);
    const auto ok = self_consistency_metric(center, VacuumEnv{});
    CHECK(ok.metric < 0.1);
    CHECK(ok.Gamma_plus == 0.0);
    CHECK(ok.Gamma_minus == doctest::Approx(2.0 * kPi * 0.04 / (2.0 * kPi)));

    auto edge_near = SystemSpec::with_detuning(300, 1.0, 0.0, 0.2, -1.99, 150);
    CHECK(self_consistency_metric(edge_near, VacuumEnv{}).metric > 10.0);

    auto outside = SystemSpec::with_detuning(300, 1.0, 0.0, 0.2, -2.5, 150);
    CHECK(self_consistency_metric(outside, VacuumEnv{}).divergent);

    auto free = SystemSpec::with_detuning(300, 1.0, 0.0, 0.0, 0.3, 150);
    CHECK(self_consistency_metric(free, ThermalEnv{1.0}).metric == 0.0);
}
