// test_correlations.cpp — Chain correlation functions, kernels and correlation times

#include "doctest.h"

#include <cmath>

#include "xymark/correlations.hpp"
#include "xymark/dense.hpp"

using namespace xymark;

namespace {

double max_gap(const std::vector<cplx>& x, const std::vector<cplx>& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    return worst;
}

}  // namespace

TEST_CASE("mode-sum correlations") {
    const auto grid = TimeGrid::from_final(5.0, 0.1);
    const SystemSpec spec{40, 1.0, 0.3, 0.4, 0.0, 20};
    const auto basis = diagonalize_environment(spec);
    const auto vac = correlation_ns(spec, occupations(spec, basis, VacuumEnv{}), grid);
    CHECK(vac.provenance == "ns_sum");
    for (const auto& p : vac.plus) CHECK(std::abs(p) == 0.0);
    CHECK(vac.minus[0].real() == doctest::Approx(1.0));
    const auto th = correlation_ns(spec, occupations(spec, basis, ThermalEnv{0.7}), grid);
    CHECK(std::abs(th.plus[0] + th.minus[0] - 1.0) < 1e-10);
}

TEST_CASE("Gaussian traces against the dense trace") {
    const auto grid = TimeGrid::from_final(5.0, 0.1);
    for (int m0 : {1, 3, 4, 8}) {
        for (double beta : {0.05, 1.0, 10.0}) {
            const SystemSpec spec{8, 1.0, 0.2, 0.4, 0.0, m0};
            const auto g = correlation_gaussian(spec, beta, grid);
            const auto d = dense_correlations(spec, ThermalEnv{beta}, grid);
            CHECK(max_gap(g.plus, d.plus) < 1e-10);
            CHECK(max_gap(g.minus, d.minus) < 1e-10);
            CHECK(std::abs(g.plus[0] + g.minus[0] - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("edge coupling has no string") {
    const auto grid = TimeGrid::from_final(8.0, 0.1);
    const SystemSpec spec{30, 1.0, 0.1, 0.4, 0.0, 1};
    const double beta = 1.5;
    const auto g = correlation_gaussian(spec, beta, grid);
    const auto ns = correlation_ns(spec, occupations(spec, diagonalize_environment(spec), ThermalEnv{beta}), grid);
    CHECK(max_gap(g.plus, ns.plus) < 1e-10);
    CHECK(max_gap(g.minus, ns.minus) < 1e-10);
}

TEST_CASE("cold chain above the band reduces to the vacuum") {
    const auto grid = TimeGrid::from_final(5.0, 0.1);
    const SystemSpec spec{16, 1.0, 1.5, 0.4, 0.0, 8};
    const auto g = correlation_gaussian(spec, 40.0, grid);
    const auto vac = correlation_ns(spec, occupations(spec, diagonalize_environment(spec), VacuumEnv{}), grid);
    CHECK(max_gap(g.plus, vac.plus) < 1e-6);
    CHECK(max_gap(g.minus, vac.minus) < 1e-6);
}

TEST_CASE("infinite-temperature closed forms") {
    const auto grid = TimeGrid::from_final(20.0, 0.05);
    const SystemSpec edge{2000, 1.0, 0.25, 0.4, 0.0, 1};
    const auto cf = closed_form_infinite_T(edge, grid);
    CHECK(cf.plus[0] == cplx(0.5, 0.0));
    Occupations half{Vec::Constant(edge.N, 0.5)};
    const auto ns = correlation_ns(edge, half, grid);
    CHECK(max_gap(cf.plus, ns.plus) < 1e-6);
    CHECK(max_gap(cf.minus, ns.minus) < 1e-6);

    const SystemSpec center{121, 1.0, 0.0, 0.4, 0.0, 61};
    const auto gc = closed_form_infinite_T(center, grid);
    CHECK(gc.plus[0].real() == doctest::Approx(0.5));
    CHECK(std::abs(gc.plus[20]) == doctest::Approx(0.5 * std::exp(-1.0)));
    CHECK_THROWS_AS(closed_form_infinite_T(SystemSpec{30, 1.0, 0.0, 0.4, 0.0, 5}, grid), CapabilityError);

    // Edge envelope falls off as t^{-3/2}.
    double peak10 = 0.0, peak20 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.t(i);
        if (t > 8.0 && t <= 10.0) peak10 = std::max(peak10, std::abs(cf.plus[i]));
        if (t > 18.0 && t <= 20.0) peak20 = std::max(peak20, std::abs(cf.plus[i]));
    }
    const double slope = std::log(peak20 / peak10) / std::log(19.0 / 9.0);
    CHECK(slope == doctest::Approx(-1.5).epsilon(0.1));
}

TEST_CASE("high-temperature center correlations are Gaussian") {
    const auto grid = TimeGrid::from_final(3.0, 0.05);
    const SystemSpec spec{120, 1.0, 0.3, 0.4, 0.0, 60};
    const auto g = correlation_gaussian(spec, 0.05, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.t(i);
        CHECK(std::abs(std::abs(g.plus[i]) - 0.5 * std::exp(-t * t)) < 0.02 * 0.5);
    }
}

TEST_CASE("kernels and correlation times") {
    const auto grid = TimeGrid::from_final(6.0, 0.01);
    const SystemSpec spec{121, 1.0, 0.3, 0.4, 0.6, 61};
    const auto k = kernels(closed_form_infinite_T(spec, grid), spec.Delta);
    for (std::size_t i = 0; i < grid.size(); i += 37) {
        CHECK(k.plus[i] == doctest::Approx(0.5 * std::exp(-grid.t(i) * grid.t(i))));
    }
    const auto tc = correlation_time(k.t, k.z_plus, 0.4);
    CHECK(tc.tau_c == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(tc.omega_tau == doctest::Approx(0.4).epsilon(1e-3));
    CHECK_FALSE(tc.power_law);
    CHECK_FALSE(tc.no_decay);

    // Vacuum center kernel: Bessel J0 envelope.
    const auto long_grid = TimeGrid::from_final(40.0, 0.05);
    const SystemSpec big{801, 1.0, 0.0, 0.4, 0.0, 401};
    const auto vac = correlation_ns(big, occupations(big, diagonalize_environment(big), VacuumEnv{}), long_grid);
    const auto kv = kernels(vac, big.Delta);
    CHECK(correlation_time(kv.t, kv.z_minus, 0.4).power_law);
    std::vector<cplx> flat(kv.t.size(), 1.0);
    CHECK(correlation_time(kv.t, flat, 0.4).no_decay);
}

TEST_CASE("interior coupling sites decay with steeper power laws") {
    const auto grid = TimeGrid::from_final(22.0, 0.1);
    auto slope = [&](int m0) {
        const SystemSpec spec{60, 1.0, 0.0, 0.4, 0.0, m0};
        const auto g = correlation_gaussian(spec, 1e-3, grid);
        double early = 0.0, late = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid.t(i);
            if (t > 5.0 && t <= 7.0) early = std::max(early, std::abs(g.plus[i]));
            if (t > 20.0 && t <= 22.0) late = std::max(late, std::abs(g.plus[i]));
        }
        return std::log(late / early) / std::log(21.0 / 6.0);
    };
    const double s1 = slope(1), s2 = slope(2);
    CHECK(s1 == doctest::Approx(-1.5).epsilon(0.1));
    CHECK(s2 == doctest::Approx(-4.5).epsilon(0.15));
    CHECK(s2 < s1 - 2.0);
}
