// test_runner.cpp — Config parsing, engine selection and scenario outputs

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "xymark/runner.hpp"

using namespace xymark;

namespace {

RunConfig config_of(std::initializer_list<const char*> sets) {
    KeyValues kv;
    for (const char* s : sets) apply_override(kv, s);
    return make_config(kv);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("xymark_test_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("config text format") {
    const auto kv = parse_config_text(
        "# comment\n[system]\nN = 40\nOmega=0.3  # trailing\n[environment]\nenv = thermal\nbeta = 2\n[run]\ntfin = 7\n");
    const auto c = make_config(kv);
    CHECK(c.N == 40);
    CHECK(c.Omega == 0.3);
    CHECK(c.env == "thermal");
    CHECK(c.beta == 2.0);
    CHECK(c.t_fin == 7.0);
    CHECK(c.site() == 20);

    CHECK_THROWS_AS(parse_config_text("[system]\nenv = vacuum\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[bogus]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("N 3\n"), ConfigError);
    CHECK_THROWS_AS(config_of({"N=abc"}), ConfigError);
    CHECK_THROWS_AS(config_of({"N=10", "m0=11"}), ConfigError);
    CHECK_THROWS_AS(config_of({"env=warm"}), ConfigError);
    CHECK_THROWS_AS(config_of({"dt=0"}), ConfigError);
}

TEST_CASE("overrides and round trip") {
    KeyValues kv = parse_config_text("[system]\nN = 40\n");
    apply_override(kv, "system.N=50");
    apply_override(kv, "m0=edge");
    CHECK(make_config(kv).N == 50);
    CHECK(make_config(kv).site() == 1);
    CHECK_THROWS_AS(apply_override(kv, "run.N=3"), ConfigError);
    CHECK_THROWS_AS(apply_override(kv, "N"), ConfigError);

    const auto c = config_of({"Omega=0.35", "env=ground", "h_prep=-0.5", "m0=7", "N=20"});
    const auto back = make_config(to_key_values(c));
    CHECK(back.Omega == c.Omega);
    CHECK(back.h_prep == c.h_prep);
    CHECK(back.site() == 7);
    CHECK(to_key_values(c).at("Omega") == "0.35");
}

TEST_CASE("engine selection") {
    CHECK(resolve_engine(config_of({"m0=1", "env=thermal"})) == "gaussian");
    CHECK(resolve_engine(config_of({})) == "sector");
    CHECK(resolve_engine(config_of({"env=thermal", "N=8"})) == "dense");
    CHECK(resolve_engine(config_of({"thermodynamic_limit=true"})) == "analytic");
    CHECK_THROWS_AS(resolve_engine(config_of({"env=thermal", "N=20"})), CapabilityError);
    CHECK_THROWS_AS(resolve_engine(config_of({"engine=sector", "env=thermal"})), CapabilityError);
    CHECK_THROWS_AS(resolve_engine(config_of({"engine=gaussian"})), CapabilityError);
    CHECK_THROWS_AS(resolve_engine(config_of({"engine=analytic", "m0=5", "N=20"})), CapabilityError);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-20) == "1e-20");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("trajectory outputs") {
    const auto dir = scratch("trajectory");
    auto c = config_of({"N=200", "t_fin=20", "blp_states=0"});
    c.out = dir.string();
    const auto files = run_trajectory(c);
    REQUIRE(files.size() == 2);
    const auto csv = slurp((dir / "trajectory.csv").string());
    CHECK(csv.rfind("t,a,c,Re_b,Im_b,E_LS,gamma1,gamma2,gamma3,mu,flags\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 402);
    const auto json = slurp((dir / "summary.json").string());
    for (const char* key : {"\"N_degree\"", "\"N_BLP\"", "\"engine\": \"sector\"", "\"convergence_report\"",
                            "\"echo_horizon\""})
        CHECK(json.find(key) != std::string::npos);

    // Uncoupled emitter: every rate and both measures vanish.
    const auto an = analyze_trajectory(config_of({"N=50", "Omega=0", "t_fin=5"}), false);
    for (const auto& r : an.rates) {
        CHECK(r.gamma1 == 0.0);
        CHECK(r.gamma2 == 0.0);
        CHECK(r.gamma3 == 0.0);
    }
    CHECK(an.robustness.degree == 0.0);
    CHECK(an.N_BLP == 0.0);

    c.plot = true;
    CHECK(run_trajectory(c).size() == 3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("phase diagram is deterministic and shows the band-edge strip") {
    auto c = config_of({"N=200", "t_fin=20", "Delta_h_min=-6", "Delta_h_max=6", "Delta_h_steps=13",
                        "Omega_min=0.2", "Omega_max=0.4", "Omega_steps=2"});
    const auto serial = phase_diagram(c);
    c.jobs = 4;
    const auto parallel = phase_diagram(c);
    REQUIRE(serial.size() == 26);
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].Delta_h == parallel[i].Delta_h);
        CHECK(serial[i].N_degree == parallel[i].N_degree);
        CHECK(serial[i].error.empty());
    }
    auto at = [&](double dh, double om) {
        for (const auto& p : serial)
            if (std::abs(p.Delta_h - dh) < 1e-12 && std::abs(p.Omega - om) < 1e-12) return p.N_degree;
        FAIL("missing point");
        return 0.0;
    };
    // Off-resonant wiggles leave a tail that falls with the detuning, well below the band-edge values.
    for (double om : {0.2, 0.4}) {
        for (double dh = 3.0; dh < 6.0; dh += 1.0) {
            CHECK(at(dh + 1.0, om) < at(dh, om));
            CHECK(at(-dh - 1.0, om) < at(-dh, om));
        }
    }
    CHECK(at(6.0, 0.2) < 0.5 * at(-3.0, 0.2));
    CHECK(at(-6.0, 0.4) < 0.1 * at(-2.0, 0.4));
    CHECK(at(-2.0, 0.4) > 0.05);
    CHECK(at(0.0, 0.4) == 0.0);
    // The strip widens with the coupling.
    int wide = 0, narrow = 0;
    for (const auto& p : serial) {
        if (p.N_degree > 0.01) (p.Omega > 0.3 ? wide : narrow)++;
    }
    CHECK(wide > narrow);

    // Per-point refusals are recorded in the row.
    auto thermal = config_of({"env=thermal", "N=20", "Delta_h_steps=2", "Omega_steps=1", "t_fin=1"});
    const auto rows = phase_diagram(thermal);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].error.find("dense engine refuses") != std::string::npos);
}

TEST_CASE("correlation runs") {
    const auto run = compute_correlations(config_of({"env=thermal", "beta=0.05", "N=120", "t_fin=3"}));
    CHECK(run.series.provenance == "gaussian_trace");
    CHECK(run.time_plus.tau_c == doctest::Approx(1.0).epsilon(0.02));
    CHECK_THROWS_AS(compute_correlations(config_of({"env=ground", "t_fin=1"})), CapabilityError);
    CHECK(compute_correlations(config_of({"env=ground", "m0=1", "t_fin=1"})).series.provenance == "ns_sum");
}
