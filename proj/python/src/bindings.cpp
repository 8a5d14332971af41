// bindings.cpp — Python module xymark._core

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xymark/analytic.hpp"
#include "xymark/correlations.hpp"
#include "xymark/dense.hpp"
#include "xymark/gaussian.hpp"
#include "xymark/runner.hpp"
#include "xymark/sector.hpp"

namespace py = pybind11;
using namespace xymark;

namespace {

template <class T, class F>
py::array_t<T> column(const std::vector<ChannelSample>& s, F f) {
    py::array_t<T> out(s.size());
    auto v = out.template mutable_unchecked<1>();
    for (std::size_t i = 0; i < s.size(); ++i) v(i) = f(s[i]);
    return out;
}

template <class T>
py::array_t<T> array(const std::vector<T>& x) {
    return py::array_t<T>(x.size(), x.data());
}

py::dict rates_dict(const std::vector<RateSample>& rates) {
    std::vector<double> t, E, g1, g2, g3, mu;
    std::vector<bool> divergent;
    for (const auto& r : rates) {
        t.push_back(r.t);
        E.push_back(r.E_LS);
        g1.push_back(r.gamma1);
        g2.push_back(r.gamma2);
        g3.push_back(r.gamma3);
        mu.push_back(r.mu);
        divergent.push_back(r.divergent);
    }
    py::dict d;
    d["t"] = array(t);
    d["E_LS"] = array(E);
    d["gamma1"] = array(g1);
    d["gamma2"] = array(g2);
    d["gamma3"] = array(g3);
    d["mu"] = array(mu);
    d["divergent"] = divergent;
    return d;
}

py::dict correlation_dict(const CorrelationSeries& s) {
    py::dict d;
    d["t"] = array(s.t);
    d["plus"] = array(s.plus);
    d["minus"] = array(s.minus);
    d["provenance"] = s.provenance;
    return d;
}

RunConfig config_from(const std::map<std::string, std::string>& overrides) {
    KeyValues kv;
    for (const auto& [k, v] : overrides) apply_override(kv, k + "=" + v);
    return make_config(kv);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Emitter coupled to an XY spin chain: dynamical maps and non-Markovianity measures";

    py::register_exception<CapabilityError>(m, "CapabilityError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<SystemSpec>(m, "SystemSpec")
        .def(py::init<int, double, double, double, double, int>(), py::arg("N"), py::arg("J"), py::arg("h"),
             py::arg("Omega"), py::arg("Delta"), py::arg("m0"))
        .def_static("with_detuning", &SystemSpec::with_detuning, py::arg("N"), py::arg("J"), py::arg("h"),
                    py::arg("Omega"), py::arg("Delta_h"), py::arg("m0"))
        .def_readwrite("N", &SystemSpec::N)
        .def_readwrite("J", &SystemSpec::J)
        .def_readwrite("h", &SystemSpec::h)
        .def_readwrite("Omega", &SystemSpec::Omega)
        .def_readwrite("Delta", &SystemSpec::Delta)
        .def_readwrite("m0", &SystemSpec::m0)
        .def("detuning", &SystemSpec::detuning)
        .def("validate", &SystemSpec::validate);

    py::class_<VacuumEnv>(m, "VacuumEnv").def(py::init<>());
    py::class_<GroundEnv>(m, "GroundEnv").def(py::init<double>(), py::arg("h_prep") = 0.0);
    py::class_<ThermalEnv>(m, "ThermalEnv").def(py::init<double>(), py::arg("beta"));
    py::class_<SingleModeEnv>(m, "SingleModeEnv").def(py::init<int>(), py::arg("k"));

    py::class_<TimeGrid>(m, "TimeGrid")
        .def_static("from_final", &TimeGrid::from_final, py::arg("t_fin"), py::arg("dt"))
        .def_readonly("dt", &TimeGrid::dt)
        .def_readonly("steps", &TimeGrid::steps)
        .def("t_fin", &TimeGrid::t_fin);

    py::class_<ChannelTrajectory>(m, "ChannelTrajectory")
        .def_readonly("engine", &ChannelTrajectory::engine)
        .def_readonly("dt", &ChannelTrajectory::dt)
        .def_readonly("echo_horizon", &ChannelTrajectory::echo_horizon)
        .def_readonly("echo_warning", &ChannelTrajectory::echo_warning)
        .def_property_readonly("t", [](const ChannelTrajectory& c) {
            return column<double>(c.samples, [](const ChannelSample& s) { return s.t; });
        })
        .def_property_readonly("a", [](const ChannelTrajectory& c) {
            return column<double>(c.samples, [](const ChannelSample& s) { return s.a; });
        })
        .def_property_readonly("c", [](const ChannelTrajectory& c) {
            return column<double>(c.samples, [](const ChannelSample& s) { return s.c; });
        })
        .def_property_readonly("b", [](const ChannelTrajectory& c) {
            return column<cplx>(c.samples, [](const ChannelSample& s) { return s.b; });
        })
        .def("__len__", [](const ChannelTrajectory& c) { return c.samples.size(); });

    m.def("evolve_vacuum", &evolve_vacuum, py::arg("spec"), py::arg("grid"));
    m.def("channel_m01", &channel_m01, py::arg("spec"), py::arg("env"), py::arg("grid"));
    m.def("tomography", &tomography, py::arg("spec"), py::arg("env"), py::arg("grid"),
          py::arg("cap") = kDenseDefaultCap);
    m.def("analytic_vacuum_channel", &analytic_vacuum_channel, py::arg("spec"), py::arg("grid"),
          py::arg("eta") = 1e-3);

    m.def("rates", [](const ChannelTrajectory& c) { return rates_dict(rates_analytic(c)); }, py::arg("channel"));
    m.def(
        "non_markovianity",
        [](const ChannelTrajectory& c) {
            const auto r = robustness_trajectory(c);
            py::dict d;
            d["N_degree"] = r.degree;
            d["mu_bar"] = r.mu_bar;
            d["mu"] = array(r.mu);
            d["any_infinite"] = r.any_infinite;
            return d;
        },
        py::arg("channel"));
    m.def(
        "blp", [](const ChannelTrajectory& c) { return blp_measure(c).N_BLP; }, py::arg("channel"));

    m.def(
        "correlation_gaussian",
        [](const SystemSpec& s, double beta, const TimeGrid& g) { return correlation_dict(correlation_gaussian(s, beta, g)); },
        py::arg("spec"), py::arg("beta"), py::arg("grid"));
    m.def(
        "correlation_ns",
        [](const SystemSpec& s, const EnvInitialState& env, const TimeGrid& g) {
            return correlation_dict(correlation_ns(s, occupations(s, diagonalize_environment(s), env), g));
        },
        py::arg("spec"), py::arg("env"), py::arg("grid"));
    m.def(
        "closed_form_infinite_T",
        [](const SystemSpec& s, const TimeGrid& g) { return correlation_dict(closed_form_infinite_T(s, g)); },
        py::arg("spec"), py::arg("grid"));
    m.def(
        "dense_correlations",
        [](const SystemSpec& s, const EnvInitialState& env, const TimeGrid& g) {
            const auto d = dense_correlations(s, env, g);
            py::dict out;
            out["plus"] = array(d.plus);
            out["minus"] = array(d.minus);
            return out;
        },
        py::arg("spec"), py::arg("env"), py::arg("grid"));

    m.def(
        "self_energy", [](cplx z, const SystemSpec& s) { return self_energy(z, s).sigma; }, py::arg("z"),
        py::arg("spec"));
    m.def(
        "bound_states",
        [](const SystemSpec& s) {
            std::vector<double> e;
            for (const auto& b : bound_states(s)) e.push_back(b.energy);
            return e;
        },
        py::arg("spec"));

    m.def(
        "resolve_engine", [](const std::map<std::string, std::string>& o) { return resolve_engine(config_from(o)); },
        py::arg("overrides") = std::map<std::string, std::string>{});
    m.def(
        "trajectory",
        [](const std::map<std::string, std::string>& o) {
            const auto an = analyze_trajectory(config_from(o), false);
            py::dict d;
            d["engine"] = an.engine;
            d["channel"] = an.channel;
            d["rates"] = rates_dict(an.rates);
            d["N_degree"] = an.robustness.degree;
            d["N_BLP"] = an.N_BLP;
            return d;
        },
        py::arg("overrides") = std::map<std::string, std::string>{},
        "Runs one configuration given as key=value overrides of the defaults.");
    m.def(
        "run_check",
        [](int id) {
            const auto r = run_check(id);
            py::dict d;
            d["id"] = r.id;
            d["name"] = r.name;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            py::dict metrics;
            for (const auto& [k, v] : r.metrics) metrics[py::str(k)] = v;
            d["metrics"] = metrics;
            return d;
        },
        py::arg("id"));
}
