// config.cpp — Config parsing and engine selection

#include "xymark/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace xymark {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::map<std::string, std::string>& key_sections() {
    static const std::map<std::string, std::string> sections{
        {"N", "system"},
        {"J", "system"},
        {"h", "system"},
        {"Omega", "system"},
        {"Delta_h", "system"},
        {"m0", "system"},
        {"env", "environment"},
        {"beta", "environment"},
        {"h_prep", "environment"},
        {"k", "environment"},
        {"scenario", "run"},
        {"engine", "run"},
        {"thermodynamic_limit", "run"},
        {"t_fin", "run"},
        {"dt", "run"},
        {"out", "run"},
        {"jobs", "run"},
        {"eta", "run"},
        {"dense_cap", "run"},
        {"blp_states", "run"},
        {"plot", "run"},
        {"correlation_method", "run"},
        {"Delta_h_min", "run"},
        {"Delta_h_max", "run"},
        {"Delta_h_steps", "run"},
        {"Omega_min", "run"},
        {"Omega_max", "run"},
        {"Omega_steps", "run"},
    };
    return sections;
}

std::string canonical_key(const std::string& raw, const std::string& section) {
    std::string key = raw;
    std::string sec = section;
    if (const auto dot = key.find('.'); dot != std::string::npos) {
        sec = key.substr(0, dot);
        key = key.substr(dot + 1);
    }
    if (key == "tfin") key = "t_fin";
    const auto& known = key_sections();
    const auto it = known.find(key);
    if (it == known.end()) throw ConfigError("unknown config key '" + raw + "'");
    if (!sec.empty() && sec != it->second) {
        throw ConfigError("key '" + key + "' belongs to section [" + it->second + "], found in [" + sec + "]");
    }
    return key;
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end) throw ConfigError("key '" + key + "': not a number: '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto* end = v.data() + v.size();
    const auto r = std::from_chars(v.data(), end, out);
    if (r.ec != std::errc() || r.ptr != end) throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "': not a boolean: '" + v + "'");
}

std::string one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (v == a) return v;
    std::string msg = "key '" + key + "': '" + v + "' is not one of";
    for (const char* a : allowed) msg += std::string(" ") + a;
    throw ConfigError(msg);
}

// Shortest text that reads back to the same double.
std::string fmt(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

}  // namespace

KeyValues parse_config_text(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "environment" && section != "run") {
                throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        kv[canonical_key(trim(line.substr(0, eq)), section)] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(KeyValues& kv, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' must look like KEY=VALUE");
    kv[canonical_key(trim(assignment.substr(0, eq)), "")] = trim(assignment.substr(eq + 1));
}

RunConfig make_config(const KeyValues& kv) {
    RunConfig c;
    const std::map<std::string, std::function<void(const std::string&)>> setters{
        {"N", [&](const std::string& v) { c.N = to_int("N", v); }},
        {"J", [&](const std::string& v) { c.J = to_double("J", v); }},
        {"h", [&](const std::string& v) { c.h = to_double("h", v); }},
        {"Omega", [&](const std::string& v) { c.Omega = to_double("Omega", v); }},
        {"Delta_h", [&](const std::string& v) { c.Delta_h = to_double("Delta_h", v); }},
        {"m0", [&](const std::string& v) { c.m0 = v; }},
        {"env", [&](const std::string& v) { c.env = one_of("env", v, {"vacuum", "ground", "thermal", "single_mode"}); }},
        {"beta", [&](const std::string& v) { c.beta = to_double("beta", v); }},
        {"h_prep", [&](const std::string& v) { c.h_prep = to_double("h_prep", v); }},
        {"k", [&](const std::string& v) { c.k = to_int("k", v); }},
        {"scenario",
         [&](const std::string& v) {
             c.scenario = one_of("scenario", v, {"trajectory", "sweep", "phase_diagram", "correlations", "validate"});
         }},
        {"engine",
         [&](const std::string& v) { c.engine = one_of("engine", v, {"auto", "sector", "dense", "gaussian", "analytic"}); }},
        {"thermodynamic_limit", [&](const std::string& v) { c.thermodynamic_limit = to_bool("thermodynamic_limit", v); }},
        {"t_fin", [&](const std::string& v) { c.t_fin = to_double("t_fin", v); }},
        {"dt", [&](const std::string& v) { c.dt = to_double("dt", v); }},
        {"out", [&](const std::string& v) { c.out = v; }},
        {"jobs", [&](const std::string& v) { c.jobs = to_int("jobs", v); }},
        {"eta", [&](const std::string& v) { c.eta = to_double("eta", v); }},
        {"dense_cap", [&](const std::string& v) { c.dense_cap = to_int("dense_cap", v); }},
        {"blp_states", [&](const std::string& v) { c.blp_states = to_int("blp_states", v); }},
        {"plot", [&](const std::string& v) { c.plot = to_bool("plot", v); }},
        {"correlation_method",
         [&](const std::string& v) {
             c.correlation_method = one_of("correlation_method", v, {"auto", "gaussian", "ns", "closed_form"});
         }},
        {"Delta_h_min", [&](const std::string& v) { c.Delta_h_min = to_double("Delta_h_min", v); }},
        {"Delta_h_max", [&](const std::string& v) { c.Delta_h_max = to_double("Delta_h_max", v); }},
        {"Delta_h_steps", [&](const std::string& v) { c.Delta_h_steps = to_int("Delta_h_steps", v); }},
        {"Omega_min", [&](const std::string& v) { c.Omega_min = to_double("Omega_min", v); }},
        {"Omega_max", [&](const std::string& v) { c.Omega_max = to_double("Omega_max", v); }},
        {"Omega_steps", [&](const std::string& v) { c.Omega_steps = to_int("Omega_steps", v); }},
    };
    for (const auto& [key, value] : kv) {
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
        it->second(value);
    }
    if (c.N < 1) throw ConfigError("N must be >= 1");
    if (!(c.J > 0.0)) throw ConfigError("J must be > 0");
    if (!(c.dt > 0.0) || !(c.t_fin >= 0.0)) throw ConfigError("need dt > 0 and t_fin >= 0");
    if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
    if (c.Delta_h_steps < 1 || c.Omega_steps < 1) throw ConfigError("grid steps must be >= 1");
    if (c.env == "thermal" && !(c.beta > 0.0)) throw ConfigError("thermal environment needs beta > 0");
    const int m = c.site();
    if (m < 1 || m > c.N) throw ConfigError("m0 must satisfy 1 <= m0 <= N");
    if (c.env == "single_mode" && (c.k < 1 || c.k > c.N)) throw ConfigError("k must satisfy 1 <= k <= N");
    return c;
}

KeyValues to_key_values(const RunConfig& c) {
    return {
        {"N", std::to_string(c.N)},
        {"J", fmt(c.J)},
        {"h", fmt(c.h)},
        {"Omega", fmt(c.Omega)},
        {"Delta_h", fmt(c.Delta_h)},
        {"m0", c.m0},
        {"env", c.env},
        {"beta", fmt(c.beta)},
        {"h_prep", fmt(c.h_prep)},
        {"k", std::to_string(c.k)},
        {"scenario", c.scenario},
        {"engine", c.engine},
        {"thermodynamic_limit", c.thermodynamic_limit ? "true" : "false"},
        {"t_fin", fmt(c.t_fin)},
        {"dt", fmt(c.dt)},
        {"out", c.out},
        {"jobs", std::to_string(c.jobs)},
        {"eta", fmt(c.eta)},
        {"dense_cap", std::to_string(c.dense_cap)},
        {"blp_states", std::to_string(c.blp_states)},
        {"plot", c.plot ? "true" : "false"},
        {"correlation_method", c.correlation_method},
        {"Delta_h_min", fmt(c.Delta_h_min)},
        {"Delta_h_max", fmt(c.Delta_h_max)},
        {"Delta_h_steps", std::to_string(c.Delta_h_steps)},
        {"Omega_min", fmt(c.Omega_min)},
        {"Omega_max", fmt(c.Omega_max)},
        {"Omega_steps", std::to_string(c.Omega_steps)},
    };
}

int RunConfig::site() const {
    if (m0 == "edge") return 1;
    if (m0 == "center") return (N + 1) / 2;
    int v = 0;
    const auto* end = m0.data() + m0.size();
    const auto r = std::from_chars(m0.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end) throw ConfigError("m0 must be an integer, 'center' or 'edge'");
    return v;
}

SystemSpec RunConfig::system() const { return SystemSpec::with_detuning(N, J, h, Omega, Delta_h, site()); }

EnvInitialState RunConfig::environment() const {
    if (env == "vacuum") return VacuumEnv{};
    if (env == "ground") return GroundEnv{h_prep};
    if (env == "thermal") return ThermalEnv{beta};
    return SingleModeEnv{k};
}

TimeGrid RunConfig::grid() const { return TimeGrid::from_final(t_fin, dt); }

std::string resolve_engine(const RunConfig& cfg) {
    const SystemSpec spec = cfg.system();
    const bool vacuum = cfg.env == "vacuum";
    const bool edge = spec.edge_coupled();
    const bool center = spec.center_coupled();
    std::string engine = cfg.engine;
    if (engine == "auto") {
        if (cfg.thermodynamic_limit) {
            engine = "analytic";
        } else if (edge) {
            engine = "gaussian";
        } else if (vacuum) {
            engine = "sector";
        } else {
            engine = "dense";
        }
    }
    if (engine == "sector" && !vacuum) throw CapabilityError("sector engine serves the vacuum environment only");
    if (engine == "gaussian" && !edge) throw CapabilityError("gaussian engine needs edge coupling (m0 = 1)");
    if (engine == "analytic" && (!vacuum || (!edge && !center))) {
        throw CapabilityError("analytic engine serves the vacuum with center or edge coupling only");
    }
    if (engine == "dense" && spec.N > cfg.dense_cap) {
        const double dim = std::ldexp(1.0, spec.N + 1);
        std::ostringstream os;
        os << "dense engine refuses N = " << spec.N << " (cap " << cfg.dense_cap << "); full space dimension " << dim
           << ", a dense operator needs about " << dim * dim * 16.0 / (1 << 20) << " MiB";
        throw CapabilityError(os.str());
    }
    return engine;
}

}  // namespace xymark
