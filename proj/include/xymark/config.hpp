// config.hpp — Run configuration: key=value files with [system] [environment] [run] sections

#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "xymark/model.hpp"

namespace xymark {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

// Parses the text format. Keys are unique across sections; "section.key" is accepted as well.
KeyValues parse_config_text(const std::string& text);
KeyValues parse_config_file(const std::string& path);
// Applies one KEY=VALUE override.
void apply_override(KeyValues& kv, const std::string& assignment);

struct RunConfig {
    std::string scenario{"trajectory"};  // trajectory | sweep | phase_diagram | correlations | validate

    // [system]
    int N{300};
    double J{1.0};
    double h{0.0};
    double Omega{0.4};
    double Delta_h{0.0};
    std::string m0{"center"};  // integer, "center" or "edge"

    // [environment]
    std::string env{"vacuum"};  // vacuum | ground | thermal | single_mode
    double beta{1.0};
    double h_prep{0.0};
    int k{1};

    // [run]
    std::string engine{"auto"};  // auto | sector | dense | gaussian | analytic
    bool thermodynamic_limit{false};
    double t_fin{20.0};
    double dt{0.05};
    std::string out{"."};
    int jobs{1};
    double eta{1e-3};
    int dense_cap{10};
    int blp_states{40};
    bool plot{false};
    std::string correlation_method{"auto"};  // auto | gaussian | ns | closed_form

    // phase diagram grid
    double Delta_h_min{-3.0};
    double Delta_h_max{3.0};
    int Delta_h_steps{13};
    double Omega_min{0.1};
    double Omega_max{0.5};
    int Omega_steps{5};

    int site() const;  // resolved 1-based m0
    SystemSpec system() const;
    EnvInitialState environment() const;
    TimeGrid grid() const;
};

// Throws ConfigError for unknown keys and unparsable values.
RunConfig make_config(const KeyValues& kv);
KeyValues to_key_values(const RunConfig& cfg);

// Engine choice for engine = auto. Throws CapabilityError when the choice cannot serve the request.
std::string resolve_engine(const RunConfig& cfg);

}  // namespace xymark
