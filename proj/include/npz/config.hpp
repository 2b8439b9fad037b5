#pragma once

#include <cstdint>
#include <string>

#include "npz/stepper.hpp"

namespace npz {

enum class IcProfile {
    Constant,
    GaussianBump,
    CosineMode,
    FromFile,
    Random,
};

/// Initial-condition recipe for one field. The cosine mode uses the field's
/// boundary-compatible basis: cos((k+1/2)*pi*h/H) for the nutrient,
/// cos(k*pi*h/H) for the phytoplankton, plus `offset`.
struct IcSpec {
    IcProfile profile = IcProfile::Constant;
    double value = 0.0;      // constant
    double center = 0.5;     // gaussian_bump
    double width = 0.1;
    double amplitude = 1.0;  // gaussian_bump, cosine_mode
    double offset = 0.0;
    int mode_k = 1;          // cosine_mode
    std::string file;        // from_file, one value per line, grid.M lines
    double lo = 0.0;         // random, uniform in [lo, hi]
    double hi = 1.0;

    static IcSpec constant(double v) {
        IcSpec ic;
        ic.value = v;
        return ic;
    }

    bool operator==(const IcSpec&) const = default;
};

struct RunConfig {
    Parameters params;
    int grid_m = 101;
    LightModel light = LightModel::ExponentialDecay;
    FunctionalResponse response = FunctionalResponse::HollingII;
    SolverConfig solver{1e-3, 10.0, Scheme::ImexEuler, 10, 1e-10, false};
    IcSpec ic_n = IcSpec::constant(1.0);
    IcSpec ic_p = IcSpec::constant(0.1);
    double ic_z = 0.0;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    double fit_window_lo = -1.0;  // < 0: defaults to 0.25 * t_end
    double fit_window_hi = -1.0;  // < 0: defaults to 0.50 * t_end

    bool operator==(const RunConfig&) const = default;
};

/// Parses flat `key = value` text (dotted keys, # comment lines). Unknown
/// keys are rejected with their line number; missing keys take the defaults
/// above. Throws ConfigError.
RunConfig parse_config(const std::string& text);

/// Reads and parses a config file.
RunConfig load_config(const std::string& path);

/// Canonical text with every key explicit; parse_config round-trips it.
std::string serialize_config(const RunConfig& config);

/// Sets a numeric key (the sweepable subset) and re-validates.
void apply_override(RunConfig& config, const std::string& key, double value);

/// Instantiates the initial state on the grid; rejects inadmissible data.
State build_initial_state(const RunConfig& config, const Grid& grid);

/// 17-significant-digit decimal form; round-trips doubles exactly.
std::string csv_double(double v);

const char* to_string(LightModel light);
const char* to_string(FunctionalResponse kind);
const char* to_string(Scheme scheme);
const char* to_string(IcProfile profile);

}  // namespace npz
