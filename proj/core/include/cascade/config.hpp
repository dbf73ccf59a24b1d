#pragma once

#include <string>
#include <vector>

#include "cascade/device.hpp"
#include "cascade/noise.hpp"

namespace cascade {

// Parsed scenario configuration.  Files are JSON with a schema_version field;
// unknown keys anywhere are rejected before any computation starts.  All
// frequencies and rates in files are plain Hz (value / 2 pi); conversion to
// rad/s happens on load, and the resolved echo converts back.

struct SpectrumConfig {
    std::string preset = "white";  // white | engineered (alias) | bandpass
    double center_offset_hz = 0.0;
    double halfwidth_hz = 0.0;
    double gamma_in_hz = 0.0;
    double gamma_out_hz = 0.0;

    NoiseSpectrum build(const DeviceParams& device) const;
};

struct SimulationConfig {
    double t_final_s = 0.0;      // scenario default when 0
    double full_window_s = -1.0; // span of the full-model comparison run; <0 scenario default, 0 skips it
    int samples = 200;
    double rtol = 1e-8;
    double atol = 1e-10;
    double fixed_dt_s = 0.0;  // used by fixed-step mode; 0 = derived
    int cavity_dim = 0;       // 0 = derived from alpha_target
    int junction_dim = 3;
    double alpha_target = 2.0;
};

struct WignerConfig {
    double range = 3.5;  // square grid [-range, range]^2
    int points = 41;     // per axis
};

struct OutputConfig {
    std::string directory = ".";
    bool csv = true;
    bool json = true;
    WignerConfig wigner;
    std::vector<double> snapshot_times_s;
};

// fig4: engineered-rate sweep grid and comparison points.
struct SweepConfig {
    double gamma_fg_min_hz = 1e5;
    double gamma_fg_max_hz = 1e7;
    int points = 5;  // log-spaced
    std::vector<double> alpha_sq_targets = {4.0};
    double fidelity_threshold = 0.9;
    std::vector<double> compare_gamma_fg_hz = {6e5, 6e6};
};

// error-budget: evaluation grids.
struct BudgetConfig {
    std::vector<double> dt_grid_s = {1e-6};
    std::vector<double> kappa_1ph_grid_hz = {100.0};
    double kappa_2ph_override_hz = -1.0;  // < 0: use the derived cavity rate
};

struct CustomConfig {
    std::string model = "cavity";    // full | three-level | cavity
    std::string initial = "vacuum";  // vacuum | f0 | coherent | cat4
    cd initial_alpha{0.0, 0.0};
};

struct ScenarioConfig {
    int schema_version = 1;
    std::string scenario;
    DeviceParams device;      // rad/s
    PumpConfig pumps;         // rad/s
    bool solve_g1_delta = false;
    SpectrumConfig spectrum;
    SimulationConfig simulation;
    OutputConfig output;
    SweepConfig sweep;
    BudgetConfig budget;
    CustomConfig custom;
    std::vector<std::string> warnings;  // collected during load
};

// Parses and validates; fills pumps.g1 / device.delta from the compensation
// constraints when solve_g1_delta is set.  scenario_from_cli is authoritative;
// a conflicting "scenario" key in the file is an error.  Throws ConfigError.
ScenarioConfig load_config(const std::string& path, const std::string& scenario_from_cli);

// Full configuration with every default materialized, as pretty JSON.
std::string resolved_config_json(const ScenarioConfig& cfg);

} // namespace cascade
