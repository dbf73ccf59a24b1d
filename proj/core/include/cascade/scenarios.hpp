#pragma once

#include <string>
#include <vector>

#include "cascade/config.hpp"

namespace cascade {

// Command-line modifiers shared by every scenario.
struct RunFlags {
    bool reduced = false;     // shrink the expensive full-model runs for CI
    bool fixed_step = false;  // deterministic fixed-step integration; report omits wall-clock
    std::string out_dir;      // overrides output.directory when non-empty
};

struct RunReport {
    std::string report_json;           // the report document (also written as report.json)
    std::vector<std::string> files;    // everything written, report included
    std::vector<std::string> summary;  // human-readable lines for stdout
};

// Dispatches on cfg.scenario (derive-params, fig2, fig3, fig4, error-budget,
// custom), writes the configured CSV/JSON artifacts under the output
// directory (created if missing) and returns the report.
RunReport run_scenario(const ScenarioConfig& cfg, const RunFlags& flags);

} // namespace cascade
