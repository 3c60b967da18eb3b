#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "curvestep/harness.hpp"

namespace curvestep {

/// Bad or unknown configuration input (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One tool invocation: a run recipe plus output and cache locations.
struct ToolConfig {
  RunSetup setup;
  std::string out_dir = "out";
  std::string cache_dir;     ///< empty: CURVESTEP_CACHE_DIR or ./.curvestep-cache
  double reference_dt = 0.0; ///< compare only: override the reference step, 0 = catalog value
};

/// Flat dotted-key schema, e.g. {"problem": "bounce", "controller.kind":
/// "curvature", "controller.b": 0.444}. Unknown keys are errors; missing keys
/// fall back to the benchmark defaults of the chosen problem and controller.
/// "controller.dt_crit" is input sugar: it sets dt_min/dt_max to the default
/// bounds (1% / 85% of it); explicit bounds win over it.
ToolConfig config_from_json(const nlohmann::json& j);

/// Canonical full form: every effective key, suitable for exact replay.
nlohmann::json config_to_json(const ToolConfig& c);

/// Reads a config file to its raw JSON object. A run meta file
/// ({"config": {...}, "summary": ...}) is accepted and unwrapped, so a
/// meta.json replays its run.
nlohmann::json read_config_json(const std::filesystem::path& file);

ToolConfig load_config_file(const std::filesystem::path& file);

}  // namespace curvestep
