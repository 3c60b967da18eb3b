#include "curvestep/config.hpp"

#include <fstream>
#include <set>

namespace curvestep {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem",
      "horizon",
      "integrator.kind",
      "integrator.rho_b",
      "integrator.beta",
      "controller.kind",
      "controller.dt",
      "controller.b",
      "controller.zeta",
      "controller.alpha",
      "controller.rejection",
      "controller.dt_min",
      "controller.dt_max",
      "controller.dt_crit",
      "controller.safety",
      "controller.tol_low",
      "controller.tol_high",
      "output.dir",
      "output.decimation",
      "reference.dt",
      "cache.dir",
  };
  return keys;
}

double as_number(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number())
    throw ConfigError("config key '" + key + "' must be a number");
  return j.get<double>();
}

std::string as_string(const nlohmann::json& j, const std::string& key) {
  if (!j.is_string())
    throw ConfigError("config key '" + key + "' must be a string");
  return j.get<std::string>();
}

bool as_bool(const nlohmann::json& j, const std::string& key) {
  if (!j.is_boolean())
    throw ConfigError("config key '" + key + "' must be a boolean");
  return j.get<bool>();
}

}  // namespace

ToolConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  for (const auto& item : j.items())
    if (known_keys().count(item.key()) == 0)
      throw ConfigError("unknown config key '" + item.key() + "'");

  const std::string problem =
      j.contains("problem") ? as_string(j.at("problem"), "problem") : "dolly";
  const std::string ctrl = j.contains("controller.kind")
                               ? as_string(j.at("controller.kind"), "controller.kind")
                               : "curvature";

  ToolConfig c;
  try {
    if (problem == "dolly") {
      c.setup = dolly_setup(ctrl);
      c.setup.fixed_dt = defaults().dolly_dt_max;
    } else if (problem == "bounce") {
      c.setup = bounce_setup(ctrl);
    } else {
      throw ConfigError("unknown problem '" + problem + "'");
    }
    make_controller(c.setup);  // rejects unknown controller kinds early
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (ctrl == "fixed" && !j.contains("controller.dt"))
    throw ConfigError("controller.kind 'fixed' requires key 'controller.dt'");

  if (j.contains("horizon")) c.setup.t_end = as_number(j.at("horizon"), "horizon");

  if (j.contains("integrator.kind")) {
    try {
      c.setup.integ.kind = integrator_kind_from_string(
          as_string(j.at("integrator.kind"), "integrator.kind"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("integrator.rho_b"))
    c.setup.integ.rho_b = as_number(j.at("integrator.rho_b"), "integrator.rho_b");
  if (j.contains("integrator.beta"))
    c.setup.integ.chung_lee_beta =
        as_number(j.at("integrator.beta"), "integrator.beta");

  if (j.contains("controller.dt_crit")) {
    const auto [lo, hi] =
        default_dt_bounds(as_number(j.at("controller.dt_crit"), "controller.dt_crit"));
    c.setup.curv.dt_min = c.setup.af.dt_min = c.setup.le.dt_min = lo;
    c.setup.curv.dt_max = c.setup.af.dt_max = c.setup.le.dt_max = hi;
  }
  if (j.contains("controller.dt"))
    c.setup.fixed_dt = as_number(j.at("controller.dt"), "controller.dt");
  if (j.contains("controller.b"))
    c.setup.curv.b = as_number(j.at("controller.b"), "controller.b");
  if (j.contains("controller.zeta"))
    c.setup.curv.zeta = as_number(j.at("controller.zeta"), "controller.zeta");
  if (j.contains("controller.alpha"))
    c.setup.curv.alpha = as_number(j.at("controller.alpha"), "controller.alpha");
  if (j.contains("controller.rejection"))
    c.setup.curv.rejection_enabled =
        as_bool(j.at("controller.rejection"), "controller.rejection");
  if (j.contains("controller.dt_min")) {
    const double v = as_number(j.at("controller.dt_min"), "controller.dt_min");
    c.setup.curv.dt_min = c.setup.af.dt_min = c.setup.le.dt_min = v;
  }
  if (j.contains("controller.dt_max")) {
    const double v = as_number(j.at("controller.dt_max"), "controller.dt_max");
    c.setup.curv.dt_max = c.setup.af.dt_max = c.setup.le.dt_max = v;
  }
  if (j.contains("controller.safety"))
    c.setup.af.safety = as_number(j.at("controller.safety"), "controller.safety");
  if (j.contains("controller.tol_low"))
    c.setup.le.tol_low = as_number(j.at("controller.tol_low"), "controller.tol_low");
  if (j.contains("controller.tol_high"))
    c.setup.le.tol_high =
        as_number(j.at("controller.tol_high"), "controller.tol_high");

  if (j.contains("output.dir"))
    c.out_dir = as_string(j.at("output.dir"), "output.dir");
  if (j.contains("output.decimation")) {
    const double v = as_number(j.at("output.decimation"), "output.decimation");
    if (v < 1.0 || v != static_cast<double>(static_cast<int>(v)))
      throw ConfigError("config key 'output.decimation' must be an integer >= 1");
    c.setup.decimation = static_cast<int>(v);
  }
  if (j.contains("reference.dt"))
    c.reference_dt = as_number(j.at("reference.dt"), "reference.dt");
  if (j.contains("cache.dir"))
    c.cache_dir = as_string(j.at("cache.dir"), "cache.dir");

  if (!(c.setup.t_end > 0.0))
    throw ConfigError("config key 'horizon' must be positive");
  return c;
}

nlohmann::json config_to_json(const ToolConfig& c) {
  nlohmann::json j;
  j["problem"] = c.setup.problem;
  j["horizon"] = c.setup.t_end;
  j["integrator.kind"] = to_string(c.setup.integ.kind);
  j["integrator.rho_b"] = c.setup.integ.rho_b;
  j["integrator.beta"] = c.setup.integ.chung_lee_beta;
  j["controller.kind"] = c.setup.controller;
  if (c.setup.controller == "fixed") {
    j["controller.dt"] = c.setup.fixed_dt;
  } else if (c.setup.controller == "curvature") {
    j["controller.b"] = c.setup.curv.b;
    j["controller.zeta"] = c.setup.curv.zeta;
    j["controller.alpha"] = c.setup.curv.alpha;
    j["controller.rejection"] = c.setup.curv.rejection_enabled;
    j["controller.dt_min"] = c.setup.curv.dt_min;
    j["controller.dt_max"] = c.setup.curv.dt_max;
  } else if (c.setup.controller == "apparent-frequency") {
    j["controller.safety"] = c.setup.af.safety;
    j["controller.dt_min"] = c.setup.af.dt_min;
    j["controller.dt_max"] = c.setup.af.dt_max;
  } else if (c.setup.controller == "local-error") {
    j["controller.tol_low"] = c.setup.le.tol_low;
    j["controller.tol_high"] = c.setup.le.tol_high;
    j["controller.dt_min"] = c.setup.le.dt_min;
    j["controller.dt_max"] = c.setup.le.dt_max;
  }
  j["output.dir"] = c.out_dir;
  j["output.decimation"] = c.setup.decimation;
  if (c.reference_dt > 0.0) j["reference.dt"] = c.reference_dt;
  if (!c.cache_dir.empty()) j["cache.dir"] = c.cache_dir;
  return j;
}

nlohmann::json read_config_json(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open config file " + file.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + file.string() + ": " + e.what());
  }
  if (j.is_object() && j.contains("config") && j.at("config").is_object())
    return j.at("config");  // replay of a meta file
  return j;
}

ToolConfig load_config_file(const std::filesystem::path& file) {
  return config_from_json(read_config_json(file));
}

}  // namespace curvestep
