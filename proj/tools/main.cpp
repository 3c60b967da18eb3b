// curvestep: curvature-adaptive explicit time integration for small
// structural models. Subcommands: run, compare, oracle.
//
// Exit codes: 0 success, 2 configuration error, 3 divergence (partial results
// are still written), 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvestep/config.hpp"
#include "curvestep/csv.hpp"
#include "curvestep/harness.hpp"

namespace fs = std::filesystem;
using namespace curvestep;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

void write_text(const fs::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw IoError("cannot open " + file.string());
  os << text;
  if (!os) throw IoError("write failed for " + file.string());
}

nlohmann::json summary_json(const RunRecord& rec) {
  nlohmann::json s;
  s["total_force_evaluations"] = rec.total_force_evaluations;
  s["accepted_steps"] = rec.accepted_steps;
  s["retried_steps"] = rec.retried_steps;
  s["rollbacks"] = rec.rollbacks;
  s["samples"] = rec.samples();
  s["final_time"] = rec.final_time;
  s["dt_min_used"] = rec.dt_min_used;
  s["dt_max_used"] = rec.dt_max_used;
  return s;
}

int cmd_run(const ToolConfig& cfg) {
  const MechanicalSystem sys = make_system(cfg.setup);
  const SystemState init = make_initial(cfg.setup);
  const auto ctrl = make_controller(cfg.setup);
  RunOptions opts;
  opts.decimation = cfg.setup.decimation;

  RunRecord rec;
  int code = kExitOk;
  nlohmann::json divergence;
  try {
    run_into(rec, sys, init, cfg.setup.integ, *ctrl, cfg.setup.t_end, opts);
  } catch (const DivergenceError& e) {
    code = kExitDivergence;
    divergence["t"] = e.when();
    divergence["what"] = e.what();
    std::cerr << "divergence: " << e.what() << "\n";
  }

  fs::create_directories(cfg.out_dir);
  write_run_csv(rec, fs::path(cfg.out_dir) / "trajectory.csv");
  {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(rec.samples());
    for (std::size_t i = 0; i < rec.samples(); ++i)
      rows.push_back({format_double(rec.t[i]), std::to_string(rec.cum_evals[i])});
    write_table_csv(fs::path(cfg.out_dir) / "steps.csv", {"t", "force_evals"},
                    rows);
  }
  nlohmann::json meta;
  meta["config"] = config_to_json(cfg);
  meta["summary"] = summary_json(rec);
  if (code == kExitDivergence) meta["divergence"] = divergence;
  write_text(fs::path(cfg.out_dir) / "meta.json", meta.dump(2) + "\n");

  std::cout << "wrote " << (fs::path(cfg.out_dir) / "trajectory.csv").string()
            << " (" << rec.samples() << " samples, "
            << rec.total_force_evaluations << " force evaluations)\n";
  return code;
}

std::string fmt_count(long v) { return std::to_string(v); }

void append_check(std::string& out, const std::string& label, bool ok) {
  out += std::string("  [") + (ok ? "OK" : "VIOLATION") + "] " + label + "\n";
}

const MemberResult& member(const CompareResult& res, const std::string& name) {
  for (const auto& m : res.members)
    if (m.name == name) return m;
  throw std::logic_error("compare: missing member " + name);
}

std::string compare_summary(const CompareResult& res) {
  std::string out;
  out += "experiment: " + res.experiment + "\n";
  out += "reference: " + res.reference_kind;
  if (res.reference_kind == "fixed-run")
    out += " (" + fmt_count(static_cast<long>(res.reference.samples())) +
           " samples, dt_max_used " + format_double(res.reference.dt_max_used) + ")";
  out += "\n\n";
  out += "member, accepted_steps, retried_steps, rollbacks, force_evals, "
         "dt_min_used, dt_max_used, max_rel_err, max_abs_err, rms_abs_err\n";
  for (const auto& m : res.members) {
    out += m.name + ", " + fmt_count(m.rec.accepted_steps) + ", " +
           fmt_count(m.rec.retried_steps) + ", " + fmt_count(m.rec.rollbacks) +
           ", " + fmt_count(m.rec.total_force_evaluations) + ", " +
           format_double(m.rec.dt_min_used) + ", " +
           format_double(m.rec.dt_max_used) + ", " +
           format_double(m.err.max_rel) + ", " + format_double(m.err.max_abs) +
           ", " + format_double(m.err.rms_abs) + "\n";
  }
  out += "\nchecks:\n";
  if (res.experiment == "dolly-controllers") {
    const auto& fmin = member(res, "fixed-min");
    const auto& fmax = member(res, "fixed-max");
    const auto& curv = member(res, "curvature");
    const auto& af = member(res, "apparent-frequency");
    const double e_min =
        fk5_error_vs_reference(fmin.rec, res.reference, 1.0).max_abs;
    const double e_curv =
        fk5_error_vs_reference(curv.rec, res.reference, 1.0).max_abs;
    const double e_af =
        fk5_error_vs_reference(af.rec, res.reference, 1.0).max_abs;
    append_check(out,
                 "error ordering fixed-min < curvature < apparent-frequency "
                 "(max wheel-1 contact force error " +
                     format_double(e_min) + " < " + format_double(e_curv) +
                     " < " + format_double(e_af) + ")",
                 e_min < e_curv && e_curv < e_af);
    for (const auto* name : {"curvature", "apparent-frequency", "local-error"}) {
      const auto& m = member(res, name);
      append_check(out,
                   std::string(name) + " steps between fixed-max and fixed-min (" +
                       fmt_count(fmax.rec.accepted_steps) + " < " +
                       fmt_count(m.rec.accepted_steps) + " < " +
                       fmt_count(fmin.rec.accepted_steps) + ")",
                   m.rec.accepted_steps > fmax.rec.accepted_steps &&
                       m.rec.accepted_steps < fmin.rec.accepted_steps);
      append_check(out,
                   std::string(name) + " max_rel_err <= fixed-max (" +
                       format_double(m.err.max_rel) + " vs " +
                       format_double(fmax.err.max_rel) + ")",
                   m.err.max_rel <= fmax.err.max_rel);
    }
  } else if (res.experiment == "bounce-controllers") {
    const auto& fixed = member(res, "fixed");
    const auto& curv = member(res, "curvature");
    const auto& le = member(res, "local-error");
    append_check(out,
                 "curvature max_rel_err within 100x of fixed (" +
                     format_double(curv.err.max_rel) + " vs " +
                     format_double(fixed.err.max_rel) + ")",
                 curv.err.max_rel <= 100.0 * fixed.err.max_rel);
    append_check(out,
                 "curvature uses fewer steps than local-error (" +
                     fmt_count(curv.rec.accepted_steps) + " vs " +
                     fmt_count(le.rec.accepted_steps) + ")",
                 curv.rec.accepted_steps < le.rec.accepted_steps);
  } else {  // integrator sweeps
    const auto& base = res.members.front();
    for (const auto& m : res.members) {
      if (&m == &base) continue;
      append_check(out,
                   m.name + " max_rel_err within 10x of " + base.name + " (" +
                       format_double(m.err.max_rel) + " vs " +
                       format_double(base.err.max_rel) + ")",
                   m.err.max_rel <= 10.0 * base.err.max_rel &&
                       m.err.max_rel >= 0.1 * base.err.max_rel);
    }
  }
  return out;
}

int cmd_compare(const std::string& experiment, std::string out_dir,
                const std::string& cache_dir, double reference_dt) {
  const auto cat = experiment_catalog();
  Experiment exp = find_experiment(cat, experiment);
  if (reference_dt > 0.0) exp.reference.fixed_dt = reference_dt;
  if (out_dir.empty()) out_dir = "out/" + exp.name;

  const CompareResult res = run_compare(exp, cache_dir);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  std::vector<std::vector<std::string>> err_rows, step_rows, dt_rows;
  for (const auto& m : res.members) {
    write_run_csv(m.rec, dir / (m.name + ".trajectory.csv"));
    err_rows.push_back({m.name, format_double(m.err.max_abs),
                        format_double(m.err.max_rel),
                        format_double(m.err.rms_abs)});
    step_rows.push_back({m.name, fmt_count(m.rec.accepted_steps),
                         fmt_count(m.rec.retried_steps),
                         fmt_count(m.rec.rollbacks),
                         fmt_count(m.rec.total_force_evaluations),
                         format_double(m.rec.dt_min_used),
                         format_double(m.rec.dt_max_used)});
    for (std::size_t i = 0; i < m.rec.dt_log_t.size(); ++i)
      dt_rows.push_back({m.name, format_double(m.rec.dt_log_t[i]),
                         format_double(m.rec.dt_log_dt[i])});
  }
  write_table_csv(dir / "errors.csv",
                  {"member", "max_abs_err", "max_rel_err", "rms_abs_err"},
                  err_rows);
  write_table_csv(dir / "steps_compare.csv",
                  {"member", "accepted_steps", "retried_steps", "rollbacks",
                   "force_evals", "dt_min_used", "dt_max_used"},
                  step_rows);
  write_table_csv(dir / "dt_history.csv", {"member", "t", "dt"}, dt_rows);
  const std::string summary = compare_summary(res);
  write_text(dir / "summary.txt", summary);
  std::cout << summary;
  std::cout << "wrote " << out_dir << "\n";
  return kExitOk;
}

int cmd_oracle(const std::vector<double>& times) {
  for (double t : times)
    if (t < 0.0) {
      std::cerr << "oracle: times must be >= 0\n";
      return kExitConfig;
    }
  const BounceAnalytic ana;
  std::cout << "t,h,hdot\n";
  for (double t : times) {
    const auto [h, hd] = ana.eval(t);
    std::cout << format_double(t) << "," << format_double(h) << ","
              << format_double(hd) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature-adaptive explicit time integration toolkit"};
  app.require_subcommand(1);

  // run ----------------------------------------------------------------
  auto* run_cmd = app.add_subcommand(
      "run",
      "integrate one benchmark; writes trajectory.csv, steps.csv and meta.json");
  std::string config_file;
  run_cmd->add_option("--config", config_file,
                      "JSON config (flat dotted keys); a meta.json replays its run");

  struct NumOverride {
    NumOverride(const char* k, const char* f) : key(k), flag(f) {}
    const char* key;
    const char* flag;  // null: the flag is "--" + key
    double value = 0.0;
    CLI::Option* opt = nullptr;
  };
  struct StrOverride {
    StrOverride(const char* k, const char* f) : key(k), flag(f) {}
    const char* key;
    const char* flag;  // null: the flag is "--" + key
    std::string value;
    CLI::Option* opt = nullptr;
  };
  std::vector<NumOverride> nums;
  for (const char* key :
       {"horizon", "integrator.rho_b", "integrator.beta", "controller.dt",
        "controller.b", "controller.zeta", "controller.alpha",
        "controller.dt_min", "controller.dt_max", "controller.dt_crit",
        "controller.safety", "controller.tol_low", "controller.tol_high",
        "output.decimation"})
    nums.emplace_back(key, nullptr);
  // Short spellings for the most common overrides.
  nums.emplace_back("controller.dt", "--dt");
  nums.emplace_back("controller.b", "--b");
  std::vector<StrOverride> strs;
  for (const char* key : {"problem", "integrator.kind", "controller.kind",
                          "output.dir", "cache.dir"})
    strs.emplace_back(key, nullptr);
  strs.emplace_back("controller.kind", "--controller");
  for (auto& n : nums)
    n.opt = run_cmd->add_option(n.flag ? n.flag : "--" + std::string(n.key),
                                n.value,
                                "override config key " + std::string(n.key));
  for (auto& s : strs)
    s.opt = run_cmd->add_option(s.flag ? s.flag : "--" + std::string(s.key),
                                s.value,
                                "override config key " + std::string(s.key));
  bool rejection = true;
  CLI::Option* rejection_opt =
      run_cmd->add_option("--controller.rejection", rejection,
                          "override config key controller.rejection");

  // compare -------------------------------------------------------------
  auto* cmp_cmd = app.add_subcommand(
      "compare", "run a study from the experiment catalog and write the tables");
  std::string experiment;
  cmp_cmd->add_option("--experiment", experiment, "experiment name")->required();
  std::string cmp_out, cmp_cache;
  double cmp_ref_dt = 0.0;
  cmp_cmd->add_option("--output.dir", cmp_out, "output directory (default out/<experiment>)");
  cmp_cmd->add_option("--cache.dir", cmp_cache, "reference cache directory");
  cmp_cmd->add_option("--reference.dt", cmp_ref_dt, "override the reference run step");

  // oracle ---------------------------------------------------------------
  auto* orc_cmd = app.add_subcommand(
      "oracle", "print the closed-form bounce solution at the given times");
  std::vector<double> oracle_times;
  orc_cmd->add_option("times", oracle_times, "time points")->expected(-1)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      nlohmann::json j = nlohmann::json::object();
      if (!config_file.empty()) j = read_config_json(config_file);
      for (const auto& n : nums)
        if (n.opt->count() > 0) j[n.key] = n.value;
      for (const auto& s : strs)
        if (s.opt->count() > 0) j[s.key] = s.value;
      if (rejection_opt->count() > 0) j["controller.rejection"] = rejection;
      return cmd_run(config_from_json(j));
    }
    if (cmp_cmd->parsed())
      return cmd_compare(experiment, cmp_out, cmp_cache, cmp_ref_dt);
    if (orc_cmd->parsed()) return cmd_oracle(oracle_times);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ControllerError& e) {
    std::cerr << "controller error at t = " << e.when() << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
