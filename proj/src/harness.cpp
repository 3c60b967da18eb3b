#include "curvestep/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

#include "curvestep/csv.hpp"

namespace curvestep {

// --- error measurement -------------------------------------------------------

namespace {

void finish_series(ErrorSeries& es) {
  double sum2 = 0.0;
  for (std::size_t i = 0; i < es.abs_err.size(); ++i) {
    es.max_abs = std::max(es.max_abs, es.abs_err[i]);
    es.max_rel = std::max(es.max_rel, es.rel_err[i]);
    sum2 += es.abs_err[i] * es.abs_err[i];
  }
  es.rms_abs = es.abs_err.empty() ? 0.0 : std::sqrt(sum2 / es.abs_err.size());
}

/// Bracket q in the sorted time grid: on success lo and w satisfy
/// value(q) ~ (1-w)*f[lo] + w*f[lo+1]. Returns false when q is outside.
bool bracket(const std::vector<double>& t, double q, std::size_t& lo,
             double& w) {
  if (q < t.front() || q > t.back()) return false;
  auto it = std::upper_bound(t.begin(), t.end(), q);
  std::size_t hi = static_cast<std::size_t>(it - t.begin());
  if (hi == 0) hi = 1;
  if (hi >= t.size()) hi = t.size() - 1;
  lo = hi - 1;
  const double span = t[hi] - t[lo];
  w = span > 0.0 ? (q - t[lo]) / span : 0.0;
  return true;
}

}  // namespace

ErrorSeries error_vs_reference(const RunRecord& test, const RunRecord& ref,
                               double rel_floor) {
  if (test.dof != ref.dof)
    throw std::invalid_argument("error_vs_reference: dof mismatch");
  if (ref.samples() < 2)
    throw std::invalid_argument("error_vs_reference: reference too short");
  ErrorSeries es;
  const std::size_t dof = test.dof;
  for (std::size_t i = 0; i < test.samples(); ++i) {
    const double q = test.t[i];
    std::size_t lo;
    double w;
    if (!bracket(ref.t, q, lo, w)) continue;
    const std::size_t hi = lo + 1;
    double err2 = 0.0, refn2 = 0.0;
    for (std::size_t j = 0; j < dof; ++j) {
      const double r =
          (1.0 - w) * ref.d[lo * dof + j] + w * ref.d[hi * dof + j];
      const double e = test.d[i * dof + j] - r;
      err2 += e * e;
      refn2 += r * r;
    }
    const double abs_e = std::sqrt(err2);
    es.t.push_back(q);
    es.abs_err.push_back(abs_e);
    es.rel_err.push_back(abs_e / std::max(std::sqrt(refn2), rel_floor));
  }
  finish_series(es);
  return es;
}

ErrorSeries error_vs_analytic(const RunRecord& test, const BounceAnalytic& ana,
                              double rel_floor) {
  if (test.dof != 1)
    throw std::invalid_argument("error_vs_analytic: bounce reference is 1-DOF");
  ErrorSeries es;
  for (std::size_t i = 0; i < test.samples(); ++i) {
    const double href = ana.eval(test.t[i]).first;
    const double abs_e = std::abs(test.d[i] - href);
    es.t.push_back(test.t[i]);
    es.abs_err.push_back(abs_e);
    es.rel_err.push_back(abs_e / std::max(std::abs(href), rel_floor));
  }
  finish_series(es);
  return es;
}

// --- dolly channels ------------------------------------------------------------

std::vector<double> wheel1_contact_series(const RunRecord& rec,
                                          const DollyParams& p) {
  std::vector<double> f(rec.samples());
  for (std::size_t i = 0; i < rec.samples(); ++i) {
    const double d1 = rec.d[i * rec.dof];
    f[i] = d1 <= 0.0 ? p.K_ground * d1 : 0.0;
  }
  return f;
}

ErrorSeries fk5_error_vs_reference(const RunRecord& test, const RunRecord& ref,
                                   double rel_floor, const DollyParams& p) {
  if (test.dof != 7 || ref.dof != 7)
    throw std::invalid_argument("fk5_error_vs_reference: not dolly records");
  if (ref.samples() < 2)
    throw std::invalid_argument("fk5_error_vs_reference: reference too short");
  const std::vector<double> ft = wheel1_contact_series(test, p);
  const std::vector<double> fr = wheel1_contact_series(ref, p);
  ErrorSeries es;
  for (std::size_t i = 0; i < test.samples(); ++i) {
    const double q = test.t[i];
    std::size_t lo;
    double w;
    if (!bracket(ref.t, q, lo, w)) continue;
    const double r = (1.0 - w) * fr[lo] + w * fr[lo + 1];
    const double abs_e = std::abs(ft[i] - r);
    es.t.push_back(q);
    es.abs_err.push_back(abs_e);
    es.rel_err.push_back(abs_e / std::max(std::abs(r), rel_floor));
  }
  finish_series(es);
  return es;
}

namespace {

double crossing_time(double t0, double x0, double t1, double x1) {
  return t0 + (0.0 - x0) * (t1 - t0) / (x1 - x0);
}

void scan_contact(const RunRecord& rec, std::size_t j, double& leave,
                  double& back) {
  for (std::size_t i = 1; i < rec.samples(); ++i) {
    const double x0 = rec.d[(i - 1) * rec.dof + j];
    const double x1 = rec.d[i * rec.dof + j];
    if (leave < 0.0) {
      if (x0 <= 0.0 && x1 > 0.0)
        leave = crossing_time(rec.t[i - 1], x0, rec.t[i], x1);
    } else if (back < 0.0) {
      if (x0 > 0.0 && x1 <= 0.0) {
        back = crossing_time(rec.t[i - 1], x0, rec.t[i], x1);
        return;
      }
    }
  }
}

}  // namespace

ContactEvents dolly_contact_events(const RunRecord& rec) {
  if (rec.dof != 7)
    throw std::invalid_argument("dolly_contact_events: not a dolly record");
  ContactEvents ev;
  scan_contact(rec, 0, ev.wheel1_leave, ev.wheel1_return);
  scan_contact(rec, 3, ev.wheel4_leave, ev.wheel4_return);
  return ev;
}

// --- run setups -----------------------------------------------------------------

MechanicalSystem make_system(const RunSetup& setup) {
  if (setup.problem == "dolly") return build_dolly();
  if (setup.problem == "bounce") return build_bounce();
  throw std::invalid_argument("unknown problem: " + setup.problem);
}

SystemState make_initial(const RunSetup& setup) {
  if (setup.problem == "dolly") return dolly_initial_state();
  if (setup.problem == "bounce") return bounce_initial_state();
  throw std::invalid_argument("unknown problem: " + setup.problem);
}

std::unique_ptr<StepController> make_controller(const RunSetup& setup) {
  if (setup.controller == "fixed")
    return std::make_unique<FixedController>(setup.fixed_dt);
  if (setup.controller == "curvature")
    return std::make_unique<CurvatureController>(setup.curv);
  if (setup.controller == "apparent-frequency")
    return std::make_unique<ApparentFrequencyController>(setup.af);
  if (setup.controller == "local-error")
    return std::make_unique<LocalErrorController>(setup.le);
  throw std::invalid_argument("unknown controller: " + setup.controller);
}

RunRecord execute(const RunSetup& setup) {
  const MechanicalSystem sys = make_system(setup);
  const SystemState init = make_initial(setup);
  const auto ctrl = make_controller(setup);
  RunOptions opts;
  opts.decimation = setup.decimation;
  return run(sys, init, setup.integ, *ctrl, setup.t_end, opts);
}

std::string canonical_key(const RunSetup& s) {
  std::string k = "v1|" + s.problem + "|tend=" + format_double(s.t_end) +
                  "|dec=" + std::to_string(s.decimation) +
                  "|integ=" + to_string(s.integ.kind);
  if (s.integ.kind == IntegratorKind::eg_alpha)
    k += ",rho=" + format_double(s.integ.rho_b);
  if (s.integ.kind == IntegratorKind::chung_lee)
    k += ",beta=" + format_double(s.integ.chung_lee_beta);
  k += "|ctrl=" + s.controller;
  if (s.controller == "fixed") {
    k += ",dt=" + format_double(s.fixed_dt);
  } else if (s.controller == "curvature") {
    k += ",b=" + format_double(s.curv.b) + ",min=" + format_double(s.curv.dt_min) +
         ",max=" + format_double(s.curv.dt_max) +
         ",zeta=" + format_double(s.curv.zeta) +
         ",alpha=" + format_double(s.curv.alpha) +
         ",rej=" + (s.curv.rejection_enabled ? std::string("1") : std::string("0"));
  } else if (s.controller == "apparent-frequency") {
    k += ",safety=" + format_double(s.af.safety) +
         ",min=" + format_double(s.af.dt_min) + ",max=" + format_double(s.af.dt_max);
  } else if (s.controller == "local-error") {
    k += ",lo=" + format_double(s.le.tol_low) + ",hi=" + format_double(s.le.tol_high) +
         ",min=" + format_double(s.le.dt_min) + ",max=" + format_double(s.le.dt_max) +
         ",floor=" + format_double(s.le.disp_floor) +
         ",retries=" + std::to_string(s.le.max_retries);
  }
  return k;
}

std::filesystem::path resolve_cache_dir(const std::filesystem::path& cache_dir) {
  if (!cache_dir.empty()) return cache_dir;
  if (const char* env = std::getenv("CURVESTEP_CACHE_DIR"); env && *env)
    return env;
  return ".curvestep-cache";
}

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

RunRecord cached_run(const RunSetup& setup, const std::filesystem::path& cache_dir) {
  const auto dir = resolve_cache_dir(cache_dir);
  std::filesystem::create_directories(dir);
  char name[32];
  std::snprintf(name, sizeof(name), "%016llx.csv",
                static_cast<unsigned long long>(fnv1a64(canonical_key(setup))));
  const auto file = dir / name;
  if (std::filesystem::exists(file)) return read_run_csv(file);
  RunRecord rec = execute(setup);
  const auto tmp = dir / (std::string(name) + ".tmp");
  write_run_csv(rec, tmp);
  std::filesystem::rename(tmp, file);  // atomic publish
  return rec;
}

// --- catalog ----------------------------------------------------------------------

const BenchmarkDefaults& defaults() {
  static const BenchmarkDefaults d;
  return d;
}

std::pair<double, double> default_dt_bounds(double dt_crit) {
  return {dt_crit / 100.0, 0.85 * dt_crit};
}

RunSetup dolly_setup(const std::string& controller, IntegratorKind kind) {
  const auto& D = defaults();
  RunSetup s;
  s.problem = "dolly";
  s.t_end = D.dolly_t_end;
  s.decimation = 1;
  s.integ.kind = kind;
  s.controller = controller;
  s.curv = {D.dolly_b, D.dolly_dt_min, D.dolly_dt_max, D.dolly_zeta, D.alpha, true};
  s.af = {D.af_safety, D.dolly_dt_min, D.dolly_dt_max};
  s.le.tol_low = D.dolly_le_tol_low;
  s.le.tol_high = D.dolly_le_tol_high;
  s.le.dt_min = D.dolly_dt_min;
  s.le.dt_max = D.dolly_dt_max;
  return s;
}

RunSetup bounce_setup(const std::string& controller, IntegratorKind kind) {
  const auto& D = defaults();
  RunSetup s;
  s.problem = "bounce";
  s.t_end = 3.0 * BounceAnalytic().first_return_time();
  s.decimation = controller == "fixed" ? 32 : 4;
  s.integ.kind = kind;
  s.controller = controller;
  s.fixed_dt = D.bounce_fixed_dt;
  s.curv = {D.bounce_b, D.bounce_dt_min, D.bounce_dt_max, D.bounce_zeta, D.alpha, true};
  s.af = {D.af_safety, D.bounce_dt_min, D.bounce_dt_max};
  s.le.tol_low = D.bounce_le_tol_low;
  s.le.tol_high = D.bounce_le_tol_high;
  s.le.dt_min = D.bounce_dt_min;
  s.le.dt_max = D.bounce_dt_max;
  return s;
}

std::vector<Experiment> experiment_catalog() {
  const auto& D = defaults();
  std::vector<Experiment> cat;

  {
    Experiment e;
    e.name = "dolly-controllers";
    e.problem = "dolly";
    e.reference_kind = "fixed-run";
    e.reference = dolly_setup("fixed");
    e.reference.fixed_dt = D.reference_dt;
    e.reference.decimation = 10;
    e.rel_floor = 1e-6;
    RunSetup fmin = dolly_setup("fixed");
    fmin.fixed_dt = D.dolly_dt_min;
    RunSetup fmax = dolly_setup("fixed");
    fmax.fixed_dt = D.dolly_dt_max;
    e.members = {fmin, fmax, dolly_setup("curvature"),
                 dolly_setup("apparent-frequency"), dolly_setup("local-error")};
    e.member_names = {"fixed-min", "fixed-max", "curvature",
                      "apparent-frequency", "local-error"};
    cat.push_back(std::move(e));
  }
  {
    Experiment e;
    e.name = "bounce-controllers";
    e.problem = "bounce";
    e.reference_kind = "analytic";
    e.rel_floor = BounceParams{}.h0;
    e.members = {bounce_setup("fixed"), bounce_setup("curvature"),
                 bounce_setup("local-error")};
    e.member_names = {"fixed", "curvature", "local-error"};
    cat.push_back(std::move(e));
  }
  {
    Experiment e;
    e.name = "dolly-integrators";
    e.problem = "dolly";
    e.reference_kind = "fixed-run";
    e.reference = dolly_setup("fixed");
    e.reference.fixed_dt = D.reference_dt;
    e.reference.decimation = 10;
    e.rel_floor = 1e-6;
    e.members = {dolly_setup("curvature", IntegratorKind::cdm),
                 dolly_setup("curvature", IntegratorKind::eg_alpha),
                 dolly_setup("curvature", IntegratorKind::chung_lee)};
    e.member_names = {"cdm", "eg-alpha", "chung-lee"};
    cat.push_back(std::move(e));
  }
  {
    Experiment e;
    e.name = "bounce-integrators";
    e.problem = "bounce";
    e.reference_kind = "analytic";
    e.rel_floor = BounceParams{}.h0;
    e.members = {bounce_setup("curvature", IntegratorKind::cdm),
                 bounce_setup("curvature", IntegratorKind::eg_alpha),
                 bounce_setup("curvature", IntegratorKind::chung_lee)};
    e.member_names = {"cdm", "eg-alpha", "chung-lee"};
    cat.push_back(std::move(e));
  }
  return cat;
}

const Experiment& find_experiment(const std::vector<Experiment>& cat,
                                  const std::string& name) {
  for (const auto& e : cat)
    if (e.name == name) return e;
  std::string known;
  for (const auto& e : cat) known += (known.empty() ? "" : ", ") + e.name;
  throw std::invalid_argument("unknown experiment '" + name + "' (have: " + known + ")");
}

CompareResult run_compare(const Experiment& exp,
                          const std::filesystem::path& cache_dir) {
  CompareResult res;
  res.experiment = exp.name;
  res.reference_kind = exp.reference_kind;
  const bool analytic = exp.reference_kind == "analytic";
  if (!analytic) res.reference = cached_run(exp.reference, cache_dir);
  const BounceAnalytic ana;
  for (std::size_t i = 0; i < exp.members.size(); ++i) {
    MemberResult m;
    m.name = exp.member_names[i];
    m.rec = execute(exp.members[i]);
    m.err = analytic ? error_vs_analytic(m.rec, ana, exp.rel_floor)
                     : error_vs_reference(m.rec, res.reference, exp.rel_floor);
    res.members.push_back(std::move(m));
  }
  return res;
}

}  // namespace curvestep
