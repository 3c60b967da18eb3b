#include "curvestep/integrators.hpp"

#include <cmath>
#include <utility>

namespace curvestep {

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.rho_b >= 0.0) || !(cfg.rho_b <= 1.0))
    throw std::invalid_argument("integrator config: rho_b must be in [0, 1]");
  if (!(cfg.chung_lee_beta > 0.0) || !std::isfinite(cfg.chung_lee_beta))
    throw std::invalid_argument("integrator config: chung_lee_beta must be positive");
  if (!(cfg.divergence_threshold > 0.0))
    throw std::invalid_argument("integrator config: divergence_threshold must be positive");
}

const char* to_string(IntegratorKind k) {
  switch (k) {
    case IntegratorKind::cdm: return "cdm";
    case IntegratorKind::eg_alpha: return "eg-alpha";
    case IntegratorKind::chung_lee: return "chung-lee";
  }
  return "?";
}

IntegratorKind integrator_kind_from_string(const std::string& s) {
  if (s == "cdm") return IntegratorKind::cdm;
  if (s == "eg-alpha") return IntegratorKind::eg_alpha;
  if (s == "chung-lee") return IntegratorKind::chung_lee;
  throw std::invalid_argument("unknown integrator kind: " + s);
}

DivergenceError::DivergenceError(double t, const std::string& what_arg)
    : std::runtime_error(what_arg), t_(t) {}

ControllerError::ControllerError(double t, const std::string& what_arg)
    : std::runtime_error(what_arg), t_(t) {}

namespace {

void check_health(const SystemState& s, double threshold) {
  for (std::size_t i = 0; i < s.d.size(); ++i) {
    if (!std::isfinite(s.d[i]) || !std::isfinite(s.v[i]) || !std::isfinite(s.a[i]))
      throw DivergenceError(s.t, "non-finite state at t = " + std::to_string(s.t));
    if (std::abs(s.d[i]) > threshold)
      throw DivergenceError(s.t, "displacement magnitude exceeded " +
                                     std::to_string(threshold) + " at t = " +
                                     std::to_string(s.t));
  }
}

}  // namespace

StepReport step_cdm(const MechanicalSystem& sys, const SystemState& s, double dt,
                    double divergence_threshold) {
  const std::size_t n = s.d.size();
  StepReport rep;
  SystemState& o = rep.new_state;
  o.t = s.t + dt;
  o.d.resize(n);
  o.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    o.d[i] = s.d[i] + dt * s.v[i] + 0.5 * dt * dt * s.a[i];
    o.v[i] = s.v[i] + dt * s.a[i];  // predictor, refined after the force call
  }
  o.a = sys.accel(o);
  rep.force_evaluations = 1;
  for (std::size_t i = 0; i < n; ++i)
    o.v[i] = s.v[i] + 0.5 * dt * (s.a[i] + o.a[i]);
  check_health(o, divergence_threshold);
  return rep;
}

EgAlphaCoefficients eg_alpha_coefficients(double rho_b) {
  EgAlphaCoefficients c;
  c.alpha_m = (2.0 * rho_b - 1.0) / (rho_b + 1.0);
  c.gamma = 1.5 - c.alpha_m;
  c.beta = (5.0 - 3.0 * rho_b) /
           ((1.0 + rho_b) * (1.0 + rho_b) * (2.0 - rho_b));
  return c;
}

namespace {

// Shared update for the lagged-force explicit family.
StepReport lagged_force_step(const MechanicalSystem& sys, const SystemState& s,
                             double dt, double alpha_m, double beta, double gamma,
                             double divergence_threshold) {
  const std::size_t n = s.d.size();
  StepReport rep;
  SystemState& o = rep.new_state;
  o.t = s.t + dt;

  const Vec r = sys.accel(s);  // force at the step's start state
  rep.force_evaluations = 1;

  o.a.resize(n);
  o.d.resize(n);
  o.v.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    o.a[i] = (r[i] - alpha_m * s.a[i]) / (1.0 - alpha_m);
  for (std::size_t i = 0; i < n; ++i) {
    o.d[i] = s.d[i] + dt * s.v[i] +
             dt * dt * ((0.5 - beta) * s.a[i] + beta * o.a[i]);
    o.v[i] = s.v[i] + dt * ((1.0 - gamma) * s.a[i] + gamma * o.a[i]);
  }
  check_health(o, divergence_threshold);
  return rep;
}

}  // namespace

StepReport step_eg_alpha(const MechanicalSystem& sys, const SystemState& s,
                         double dt, double rho_b, double divergence_threshold) {
  const EgAlphaCoefficients c = eg_alpha_coefficients(rho_b);
  return lagged_force_step(sys, s, dt, c.alpha_m, c.beta, c.gamma,
                           divergence_threshold);
}

StepReport step_chung_lee(const MechanicalSystem& sys, const SystemState& s,
                          double dt, double beta, double divergence_threshold) {
  return lagged_force_step(sys, s, dt, 0.0, beta, 1.5, divergence_threshold);
}

StepReport step(const MechanicalSystem& sys, const SystemState& s, double dt,
                const IntegratorConfig& cfg) {
  switch (cfg.kind) {
    case IntegratorKind::cdm:
      return step_cdm(sys, s, dt, cfg.divergence_threshold);
    case IntegratorKind::eg_alpha:
      return step_eg_alpha(sys, s, dt, cfg.rho_b, cfg.divergence_threshold);
    case IntegratorKind::chung_lee:
      return step_chung_lee(sys, s, dt, cfg.chung_lee_beta,
                            cfg.divergence_threshold);
  }
  throw std::logic_error("step: bad integrator kind");
}

void run_into(RunRecord& rec, const MechanicalSystem& sys,
              const SystemState& initial, const IntegratorConfig& integ,
              StepController& ctrl, double t_end, const RunOptions& opts) {
  validate(sys);
  validate(integ);
  if (initial.d.size() != sys.dof_count || initial.v.size() != sys.dof_count)
    throw std::invalid_argument("run: initial state size != dof_count");
  if (!(t_end > initial.t))
    throw std::invalid_argument("run: t_end must exceed the initial time");
  if (opts.decimation < 1)
    throw std::invalid_argument("run: decimation must be >= 1");

  rec = RunRecord{};
  rec.dof = sys.dof_count;
  rec.decimation = opts.decimation;

  SystemState s = initial;
  s.a = sys.accel(s);  // initial acceleration: one counted evaluation
  rec.total_force_evaluations = 1;
  check_health(s, integ.divergence_threshold);

  ctrl.start(s);
  rec.append(s, 0.0, ctrl.effective_curvature());

  long steps_total = 0;
  int since_kept = 0;
  double last_dt = 0.0;

  while (s.t < t_end) {
    double dt = ctrl.propose_dt(s);
    bool first_attempt = true;
    for (;;) {
      if (!(dt > 0.0) || !std::isfinite(dt))
        throw ControllerError(s.t, "controller proposed unusable dt");
      // Land exactly on the horizon or a controller target. A remainder below
      // a ppb of the step is roundoff from accumulation, not a real step: it
      // is absorbed into this one.
      bool pinned = false;
      double pin = 0.0;
      if (s.t + dt >= t_end - 1e-9 * dt) {
        pin = t_end;
        dt = t_end - s.t;
        pinned = true;
      } else if (first_attempt) {
        if (const auto tg = ctrl.pending_target()) {
          pin = *tg;
          pinned = true;
        }
      }
      if (s.t + dt == s.t)
        throw ControllerError(s.t, "step size too small to advance time");
      if (++steps_total > opts.max_steps)
        throw std::runtime_error("run: step budget exhausted");

      StepReport rep = step(sys, s, dt, integ);
      rec.total_force_evaluations += rep.force_evaluations;
      if (pinned) rep.new_state.t = pin;

      const PostStepAction act = ctrl.after_step(s, rep.new_state, dt);
      if (act.kind == PostStepAction::Kind::retry) {
        ++rec.retried_steps;
        dt = act.retry_dt;
        first_attempt = false;
        continue;
      }
      if (act.kind == PostStepAction::Kind::rollback) {
        s = act.rollback_state;
        ++rec.rollbacks;
        rec.truncate_after(s.t);
        since_kept = 0;
        break;
      }
      s = std::move(rep.new_state);
      rec.note_accepted(s.t, dt);
      last_dt = dt;
      if (++since_kept >= rec.decimation) {
        rec.append(s, dt, ctrl.effective_curvature());
        since_kept = 0;
      }
      break;
    }
  }
  if (rec.t.empty() || rec.t.back() != s.t)
    rec.append(s, last_dt, ctrl.effective_curvature());
  rec.final_time = s.t;
}

RunRecord run(const MechanicalSystem& sys, const SystemState& initial,
              const IntegratorConfig& integ, StepController& ctrl, double t_end,
              const RunOptions& opts) {
  RunRecord rec;
  run_into(rec, sys, initial, integ, ctrl, t_end, opts);
  return rec;
}

}  // namespace curvestep
