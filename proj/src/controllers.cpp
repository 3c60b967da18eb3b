#include "curvestep/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace curvestep {

void validate(const CurvatureControllerConfig& cfg) {
  if (!(cfg.b > 0.0) || !std::isfinite(cfg.b))
    throw std::invalid_argument("curvature config: b must be positive");
  if (!(cfg.dt_min > 0.0) || !(cfg.dt_min < cfg.dt_max) || !std::isfinite(cfg.dt_max))
    throw std::invalid_argument("curvature config: need 0 < dt_min < dt_max");
  if (!(cfg.zeta > 0.0) || !std::isfinite(cfg.zeta))
    throw std::invalid_argument("curvature config: zeta must be positive");
  if (!(cfg.alpha >= 0.0) || !(cfg.alpha < 1.0))
    throw std::invalid_argument("curvature config: alpha must be in [0, 1)");
}

double dt_from_curvature(double k, const CurvatureControllerConfig& cfg) {
  if (!std::isfinite(k) || k < 0.0)
    throw std::invalid_argument("dt_from_curvature: curvature must be finite and >= 0");
  if (k == 0.0) return cfg.dt_max;
  return std::max(cfg.dt_max * std::exp(-cfg.b * k), cfg.dt_min);
}

double regularized_k(double k_prev, double max_k, double alpha) {
  if (max_k >= k_prev) return max_k;
  return alpha * k_prev + (1.0 - alpha) * max_k;
}

StepDecision check_rejection(double finalized_k, double k_prev,
                             std::optional<double> checkpoint_t,
                             const CurvatureControllerConfig& cfg) {
  StepDecision dec;
  dec.dt = dt_from_curvature(finalized_k, cfg);
  dec.reject = cfg.rejection_enabled && finalized_k > k_prev;
  if (dec.reject) {
    if (!checkpoint_t)
      throw std::logic_error("check_rejection: rejection without a checkpoint");
    dec.rollback_to = checkpoint_t;
  }
  return dec;
}

// --- CurvatureFilter --------------------------------------------------------

CurvatureFilter::CurvatureFilter(double dt_dl, double alpha)
    : dt_dl_(dt_dl), alpha_(alpha) {
  if (!(dt_dl > 0.0) || !std::isfinite(dt_dl))
    throw std::invalid_argument("CurvatureFilter: dt_dl must be positive");
  if (!(alpha >= 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("CurvatureFilter: alpha must be in [0, 1)");
}

void CurvatureFilter::finalize_one() {
  k_prev_ = regularized_k(k_prev_, max_k_, alpha_);
  max_k_ = 0.0;
  ++m_;
  next_boundary_ = static_cast<double>(m_ + 1) * dt_dl_;
}

double CurvatureFilter::observe(double t, double k_raw) {
  if (!std::isfinite(t) || !std::isfinite(k_raw) || k_raw < 0.0)
    throw std::invalid_argument("CurvatureFilter: bad sample");
  if (!started_) {
    m_ = static_cast<long>(std::floor(t / dt_dl_));
    next_boundary_ = static_cast<double>(m_ + 1) * dt_dl_;
    started_ = true;
  } else {
    while (t >= next_boundary_) finalize_one();  // empty intervals decay too
  }
  max_k_ = std::max(max_k_, k_raw);
  return effective_k();
}

double CurvatureFilter::effective_k() const { return std::max(k_prev_, max_k_); }

void CurvatureFilter::flush() {
  if (started_) finalize_one();
}

CurvatureFilter::Snapshot CurvatureFilter::snapshot() const {
  return {m_, next_boundary_, k_prev_, max_k_, started_};
}

void CurvatureFilter::restore(const Snapshot& s) {
  m_ = s.m;
  next_boundary_ = s.next_boundary;
  k_prev_ = s.k_prev;
  max_k_ = s.max_k;
  started_ = s.started;
}

// --- comparison controller rules --------------------------------------------

double apparent_frequency_dt(const SystemState& prev, const SystemState& next,
                             const ApparentFrequencyConfig& cfg) {
  const double ndd = dist(next.d, prev.d);
  const double nda = dist(next.a, prev.a);
  if (ndd == 0.0 || nda == 0.0) return cfg.dt_max;  // no apparent oscillation
  const double w = std::sqrt(nda / ndd);
  return std::clamp(cfg.safety * 2.0 / w, cfg.dt_min, cfg.dt_max);
}

LocalErrorDecision local_error_dt(double dt_used, double norm_da, double norm_d,
                                  const LocalErrorConfig& cfg) {
  if (!(dt_used > 0.0) || norm_da < 0.0 || norm_d < 0.0)
    throw std::invalid_argument("local_error_dt: bad input");
  LocalErrorDecision dec;
  const double e = dt_used * dt_used / 6.0 * norm_da;
  dec.eta = e / std::max(norm_d, cfg.disp_floor);
  if (dec.eta > cfg.tol_high) {
    if (dt_used <= cfg.dt_min * (1.0 + 1e-12)) {
      dec.reject = false;  // already at the floor: take what we can get
      dec.dt_next = cfg.dt_min;
    } else {
      dec.reject = true;
      dec.dt_next =
          std::max(dt_used * std::cbrt(cfg.tol_high / dec.eta), cfg.dt_min);
    }
  } else if (dec.eta < cfg.tol_low) {
    dec.reject = false;
    dec.dt_next = (dec.eta == 0.0)
                      ? cfg.dt_max
                      : std::min(dt_used * std::cbrt(cfg.tol_high / dec.eta),
                                 cfg.dt_max);
  } else {
    dec.reject = false;
    dec.dt_next = dt_used;
  }
  return dec;
}

// --- StepController ----------------------------------------------------------

PostStepAction accept_step() { return {}; }

PostStepAction retry_step(double dt) {
  PostStepAction a;
  a.kind = PostStepAction::Kind::retry;
  a.retry_dt = dt;
  return a;
}

PostStepAction rollback_step(SystemState checkpoint) {
  PostStepAction a;
  a.kind = PostStepAction::Kind::rollback;
  a.rollback_state = std::move(checkpoint);
  return a;
}

double StepController::effective_curvature() const {
  return std::numeric_limits<double>::quiet_NaN();
}

FixedController::FixedController(double dt) : dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt))
    throw std::invalid_argument("fixed controller: dt must be positive");
}

// --- CurvatureController ------------------------------------------------------

CurvatureController::CurvatureController(const CurvatureControllerConfig& cfg)
    : cfg_(cfg),
      dt_dl_(cfg.zeta * cfg.dt_max),
      filter_(cfg.zeta * cfg.dt_max, cfg.alpha) {
  validate(cfg_);
}

void CurvatureController::start(const SystemState& initial) {
  filter_ = CurvatureFilter(dt_dl_, cfg_.alpha);
  filter_.observe(initial.t, curvature(initial.v, initial.a));
  checkpoint_ = initial;
  checkpoint_snap_ = filter_.snapshot();
  pending_target_.reset();
  in_rerun_ = false;
  rerun_dt_ = 0.0;
  rejections_ = 0;
}

double CurvatureController::propose_dt(const SystemState& s) {
  double dt = in_rerun_ ? rerun_dt_ : dt_from_curvature(filter_.effective_k(), cfg_);
  const double boundary = filter_.next_boundary();
  // Land exactly on the sub-interval boundary; also absorb steps that would
  // end within roundoff of it.
  if (s.t + dt >= boundary - 1e-12 * dt_dl_) {
    dt = boundary - s.t;
    pending_target_ = boundary;
  } else {
    pending_target_.reset();
  }
  return dt;
}

PostStepAction CurvatureController::after_step(const SystemState&,
                                               const SystemState& next,
                                               double /*dt_used*/) {
  const double k_raw = curvature(next.v, next.a);
  if (next.t >= filter_.next_boundary()) {
    // Interval m closes: decide on it before the boundary sample is absorbed.
    const double finalized =
        regularized_k(filter_.finalized_k(), filter_.running_max(), cfg_.alpha);
    if (!in_rerun_) {
      const StepDecision dec = check_rejection(finalized, filter_.finalized_k(),
                                               checkpoint_.t, cfg_);
      if (dec.reject) {
        // Discard the interval, re-integrate it once at the fixed dt the
        // finalized curvature implies.
        filter_.restore(checkpoint_snap_);
        in_rerun_ = true;
        rerun_dt_ = dec.dt;
        ++rejections_;
        return rollback_step(checkpoint_);
      }
    }
    filter_.observe(next.t, k_raw);  // finalizes, then opens interval m+1
    checkpoint_ = next;
    checkpoint_snap_ = filter_.snapshot();
    in_rerun_ = false;
    return accept_step();
  }
  filter_.observe(next.t, k_raw);
  return accept_step();
}

double CurvatureController::effective_curvature() const {
  return filter_.effective_k();
}

// --- ApparentFrequencyController ----------------------------------------------

ApparentFrequencyController::ApparentFrequencyController(
    const ApparentFrequencyConfig& cfg)
    : cfg_(cfg) {
  if (!(cfg.safety > 0.0))
    throw std::invalid_argument("apparent-frequency config: safety must be positive");
  if (!(cfg.dt_min > 0.0) || !(cfg.dt_min < cfg.dt_max))
    throw std::invalid_argument("apparent-frequency config: need 0 < dt_min < dt_max");
  next_dt_ = cfg.dt_min;
}

PostStepAction ApparentFrequencyController::after_step(const SystemState& prev,
                                                       const SystemState& next,
                                                       double /*dt_used*/) {
  next_dt_ = apparent_frequency_dt(prev, next, cfg_);
  return accept_step();
}

// --- LocalErrorController ------------------------------------------------------

LocalErrorController::LocalErrorController(const LocalErrorConfig& cfg) : cfg_(cfg) {
  if (!(cfg.tol_low >= 0.0) || !(cfg.tol_low < cfg.tol_high))
    throw std::invalid_argument("local-error config: need 0 <= tol_low < tol_high");
  if (!(cfg.dt_min > 0.0) || !(cfg.dt_min < cfg.dt_max))
    throw std::invalid_argument("local-error config: need 0 < dt_min < dt_max");
  if (!(cfg.disp_floor > 0.0))
    throw std::invalid_argument("local-error config: disp_floor must be positive");
  if (cfg.max_retries < 0)
    throw std::invalid_argument("local-error config: max_retries must be >= 0");
  next_dt_ = cfg.dt_max;
}

void LocalErrorController::start(const SystemState&) {
  next_dt_ = cfg_.dt_max;
  retries_ = 0;
  rejected_steps_ = 0;
}

PostStepAction LocalErrorController::after_step(const SystemState& prev,
                                                const SystemState& next,
                                                double dt_used) {
  const LocalErrorDecision dec =
      local_error_dt(dt_used, dist(next.a, prev.a), norm(next.d), cfg_);
  if (dec.reject && retries_ < cfg_.max_retries) {
    ++retries_;
    ++rejected_steps_;
    return retry_step(dec.dt_next);
  }
  retries_ = 0;
  next_dt_ = dec.dt_next;
  return accept_step();
}

}  // namespace curvestep
