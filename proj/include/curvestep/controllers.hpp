#pragma once

#include <optional>
#include <string>

#include "curvestep/curvature.hpp"
#include "curvestep/state.hpp"

namespace curvestep {

// ---------------------------------------------------------------------------
// Curvature-driven step control
// ---------------------------------------------------------------------------

struct CurvatureControllerConfig {
  double b = 1.0;        ///< decay rate of the exponential step law, > 0
  double dt_min = 0.0;   ///< hard floor, 0 < dt_min < dt_max
  double dt_max = 0.0;   ///< hard ceiling and dt at zero curvature
  double zeta = 1.0;     ///< regularizer sub-interval length = zeta * dt_max, > 0
  double alpha = 0.5;    ///< memory of the falling-curvature recurrence, in [0, 1)
  bool rejection_enabled = true;
};

/// Throws std::invalid_argument on out-of-range parameters.
void validate(const CurvatureControllerConfig& cfg);

/// Exponential step law: dt = max(dt_max * exp(-b k), dt_min).
/// Exact at the ends: k == 0 gives dt_max, underflow gives dt_min.
double dt_from_curvature(double k, const CurvatureControllerConfig& cfg);

/// Finalization recurrence for one regularizer sub-interval.
/// Rising curvature passes through, falling curvature is smoothed:
///   k_m = max_k                            if max_k >= k_prev
///   k_m = alpha k_prev + (1-alpha) max_k   otherwise
/// Guarantees k_m >= max_k, i.e. the finalized value never undercuts any raw
/// sample of its interval.
double regularized_k(double k_prev, double max_k, double alpha);

/// Outcome of the boundary-crossing check.
struct StepDecision {
  double dt = 0.0;                    ///< dt implied by the finalized curvature
  bool reject = false;                ///< discard the interval and re-integrate
  std::optional<double> rollback_to;  ///< set iff reject: checkpoint time
};

/// Rejection rule applied when a sub-interval finalizes: a strict rise of the
/// finalized curvature over the previous one rejects the interval. Throws
/// std::logic_error if a rejection fires without a checkpoint to return to.
StepDecision check_rejection(double finalized_k, double k_prev,
                             std::optional<double> checkpoint_t,
                             const CurvatureControllerConfig& cfg);

/// Running regularizer over raw curvature samples.
///
/// Time is split into sub-intervals [m dt_dl, (m+1) dt_dl) anchored at t = 0.
/// A sample exactly on a boundary belongs to the interval it opens. The
/// effective curvature at any instant is max(last finalized k, running max of
/// the current interval), so it can only rise mid-interval; drops take effect
/// at boundaries through the finalization recurrence.
class CurvatureFilter {
 public:
  CurvatureFilter(double dt_dl, double alpha);

  /// Feed one raw sample; finalizes any interval(s) the sample has passed.
  /// Returns the effective curvature after the sample. Samples must arrive in
  /// nondecreasing time order.
  double observe(double t, double k_raw);

  /// max(last finalized k, running max of the open interval).
  double effective_k() const;

  /// Last finalized per-interval value (k_{m-1} while interval m is open).
  double finalized_k() const { return k_prev_; }

  /// Running max of raw samples in the open interval.
  double running_max() const { return max_k_; }

  /// Start time of the open interval's right boundary.
  double next_boundary() const { return next_boundary_; }

  /// Finalize the open interval without a boundary sample (end of a run).
  void flush();

  struct Snapshot {
    long m = 0;
    double next_boundary = 0.0;
    double k_prev = 0.0;
    double max_k = 0.0;
    bool started = false;
  };
  Snapshot snapshot() const;
  void restore(const Snapshot& s);

 private:
  void finalize_one();

  double dt_dl_;
  double alpha_;
  long m_ = 0;                 // index of the open interval
  double next_boundary_ = 0.0;
  double k_prev_ = 0.0;        // finalized value of interval m-1 (0 before any)
  double max_k_ = 0.0;
  bool started_ = false;
};

// ---------------------------------------------------------------------------
// Comparison controllers
// ---------------------------------------------------------------------------

struct ApparentFrequencyConfig {
  double safety = 0.9;
  double dt_min = 0.0;
  double dt_max = 0.0;
};

/// Step size from the apparent frequency of the last step,
/// w = sqrt(|da| / |dd|): dt = clamp(safety * 2 / w, dt_min, dt_max).
/// |dd| == 0 (no displacement change) or |da| == 0 gives dt_max.
double apparent_frequency_dt(const SystemState& prev, const SystemState& next,
                             const ApparentFrequencyConfig& cfg);

struct LocalErrorConfig {
  double tol_low = 0.0;    ///< grow below this
  double tol_high = 0.0;   ///< reject above this, tol_low < tol_high
  double dt_min = 0.0;
  double dt_max = 0.0;
  double disp_floor = 1e-12;  ///< floor for the displacement norm divisor
  int max_retries = 25;       ///< per-step bound on rejection retries
};

struct LocalErrorDecision {
  double eta = 0.0;      ///< relative local error estimate of the step
  bool reject = false;   ///< redo the step with dt_next
  double dt_next = 0.0;  ///< retry dt if rejected, else dt for the next step
};

/// Local-error rule for the central-difference family. The step estimate is
/// e = dt^2/6 |da|, normalized by max(|d|, disp_floor):
///   eta > tol_high  -> reject, retry at dt (tol_high/eta)^{1/3}, floored;
///                      a step already at dt_min is accepted as-is
///   eta < tol_low   -> accept, grow dt by the same power law toward dt_max
///                      (eta == 0 jumps straight to dt_max)
///   otherwise       -> accept, keep dt
LocalErrorDecision local_error_dt(double dt_used, double norm_da, double norm_d,
                                  const LocalErrorConfig& cfg);

// ---------------------------------------------------------------------------
// Controller interface for the run loop
// ---------------------------------------------------------------------------

/// Verdict of a controller on a just-completed step.
struct PostStepAction {
  enum class Kind { accept, retry, rollback };
  Kind kind = Kind::accept;
  double retry_dt = 0.0;        ///< Kind::retry: redo the step at this dt
  SystemState rollback_state;   ///< Kind::rollback: resume from this state
};

PostStepAction accept_step();
PostStepAction retry_step(double dt);
PostStepAction rollback_step(SystemState checkpoint);

/// Strategy that picks step sizes and may reject completed work.
///
/// Protocol per run: start(initial) once, then repeatedly propose_dt(state),
/// step, after_step(prev, next, dt_used). Each accepted state is observed
/// exactly once. propose_dt may shorten its proposal to land on an internal
/// target time; the runner queries pending_target() and pins the new time to
/// it exactly.
class StepController {
 public:
  virtual ~StepController() = default;
  virtual void start(const SystemState& initial) = 0;
  virtual double propose_dt(const SystemState& s) = 0;
  virtual PostStepAction after_step(const SystemState& prev,
                                    const SystemState& next, double dt_used) = 0;
  virtual std::optional<double> pending_target() const { return std::nullopt; }
  /// Effective curvature seen by the controller, NaN if not curvature-based.
  virtual double effective_curvature() const;
  virtual std::string name() const = 0;
};

/// Constant dt; the runner still shortens the final step to hit t_end.
class FixedController final : public StepController {
 public:
  explicit FixedController(double dt);
  void start(const SystemState&) override {}
  double propose_dt(const SystemState&) override { return dt_; }
  PostStepAction after_step(const SystemState&, const SystemState&,
                            double) override {
    return accept_step();
  }
  std::string name() const override { return "fixed"; }

 private:
  double dt_;
};

class CurvatureController final : public StepController {
 public:
  explicit CurvatureController(const CurvatureControllerConfig& cfg);
  void start(const SystemState& initial) override;
  double propose_dt(const SystemState& s) override;
  PostStepAction after_step(const SystemState& prev, const SystemState& next,
                            double dt_used) override;
  std::optional<double> pending_target() const override { return pending_target_; }
  double effective_curvature() const override;
  std::string name() const override { return "curvature"; }

  const CurvatureControllerConfig& config() const { return cfg_; }
  bool in_rerun() const { return in_rerun_; }
  long rejections() const { return rejections_; }

 private:
  CurvatureControllerConfig cfg_;
  double dt_dl_;
  CurvatureFilter filter_;
  SystemState checkpoint_;
  CurvatureFilter::Snapshot checkpoint_snap_;
  std::optional<double> pending_target_;
  bool in_rerun_ = false;   // re-integrating a rejected interval at fixed dt
  double rerun_dt_ = 0.0;
  long rejections_ = 0;
};

class ApparentFrequencyController final : public StepController {
 public:
  explicit ApparentFrequencyController(const ApparentFrequencyConfig& cfg);
  /// No increment history exists yet, so no frequency can be inferred; the
  /// first step is taken at the conservative end of the admissible range.
  void start(const SystemState&) override { next_dt_ = cfg_.dt_min; }
  double propose_dt(const SystemState&) override { return next_dt_; }
  PostStepAction after_step(const SystemState& prev, const SystemState& next,
                            double dt_used) override;
  std::string name() const override { return "apparent-frequency"; }

 private:
  ApparentFrequencyConfig cfg_;
  double next_dt_ = 0.0;
};

class LocalErrorController final : public StepController {
 public:
  explicit LocalErrorController(const LocalErrorConfig& cfg);
  void start(const SystemState&) override;
  double propose_dt(const SystemState&) override { return next_dt_; }
  PostStepAction after_step(const SystemState& prev, const SystemState& next,
                            double dt_used) override;
  std::string name() const override { return "local-error"; }

  long rejected_steps() const { return rejected_steps_; }

 private:
  LocalErrorConfig cfg_;
  double next_dt_ = 0.0;
  int retries_ = 0;
  long rejected_steps_ = 0;
};

}  // namespace curvestep
