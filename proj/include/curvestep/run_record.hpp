#pragma once

#include <cstddef>
#include <limits>

#include "curvestep/state.hpp"

namespace curvestep {

/// Sampled trajectory of one run plus cost counters.
///
/// Storage is flat (struct-of-arrays); sample i spans d/v/a[i*dof .. i*dof+dof).
/// dt[i] is the step size that produced sample i (0 for the initial sample);
/// k_eff[i] is the controller's effective curvature after the sample (NaN for
/// controllers that do not track curvature). `decimation` keeps every Nth
/// accepted step; the initial and final samples are always kept.
///
/// dt_log_* is a compact exact history of step-size changes: an entry is
/// appended whenever the accepted dt differs from the last logged one by more
/// than 0.5%, and entries are truncated on rollback like the samples.
struct RunRecord {
  std::size_t dof = 0;
  int decimation = 1;

  std::vector<double> t;
  std::vector<double> dt;
  std::vector<double> k_eff;
  std::vector<double> d, v, a;  // flattened, dof-major
  std::vector<long> cum_evals;  // force evaluations spent up to each sample

  std::vector<double> dt_log_t, dt_log_dt;

  long total_force_evaluations = 0;
  long accepted_steps = 0;
  long retried_steps = 0;
  long rollbacks = 0;
  double final_time = 0.0;
  double dt_min_used = std::numeric_limits<double>::infinity();
  double dt_max_used = 0.0;

  std::size_t samples() const { return t.size(); }

  /// State vectors of sample i, copied out.
  SystemState state_at(std::size_t i) const;

  void append(const SystemState& s, double dt_used, double k);

  /// Record an accepted step for the counters and the dt log.
  void note_accepted(double t_new, double dt_used);

  /// Drop samples and dt-log entries with time > t_keep.
  void truncate_after(double t_keep);

  /// Piecewise-constant dt history at time q from the dt log
  /// (value of the last entry with dt_log_t <= q; first entry before that).
  double dt_at(double q) const;
};

}  // namespace curvestep
