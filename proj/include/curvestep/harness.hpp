#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "curvestep/controllers.hpp"
#include "curvestep/integrators.hpp"
#include "curvestep/models.hpp"
#include "curvestep/run_record.hpp"

namespace curvestep {

// ---------------------------------------------------------------------------
// Error measurement
// ---------------------------------------------------------------------------

/// Pointwise displacement error of a run against a reference, evaluated at the
/// run's own sample times. abs is the Euclidean norm of the displacement
/// difference; rel divides by max(reference norm, rel_floor).
struct ErrorSeries {
  std::vector<double> t;
  std::vector<double> abs_err;
  std::vector<double> rel_err;
  double max_abs = 0.0;
  double max_rel = 0.0;
  double rms_abs = 0.0;
};

/// Reference displacements are interpolated linearly in time; test samples
/// outside the reference time range are skipped.
ErrorSeries error_vs_reference(const RunRecord& test, const RunRecord& ref,
                               double rel_floor);

/// Error against the closed-form bounce solution at the run's sample times.
ErrorSeries error_vs_analytic(const RunRecord& test, const BounceAnalytic& ana,
                              double rel_floor);

// ---------------------------------------------------------------------------
// Dolly channels
// ---------------------------------------------------------------------------

/// Ground-spring force under wheel 1 at every kept sample.
std::vector<double> wheel1_contact_series(const RunRecord& rec,
                                          const DollyParams& p = {});

/// Error in the wheel-1 ground-spring force channel of a dolly run against a
/// reference run. The reference force series is interpolated linearly at the
/// test sample times; rel divides by max(|reference force|, rel_floor).
ErrorSeries fk5_error_vs_reference(const RunRecord& test, const RunRecord& ref,
                                   double rel_floor,
                                   const DollyParams& p = {});

/// Lift-off / touchdown instants of wheels 1 and 4 (zero crossings of their
/// displacements, linearly interpolated between samples).
struct ContactEvents {
  double wheel1_leave = -1.0;
  double wheel1_return = -1.0;
  double wheel4_leave = -1.0;
  double wheel4_return = -1.0;
};
ContactEvents dolly_contact_events(const RunRecord& rec);

// ---------------------------------------------------------------------------
// Run setups and execution
// ---------------------------------------------------------------------------

/// Complete recipe for one run: problem, horizon, integrator, controller.
struct RunSetup {
  std::string problem = "dolly";  ///< "dolly" | "bounce"
  double t_end = 0.0;
  int decimation = 1;
  IntegratorConfig integ;
  std::string controller = "fixed";  ///< fixed | curvature | apparent-frequency | local-error
  double fixed_dt = 0.0;
  CurvatureControllerConfig curv;
  ApparentFrequencyConfig af;
  LocalErrorConfig le;
};

MechanicalSystem make_system(const RunSetup& setup);
SystemState make_initial(const RunSetup& setup);
std::unique_ptr<StepController> make_controller(const RunSetup& setup);

/// Build system, controller, and initial state from the setup and integrate.
RunRecord execute(const RunSetup& setup);

/// Stable content key of everything that influences a run's samples.
std::string canonical_key(const RunSetup& setup);

/// Execute with a content-addressed disk cache: a prior result with the same
/// canonical key is loaded instead of recomputed. cache_dir empty means
/// $CURVESTEP_CACHE_DIR if set, else ./.curvestep-cache.
RunRecord cached_run(const RunSetup& setup,
                     const std::filesystem::path& cache_dir = {});

std::filesystem::path resolve_cache_dir(const std::filesystem::path& cache_dir);

// ---------------------------------------------------------------------------
// Experiment catalog
// ---------------------------------------------------------------------------

/// One comparison study: members share the problem and horizon and are
/// measured against the same reference.
struct Experiment {
  std::string name;
  std::string problem;
  std::string reference_kind;  ///< "fixed-run" (cached) | "analytic"
  RunSetup reference;          ///< meaningful iff reference_kind == "fixed-run"
  double rel_floor = 0.0;
  std::vector<RunSetup> members;  ///< member name = controller name or variant tag
  std::vector<std::string> member_names;
};

/// Benchmark horizons and controller constants, pinned.
struct BenchmarkDefaults {
  // dolly: critical step of the stiffest mode, ceiling at 85% of it
  double dolly_dt_crit = 2.5e-3 / 0.85;
  double dolly_dt_max = 2.5e-3;
  double dolly_dt_min = 2.5e-5 / 0.85;  // dt_crit / 100
  double dolly_t_end = 0.25;
  double dolly_b = 0.005;
  double dolly_zeta = 1.0;
  double dolly_le_tol_high = 1e-3;   // calibrated on the error/cost orderings
  double dolly_le_tol_low = 1e-5;
  // bounce
  double bounce_dt_crit = 2e-5;
  double bounce_dt_max = 1.7e-5;
  double bounce_dt_min = 2e-7;
  double bounce_fixed_dt = 2e-6;     // dt_crit / 10
  double bounce_b = 0.444;
  double bounce_zeta = 10.0;
  double bounce_le_tol_high = 1e-6;
  double bounce_le_tol_low = 1e-9;
  double alpha = 0.5;
  double af_safety = 0.9;
  double reference_dt = 1e-6;        // dolly reference run
};

const BenchmarkDefaults& defaults();

/// dt bounds implied by a critical step: floor at 1%, ceiling at 85%.
std::pair<double, double> default_dt_bounds(double dt_crit);

RunSetup dolly_setup(const std::string& controller,
                     IntegratorKind kind = IntegratorKind::cdm);
RunSetup bounce_setup(const std::string& controller,
                      IntegratorKind kind = IntegratorKind::cdm);

/// The study matrix: controller comparisons and integrator sweeps on both
/// benchmarks.
std::vector<Experiment> experiment_catalog();

const Experiment& find_experiment(const std::vector<Experiment>& cat,
                                  const std::string& name);

// ---------------------------------------------------------------------------
// Comparison evaluation
// ---------------------------------------------------------------------------

struct MemberResult {
  std::string name;
  RunRecord rec;
  ErrorSeries err;
};

struct CompareResult {
  std::string experiment;
  std::string reference_kind;
  RunRecord reference;  ///< empty for analytic references
  std::vector<MemberResult> members;
};

/// Run every member (and the reference, cached) and measure errors.
CompareResult run_compare(const Experiment& exp,
                          const std::filesystem::path& cache_dir = {});

}  // namespace curvestep
