#pragma once

#include <stdexcept>

#include "curvestep/controllers.hpp"
#include "curvestep/run_record.hpp"
#include "curvestep/state.hpp"

namespace curvestep {

enum class IntegratorKind { cdm, eg_alpha, chung_lee };

struct IntegratorConfig {
  IntegratorKind kind = IntegratorKind::cdm;
  double rho_b = 0.8;                  ///< eg_alpha bifurcation spectral radius, [0, 1]
  double chung_lee_beta = 28.0 / 27.0; ///< chung_lee displacement weight, > 0
  double divergence_threshold = 1e8;   ///< |d|_inf beyond this is divergence
};

void validate(const IntegratorConfig& cfg);

const char* to_string(IntegratorKind k);
IntegratorKind integrator_kind_from_string(const std::string& s);

/// The integration blew up: some state entry went non-finite or the
/// displacement magnitude crossed the divergence threshold.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double t, const std::string& what_arg);
  double when() const { return t_; }

 private:
  double t_;
};

/// A controller produced an unusable step size (nonpositive, non-finite, or
/// too small to advance time).
class ControllerError : public std::runtime_error {
 public:
  ControllerError(double t, const std::string& what_arg);
  double when() const { return t_; }

 private:
  double t_;
};

/// One integration step; force_evaluations is the cost spent (always 1).
struct StepReport {
  SystemState new_state;
  long force_evaluations = 0;
};

/// Central difference step in single-step form: one force evaluation at the
/// end of the displacement update, trapezoidal velocity update.
StepReport step_cdm(const MechanicalSystem& sys, const SystemState& s, double dt,
                    double divergence_threshold = 1e8);

/// Explicit generalized-alpha step (lagged force):
///   a1 = (accel(t, d, v) - am a0) / (1 - am),  am = (2 rho - 1)/(rho + 1)
///   d1 = d + dt v + dt^2 ((1/2 - beta) a0 + beta a1)
///   v1 = v + dt ((1 - gamma) a0 + gamma a1),   gamma = 3/2 - am
///   beta = (5 - 3 rho) / ((1 + rho)^2 (2 - rho))
StepReport step_eg_alpha(const MechanicalSystem& sys, const SystemState& s,
                         double dt, double rho_b,
                         double divergence_threshold = 1e8);

/// Chung-Lee step: the am = 0 member of the family above with gamma = 3/2 and
/// a free displacement weight beta.
StepReport step_chung_lee(const MechanicalSystem& sys, const SystemState& s,
                          double dt, double beta,
                          double divergence_threshold = 1e8);

StepReport step(const MechanicalSystem& sys, const SystemState& s, double dt,
                const IntegratorConfig& cfg);

/// eg_alpha coefficients for a given bifurcation spectral radius.
struct EgAlphaCoefficients {
  double alpha_m, beta, gamma;
};
EgAlphaCoefficients eg_alpha_coefficients(double rho_b);

struct RunOptions {
  int decimation = 1;        ///< keep every Nth accepted sample
  long max_steps = 400000000;///< hard budget on accepted + retried steps
};

/// Integrate from `initial` to t_end under a step controller.
///
/// The initial acceleration is always recomputed with one counted force
/// evaluation. The last step is shortened to land exactly on t_end, and
/// controller-requested internal targets are landed on exactly as well.
/// Progress is appended to `rec` as it happens, so on a thrown
/// DivergenceError the record holds the partial trajectory.
void run_into(RunRecord& rec, const MechanicalSystem& sys,
              const SystemState& initial, const IntegratorConfig& integ,
              StepController& ctrl, double t_end, const RunOptions& opts = {});

RunRecord run(const MechanicalSystem& sys, const SystemState& initial,
              const IntegratorConfig& integ, StepController& ctrl, double t_end,
              const RunOptions& opts = {});

}  // namespace curvestep
