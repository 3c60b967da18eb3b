#pragma once

#include <utility>

#include "curvestep/state.hpp"

namespace curvestep {

/// Four-wheel dolly: 7 DOF (four wheel hops, body heave, body pitch, body
/// roll). Linear suspension (c, k) couples wheels to the body; each wheel
/// rides on a one-sided ground spring K_ground active while its displacement
/// is <= 0. A triangular force pulse hits wheel 1; the body carries a constant
/// dead load W. SI units throughout.
struct DollyParams {
  double m = 8.7563;            ///< wheel mass [kg]
  double M_body = 525.3804;     ///< body mass [kg]
  double I = 6.77908837728;     ///< body rotary inertia [kg m^2], both axes
  double c = 700.51;            ///< suspension damping [N s/m]
  double k = 87563.43;          ///< suspension stiffness [N/m]
  double K_ground = 175126.85;  ///< ground contact stiffness [N/m]
  double L = 0.6096;            ///< moment arm of the wheels [m]
  double W = 5151.04;           ///< dead load on the body [N]
  double f_max = 2224.11;       ///< pulse peak [N]
  double t_bar = 0.025;         ///< pulse rise time; pulse ends at 2 t_bar [s]
};

/// Which wheels receive the force pulse.
enum class DollyExcitation {
  wheel1,      ///< the benchmark loading
  all_wheels,  ///< symmetric variant: response must stay rotation-free
};

/// Triangular pulse: ramps to f_max at t_bar, back to zero at 2 t_bar.
double dolly_pulse(double t, const DollyParams& p);

MechanicalSystem build_dolly(const DollyParams& p = {},
                             DollyExcitation excitation = DollyExcitation::wheel1);

/// Static equilibrium under the dead load with all wheels grounded:
/// d_wheel = -W / (4 K_ground), d_body = d_wheel - W / (4 k), rotations zero.
SystemState dolly_initial_state(const DollyParams& p = {});

/// Ground-spring force under wheel 1, the benchmark's reported channel:
/// K_ground * d1 while d1 <= 0, else 0.
double dolly_wheel1_contact_force(const SystemState& s, const DollyParams& p);

/// Ball bouncing on a stiff one-sided spring floor: 1 DOF, a = -g while
/// airborne, a = -g - (k_c/m) h during contact (h <= 0).
struct BounceParams {
  double g = 10.0;      ///< gravity [m/s^2]
  double h0 = 1.25;     ///< drop height [m]
  double k_c = 1e10;    ///< floor contact stiffness [N/m]
  double mass = 1.0;    ///< ball mass [kg]
  double dt_crit = 2e-5;///< CDM stability limit 2 sqrt(m/k_c) [s]
};

MechanicalSystem build_bounce(const BounceParams& p = {});

/// Rest at drop height.
SystemState bounce_initial_state(const BounceParams& p = {});

/// Closed-form drop/contact/flight solution of the bounce problem.
/// Elastic contact conserves energy, so every cycle repeats exactly.
class BounceAnalytic {
 public:
  explicit BounceAnalytic(const BounceParams& p = {});

  /// (h, hdot) at time t >= 0.
  std::pair<double, double> eval(double t) const;

  double drop_time() const { return t_q_; }       ///< first touchdown
  double contact_duration() const { return s_c_; }
  double cycle_period() const { return T_; }      ///< contact + flight arc
  /// First return to the drop height after touchdown.
  double first_return_time() const { return t_q_ + s_c_ + v_imp_ / p_.g; }

 private:
  BounceParams p_;
  double omega_;  // sqrt(k_c/m)
  double v_imp_;  // impact speed sqrt(2 g h0)
  double t_q_;
  double s_c_;
  double T_;
};

}  // namespace curvestep
