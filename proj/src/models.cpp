#include "curvestep/models.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace curvestep {

double dolly_pulse(double t, const DollyParams& p) {
  if (t < 0.0 || t > 2.0 * p.t_bar) return 0.0;
  if (t <= p.t_bar) return p.f_max * t / p.t_bar;
  return p.f_max * (2.0 - t / p.t_bar);
}

MechanicalSystem build_dolly(const DollyParams& p, DollyExcitation excitation) {
  MechanicalSystem sys;
  sys.name = "dolly";
  sys.dof_count = 7;
  sys.mass_diagonal = {p.m, p.m, p.m, p.m, p.M_body, p.I, p.I};

  // Wheel rows couple to heave (index 4), pitch (5) and roll (6) with the
  // sign pattern of the wheel positions; body rows are the column sums.
  const double L = p.L;
  const std::array<std::array<double, 7>, 7> S = {{
      {1, 0, 0, 0, -1, -L, L},
      {0, 1, 0, 0, -1, L, L},
      {0, 0, 1, 0, -1, -L, -L},
      {0, 0, 0, 1, -1, L, -L},
      {-1, -1, -1, -1, 4, 0, 0},
      {-L, L, -L, L, 0, 4 * L * L, 0},
      {L, L, -L, -L, 0, 0, 4 * L * L},
  }};

  sys.accel = [p, S, excitation](const SystemState& s) -> Vec {
    Vec acc(7, 0.0);
    const double f1 = dolly_pulse(s.t, p);
    const std::array<double, 7> mass = {p.m, p.m, p.m, p.m, p.M_body, p.I, p.I};
    for (int i = 0; i < 7; ++i) {
      double f = 0.0;
      if (i == 4) f = -p.W;
      if (i == 0) f += f1;
      if (excitation == DollyExcitation::all_wheels && i >= 1 && i <= 3) f += f1;
      for (int j = 0; j < 7; ++j)
        f -= S[i][j] * (p.c * s.v[j] + p.k * s.d[j]);
      if (i < 4 && s.d[i] <= 0.0) f -= p.K_ground * s.d[i];  // one-sided ground
      acc[i] = f / mass[i];
    }
    return acc;
  };
  return sys;
}

SystemState dolly_initial_state(const DollyParams& p) {
  SystemState s;
  s.t = 0.0;
  const double dw = -p.W / (4.0 * p.K_ground);
  const double db = dw - p.W / (4.0 * p.k);
  s.d = {dw, dw, dw, dw, db, 0.0, 0.0};
  s.v.assign(7, 0.0);
  s.a.assign(7, 0.0);
  return s;
}

double dolly_wheel1_contact_force(const SystemState& s, const DollyParams& p) {
  return s.d[0] <= 0.0 ? p.K_ground * s.d[0] : 0.0;
}

MechanicalSystem build_bounce(const BounceParams& p) {
  MechanicalSystem sys;
  sys.name = "bounce";
  sys.dof_count = 1;
  sys.mass_diagonal = {p.mass};
  sys.accel = [p](const SystemState& s) -> Vec {
    const double h = s.d[0];
    double a = -p.g;
    if (h <= 0.0) a -= (p.k_c / p.mass) * h;
    return {a};
  };
  return sys;
}

SystemState bounce_initial_state(const BounceParams& p) {
  SystemState s;
  s.t = 0.0;
  s.d = {p.h0};
  s.v = {0.0};
  s.a = {-p.g};
  return s;
}

BounceAnalytic::BounceAnalytic(const BounceParams& p) : p_(p) {
  omega_ = std::sqrt(p.k_c / p.mass);
  v_imp_ = std::sqrt(2.0 * p.g * p.h0);
  t_q_ = std::sqrt(2.0 * p.h0 / p.g);

  // Contact: h(s) = A cos(w s) - B sin(w s) - A with A = g/w^2, B = v_imp/w.
  // The exit root theta = w s_c lies in (pi, 3pi/2); bisect h(theta) = 0.
  const double A = p.g / (omega_ * omega_);
  const double B = v_imp_ / omega_;
  double lo = std::numbers::pi, hi = 1.5 * std::numbers::pi;
  auto f = [&](double th) { return A * std::cos(th) - B * std::sin(th) - A; };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  s_c_ = 0.5 * (lo + hi) / omega_;
  T_ = s_c_ + 2.0 * v_imp_ / p.g;  // contact plus the full flight arc
}

std::pair<double, double> BounceAnalytic::eval(double t) const {
  if (t < 0.0) throw std::invalid_argument("BounceAnalytic: t < 0");
  if (t < t_q_) {  // initial drop
    return {p_.h0 - 0.5 * p_.g * t * t, -p_.g * t};
  }
  double phase = std::fmod(t - t_q_, T_);
  if (phase < s_c_) {  // in contact
    const double A = p_.g / (omega_ * omega_);
    const double B = v_imp_ / omega_;
    const double th = omega_ * phase;
    return {A * std::cos(th) - B * std::sin(th) - A,
            -A * omega_ * std::sin(th) - B * omega_ * std::cos(th)};
  }
  const double s = phase - s_c_;  // free flight from h = 0 upward
  return {v_imp_ * s - 0.5 * p_.g * s * s, v_imp_ - p_.g * s};
}

}  // namespace curvestep
