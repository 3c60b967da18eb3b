#pragma once

#include <functional>
#include <string>

#include "curvestep/vecmath.hpp"

namespace curvestep {

/// Full kinematic state of a semi-discrete structural model at time t.
struct SystemState {
  double t = 0.0;
  Vec d;  ///< displacements
  Vec v;  ///< velocities
  Vec a;  ///< accelerations
};

/// Space-discrete mechanical system with diagonal mass.
///
/// `accel` evaluates the right-hand side M^{-1} f(t, d, v). One call to it is
/// the unit of cost ("one solving step"); it must be deterministic in its
/// arguments. It must not read state.a.
struct MechanicalSystem {
  std::size_t dof_count = 0;
  Vec mass_diagonal;  ///< strictly positive entries, size dof_count
  std::function<Vec(const SystemState&)> accel;
  std::string name;
};

/// Throws std::invalid_argument if the system description is inconsistent.
inline void validate(const MechanicalSystem& sys) {
  if (sys.dof_count == 0) throw std::invalid_argument("system: dof_count == 0");
  if (sys.mass_diagonal.size() != sys.dof_count)
    throw std::invalid_argument("system: mass_diagonal size != dof_count");
  for (double m : sys.mass_diagonal)
    if (!(m > 0.0)) throw std::invalid_argument("system: nonpositive mass entry");
  if (!sys.accel) throw std::invalid_argument("system: missing accel callback");
}

/// Throws std::invalid_argument if state shape does not match the system.
inline void validate_state(const MechanicalSystem& sys, const SystemState& s) {
  if (s.d.size() != sys.dof_count || s.v.size() != sys.dof_count ||
      s.a.size() != sys.dof_count)
    throw std::invalid_argument("state: vector sizes != dof_count");
}

}  // namespace curvestep
