#pragma once

#include "curvestep/vecmath.hpp"

namespace curvestep {

/// First Frenet curvature of the graph curve t -> (t, d(t)) evaluated from
/// instantaneous velocity and acceleration:
///
///   k = sqrt( ((1 + v.v)(a.a) - (v.a)^2) / (1 + v.v)^3 )
///
/// The radicand (nonnegative by Cauchy-Schwarz) is assembled through the
/// Lagrange identity as a.a + sum of squared 2x2 minors of (v, a), which keeps
/// it nonnegative in floating point as well and avoids the cancellation of the
/// textbook form on long, nearly parallel inputs. Throws std::invalid_argument
/// on size mismatch, empty input, or non-finite entries.
double curvature(const Vec& v, const Vec& a);

/// Scalar specialization: k = |a| / (1 + v^2)^{3/2}.
double curvature_1dof(double v, double a);

}  // namespace curvestep
