#include "curvestep/curvature.hpp"

#include <cmath>

namespace curvestep {

double curvature(const Vec& v, const Vec& a) {
  if (v.empty()) throw std::invalid_argument("curvature: empty input");
  if (v.size() != a.size())
    throw std::invalid_argument("curvature: size mismatch " +
                                std::to_string(v.size()) + " vs " +
                                std::to_string(a.size()));
  if (!all_finite(v) || !all_finite(a))
    throw std::invalid_argument("curvature: non-finite input");

  const double g = 1.0 + dot(v, v);  // speed^2 of the graph curve
  const double aa = dot(a, a);
  // Lagrange identity: (1 + v.v)(a.a) - (v.a)^2 = a.a + sum_{i<j} (vi aj - vj ai)^2.
  // Assembled as a sum of squares the radicand is nonnegative by construction
  // and immune to the catastrophic cancellation the textbook form suffers when
  // v and a are long and nearly parallel -- in 1 DOF it collapses to a.a
  // exactly, so the scalar formula is reproduced to roundoff.
  double cross = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const double m = v[i] * a[j] - v[j] * a[i];
      cross += m * m;
    }
  return std::sqrt((aa + cross) / (g * g * g));
}

double curvature_1dof(double v, double a) {
  if (!std::isfinite(v) || !std::isfinite(a))
    throw std::invalid_argument("curvature_1dof: non-finite input");
  const double g = 1.0 + v * v;
  return std::abs(a) / (g * std::sqrt(g));
}

}  // namespace curvestep
