#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvestep {

using Vec = std::vector<double>;

inline double dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("dot: size mismatch " + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

/// Euclidean norm of (x - y).
inline double dist(const Vec& x, const Vec& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("dist: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = x[i] - y[i];
    s += e * e;
  }
  return std::sqrt(s);
}

inline bool all_finite(const Vec& x) {
  for (double xi : x)
    if (!std::isfinite(xi)) return false;
  return true;
}

}  // namespace curvestep
