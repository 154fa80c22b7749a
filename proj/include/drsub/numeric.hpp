#pragma once

#include <cmath>

namespace drsub {

inline constexpr double kIntegralityTol = 1e-9;
inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kTieTol = 1e-12;
inline constexpr double kViolationTol = 1e-7;

inline bool is_integral(double x) {
  return std::isfinite(x) && std::abs(x - std::round(x)) <= kIntegralityTol;
}

// Floor with the convention floor(a) = a - 1 on integers, so that
// floor(a) < a always holds. Only meaningful for bounds of fractional vertices.
inline double strict_floor(double a) {
  return is_integral(a) ? std::round(a) - 1.0 : std::floor(a);
}

// Ceiling with ceil(a) = a on integers (in particular ceil(0) = 0).
inline double int_ceil(double a) {
  return is_integral(a) ? std::round(a) : std::ceil(a);
}

// Plain rounding down of a bound on an integer vertex; integers stay put.
inline double round_down_bound(double a) {
  return is_integral(a) ? std::round(a) : std::floor(a);
}

inline bool nearly_equal(double a, double b, double tol = kIntegralityTol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

}  // namespace drsub
