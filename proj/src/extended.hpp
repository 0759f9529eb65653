#pragma once

// Extended-real conventions shared by every module: +inf absorbs addition and
// positive multiplication, 0 * inf = 0.

#include <cmath>
#include <limits>

namespace mmgrad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double v) { return std::isinf(v); }

/// Product with the measure-theoretic convention 0 * inf = 0.
inline double ext_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

/// Ratio with 0/0 -> 0, pos/0 -> inf, finite/inf -> 0.
inline double ext_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (is_inf(den)) return is_inf(num) ? kInf : 0.0;
  if (den == 0.0) return kInf;
  return num / den;
}

/// Tolerance used by every pass/fail verdict on a worst ratio.
inline constexpr double kRatioTolerance = 1e-9;

inline bool ratio_passes(double worst_ratio) { return worst_ratio <= 1.0 + kRatioTolerance; }

}  // namespace mmgrad
