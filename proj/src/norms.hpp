#pragma once

#include <string>
#include <vector>

#include "space.hpp"

namespace mmgrad {

/// Extended-real values indexed by point, in the space's point order.
using Field = std::vector<double>;

/// Lattice norm bound to a space: L^p for p in [1, inf], or the Morrey norm
/// M^q_p with 1 < p <= q < inf.
struct FunctionNorm {
  enum class Kind { Lp, Morrey };

  Kind kind = Kind::Lp;
  double p = 2.0;
  double q = 2.0;

  static FunctionNorm lp(double p);
  static FunctionNorm morrey(double p, double q);
  /// "lp:P" (P may be "inf") or "morrey:P:Q".
  static FunctionNorm parse(const std::string& spec);
  std::string to_string() const;

  double evaluate(const MetricMeasureSpace& space, const Field& f) const;
};

/// (sum_x mu(x)|f(x)|^p)^(1/p); for p = inf the max of |f| over mu > 0.
double lp_norm(const MetricMeasureSpace& space, const Field& f, double p);

/// sup over balls B of mu(B)^(1/q - 1/p) (sum_{x in B} mu(x)|f(x)|^p)^(1/p).
double morrey_norm(const MetricMeasureSpace& space, const Field& f, double p, double q);

/// True iff |g| <= |f| at every mu-positive point implies ||g|| <= ||f||.
bool lattice_check(const MetricMeasureSpace& space, const FunctionNorm& norm, const Field& f, const Field& g);

}  // namespace mmgrad
