#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "curves.hpp"
#include "norms.hpp"
#include "solver/minimize.hpp"
#include "space.hpp"

namespace mmgrad {

struct ViolationReport {
  enum class Witness { None, Pair, Curve };

  bool passed = true;
  double worst_ratio = 0.0;  // required / available, 0/0 -> 0, pos/0 -> inf
  Witness witness = Witness::None;
  PointIndex x = 0;  // pair witness
  PointIndex y = 0;
  std::size_t curve = 0;  // curve witness, index into the family
  std::size_t checked_count = 0;
};

/// Pair ratio |u(x)-u(y)| / (d(x,y)(g(x)+g(y))).
double hajlasz_ratio(const MetricMeasureSpace& space, const Field& u, const Field& g, PointIndex x, PointIndex y);

/// All pairs of mu-positive points.
ViolationReport check_hajlasz(const MetricMeasureSpace& space, const Field& u, const Field& g);

/// All pairs inside U, mu = 0 points included.
ViolationReport check_strong_hajlasz(const MetricMeasureSpace& space, const Field& u, const Field& g,
                                     const std::vector<PointIndex>& U);

/// Pairs of mu-positive points sharing a patch. Pairs are visited in the same
/// order as check_hajlasz, so the whole-space cover gives an identical report.
ViolationReport check_local_hajlasz(const MetricMeasureSpace& space, const Field& u, const Field& g,
                                    const Cover& cover);

/// Per curve |u(end)-u(start)| / line_integral(g, curve). With weak_p set,
/// curves of p-modulus zero are skipped.
ViolationReport check_upper(const MetricMeasureSpace& space, const Field& u, const Field& g,
                            const CurveFamily& family, std::optional<double> weak_p = std::nullopt);

/// Smallest c >= 0 with c*g an upper gradient of u on the family.
double minimal_factor(const MetricMeasureSpace& space, const Field& u, const Field& g, const CurveFamily& family);

/// g with +inf on every mu = 0 point that takes part in a violated pair.
/// Throws NotAHajlaszGradient when a violated pair has two mu-positive points.
Field refine_hajlasz(const MetricMeasureSpace& space, const Field& u, const Field& g);

struct HajlaszMode {
  std::optional<Cover> cover;  // local when set

  static HajlaszMode global() { return {}; }
  static HajlaszMode local(Cover c) { return {std::move(c)}; }
};

/// min ||g|| subject to g(x) + g(y) >= |u(x)-u(y)| / d(x,y) over mu-positive
/// pairs (pairs sharing a patch in local mode).
solver::NormMinimization min_hajlasz_gradient(const MetricMeasureSpace& space, const Field& u,
                                              const FunctionNorm& norm, const HajlaszMode& mode = {});

/// min ||g|| subject to (g(x) + g(y))/2 * d(x,y) >= |u(x)-u(y)| on every edge.
solver::NormMinimization min_upper_gradient(const MetricMeasureSpace& space, const Field& u,
                                            const FunctionNorm& norm);

}  // namespace mmgrad
