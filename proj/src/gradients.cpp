#include "gradients.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "error.hpp"
#include "extended.hpp"
#include "parallel.hpp"

namespace mmgrad {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

/// Worst ratio over pairs (points[a], points[b]) with a < b accepted by the
/// filter. Ties resolve to the first pair in (a, b) order.
ViolationReport scan_pairs(const MetricMeasureSpace& space, const Field& u, const Field& g,
                           const std::vector<PointIndex>& points,
                           const std::function<bool(std::size_t, std::size_t)>& accept) {
  const std::size_t m = points.size();
  std::vector<std::size_t> best_partner(m, kNone);
  std::vector<std::size_t> counts(m, 0);
  auto row = [&](std::size_t a) {
    double best = -1.0;
    for (std::size_t b = a + 1; b < m; ++b) {
      if (!accept(a, b)) continue;
      ++counts[a];
      const double r = hajlasz_ratio(space, u, g, points[a], points[b]);
      if (r > best) {
        best = r;
        best_partner[a] = b;
      }
    }
    return best;
  };
  const ArgMax worst = parallel_argmax(m, row);

  ViolationReport report;
  for (std::size_t c : counts) report.checked_count += c;
  if (worst.index != kNone && best_partner[worst.index] != kNone) {
    report.worst_ratio = worst.value;
    if (worst.value > 0.0) {
      report.witness = ViolationReport::Witness::Pair;
      report.x = points[worst.index];
      report.y = points[best_partner[worst.index]];
    }
  }
  report.passed = ratio_passes(report.worst_ratio);
  return report;
}

std::vector<PointIndex> positive_points(const MetricMeasureSpace& space) {
  std::vector<PointIndex> pts;
  for (PointIndex x = 0; x < space.size(); ++x) {
    if (space.measure(x) > 0.0) pts.push_back(x);
  }
  return pts;
}

void check_field(const MetricMeasureSpace& space, const Field& f, const char* name) {
  if (f.size() != space.size()) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " has " + std::to_string(f.size()) +
                                                " values for a space of " + std::to_string(space.size()) +
                                                " points");
  }
}

void check_gradient(const MetricMeasureSpace& space, const Field& g) {
  check_field(space, g, "gradient");
  for (double v : g) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gradient values must be nonnegative");
  }
}

}  // namespace

double hajlasz_ratio(const MetricMeasureSpace& space, const Field& u, const Field& g, PointIndex x, PointIndex y) {
  const double du = std::abs(u[x] - u[y]);
  const double gs = g[x] + g[y];
  return ext_ratio(std::isnan(du) ? kInf : du, is_inf(gs) ? kInf : space.distance(x, y) * gs);
}

ViolationReport check_hajlasz(const MetricMeasureSpace& space, const Field& u, const Field& g) {
  check_field(space, u, "u");
  check_gradient(space, g);
  return scan_pairs(space, u, g, positive_points(space), [](std::size_t, std::size_t) { return true; });
}

ViolationReport check_strong_hajlasz(const MetricMeasureSpace& space, const Field& u, const Field& g,
                                     const std::vector<PointIndex>& U) {
  check_field(space, u, "u");
  check_gradient(space, g);
  std::vector<PointIndex> pts = U;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return scan_pairs(space, u, g, pts, [](std::size_t, std::size_t) { return true; });
}

ViolationReport check_local_hajlasz(const MetricMeasureSpace& space, const Field& u, const Field& g,
                                    const Cover& cover) {
  check_field(space, u, "u");
  check_gradient(space, g);
  const std::vector<PointIndex> pts = positive_points(space);
  std::vector<std::ptrdiff_t> slot(space.size(), -1);
  for (std::size_t a = 0; a < pts.size(); ++a) slot[pts[a]] = static_cast<std::ptrdiff_t>(a);
  const std::size_t m = pts.size();
  std::vector<bool> together(m * m, false);
  for (const auto& patch : cover.patches) {
    std::vector<std::size_t> members;
    for (PointIndex x : patch) {
      if (x < space.size() && slot[x] >= 0) members.push_back(static_cast<std::size_t>(slot[x]));
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = 0; j < members.size(); ++j) together[members[i] * m + members[j]] = true;
    }
  }
  return scan_pairs(space, u, g, pts, [&](std::size_t a, std::size_t b) { return together[a * m + b]; });
}

ViolationReport check_upper(const MetricMeasureSpace& space, const Field& u, const Field& g,
                            const CurveFamily& family, std::optional<double> weak_p) {
  check_field(space, u, "u");
  check_gradient(space, g);
  const std::size_t count = family.curves.size();
  std::vector<bool> skipped(count, false);
  if (weak_p) {
    for (std::size_t c = 0; c < count; ++c) {
      CurveFamily single;
      single.curves.push_back(family.curves[c]);
      skipped[c] = is_exceptional(space, single, *weak_p);
    }
  }
  auto ratio = [&](std::size_t c) {
    if (skipped[c]) return -1.0;
    const Curve& curve = family.curves[c];
    const double du = std::abs(u[curve.end()] - u[curve.start()]);
    return ext_ratio(std::isnan(du) ? kInf : du, line_integral(g, curve));
  };
  const ArgMax worst = parallel_argmax(count, ratio);

  ViolationReport report;
  report.checked_count = static_cast<std::size_t>(std::count(skipped.begin(), skipped.end(), false));
  if (worst.index != kNone && worst.value >= 0.0) {
    report.worst_ratio = worst.value;
    if (worst.value > 0.0) {
      report.witness = ViolationReport::Witness::Curve;
      report.curve = worst.index;
    }
  }
  report.passed = ratio_passes(report.worst_ratio);
  return report;
}

double minimal_factor(const MetricMeasureSpace& space, const Field& u, const Field& g, const CurveFamily& family) {
  return check_upper(space, u, g, family).worst_ratio;
}

Field refine_hajlasz(const MetricMeasureSpace& space, const Field& u, const Field& g) {
  check_field(space, u, "u");
  check_gradient(space, g);
  Field refined = g;
  const std::size_t n = space.size();
  for (PointIndex x = 0; x < n; ++x) {
    for (PointIndex y = x + 1; y < n; ++y) {
      if (ratio_passes(hajlasz_ratio(space, u, g, x, y))) continue;
      const bool x_null = space.measure(x) == 0.0;
      const bool y_null = space.measure(y) == 0.0;
      if (!x_null && !y_null) {
        throw Error(ErrorCode::NotAHajlaszGradient,
                    "pair ('" + space.id(x) + "', '" + space.id(y) + "') violates the inequality at positive measure");
      }
      if (x_null) refined[x] = kInf;
      if (y_null) refined[y] = kInf;
    }
  }
  return refined;
}

solver::NormMinimization min_hajlasz_gradient(const MetricMeasureSpace& space, const Field& u,
                                              const FunctionNorm& norm, const HajlaszMode& mode) {
  check_field(space, u, "u");
  const std::vector<PointIndex> pts = positive_points(space);
  const std::size_t m = pts.size();
  std::vector<bool> together;
  if (mode.cover) {
    std::vector<std::ptrdiff_t> slot(space.size(), -1);
    for (std::size_t a = 0; a < m; ++a) slot[pts[a]] = static_cast<std::ptrdiff_t>(a);
    together.assign(m * m, false);
    for (const auto& patch : mode.cover->patches) {
      std::vector<std::size_t> members;
      for (PointIndex x : patch) {
        if (x < space.size() && slot[x] >= 0) members.push_back(static_cast<std::size_t>(slot[x]));
      }
      for (std::size_t i : members) {
        for (std::size_t j : members) together[i * m + j] = true;
      }
    }
  }

  solver::CoveringProgram program;
  program.num_vars = space.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (mode.cover && !together[a * m + b]) continue;
      const double du = std::abs(u[pts[a]] - u[pts[b]]);
      if (!std::isfinite(du)) throw Error(ErrorCode::InvalidArgument, "u must be finite at mu-positive points");
      if (du == 0.0) continue;
      program.rows.push_back({{{pts[a], 1.0}, {pts[b], 1.0}}, du / space.distance(pts[a], pts[b])});
    }
  }
  return solver::minimize_lattice_norm(space, norm, program);
}

solver::NormMinimization min_upper_gradient(const MetricMeasureSpace& space, const Field& u,
                                            const FunctionNorm& norm) {
  check_field(space, u, "u");
  solver::CoveringProgram program;
  program.num_vars = space.size();
  for (const Edge& e : space.edges()) {
    const double du = std::abs(u[e.a] - u[e.b]);
    if (!std::isfinite(du)) throw Error(ErrorCode::InvalidArgument, "u must be finite on edge endpoints");
    if (du == 0.0) continue;
    program.rows.push_back({{{std::min(e.a, e.b), 1.0}, {std::max(e.a, e.b), 1.0}}, 2.0 * du / e.length});
  }
  return solver::minimize_lattice_norm(space, norm, program);
}

}  // namespace mmgrad
