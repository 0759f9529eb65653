#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "norms.hpp"
#include "solver/covering.hpp"
#include "space.hpp"

namespace mmgrad {

/// Edge walk v_0 .. v_n (n >= 1).
struct Curve {
  std::vector<PointIndex> vertices;
  std::vector<double> lengths;  // per step
  double total_length = 0.0;

  PointIndex start() const { return vertices.front(); }
  PointIndex end() const { return vertices.back(); }
};

struct FamilyPolicy {
  enum class Kind { Edges, ShortestPaths, SimplePaths, Explicit };

  Kind kind = Kind::Edges;
  int max_hops = 0;

  static FamilyPolicy edges() { return {Kind::Edges, 1}; }
  static FamilyPolicy shortest_paths() { return {Kind::ShortestPaths, 0}; }
  static FamilyPolicy simple_paths(int hops) { return {Kind::SimplePaths, hops}; }
  /// "edges" | "shortest" | "simple:H"
  static FamilyPolicy parse(const std::string& spec);
  std::string to_string() const;
};

struct CurveFamily {
  std::vector<Curve> curves;
  FamilyPolicy policy;
};

inline constexpr std::size_t kDefaultCurveCap = 1'000'000;

/// Walk through consecutive edges of the space. Throws InvalidArgument if a
/// step is not an edge or the walk has no step.
Curve make_curve(const MetricMeasureSpace& space, std::vector<PointIndex> vertices);

/// Family from explicit vertex lists; orientation normalized so the
/// lower-index endpoint comes first, duplicates dropped.
CurveFamily family_from_walks(const MetricMeasureSpace& space, const std::vector<std::vector<PointIndex>>& walks);

CurveFamily enumerate_family(const MetricMeasureSpace& space, const FamilyPolicy& policy,
                             std::size_t cap = kDefaultCurveCap);

/// Trapezoid rule: sum_i (g(v_i) + g(v_{i+1}))/2 * length_i; +inf when a
/// touched vertex carries +inf.
double line_integral(const Field& g, const Curve& curve);

/// Coefficient row of a curve: line_integral(g, curve) = sum coef * g[var].
solver::CoverRow curve_row(const Curve& curve, double rhs = 1.0);

struct ModulusResult {
  double value = 0.0;  // Mod_p = inf sum mu rho^p
  Field rho;
  std::size_t iterations = 0;  // inner solver steps, summed
  std::size_t rounds = 0;      // constraint-generation rounds
  bool converged = true;       // false when the iteration cap was reached
  double kkt_residual = 0.0;
  std::size_t active_curves = 0;
};

struct ModulusOptions {
  double feasibility_tolerance = 1e-8;
  std::size_t iteration_cap = 100000;
};

/// p-modulus of a finite family: min sum_x mu(x) rho(x)^p over rho >= 0 with
/// line_integral(rho, gamma) >= 1 for all gamma. p = 1 is an exact LP; p in
/// (1, inf) uses the barrier solver. Curves enter by constraint generation.
ModulusResult modulus(const MetricMeasureSpace& space, const CurveFamily& family, double p,
                      const ModulusOptions& options = {});

/// Mod_p(family) <= 1e-10.
bool is_exceptional(const MetricMeasureSpace& space, const CurveFamily& family, double p);

}  // namespace mmgrad
