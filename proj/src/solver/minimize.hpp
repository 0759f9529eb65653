#pragma once

#include <vector>

#include "norms.hpp"
#include "solver/covering.hpp"

namespace mmgrad::solver {

struct NormMinimization {
  Field x;
  double value = 0.0;  // norm of x
  SolverStats stats;
};

/// Minimizes ||x|| over the covering program, the norm bound to the space's
/// measure. Variables at mu = 0 points cost nothing and absorb their rows.
///   L^1        exact LP (dual simplex)
///   L^inf      exact: optimum max(rhs)/2 over pair rows x_i + x_j >= c,
///              lexicographically least optimal point (pair rows only)
///   L^p, Morrey  log-barrier; Morrey balls enter by constraint generation
NormMinimization minimize_lattice_norm(const MetricMeasureSpace& space, const FunctionNorm& norm,
                                       const CoveringProgram& program);

/// The exact L^inf route on pair rows, exposed for cross-checking against the
/// LP formulation.
NormMinimization minimize_linf_pairs(const MetricMeasureSpace& space, const CoveringProgram& program);

}  // namespace mmgrad::solver
