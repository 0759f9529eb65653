#pragma once

#include <cstddef>
#include <vector>

#include "solver/covering.hpp"

namespace mmgrad::solver {

/// T >= sum_k coef_k * x[var_k]^p (epigraph form of one ball of a Morrey norm).
struct PowerRow {
  std::vector<Term> terms;
};

/// Smooth convex program over x > 0:
///   power-sum form:  min sum_i w_i x_i^p              s.t. covering rows
///   epigraph form:   min T  s.t. T >= every PowerRow,      covering rows
/// with p in (1, inf).
struct BarrierProblem {
  std::size_t num_vars = 0;
  double p = 2.0;
  std::vector<double> weights;  // power-sum form only
  bool epigraph = false;
  std::vector<CoverRow> rows;
  std::vector<PowerRow> power_rows;  // epigraph form only
};

struct BarrierOptions {
  double gap_rel = 1e-10;
  double mu = 10.0;
  std::size_t max_newton = 100000;
};

struct BarrierResult {
  std::vector<double> x;
  double epigraph_value = 0.0;  // T in epigraph form
  double objective = 0.0;
  std::size_t newton_steps = 0;
  bool converged = true;
  double kkt_residual = 0.0;
};

/// Log-barrier interior-point method with damped Newton centring.
BarrierResult solve_barrier(const BarrierProblem& problem, const BarrierOptions& options = {});

}  // namespace mmgrad::solver
