#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace mmgrad::solver {

struct Term {
  std::size_t var;
  double coef;
};

/// sum_k coef_k * x[var_k] >= rhs.
struct CoverRow {
  std::vector<Term> terms;
  double rhs = 0.0;

  double lhs(const std::vector<double>& x) const;
};

/// Feasible set {x >= 0 : every row holds} with nonnegative coefficients.
struct CoveringProgram {
  std::size_t num_vars = 0;
  std::vector<CoverRow> rows;
};

struct SolverStats {
  std::string method;
  std::size_t iterations = 0;  // simplex pivots or Newton steps
  std::size_t rounds = 0;      // constraint-generation rounds
  bool converged = true;
  double kkt_residual = 0.0;
};

/// Program restricted to variables with positive weight. Rows touching a
/// zero-weight ("free") variable are absorbed: the free variable can satisfy
/// them at no cost.
struct Reduction {
  std::vector<std::size_t> kept;          // global index of each local variable
  std::vector<CoverRow> rows;             // local variable indices
  std::vector<std::size_t> absorbed;      // indices of absorbed original rows
};

Reduction reduce(const CoveringProgram& program, const std::vector<double>& weights);

/// Lifts a local solution back to all variables. Unused variables are 0;
/// free variables are raised, in row order, just enough to satisfy every
/// absorbed row (the lowest-index free variable of a row takes the slack).
std::vector<double> expand(const CoveringProgram& program, const std::vector<double>& weights,
                           const Reduction& reduction, const std::vector<double>& local);

/// Largest violation max(rhs - lhs, 0) over the rows.
double max_violation(const CoveringProgram& program, const std::vector<double>& x);

}  // namespace mmgrad::solver
