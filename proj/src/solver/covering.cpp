#include "solver/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace mmgrad::solver {

double CoverRow::lhs(const std::vector<double>& x) const {
  double s = 0.0;
  for (const Term& t : terms) {
    if (x[t.var] == 0.0 || t.coef == 0.0) continue;
    s += t.coef * x[t.var];
  }
  return s;
}

Reduction reduce(const CoveringProgram& program, const std::vector<double>& weights) {
  if (weights.size() != program.num_vars) throw Error(ErrorCode::InvalidArgument, "weight vector size mismatch");
  Reduction red;
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> local(program.num_vars, kUnset);
  for (std::size_t r = 0; r < program.rows.size(); ++r) {
    const CoverRow& row = program.rows[r];
    if (!(row.rhs > 0.0)) continue;
    bool has_positive = false;
    bool absorbed = false;
    for (const Term& t : row.terms) {
      if (t.coef < 0.0) throw Error(ErrorCode::InvalidArgument, "covering rows need nonnegative coefficients");
      if (t.coef == 0.0) continue;
      has_positive = true;
      if (weights[t.var] <= 0.0) absorbed = true;
    }
    if (!has_positive) throw Error(ErrorCode::SolverFailure, "row with positive right-hand side has no variables");
    if (absorbed) {
      red.absorbed.push_back(r);
      continue;
    }
    CoverRow lr;
    lr.rhs = row.rhs;
    for (const Term& t : row.terms) {
      if (t.coef == 0.0) continue;
      if (local[t.var] == kUnset) {
        local[t.var] = red.kept.size();
        red.kept.push_back(t.var);
      }
      lr.terms.push_back({local[t.var], t.coef});
    }
    red.rows.push_back(std::move(lr));
  }
  return red;
}

std::vector<double> expand(const CoveringProgram& program, const std::vector<double>& weights,
                           const Reduction& reduction, const std::vector<double>& local) {
  std::vector<double> x(program.num_vars, 0.0);
  for (std::size_t k = 0; k < reduction.kept.size(); ++k) x[reduction.kept[k]] = std::max(0.0, local[k]);
  for (std::size_t r : reduction.absorbed) {
    const CoverRow& row = program.rows[r];
    const double deficit = row.rhs - row.lhs(x);
    if (deficit <= 0.0) continue;
    for (const Term& t : row.terms) {
      if (t.coef > 0.0 && weights[t.var] <= 0.0) {
        x[t.var] += deficit / t.coef;
        // Guard against rounding leaving the row a hair short.
        while (row.lhs(x) < row.rhs) x[t.var] = std::nextafter(x[t.var], std::numeric_limits<double>::infinity());
        break;
      }
    }
  }
  return x;
}

double max_violation(const CoveringProgram& program, const std::vector<double>& x) {
  double worst = 0.0;
  for (const CoverRow& row : program.rows) worst = std::max(worst, row.rhs - row.lhs(x));
  return worst;
}

}  // namespace mmgrad::solver
