#pragma once

#include <cstddef>
#include <vector>

#include "solver/covering.hpp"

namespace mmgrad::solver {

struct LpResult {
  std::vector<double> x;
  double objective = 0.0;
  std::size_t pivots = 0;
  bool converged = true;
};

/// min cost.x  s.t.  row.lhs(x) >= row.rhs for every row, x >= 0.
///
/// Requires cost >= 0 (row coefficients may have any sign). Runs the primal
/// simplex on the dual program max b.y s.t. A^T y <= cost, y >= 0, whose
/// slack basis is feasible from the start; the primal optimum is read off the
/// optimal dual basis. Pivoting is deterministic (Dantzig with smallest-index
/// ties, Bland's rule once degenerate pivots stall).
LpResult solve_lp(std::size_t num_vars, const std::vector<double>& cost, const std::vector<CoverRow>& rows,
                  std::size_t max_pivots = 100000);

}  // namespace mmgrad::solver
