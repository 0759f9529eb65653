#include "solver/simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace mmgrad::solver {

LpResult solve_lp(std::size_t num_vars, const std::vector<double>& cost, const std::vector<CoverRow>& rows,
                  std::size_t max_pivots) {
  const std::size_t n = num_vars;
  const std::size_t m = rows.size();
  if (cost.size() != n) throw Error(ErrorCode::InvalidArgument, "cost vector size mismatch");
  for (double c : cost) {
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidArgument, "LP cost must be finite and >= 0");
  }
  LpResult result;
  result.x.assign(n, 0.0);
  if (m == 0 || n == 0) return result;

  double scale = 0.0;
  for (const CoverRow& r : rows) scale = std::max(scale, std::abs(r.rhs));
  for (double c : cost) scale = std::max(scale, c);
  if (scale == 0.0) scale = 1.0;
  const double tol = 1e-11 * scale;
  const double pivot_tol = 1e-11;

  const std::size_t cols = m + n;
  const std::size_t width = cols + 1;
  std::vector<double> tab(n * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return tab[i * width + j]; };
  for (std::size_t j = 0; j < m; ++j) {
    for (const Term& t : rows[j].terms) {
      if (t.var >= n) throw Error(ErrorCode::InvalidArgument, "row references unknown variable");
      at(t.var, j) += t.coef;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    at(i, m + i) = 1.0;
    at(i, cols) = cost[i];
  }
  std::vector<double> obj(width, 0.0);
  for (std::size_t j = 0; j < m; ++j) obj[j] = -rows[j].rhs;
  std::vector<std::size_t> basic(n);
  for (std::size_t i = 0; i < n; ++i) basic[i] = m + i;

  std::size_t degenerate_streak = 0;
  bool optimal = false;
  while (result.pivots < max_pivots) {
    const bool bland = degenerate_streak > 50;
    std::size_t enter = cols;
    double best = -tol;
    for (std::size_t j = 0; j < cols; ++j) {
      if (obj[j] < best) {
        enter = j;
        if (bland) break;
        best = obj[j];
      }
    }
    if (enter == cols) {
      optimal = true;
      break;
    }
    std::size_t leave = n;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = at(i, enter);
      if (a <= pivot_tol) continue;
      const double ratio = at(i, cols) / a;
      if (leave == n || ratio < best_ratio - 1e-14 * std::max(1.0, std::abs(best_ratio)) ||
          (std::abs(ratio - best_ratio) <= 1e-14 * std::max(1.0, std::abs(best_ratio)) && basic[i] < basic[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == n) throw Error(ErrorCode::SolverFailure, "LP is infeasible (dual unbounded)");
    degenerate_streak = best_ratio <= tol ? degenerate_streak + 1 : 0;

    const double piv = at(leave, enter);
    for (std::size_t j = 0; j < width; ++j) at(leave, j) /= piv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(leave, j);
      at(i, enter) = 0.0;
    }
    const double f = obj[enter];
    for (std::size_t j = 0; j < width; ++j) obj[j] -= f * at(leave, j);
    obj[enter] = 0.0;
    basic[leave] = enter;
    ++result.pivots;
  }
  result.converged = optimal;

  // Primal values are the duals of the slack columns; refine them by solving
  // B^T x = b_B on the final basis.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(0.0, obj[m + i]);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t col = basic[k];
    if (col < m) {
      for (const Term& t : rows[col].terms) basis(static_cast<Eigen::Index>(t.var), static_cast<Eigen::Index>(k)) += t.coef;
      rhs(static_cast<Eigen::Index>(k)) = rows[col].rhs;
    } else {
      basis(static_cast<Eigen::Index>(col - m), static_cast<Eigen::Index>(k)) = 1.0;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(basis.transpose());
  if (lu.isInvertible()) {
    Eigen::VectorXd refined = lu.solve(rhs);
    bool ok = true;
    std::vector<double> cand(n);
    for (std::size_t i = 0; i < n; ++i) {
      cand[i] = std::max(0.0, refined(static_cast<Eigen::Index>(i)));
      if (!std::isfinite(cand[i]) || std::abs(cand[i] - x[i]) > 1e-6 * std::max(1.0, std::abs(x[i]))) ok = false;
    }
    if (ok) x = cand;
  }
  result.x = x;
  result.objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) result.objective += cost[i] * x[i];
  return result;
}

}  // namespace mmgrad::solver
