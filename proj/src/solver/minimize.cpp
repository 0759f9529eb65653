#include "solver/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "error.hpp"
#include "extended.hpp"
#include "solver/barrier.hpp"
#include "solver/simplex.hpp"

namespace mmgrad::solver {

namespace {

std::vector<double> local_weights(const MetricMeasureSpace& space, const Reduction& red) {
  std::vector<double> w(red.kept.size());
  for (std::size_t k = 0; k < red.kept.size(); ++k) w[k] = space.measure(red.kept[k]);
  return w;
}

struct MorreyBall {
  std::vector<PointIndex> members;  // mu-positive members
  double mass = 0.0;
};

/// Distinct mu-positive member sets over all balls of the space.
std::vector<MorreyBall> distinct_balls(const MetricMeasureSpace& space) {
  std::set<std::vector<PointIndex>> seen;
  std::vector<MorreyBall> balls;
  for (PointIndex x = 0; x < space.size(); ++x) {
    const BallPrefixes bp = ball_prefixes(space, x);
    std::vector<PointIndex> members;
    std::size_t k = 0;
    for (std::size_t end : bp.ends) {
      bool grew = false;
      for (; k < end; ++k) {
        if (space.measure(bp.order[k]) > 0.0) {
          members.push_back(bp.order[k]);
          grew = true;
        }
      }
      if (!grew || members.empty()) continue;
      std::vector<PointIndex> key = members;
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second) continue;
      MorreyBall b;
      b.members = std::move(key);
      for (PointIndex y : b.members) b.mass += space.measure(y);
      balls.push_back(std::move(b));
    }
  }
  return balls;
}

NormMinimization minimize_morrey(const MetricMeasureSpace& space, const FunctionNorm& norm,
                                 const CoveringProgram& program, const Reduction& red) {
  const double p = norm.p;
  const double ball_exponent = p / norm.q - 1.0;  // (mu(B)^(1/q-1/p))^p
  std::vector<std::ptrdiff_t> local(space.size(), -1);
  for (std::size_t k = 0; k < red.kept.size(); ++k) local[red.kept[k]] = static_cast<std::ptrdiff_t>(k);

  const std::vector<MorreyBall> balls = distinct_balls(space);
  std::vector<PowerRow> rows_of_ball(balls.size());
  std::vector<bool> usable(balls.size(), false);
  for (std::size_t b = 0; b < balls.size(); ++b) {
    const double c = std::pow(balls[b].mass, ball_exponent);
    for (PointIndex y : balls[b].members) {
      if (local[y] >= 0) rows_of_ball[b].terms.push_back({static_cast<std::size_t>(local[y]), c * space.measure(y)});
    }
    usable[b] = !rows_of_ball[b].terms.empty();
  }

  // Start from singletons and the largest ball.
  std::vector<bool> active(balls.size(), false);
  std::size_t largest = 0;
  for (std::size_t b = 0; b < balls.size(); ++b) {
    if (!usable[b]) continue;
    if (balls[b].members.size() == 1) active[b] = true;
    if (balls[b].mass > balls[largest].mass) largest = b;
  }
  if (usable[largest]) active[largest] = true;

  BarrierProblem bp;
  bp.num_vars = red.kept.size();
  bp.p = p;
  bp.epigraph = true;
  bp.rows = red.rows;
  // Run ball generation on the unit problem so its decisions do not depend
  // on the scale of u.
  double scale = 0.0;
  for (const CoverRow& row : bp.rows) scale = std::max(scale, row.rhs);
  for (CoverRow& row : bp.rows) row.rhs /= scale;

  NormMinimization out;
  out.stats.method = "barrier+ball-generation";
  BarrierResult res;
  while (true) {
    bp.power_rows.clear();
    for (std::size_t b = 0; b < balls.size(); ++b) {
      if (active[b]) bp.power_rows.push_back(rows_of_ball[b]);
    }
    res = solve_barrier(bp);
    ++out.stats.rounds;
    out.stats.iterations += res.newton_steps;
    out.stats.converged = out.stats.converged && res.converged;
    out.stats.kkt_residual = res.kkt_residual;

    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t b = 0; b < balls.size(); ++b) {
      if (!usable[b] || active[b]) continue;
      double s = 0.0;
      for (const Term& t : rows_of_ball[b].terms) s += t.coef * std::pow(res.x[t.var], p);
      if (s > res.epigraph_value * (1.0 + 1e-9)) violated.push_back({-s, b});
    }
    if (violated.empty() || out.stats.iterations > 100000) break;
    std::sort(violated.begin(), violated.end());
    for (std::size_t k = 0; k < violated.size() && k < 8; ++k) active[violated[k].second] = true;
  }
  for (double& v : res.x) v *= scale;
  out.x = expand(program, space.measures(), red, res.x);
  out.value = norm.evaluate(space, out.x);
  return out;
}

}  // namespace

NormMinimization minimize_linf_pairs(const MetricMeasureSpace& space, const CoveringProgram& program) {
  const Reduction red = reduce(program, space.measures());
  const std::size_t n = red.kept.size();
  double top = 0.0;
  std::vector<std::vector<std::pair<std::size_t, double>>> partners(n);
  for (const CoverRow& row : red.rows) {
    if (row.terms.size() != 2 || row.terms[0].coef != row.terms[1].coef || row.terms[0].var == row.terms[1].var) {
      throw Error(ErrorCode::SolverFailure, "L^inf minimization needs pair rows x_i + x_j >= c");
    }
    const double c = row.rhs / row.terms[0].coef;
    top = std::max(top, c / 2.0);
    partners[row.terms[0].var].push_back({row.terms[1].var, c});
    partners[row.terms[1].var].push_back({row.terms[0].var, c});
  }
  // Lexicographically least optimal point: fix variables in global index
  // order, each at the least value keeping every row satisfiable under the
  // box [0, top].
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return red.kept[a] < red.kept[b]; });
  std::vector<double> local(n, 0.0);
  std::vector<bool> fixed(n, false);
  for (std::size_t k : order) {
    double v = 0.0;
    for (const auto& [other, c] : partners[k]) v = std::max(v, c - (fixed[other] ? local[other] : top));
    local[k] = std::min(v, top);
    fixed[k] = true;
  }
  NormMinimization out;
  out.stats.method = "linf-exact";
  out.x = expand(program, space.measures(), red, local);
  out.value = lp_norm(space, out.x, kInf);
  return out;
}

NormMinimization minimize_lattice_norm(const MetricMeasureSpace& space, const FunctionNorm& norm,
                                       const CoveringProgram& program) {
  if (program.num_vars != space.size()) throw Error(ErrorCode::InvalidArgument, "program/space size mismatch");
  const Reduction red = reduce(program, space.measures());
  NormMinimization out;
  if (red.rows.empty()) {
    out.stats.method = "trivial";
    out.x = expand(program, space.measures(), red, std::vector<double>(red.kept.size(), 0.0));
    out.value = norm.evaluate(space, out.x);
    return out;
  }
  if (norm.kind == FunctionNorm::Kind::Morrey) return minimize_morrey(space, norm, program, red);
  if (is_inf(norm.p)) return minimize_linf_pairs(space, program);
  if (norm.p == 1.0) {
    const LpResult lp = solve_lp(red.kept.size(), local_weights(space, red), red.rows);
    out.stats.method = "simplex";
    out.stats.iterations = lp.pivots;
    out.stats.converged = lp.converged;
    out.x = expand(program, space.measures(), red, lp.x);
    out.value = norm.evaluate(space, out.x);
    return out;
  }
  BarrierProblem bp;
  bp.num_vars = red.kept.size();
  bp.p = norm.p;
  bp.weights = local_weights(space, red);
  bp.rows = red.rows;
  const BarrierResult res = solve_barrier(bp);
  out.stats.method = "barrier";
  out.stats.iterations = res.newton_steps;
  out.stats.converged = res.converged;
  out.stats.kkt_residual = res.kkt_residual;
  out.x = expand(program, space.measures(), red, res.x);
  out.value = norm.evaluate(space, out.x);
  return out;
}

}  // namespace mmgrad::solver
