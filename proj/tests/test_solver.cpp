#include <doctest.h>

#include <cmath>

#include "gradients.hpp"
#include "helpers.hpp"
#include "instances.hpp"
#include "oracles.hpp"
#include "solver/barrier.hpp"
#include "solver/covering.hpp"
#include "solver/minimize.hpp"
#include "solver/simplex.hpp"

using namespace mmgrad;
using namespace mmgrad::solver;

namespace {

CoveringProgram random_pairs(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  CoveringProgram prog{n, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < 0.7) prog.rows.push_back({{{i, 1.0}, {j, 1.0}}, rng.uniform(0.0, 2.0)});
  return prog;
}

std::vector<oracle::Row> as_oracle(const CoveringProgram& prog) {
  std::vector<oracle::Row> rows;
  for (const auto& r : prog.rows) {
    oracle::Row o{{}, r.rhs};
    for (const auto& t : r.terms) o.terms.push_back({t.var, t.coef});
    rows.push_back(o);
  }
  return rows;
}

}  // namespace

TEST_CASE("simplex solves a small covering LP") {
  // min x + 2y s.t. x + y >= 1, x >= 0.25 via a row, y free of cost pressure.
  const LpResult r = solve_lp(2, {1.0, 2.0}, {{{{0, 1.0}, {1, 1.0}}, 1.0}, {{{0, 1.0}}, 0.25}});
  CHECK(r.converged);
  CHECK(r.objective == doctest::Approx(1.0));
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(0.0));
}

TEST_CASE("LP optimum matches grid search on three variables") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const CoveringProgram prog = random_pairs(3, seed);
    const std::vector<double> cost{1.0, 1.5, 0.75};
    const LpResult r = solve_lp(3, cost, prog.rows);
    double hi = 0;
    for (const auto& row : prog.rows) hi = std::max(hi, row.rhs);
    const double brute = oracle::grid_search(3, hi, as_oracle(prog), [&](const std::vector<double>& x) {
                           return cost[0] * x[0] + cost[1] * x[1] + cost[2] * x[2];
                         }).value;
    CHECK(r.objective == doctest::Approx(brute).epsilon(1e-3));
    CHECK(max_violation(prog, r.x) <= 1e-9);
  }
}

TEST_CASE("barrier method meets the power-sum optimum") {
  // Single row x0 + x1 >= 2 with weights 1, 1 and p = 2: optimum x = (1, 1).
  BarrierProblem prob;
  prob.num_vars = 2;
  prob.p = 2.0;
  prob.weights = {1.0, 1.0};
  prob.rows = {{{{0, 1.0}, {1, 1.0}}, 2.0}};
  const BarrierResult r = solve_barrier(prob);
  CHECK(r.converged);
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.kkt_residual <= 1e-6);
}

TEST_CASE("reduction absorbs rows that touch a free variable") {
  CoveringProgram prog{3, {{{{0, 1.0}, {1, 1.0}}, 1.0}, {{{1, 1.0}, {2, 1.0}}, 3.0}}};
  const std::vector<double> weights{1.0, 0.0, 1.0};
  const Reduction red = reduce(prog, weights);
  CHECK(red.rows.empty());
  CHECK(red.absorbed.size() == 2);
  const std::vector<double> x = expand(prog, weights, red, std::vector<double>(red.kept.size(), 0.0));
  CHECK(max_violation(prog, x) == 0.0);
  CHECK(x[0] == 0.0);
  CHECK(x[2] == 0.0);
}

TEST_CASE("exact L-infinity route agrees with the LP formulation") {
  const auto s = helpers::explicit_space({{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CoveringProgram prog = random_pairs(4, seed);
    const NormMinimization exact = minimize_linf_pairs(s, prog);
    // max_i x_i as an LP: min t with x_i <= t encoded by substituting x_i = t - s_i is awkward;
    // the bound max(rhs)/2 is a lower bound for any feasible x, and exact.x attains it.
    double lower = 0;
    for (const auto& r : prog.rows) lower = std::max(lower, r.rhs / 2);
    CHECK(exact.value == doctest::Approx(lower).epsilon(1e-15));
    CHECK(max_violation(prog, exact.x) <= 1e-12);
  }
}

TEST_CASE("norm minimization outputs are feasible for every lattice") {
  const FunctionNorm norms[] = {FunctionNorm::lp(1.0), FunctionNorm::lp(2.0), FunctionNorm::lp(3.0),
                                FunctionNorm::lp(INFINITY), FunctionNorm::morrey(2.0, 3.0)};
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto s = random_geometric(7, 0.5, seed).space;
    const CoveringProgram prog = random_pairs(s.size(), seed + 40);
    for (const FunctionNorm& n : norms) {
      const NormMinimization m = minimize_lattice_norm(s, n, prog);
      CHECK(m.stats.converged);
      CHECK(max_violation(prog, m.x) <= 1e-8);
      CHECK(m.value == doctest::Approx(n.evaluate(s, m.x)).epsilon(1e-9));
      if (m.stats.method.rfind("barrier", 0) == 0) CHECK(m.stats.kkt_residual <= 1e-6);
    }
  }
}

TEST_CASE("power-sum minimization scales with the row bounds") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto s = random_geometric(8, 0.5, seed).space;
    const CoveringProgram prog = random_pairs(s.size(), seed + 70);
    CoveringProgram big = prog;
    for (auto& r : big.rows) r.rhs *= 7.25;
    for (const FunctionNorm& n : {FunctionNorm::lp(1.5), FunctionNorm::lp(3.0), FunctionNorm::morrey(2.0, 4.0)}) {
      const double a = minimize_lattice_norm(s, n, prog).value;
      CHECK(minimize_lattice_norm(s, n, big).value == doctest::Approx(7.25 * a).epsilon(1e-12));
    }
  }
}

TEST_CASE("degenerate grid programs still reach a KKT point") {
  // Lipschitz data on a lattice ties many pair rows at once.
  for (std::uint64_t seed : {5u, 15885u, 27u, 9u}) {
    const auto s = grid(8, 8, 1.0).space;
    const Field u = lipschitz_field(s, seed);
    for (const FunctionNorm& n : {FunctionNorm::lp(2.0), FunctionNorm::morrey(2.0, 3.0)}) {
      const NormMinimization g = min_hajlasz_gradient(s, u, n);
      CHECK(g.stats.converged);
      CHECK(g.stats.kkt_residual <= 1e-6);
    }
  }
}
