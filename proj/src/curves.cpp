#include "curves.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <queue>
#include <set>

#include "error.hpp"
#include "extended.hpp"
#include "parallel.hpp"
#include "solver/barrier.hpp"
#include "solver/simplex.hpp"

namespace mmgrad {

namespace {

std::vector<PointIndex> normalized(std::vector<PointIndex> walk) {
  std::vector<PointIndex> rev(walk.rbegin(), walk.rend());
  return rev < walk ? rev : walk;
}

void sort_family(CurveFamily& family) {
  std::sort(family.curves.begin(), family.curves.end(),
            [](const Curve& a, const Curve& b) { return a.vertices < b.vertices; });
}

/// All-pairs shortest paths over the edge graph (equals the metric for
/// edge-built spaces; may exceed it when an explicit space has sparse edges).
std::vector<double> graph_distances(const MetricMeasureSpace& space) {
  const std::size_t n = space.size();
  std::vector<double> gd(n * n, kInf);
  using Item = std::pair<double, PointIndex>;
  for (PointIndex src = 0; src < n; ++src) {
    double* d = &gd[src * n];
    d[src] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, src});
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > d[u]) continue;
      for (const auto& nb : space.neighbors(u)) {
        const double cand = du + nb.length;
        if (cand < d[nb.to]) {
          d[nb.to] = cand;
          heap.push({cand, nb.to});
        }
      }
    }
  }
  return gd;
}

struct Compacted {
  std::vector<std::size_t> vars;  // index into the parent variable space
  std::vector<solver::CoverRow> rows;
};

Compacted compact(const std::vector<const solver::CoverRow*>& rows, std::size_t parent_vars) {
  Compacted c;
  std::vector<std::ptrdiff_t> local(parent_vars, -1);
  for (const solver::CoverRow* row : rows) {
    solver::CoverRow lr;
    lr.rhs = row->rhs;
    for (const solver::Term& t : row->terms) {
      if (local[t.var] < 0) {
        local[t.var] = static_cast<std::ptrdiff_t>(c.vars.size());
        c.vars.push_back(t.var);
      }
      lr.terms.push_back({static_cast<std::size_t>(local[t.var]), t.coef});
    }
    c.rows.push_back(std::move(lr));
  }
  return c;
}

/// Closed form for a single row sum a_i x_i >= 1.
std::vector<double> single_row_optimum(const solver::CoverRow& row, const std::vector<double>& w, double p) {
  std::vector<double> x(w.size(), 0.0);
  if (p == 1.0) {
    std::size_t best = row.terms.front().var;
    double best_ratio = kInf;
    for (const solver::Term& t : row.terms) {
      const double r = w[t.var] / t.coef;
      if (r < best_ratio) {
        best_ratio = r;
        best = t.var;
      }
    }
    for (const solver::Term& t : row.terms) {
      if (t.var == best) x[best] = row.rhs / t.coef;
    }
    return x;
  }
  double denom = 0.0;
  for (const solver::Term& t : row.terms) {
    x[t.var] = std::pow(t.coef / w[t.var], 1.0 / (p - 1.0));
    denom += t.coef * x[t.var];
  }
  for (double& v : x) v *= row.rhs / denom;
  return x;
}

}  // namespace

FamilyPolicy FamilyPolicy::parse(const std::string& spec) {
  if (spec == "edges") return edges();
  if (spec == "shortest" || spec == "shortest_paths") return shortest_paths();
  if (spec.rfind("simple:", 0) == 0) {
    char* end = nullptr;
    const long h = std::strtol(spec.c_str() + 7, &end, 10);
    if (end == spec.c_str() + 7 || *end != '\0' || h < 1) throw Error(ErrorCode::Parse, "bad hop limit in '" + spec + "'");
    return simple_paths(static_cast<int>(h));
  }
  throw Error(ErrorCode::Parse, "curve policy must be edges, shortest or simple:H, got '" + spec + "'");
}

std::string FamilyPolicy::to_string() const {
  switch (kind) {
    case Kind::Edges: return "edges";
    case Kind::ShortestPaths: return "shortest";
    case Kind::SimplePaths: return "simple:" + std::to_string(max_hops);
    case Kind::Explicit: return "explicit";
  }
  return "explicit";
}

Curve make_curve(const MetricMeasureSpace& space, std::vector<PointIndex> vertices) {
  if (vertices.size() < 2) throw Error(ErrorCode::InvalidArgument, "a curve needs at least one step");
  Curve c;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    if (vertices[i] >= space.size() || vertices[i + 1] >= space.size()) {
      throw Error(ErrorCode::UnknownPoint, "curve vertex out of range");
    }
    auto len = space.edge_length(vertices[i], vertices[i + 1]);
    if (!len) {
      throw Error(ErrorCode::InvalidArgument,
                  "no edge between '" + space.id(vertices[i]) + "' and '" + space.id(vertices[i + 1]) + "'");
    }
    c.lengths.push_back(*len);
    c.total_length += *len;
  }
  c.vertices = std::move(vertices);
  return c;
}

CurveFamily family_from_walks(const MetricMeasureSpace& space, const std::vector<std::vector<PointIndex>>& walks) {
  CurveFamily family;
  family.policy = {FamilyPolicy::Kind::Explicit, 0};
  std::set<std::vector<PointIndex>> seen;
  for (const auto& walk : walks) {
    auto key = normalized(walk);
    if (!seen.insert(key).second) continue;
    family.curves.push_back(make_curve(space, std::move(key)));
  }
  sort_family(family);
  return family;
}

CurveFamily enumerate_family(const MetricMeasureSpace& space, const FamilyPolicy& policy, std::size_t cap) {
  CurveFamily family;
  family.policy = policy;
  const std::size_t n = space.size();
  auto push = [&](std::vector<PointIndex> walk) {
    if (family.curves.size() >= cap) {
      throw Error(ErrorCode::HopLimitTooLarge, "curve family exceeds the cap of " + std::to_string(cap) + " curves");
    }
    family.curves.push_back(make_curve(space, std::move(walk)));
  };

  switch (policy.kind) {
    case FamilyPolicy::Kind::Edges: {
      for (const Edge& e : space.edges()) push({std::min(e.a, e.b), std::max(e.a, e.b)});
      sort_family(family);
      break;
    }
    case FamilyPolicy::Kind::ShortestPaths: {
      const std::vector<double> gd = graph_distances(space);
      for (PointIndex s = 0; s < n; ++s) {
        for (PointIndex t = s + 1; t < n; ++t) {
          if (is_inf(gd[s * n + t])) continue;
          // Lexicographically least geodesic: from each vertex take the
          // smallest neighbour that stays on a shortest path to t.
          std::vector<PointIndex> walk{s};
          PointIndex v = s;
          while (v != t) {
            const double remaining = gd[v * n + t];
            const double tol = 1e-12 * std::max(1.0, remaining);
            PointIndex next = n;
            for (const auto& nb : space.neighbors(v)) {
              if (std::abs(nb.length + gd[nb.to * n + t] - remaining) <= tol) {
                next = nb.to;
                break;
              }
            }
            if (next == n || walk.size() > n) throw Error(ErrorCode::SolverFailure, "geodesic reconstruction failed");
            walk.push_back(next);
            v = next;
          }
          push(std::move(walk));
        }
      }
      sort_family(family);
      break;
    }
    case FamilyPolicy::Kind::SimplePaths: {
      if (policy.max_hops < 1) throw Error(ErrorCode::InvalidArgument, "hop limit must be >= 1");
      const std::size_t hops = static_cast<std::size_t>(policy.max_hops);
      std::vector<PointIndex> path;
      std::vector<bool> on_path(n, false);
      // Depth-first search in ascending neighbour order emits paths in
      // lexicographic order; each undirected path is kept in the orientation
      // whose first vertex is the smaller endpoint.
      std::function<void()> extend = [&]() {
        const PointIndex v = path.back();
        for (const auto& nb : space.neighbors(v)) {
          if (on_path[nb.to]) continue;
          path.push_back(nb.to);
          on_path[nb.to] = true;
          if (path.front() < nb.to) push(path);
          if (path.size() - 1 < hops) extend();
          on_path[nb.to] = false;
          path.pop_back();
        }
      };
      for (PointIndex s = 0; s < n; ++s) {
        path = {s};
        on_path[s] = true;
        extend();
        on_path[s] = false;
      }
      break;
    }
    case FamilyPolicy::Kind::Explicit:
      throw Error(ErrorCode::InvalidArgument, "explicit families come from family_from_walks");
  }
  return family;
}

double line_integral(const Field& g, const Curve& curve) {
  for (PointIndex v : curve.vertices) {
    if (is_inf(g[v])) return kInf;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < curve.lengths.size(); ++i) {
    sum += (g[curve.vertices[i]] + g[curve.vertices[i + 1]]) / 2.0 * curve.lengths[i];
  }
  return sum;
}

solver::CoverRow curve_row(const Curve& curve, double rhs) {
  std::map<std::size_t, double> coef;
  for (std::size_t i = 0; i < curve.lengths.size(); ++i) {
    coef[curve.vertices[i]] += curve.lengths[i] / 2.0;
    coef[curve.vertices[i + 1]] += curve.lengths[i] / 2.0;
  }
  solver::CoverRow row;
  row.rhs = rhs;
  for (const auto& [v, c] : coef) row.terms.push_back({v, c});
  return row;
}

ModulusResult modulus(const MetricMeasureSpace& space, const CurveFamily& family, double p,
                      const ModulusOptions& options) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::ParameterRange, "modulus needs p in [1, inf)");
  const std::size_t n = space.size();
  ModulusResult result;
  result.rho.assign(n, 0.0);
  if (family.curves.empty()) return result;

  solver::CoveringProgram program;
  program.num_vars = n;
  program.rows.reserve(family.curves.size());
  for (const Curve& c : family.curves) program.rows.push_back(curve_row(c));
  const solver::Reduction red = solver::reduce(program, space.measures());
  std::vector<double> weights(red.kept.size());
  for (std::size_t k = 0; k < red.kept.size(); ++k) weights[k] = space.measure(red.kept[k]);

  std::vector<double> local(red.kept.size(), 0.0);
  if (!red.rows.empty()) {
    std::vector<bool> active(red.rows.size(), false);
    std::vector<std::size_t> active_list;
    auto violation = [&](std::size_t r) { return red.rows[r].rhs - red.rows[r].lhs(local); };

    while (true) {
      const ArgMax worst = parallel_argmax(red.rows.size(), violation);
      if (worst.value <= options.feasibility_tolerance) break;
      if (active[worst.index]) break;  // numerical floor: the solver cannot tighten further
      if (result.iterations >= options.iteration_cap) {
        result.converged = false;
        break;
      }
      active[worst.index] = true;
      active_list.push_back(worst.index);
      ++result.rounds;

      std::vector<const solver::CoverRow*> rows;
      for (std::size_t r : active_list) rows.push_back(&red.rows[r]);
      const Compacted sub = compact(rows, red.kept.size());
      std::vector<double> sub_w(sub.vars.size());
      for (std::size_t k = 0; k < sub.vars.size(); ++k) sub_w[k] = weights[sub.vars[k]];

      std::vector<double> sub_x;
      if (sub.rows.size() == 1) {
        sub_x = single_row_optimum(sub.rows.front(), sub_w, p);
        result.iterations += 1;
      } else if (p == 1.0) {
        const solver::LpResult lp = solver::solve_lp(sub.vars.size(), sub_w, sub.rows);
        sub_x = lp.x;
        result.iterations += lp.pivots;
        if (!lp.converged) result.converged = false;
      } else {
        solver::BarrierProblem bp;
        bp.num_vars = sub.vars.size();
        bp.p = p;
        bp.weights = sub_w;
        bp.rows = sub.rows;
        solver::BarrierOptions bo;
        bo.max_newton = options.iteration_cap;
        const solver::BarrierResult br = solver::solve_barrier(bp, bo);
        sub_x = br.x;
        result.iterations += br.newton_steps;
        result.kkt_residual = br.kkt_residual;
        if (!br.converged) result.converged = false;
      }
      std::fill(local.begin(), local.end(), 0.0);
      for (std::size_t k = 0; k < sub.vars.size(); ++k) local[sub.vars[k]] = std::max(0.0, sub_x[k]);
    }
    result.active_curves = active_list.size();
  }

  result.rho = solver::expand(program, space.measures(), red, local);
  double value = 0.0;
  for (PointIndex x = 0; x < n; ++x) {
    if (space.measure(x) > 0.0 && result.rho[x] > 0.0) value += space.measure(x) * std::pow(result.rho[x], p);
  }
  result.value = value;
  return result;
}

bool is_exceptional(const MetricMeasureSpace& space, const CurveFamily& family, double p) {
  return modulus(space, family, p).value <= 1e-10;
}

}  // namespace mmgrad
