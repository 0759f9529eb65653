// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "constructions.hpp"
#include "curves.hpp"
#include "error.hpp"
#include "extended.hpp"
#include "gradients.hpp"
#include "helpers.hpp"
#include "instances.hpp"
#include "norms.hpp"
#include "oracles.hpp"
#include "sobolev.hpp"
#include "suite.hpp"

using namespace mmgrad;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const std::vector<suite::Case>& cases() {
  static const std::vector<suite::Case> c = suite::conversion_suite();
  return c;
}

struct Converted {
  ConversionCertificate cert;
  double seconds = 0.0;
};

const std::vector<Converted>& converted() {
  static const std::vector<Converted> out = [] {
    std::vector<Converted> v;
    for (const auto& c : cases()) {
      const auto t0 = std::chrono::steady_clock::now();
      ConversionCertificate cert = hajlasz_to_upper(c.space, c.u, c.g);
      v.push_back({std::move(cert), seconds_since(t0)});
    }
    return v;
  }();
  return out;
}

Outcome criterion_1() {
  Outcome o;
  double worst = 0.0, slowest = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < cases().size(); ++i) {
    const Converted& c = converted()[i];
    if (!check_hajlasz(cases()[i].space, cases()[i].u, cases()[i].g).passed) {
      o.pass = false;
      o.detail = "suite instance " + cases()[i].name + " is not a Hajlasz pair; ";
    }
    worst = std::max(worst, c.cert.factor);
    slowest = std::max(slowest, c.seconds);
    if (!(c.cert.factor <= 4.0 + 1e-9) || c.seconds >= 10.0) o.pass = false;
    ++checked;
  }
  if (checked < 200) o.pass = false;
  o.detail += std::to_string(checked) + " instances, simple_paths(6), max factor " + fmt("%.6g", worst) +
              ", slowest " + fmt("%.3g", slowest) + " s";
  return o;
}

Outcome criterion_2() {
  Outcome o;
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < cases().size(); ++i) {
    if (cases()[i].has_null_points) continue;
    worst = std::max(worst, converted()[i].cert.edge_factor);
    if (!(converted()[i].cert.edge_factor <= 2.0 + 1e-9)) o.pass = false;
    ++checked;
  }
  o.detail = std::to_string(checked) + " instances without null points, max edge factor " + fmt("%.6g", worst);
  return o;
}

Outcome criterion_3() {
  Outcome o;
  std::size_t levels = 0, failures = 0;
  double strong = 0.0, edge = 0.0;
  for (const Converted& c : converted()) {
    for (const LevelRecord& lv : c.cert.levels) {
      ++levels;
      strong = std::max(strong, lv.strong_ratio);
      edge = std::max(edge, lv.edge_ratio);
      if (!lv.nested || !lv.extension_matches || !(lv.strong_ratio <= 1.0 + 1e-9) || !(lv.edge_ratio <= 1.0 + 1e-9)) {
        ++failures;
      }
    }
  }
  o.pass = failures == 0 && levels > 0;
  o.detail = std::to_string(levels) + " levels, " + std::to_string(failures) + " failing; max strong ratio " +
             fmt("%.6g", strong) + ", max edge ratio " + fmt("%.6g", edge);
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const Instance inst = annulus(1.0 / 8.0);
  const Field& f = inst.fields.at("f");
  const Field& g = inst.fields.at("g");
  const ViolationReport local = check_local_hajlasz(inst.space, f, g, ball_cover(inst.space, 1.0 / 8.0));
  const ViolationReport global = check_hajlasz(inst.space, f, g);
  bool witness_ok = global.witness == ViolationReport::Witness::Pair;
  double df = -1, gs = -1;
  if (witness_ok) {
    df = std::abs(f[global.x] - f[global.y]);
    gs = g[global.x] + g[global.y];
    witness_ok = df == 1.0 && gs == 0.0;
  }
  o.pass = local.passed && local.worst_ratio <= 1.0 && !global.passed && witness_ok;
  o.detail = std::to_string(inst.space.size()) + " points; local worst ratio " + fmt("%.6g", local.worst_ratio) +
             "; global fails with witness (" + (witness_ok ? inst.space.id(global.x) + ", " + inst.space.id(global.y) : "none") +
             ") f-difference " + fmt("%g", df) + ", g-sum " + fmt("%g", gs);
  return o;
}

Outcome criterion_5() {
  Outcome o;
  std::size_t count = 0, zero_points = 0;
  double worst = 0.0;
  const double scales[] = {1.01, 1.5, 2.01, 3.01};
  std::vector<std::pair<std::string, MetricMeasureSpace>> spaces;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    spaces.emplace_back("grid4x4", grid(4, 4, 1.0).space);
    spaces.emplace_back("geo12", random_geometric(12, 0.4, seed).space);
    spaces.emplace_back("geo20", random_geometric(20, 0.35, seed + 50).space);
    // Null points: half of a small geometric graph's points carry no mass.
    MetricMeasureSpace s = random_geometric(10, 0.45, seed + 200).space;
    std::vector<double> mu = s.measures();
    for (std::size_t i = 0; i < mu.size(); i += 2) mu[i] = 0.0;
    spaces.emplace_back("null-geo10", s.with_measure(mu));
  }
  std::uint64_t k = 0;
  for (const auto& [name, space] : spaces) {
    for (double scale : scales) {
      ++k;
      const Cover cover = helpers::random_ball_cover(space, scale * helpers::max_edge(space), k);
      Field u = lipschitz_field(space, k);
      Rng rng(k);
      for (PointIndex x = 0; x < space.size(); ++x) {
        if (space.measure(x) == 0.0) u[x] += rng.uniform(-3.0, 3.0);
      }
      const Field g0 = min_hajlasz_gradient(space, u, FunctionNorm::lp(2.0), HajlaszMode::local(cover)).x;
      const Field g = suite::perturb_up(g0, k);
      if (!check_local_hajlasz(space, u, g, cover).passed) {
        o.pass = false;
        continue;
      }
      try {
        const GlueCertificate cert = glue_local(space, u, g, cover);
        worst = std::max(worst, cert.factor);
        if (!(cert.factor <= 4.0 + 1e-9) || !cert.passed()) o.pass = false;
        for (PointIndex z : cert.zero_set) {
          ++zero_points;
          if (space.measure(z) != 0.0) o.pass = false;
        }
        ++count;
      } catch (const Error& e) {
        o.pass = false;
        o.detail += std::string(e.what()) + "; ";
      }
    }
  }
  if (count < 50) o.pass = false;
  o.detail += std::to_string(count) + " covered instances, max factor " + fmt("%.6g", worst) + ", " +
              std::to_string(zero_points) + " disagreement points, all null";
  return o;
}

Outcome criterion_6() {
  Outcome o;
  std::size_t count = 0, failures = 0;
  for (std::uint64_t seed = 0; count < 500; ++seed) {
    Rng rng(seed + 7);
    const std::size_t n = 3 + rng.next() % 10;
    // Integer edge lengths give an integer metric, so every check is exact.
    std::vector<std::tuple<int, int, double>> edges;
    for (std::size_t i = 1; i < n; ++i) {
      edges.emplace_back(static_cast<int>(rng.next() % i), static_cast<int>(i), static_cast<double>(1 + rng.next() % 5));
    }
    for (std::size_t extra = 0; extra < n / 2; ++extra) {
      const int a = static_cast<int>(rng.next() % n), b = static_cast<int>(rng.next() % n);
      if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b), static_cast<double>(1 + rng.next() % 5));
    }
    MetricMeasureSpace space = [&] {
      // Drop duplicate pairs and any edge longer than the path metric.
      std::vector<oracle::WeightedEdge> we;
      for (const auto& [a, b, l] : edges) we.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), l});
      const auto d = oracle::floyd_warshall(n, we);
      std::vector<std::tuple<int, int, double>> kept;
      std::set<std::pair<int, int>> seen;
      for (const auto& [a, b, l] : edges) {
        if (l == d[a][b] && seen.insert({a, b}).second) kept.emplace_back(a, b, l);
      }
      return helpers::from_edges(n, kept);
    }();

    const double L = static_cast<double>(1 + rng.next() % 4);
    std::vector<PointIndex> A;
    for (PointIndex x = 0; x < n; ++x) {
      if (rng.next() % 2 == 0) A.push_back(x);
    }
    if (A.empty()) A.push_back(0);
    std::vector<double> f(A.size());
    if (seed % 2 == 0) {
      // Inf-convolution of random integers: L-Lipschitz on A.
      std::vector<double> v(A.size());
      for (double& x : v) x = static_cast<double>(static_cast<int>(rng.next() % 41) - 20);
      for (std::size_t i = 0; i < A.size(); ++i) {
        f[i] = INFINITY;
        for (std::size_t j = 0; j < A.size(); ++j) f[i] = std::min(f[i], v[j] + L * space.distance(A[i], A[j]));
      }
    } else {
      // Signed distance combination with total weight at most L.
      const PointIndex z1 = rng.next() % n, z2 = rng.next() % n;
      const double c1 = static_cast<double>(rng.next() % static_cast<std::uint64_t>(L + 1));
      const double c2 = -(L - c1);
      for (std::size_t i = 0; i < A.size(); ++i) f[i] = c1 * space.distance(A[i], z1) + c2 * space.distance(A[i], z2);
    }

    const Field F = mcshane_extend(space, A, f, L);
    bool ok = true;
    for (std::size_t i = 0; i < A.size(); ++i) ok = ok && F[A[i]] == f[i];
    for (PointIndex x = 0; x < n; ++x) {
      for (PointIndex y = 0; y < n; ++y) ok = ok && std::abs(F[x] - F[y]) <= L * space.distance(x, y);
    }
    if (!ok) ++failures;
    ++count;
  }
  o.pass = failures == 0;
  o.detail = std::to_string(count) + " random (A, f, L) triples, " + std::to_string(failures) + " failures";
  return o;
}

struct SmallCase {
  std::string name;
  MetricMeasureSpace space;
  Field u;
};

std::vector<SmallCase> small_cases() {
  std::vector<SmallCase> out;
  out.push_back({"pair", helpers::path({1.0}), {0.0, 1.0}});
  out.push_back({"path3", helpers::path({1.0, 0.5}, {1.0, 2.0, 0.5}), {0.0, 0.7, 0.2}});
  out.push_back({"triangle", helpers::explicit_space({{0, 1, 2}, {1, 0, 1.5}, {2, 1.5, 0}}), {0.3, -0.4, 1.1}});
  out.push_back({"cycle4", helpers::from_edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}}, {1, 0.5, 1, 1.5}),
                 {0.0, 1.0, 0.5, -0.25}});
  out.push_back({"star4", helpers::from_edges(4, {{0, 1, 1.0}, {0, 2, 0.75}, {0, 3, 1.25}}, {2, 1, 1, 1}),
                 {0.0, 0.6, -0.3, 0.9}});
  out.push_back({"line4",
                 helpers::explicit_space({{0, 0.5, 1.25, 2}, {0.5, 0, 0.75, 1.5}, {1.25, 0.75, 0, 0.75}, {2, 1.5, 0.75, 0}},
                                         {1, 1, 0.5, 2}),
                 {0.1, 0.4, -0.2, 0.8}});
  out.push_back({"null-middle", helpers::path({1.0, 1.0}, {1.0, 0.0, 1.0}), {0.0, 2.0, 0.5}});
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    MetricMeasureSpace s = random_geometric(4, 0.7, seed + 11).space;
    Field u(4);
    Rng rng(seed + 500);
    for (double& v : u) v = std::round(rng.uniform(-1.0, 1.0) * 1000.0) / 1000.0;
    out.push_back({"geo4/s" + std::to_string(seed), std::move(s), std::move(u)});
  }
  return out;
}

double grid_min_norm(const MetricMeasureSpace& s, const std::vector<oracle::Row>& rows, double p) {
  if (rows.empty()) return 0.0;
  double hi = 0.0;
  for (const auto& r : rows) hi = std::max(hi, r.rhs);
  const std::vector<double> mu = s.measures();
  return oracle::grid_search(s.size(), 2.0 * hi, rows,
                             [&](const std::vector<double>& x) { return oracle::lp_objective(mu, x, p); })
      .value;
}

Outcome criterion_7() {
  Outcome o;
  double worst = 0.0;
  std::size_t comparisons = 0;
  std::string where;
  auto compare = [&](const std::string& label, double solver, double brute) {
    ++comparisons;
    const double gap = std::abs(solver - brute);
    if (gap > worst) {
      worst = gap;
      where = label;
    }
    if (!(gap <= 1e-3)) o.pass = false;
  };
  for (const SmallCase& c : small_cases()) {
    const std::size_t n = c.space.size();
    std::vector<oracle::Row> hajlasz_rows, upper_rows;
    for (PointIndex x = 0; x < n; ++x) {
      for (PointIndex y = x + 1; y < n; ++y) {
        if (c.space.measure(x) == 0.0 || c.space.measure(y) == 0.0) continue;
        const double du = std::abs(c.u[x] - c.u[y]);
        if (du > 0) hajlasz_rows.push_back({{{x, 1.0}, {y, 1.0}}, du / c.space.distance(x, y)});
      }
    }
    for (const Edge& e : c.space.edges()) {
      const double du = std::abs(c.u[e.a] - c.u[e.b]);
      if (du > 0) upper_rows.push_back({{{e.a, 1.0}, {e.b, 1.0}}, 2.0 * du / e.length});
    }
    for (double p : std::vector<double>{1.0, 2.0, INFINITY}) {
      const FunctionNorm norm = FunctionNorm::lp(p);
      compare(c.name + " hajlasz " + norm.to_string(), min_hajlasz_gradient(c.space, c.u, norm).value,
              grid_min_norm(c.space, hajlasz_rows, p));
      compare(c.name + " upper " + norm.to_string(), min_upper_gradient(c.space, c.u, norm).value,
              grid_min_norm(c.space, upper_rows, p));
    }

    // Modulus of every simple path, enumerated independently.
    std::vector<oracle::WeightedEdge> we;
    double shortest = INFINITY;
    for (const Edge& e : c.space.edges()) {
      we.push_back({e.a, e.b, e.length});
      shortest = std::min(shortest, e.length);
    }
    std::vector<oracle::Row> curve_rows;
    std::vector<std::vector<PointIndex>> walks;
    for (const auto& seq : oracle::simple_paths(n, we, n - 1)) {
      std::vector<double> coef(n, 0.0);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const double half = c.space.distance(seq[i], seq[i + 1]) / 2.0;
        coef[seq[i]] += half;
        coef[seq[i + 1]] += half;
      }
      oracle::Row r{{}, 1.0};
      for (PointIndex v = 0; v < n; ++v) {
        if (coef[v] > 0) r.terms.push_back({v, coef[v]});
      }
      curve_rows.push_back(std::move(r));
      walks.push_back(seq);
    }
    const CurveFamily family = family_from_walks(c.space, walks);
    const std::vector<double> mu = c.space.measures();
    for (double p : {1.0, 2.0}) {
      const double brute =
          oracle::grid_search(n, 4.0 / shortest, curve_rows,
                              [&](const std::vector<double>& x) { return oracle::power_objective(mu, x, p); })
              .value;
      compare(c.name + " modulus p=" + fmt("%g", p), modulus(c.space, family, p).value, brute);
    }
  }
  o.detail = std::to_string(comparisons) + " solver/grid comparisons on spaces of at most 4 points, max gap " +
             fmt("%.3g", worst) + (where.empty() ? "" : " (" + where + ")");
  return o;
}

Outcome criterion_8() {
  Outcome o;
  std::size_t spaces = 0, families = 0, monotone = 0;
  double worst_drop = 0.0;
  bool empty_zero = true;

  std::vector<MetricMeasureSpace> bases;
  bases.push_back(helpers::path({1.0, 1.0, 1.0}));
  bases.push_back(helpers::from_edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}}));
  bases.push_back(helpers::from_edges(5, {{0, 1, 1.0}, {1, 2, 0.5}, {2, 3, 1.0}, {3, 4, 2.0}, {0, 4, 1.5}, {1, 3, 1.2}}));
  bases.push_back(random_geometric(6, 0.5, 3).space);
  bases.push_back(helpers::explicit_space({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));

  for (const MetricMeasureSpace& base : bases) {
    const std::size_t n = base.size();
    const CurveFamily all = enumerate_family(base, FamilyPolicy::simple_paths(static_cast<int>(n - 1)));
    for (std::uint32_t mask = 0; mask + 1 < (1u << n); ++mask) {
      // mask marks the null points; at least one point keeps mass.
      std::vector<double> mu(n);
      for (std::size_t i = 0; i < n; ++i) mu[i] = (mask >> i) & 1u ? 0.0 : 1.0 + 0.25 * static_cast<double>(i);
      const MetricMeasureSpace s = base.with_measure(mu);
      ++spaces;
      for (double p : {1.0, 2.0}) {
        empty_zero = empty_zero && modulus(s, CurveFamily{}, p).value == 0.0;
        // Every single curve, the whole family, and nested prefixes of it.
        std::vector<CurveFamily> fams;
        for (const Curve& c : all.curves) fams.push_back(CurveFamily{{c}, {}});
        for (std::size_t len = 1; len <= all.curves.size(); len = len * 2 + 1) {
          fams.push_back(CurveFamily{{all.curves.begin(), all.curves.begin() + static_cast<std::ptrdiff_t>(len)}, {}});
        }
        fams.push_back(all);
        double previous = 0.0;
        for (std::size_t f = 0; f < fams.size(); ++f) {
          const bool exceptional = is_exceptional(s, fams[f], p);
          bool all_touch = true;
          for (const Curve& c : fams[f].curves) {
            bool touches = false;
            for (PointIndex v : c.vertices) touches = touches || s.measure(v) == 0.0;
            all_touch = all_touch && touches;
          }
          if (exceptional != all_touch) o.pass = false;
          ++families;
          if (f >= all.curves.size()) {
            // Nested prefixes then the full family: values must not drop.
            const double value = modulus(s, fams[f], p).value;
            if (f > all.curves.size()) {
              ++monotone;
              worst_drop = std::max(worst_drop, previous - value);
              if (value < previous - 1e-8) o.pass = false;
            }
            previous = value;
          }
        }
      }
    }
  }
  o.pass = o.pass && empty_zero;
  o.detail = std::to_string(spaces) + " measure patterns, " + std::to_string(families) +
             " families classified, " + std::to_string(monotone) + " inclusion pairs, largest drop " +
             fmt("%.3g", worst_drop) + (empty_zero ? ", Mod(empty) = 0" : ", Mod(empty) != 0");
  return o;
}

Outcome criterion_9() {
  Outcome o;
  std::size_t checked = 0;
  double worst_bound = 0.0, worst_local = 0.0;
  const FunctionNorm lattices[] = {FunctionNorm::lp(2.0), FunctionNorm::morrey(2.0, 3.0)};
  for (const auto& c : cases()) {
    const Cover cover = ball_cover(c.space, 1.01 * helpers::max_edge(c.space));
    for (const FunctionNorm& lattice : lattices) {
      const EmbeddingReport r = embedding_report(c.space, c.u, lattice, cover);
      worst_bound = std::max(worst_bound, ext_ratio(r.n_norm, 4.0 * r.m_norm));
      worst_local = std::max(worst_local, ext_ratio(r.m_local_norm, r.m_norm));
      if (!r.bound_ok || !r.local_ok) o.pass = false;
      ++checked;
    }
  }
  o.detail = std::to_string(checked) + " reports (L2, Morrey(2,3)); max n/(4m) " + fmt("%.6g", worst_bound) +
             ", max m_local/m " + fmt("%.6g", worst_local);
  return o;
}

Outcome criterion_10() {
  Outcome o;
  std::size_t points = 0;
  for (std::size_t i = 0; i < cases().size(); i += 3) {
    const suite::Case& c = cases()[i];
    const Field f = random_field(c.space, i, -2.0, 2.0);
    for (PointIndex x = 0; x < c.space.size(); ++x) {
      if (c.space.measure(x) == 0.0) continue;
      double nearest = INFINITY;
      for (PointIndex y = 0; y < c.space.size(); ++y) {
        if (y != x) nearest = std::min(nearest, c.space.distance(x, y));
      }
      for (double frac : {0.5, 0.999}) {
        const double R = std::isinf(nearest) ? 1.0 : frac * nearest;
        if (maximal_restricted(c.space, f, R)[x] != std::abs(f[x])) o.pass = false;
      }
      ++points;
    }
    for (double r : {1.0, 2.0, 3.0}) {
      const Field M = maximal_noncentered(c.space, f, r);
      for (PointIndex x = 0; x < c.space.size(); ++x) {
        if (c.space.measure(x) > 0.0 && !(M[x] >= std::abs(f[x]))) o.pass = false;
      }
    }
  }
  o.detail = std::to_string(points) + " mu-positive points: restricted maximal equals |f| below the nearest distance, "
             "non-centred maximal dominates |f| for r = 1, 2, 3";
  return o;
}

Outcome criterion_11() {
  Outcome o;
  const Instance inst = grid(5, 5, 1.0);
  double local_c = 0.0, global_c = 0.0, local_ratio = 0.0, global_ratio = 0.0;
  for (const char* coord : {"x", "y"}) {
    const Field& u = inst.fields.at(coord);
    const Field rho = min_upper_gradient(inst.space, u, FunctionNorm::lp(INFINITY)).x;
    for (double r : {3.0, 6.0}) {
      const MaximalGradient loc = hajlasz_from_upper_local(inst.space, u, rho, r, 1.0);
      Field scaled = loc.field;
      for (double& v : scaled) v *= loc.constant;
      const double lr = check_local_hajlasz(inst.space, u, scaled, *loc.cover).worst_ratio;
      local_c = std::max(local_c, loc.constant);
      local_ratio = std::max(local_ratio, lr);
      if (!std::isfinite(loc.constant) || !(lr <= 1.0 + 1e-9)) o.pass = false;
    }
    const MaximalGradient glo = hajlasz_from_upper_global(inst.space, u, rho, 1.0);
    Field scaled_glo = glo.field;
    for (double& v : scaled_glo) v *= glo.constant;
    const double gr = check_hajlasz(inst.space, u, scaled_glo).worst_ratio;
    global_c = std::max(global_c, glo.constant);
    global_ratio = std::max(global_ratio, gr);
    if (!std::isfinite(glo.constant) || !(gr <= 1.0 + 1e-9)) o.pass = false;
  }
  o.detail = "5x5 grid, u = coordinate: local C_emp " + fmt("%.6g", local_c) + " (r = 3 and 6, q = 1), global C_emp " +
             fmt("%.6g", global_c) + " (r = 1); rescaled ratios " + fmt("%.12g", local_ratio) + ", " +
             fmt("%.12g", global_ratio);
  return o;
}

Outcome criterion_12() {
  Outcome o;
  std::size_t fields = 0, pairs = 0;
  double worst_rel = 0.0;
  for (std::uint64_t seed = 0; fields < 120; ++seed) {
    const MetricMeasureSpace s =
        seed % 2 ? grid(2 + seed % 5, 3, 0.5 + 0.1 * static_cast<double>(seed % 4)).space
                 : random_geometric(5 + seed % 20, 0.4, seed).space;
    Rng rng(seed + 900);
    std::vector<double> mu(s.size());
    for (double& m : mu) m = rng.uniform() < 0.2 ? 0.0 : rng.uniform(0.1, 3.0);
    mu[0] = 1.0;
    const MetricMeasureSpace space = s.with_measure(mu);
    const Field f = random_field(space, seed, -3.0, 3.0);
    for (double p : {1.5, 2.0, 3.0}) {
      const double a = morrey_norm(space, f, p, p), b = lp_norm(space, f, p);
      const double rel = std::abs(a - b) / std::max(std::abs(b), 1e-300);
      worst_rel = std::max(worst_rel, rel);
      if (!(rel <= 1e-12)) o.pass = false;
    }
    ++fields;
    for (int t = 0; t < 5; ++t) {
      Field g(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) g[i] = f[i] * rng.uniform(-1.0, 1.0);
      for (const FunctionNorm& norm : {FunctionNorm::lp(2.0), FunctionNorm::lp(1.0), FunctionNorm::lp(INFINITY),
                                       FunctionNorm::morrey(2.0, 3.0), FunctionNorm::morrey(1.5, 4.0)}) {
        if (!lattice_check(space, norm, f, g)) o.pass = false;
        ++pairs;
      }
    }
  }
  o.pass = o.pass && fields >= 100 && pairs >= 500;
  o.detail = std::to_string(fields) + " fields with Morrey(p,p) = L^p (max relative gap " + fmt("%.3g", worst_rel) +
             "), " + std::to_string(pairs) + " dominated pairs pass the lattice check";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"factor-4 conversion", criterion_1},     {"discrete edge bound", criterion_2},
      {"per-level identities", criterion_3},    {"annulus counterexample", criterion_4},
      {"local gluing", criterion_5},            {"McShane extension", criterion_6},
      {"solver oracles", criterion_7},          {"modulus properties", criterion_8},
      {"embedding bounds", criterion_9},        {"maximal operators", criterion_10},
      {"maximal-function gradients", criterion_11}, {"norm identities", criterion_12}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2zu %s  %s: %s [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
