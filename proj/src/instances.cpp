#include "instances.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "error.hpp"

namespace mmgrad {

namespace {

std::string lattice_id(std::size_t i, std::size_t j) { return "p" + std::to_string(i) + "_" + std::to_string(j); }

Instance lattice(std::size_t nx, std::size_t ny, double spacing, double origin) {
  if (nx == 0 || ny == 0) throw Error(ErrorCode::ParameterRange, "grid dimensions must be positive");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw Error(ErrorCode::ParameterRange, "spacing must be positive");
  if (nx * ny > kPointCap) {
    throw Error(ErrorCode::ResolutionTooFine,
                std::to_string(nx * ny) + " points exceed the cap of " + std::to_string(kPointCap));
  }
  std::vector<std::string> ids;
  std::vector<EdgeSpec> edges;
  Field xs, ys;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      ids.push_back(lattice_id(i, j));
      xs.push_back(origin + static_cast<double>(i) * spacing);
      ys.push_back(origin + static_cast<double>(j) * spacing);
      if (i + 1 < nx) edges.push_back({lattice_id(i, j), lattice_id(i + 1, j), spacing});
      if (j + 1 < ny) edges.push_back({lattice_id(i, j), lattice_id(i, j + 1), spacing});
    }
  }
  std::vector<double> measure(ids.size(), 1.0);
  Instance inst{MetricMeasureSpace::build_from_edges(std::move(ids), edges, std::move(measure)), {}};
  inst.fields["x"] = std::move(xs);
  inst.fields["y"] = std::move(ys);
  return inst;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double parse_number(const std::string& s) {
  const auto slash = s.find('/');
  if (slash != std::string::npos) return parse_number(s.substr(0, slash)) / parse_number(s.substr(slash + 1));
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error(ErrorCode::Parse, "not a number: '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) {
  const double v = parse_number(s);
  if (!(v >= 0.0) || v != std::floor(v)) throw Error(ErrorCode::Parse, "not a count: '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

Instance grid(std::size_t nx, std::size_t ny, double spacing) { return lattice(nx, ny, spacing, 0.0); }

double annulus_f(double x, double y) {
  const double r = std::hypot(x, y);
  if (r < 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  return 2.0 - r;
}

double annulus_g(double x, double y) {
  const double r = std::hypot(x, y);
  return (r >= 0.75 && r < 2.25) ? 1.0 : 0.0;
}

Instance annulus(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::ParameterRange, "resolution must be positive");
  const double steps = std::round(6.0 / h);
  if (std::abs(steps * h - 6.0) > 1e-9) throw Error(ErrorCode::ParameterRange, "resolution must divide 6");
  if ((steps + 1.0) * (steps + 1.0) > static_cast<double>(kPointCap)) {
    throw Error(ErrorCode::ResolutionTooFine, "annulus at this resolution exceeds the point cap");
  }
  const auto side = static_cast<std::size_t>(steps) + 1;
  Instance inst = lattice(side, side, h, -3.0);
  const Field& xs = inst.fields["x"];
  const Field& ys = inst.fields["y"];
  Field f(xs.size()), g(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    f[i] = annulus_f(xs[i], ys[i]);
    g[i] = annulus_g(xs[i], ys[i]);
  }
  inst.fields["f"] = std::move(f);
  inst.fields["g"] = std::move(g);
  return inst;
}

Instance random_geometric(std::size_t n, double radius, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::ParameterRange, "need at least one point");
  if (n > kPointCap) throw Error(ErrorCode::ResolutionTooFine, "point count exceeds the cap");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::ParameterRange, "radius must be >= 0");
  Rng rng(seed);
  Field xs(n), ys(n);
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng.uniform();
    ys[i] = rng.uniform();
    ids[i] = "v" + std::to_string(i);
  }
  auto dist = [&](std::size_t a, std::size_t b) { return std::hypot(xs[a] - xs[b], ys[a] - ys[b]); };

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (dist(a, b) < radius) pairs.insert({a, b});
    }
  }
  // Prim's tree over Euclidean distances.
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, INFINITY);
  std::vector<std::size_t> parent(n, 0);
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t v = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_tree[i] && (v == n || best[i] < best[v])) v = i;
    }
    in_tree[v] = true;
    if (v != 0) pairs.insert({std::min(v, parent[v]), std::max(v, parent[v])});
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_tree[i] && dist(v, i) < best[i]) {
        best[i] = dist(v, i);
        parent[i] = v;
      }
    }
  }

  std::vector<EdgeSpec> edges;
  for (const auto& [a, b] : pairs) edges.push_back({ids[a], ids[b], dist(a, b)});
  std::vector<double> measure(n, 1.0);
  Instance inst{MetricMeasureSpace::build_from_edges(std::move(ids), edges, std::move(measure)), {}};
  inst.fields["x"] = std::move(xs);
  inst.fields["y"] = std::move(ys);
  return inst;
}

Field lipschitz_field(const MetricMeasureSpace& space, std::uint64_t seed, std::size_t anchors) {
  Rng rng(seed);
  const std::size_t n = space.size();
  Field u(n, rng.uniform(-1.0, 1.0));
  for (std::size_t k = 0; k < anchors; ++k) {
    const PointIndex a = static_cast<PointIndex>(rng.next() % n);
    const double c = rng.uniform(-1.0, 1.0);
    for (PointIndex x = 0; x < n; ++x) u[x] += c * space.distance(x, a);
  }
  return u;
}

Field random_field(const MetricMeasureSpace& space, std::uint64_t seed, double lo, double hi) {
  Rng rng(seed);
  Field f(space.size());
  for (double& v : f) v = rng.uniform(lo, hi);
  return f;
}

Instance generate(const std::string& spec, std::uint64_t seed) {
  const std::vector<std::string> parts = split(spec, ':');
  if (parts.empty()) throw Error(ErrorCode::Parse, "empty generator spec");
  const std::string& kind = parts[0];
  if (kind == "grid" && (parts.size() == 3 || parts.size() == 4)) {
    return grid(parse_count(parts[1]), parse_count(parts[2]), parts.size() == 4 ? parse_number(parts[3]) : 1.0);
  }
  if ((kind == "random" || kind == "random_geometric") && parts.size() == 3) {
    return random_geometric(parse_count(parts[1]), parse_number(parts[2]), seed);
  }
  if (kind == "annulus" && parts.size() == 2) return annulus(parse_number(parts[1]));
  throw Error(ErrorCode::Parse, "generator must be grid:NX:NY[:S], random:N:R or annulus:H, got '" + spec + "'");
}

}  // namespace mmgrad
