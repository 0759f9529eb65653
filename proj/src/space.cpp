#include "space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <utility>

#include "error.hpp"
#include "extended.hpp"

namespace mmgrad {

namespace {

void validate_measure(const std::vector<double>& measure, std::size_t n) {
  if (measure.size() != n) throw Error(ErrorCode::InvalidArgument, "measure length differs from point count");
  double total = 0.0;
  for (double m : measure) {
    if (!std::isfinite(m) || m < 0.0) throw Error(ErrorCode::InvalidArgument, "measure must be finite and nonnegative");
    total += m;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "total measure must be positive");
}

}  // namespace

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::AsymmetricDistance: return "AsymmetricDistance";
    case ErrorCode::DuplicatePoint: return "DuplicatePoint";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonpositiveEdgeLength: return "NonpositiveEdgeLength";
    case ErrorCode::EdgeLongerThanMetric: return "EdgeLongerThanMetric";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::ParameterRange: return "ParameterRange";
    case ErrorCode::HopLimitTooLarge: return "HopLimitTooLarge";
    case ErrorCode::NotAHajlaszGradient: return "NotAHajlaszGradient";
    case ErrorCode::DegenerateGradient: return "DegenerateGradient";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::PatchDisagreementOnPositiveMeasure: return "PatchDisagreementOnPositiveMeasure";
    case ErrorCode::UpperGradientFailure: return "UpperGradientFailure";
    case ErrorCode::ResolutionTooFine: return "ResolutionTooFine";
    case ErrorCode::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

void MetricMeasureSpace::index_ids() {
  index_.clear();
  index_.reserve(ids_.size());
  for (PointIndex i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate point id '" + ids_[i] + "'");
    }
  }
}

void MetricMeasureSpace::build_adjacency() {
  adjacency_.assign(ids_.size(), {});
  for (const Edge& e : edges_) {
    adjacency_[e.a].push_back({e.b, e.length});
    adjacency_[e.b].push_back({e.a, e.length});
  }
  for (auto& list : adjacency_) {
    std::sort(list.begin(), list.end(), [](const Neighbor& l, const Neighbor& r) { return l.to < r.to; });
  }
}

PointIndex MetricMeasureSpace::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error(ErrorCode::UnknownPoint, "unknown point '" + id + "'");
  return it->second;
}

double MetricMeasureSpace::total_measure() const {
  double total = 0.0;
  for (double m : measure_) total += m;
  return total;
}

double MetricMeasureSpace::diameter() const {
  double diam = 0.0;
  for (double d : dist_) diam = std::max(diam, d);
  return diam;
}

std::optional<double> MetricMeasureSpace::edge_length(PointIndex i, PointIndex j) const {
  const auto& list = adjacency_[i];
  auto it = std::lower_bound(list.begin(), list.end(), j,
                             [](const Neighbor& n, PointIndex target) { return n.to < target; });
  if (it == list.end() || it->to != j) return std::nullopt;
  return it->length;
}

MetricMeasureSpace MetricMeasureSpace::build_explicit(std::vector<std::string> ids,
                                                      const std::vector<std::vector<double>>& dist,
                                                      std::vector<double> measure,
                                                      std::optional<std::vector<EdgeSpec>> edges) {
  const std::size_t n = ids.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "space needs at least one point");
  if (dist.size() != n) throw Error(ErrorCode::InvalidArgument, "distance matrix must be square");
  for (const auto& row : dist) {
    if (row.size() != n) throw Error(ErrorCode::InvalidArgument, "distance matrix must be square");
  }
  validate_measure(measure, n);

  MetricMeasureSpace s;
  s.ids_ = std::move(ids);
  s.index_ids();
  s.measure_ = std::move(measure);
  s.dist_.assign(n * n, 0.0);

  for (PointIndex i = 0; i < n; ++i) {
    if (!std::isfinite(dist[i][i]) || std::abs(dist[i][i]) > kMetricTolerance) {
      throw Error(ErrorCode::InvalidArgument, "nonzero diagonal at '" + s.ids_[i] + "'");
    }
    for (PointIndex j = i + 1; j < n; ++j) {
      const double dij = dist[i][j];
      const double dji = dist[j][i];
      if (!std::isfinite(dij) || !std::isfinite(dji)) {
        throw Error(ErrorCode::InvalidArgument, "non-finite distance");
      }
      if (std::abs(dij - dji) > kMetricTolerance) {
        throw Error(ErrorCode::AsymmetricDistance, "d(" + s.ids_[i] + "," + s.ids_[j] + ") != d(" + s.ids_[j] +
                                                       "," + s.ids_[i] + ")");
      }
      if (dij <= 0.0) {
        throw Error(ErrorCode::DuplicatePoint, "points '" + s.ids_[i] + "' and '" + s.ids_[j] + "' are at distance 0");
      }
      s.dist_[i * n + j] = dij;
      s.dist_[j * n + i] = dij;
    }
  }

  for (PointIndex x = 0; x < n; ++x) {
    for (PointIndex y = 0; y < n; ++y) {
      for (PointIndex z = 0; z < n; ++z) {
        if (s.distance(x, z) > s.distance(x, y) + s.distance(y, z) + kMetricTolerance) {
          throw Error(ErrorCode::TriangleViolation,
                      "(" + s.ids_[x] + "," + s.ids_[y] + "," + s.ids_[z] + ")");
        }
      }
    }
  }

  if (edges) {
    std::set<std::pair<PointIndex, PointIndex>> seen;
    for (const EdgeSpec& spec : *edges) {
      PointIndex a = s.index_of(spec.a);
      PointIndex b = s.index_of(spec.b);
      if (a == b) throw Error(ErrorCode::InvalidArgument, "self-loop at '" + spec.a + "'");
      if (!std::isfinite(spec.length) || spec.length <= 0.0) {
        throw Error(ErrorCode::NonpositiveEdgeLength, spec.a + "-" + spec.b);
      }
      if (std::abs(spec.length - s.distance(a, b)) > kMetricTolerance) {
        throw Error(ErrorCode::InvalidArgument, "edge " + spec.a + "-" + spec.b + " length differs from the metric");
      }
      if (a > b) std::swap(a, b);
      if (seen.insert({a, b}).second) s.edges_.push_back({a, b, s.distance(a, b)});
    }
  } else {
    for (PointIndex i = 0; i < n; ++i) {
      for (PointIndex j = i + 1; j < n; ++j) s.edges_.push_back({i, j, s.distance(i, j)});
    }
  }
  s.build_adjacency();
  return s;
}

MetricMeasureSpace MetricMeasureSpace::build_from_edges(std::vector<std::string> ids,
                                                        const std::vector<EdgeSpec>& edges,
                                                        std::vector<double> measure) {
  const std::size_t n = ids.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "space needs at least one point");
  validate_measure(measure, n);

  MetricMeasureSpace s;
  s.ids_ = std::move(ids);
  s.index_ids();
  s.measure_ = std::move(measure);
  s.from_edges_ = true;

  std::set<std::pair<PointIndex, PointIndex>> seen;
  std::vector<Edge> raw;
  for (const EdgeSpec& spec : edges) {
    PointIndex a = s.index_of(spec.a);
    PointIndex b = s.index_of(spec.b);
    if (a == b) throw Error(ErrorCode::InvalidArgument, "self-loop at '" + spec.a + "'");
    if (!std::isfinite(spec.length) || spec.length <= 0.0) {
      throw Error(ErrorCode::NonpositiveEdgeLength, spec.a + "-" + spec.b);
    }
    if (a > b) std::swap(a, b);
    if (seen.insert({a, b}).second) raw.push_back({a, b, spec.length});
  }
  s.edges_ = raw;
  s.build_adjacency();

  // Dijkstra from every source; the lower-index source's value is mirrored so
  // the matrix is exactly symmetric.
  s.dist_.assign(n * n, kInf);
  using Item = std::pair<double, PointIndex>;
  std::vector<double> d(n);
  for (PointIndex src = 0; src < n; ++src) {
    std::fill(d.begin(), d.end(), kInf);
    d[src] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, src});
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > d[u]) continue;
      for (const Neighbor& nb : s.adjacency_[u]) {
        const double cand = du + nb.length;
        if (cand < d[nb.to]) {
          d[nb.to] = cand;
          heap.push({cand, nb.to});
        }
      }
    }
    for (PointIndex t = 0; t < n; ++t) {
      if (is_inf(d[t])) {
        throw Error(ErrorCode::DisconnectedGraph,
                    "'" + s.ids_[t] + "' is not reachable from '" + s.ids_[src] + "'");
      }
    }
    for (PointIndex t = src; t < n; ++t) {
      s.dist_[src * n + t] = d[t];
      s.dist_[t * n + src] = d[t];
    }
  }

  for (Edge& e : s.edges_) {
    const double metric = s.distance(e.a, e.b);
    if (e.length > metric + kMetricTolerance) {
      throw Error(ErrorCode::EdgeLongerThanMetric, s.ids_[e.a] + "-" + s.ids_[e.b] + " has length " +
                                                       std::to_string(e.length) + " > metric " +
                                                       std::to_string(metric));
    }
    e.length = metric;
  }
  s.build_adjacency();
  return s;
}

MetricMeasureSpace MetricMeasureSpace::subspace(const std::vector<PointIndex>& points) const {
  MetricMeasureSpace s;
  const std::size_t m = points.size();
  std::vector<std::ptrdiff_t> local(size(), -1);
  for (std::size_t k = 0; k < m; ++k) {
    if (points[k] >= size()) throw Error(ErrorCode::UnknownPoint, "subspace index out of range");
    local[points[k]] = static_cast<std::ptrdiff_t>(k);
    s.ids_.push_back(ids_[points[k]]);
    s.measure_.push_back(measure_[points[k]]);
  }
  s.index_ids();
  s.dist_.resize(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) s.dist_[a * m + b] = distance(points[a], points[b]);
  }
  for (const Edge& e : edges_) {
    if (local[e.a] >= 0 && local[e.b] >= 0) {
      PointIndex a = static_cast<PointIndex>(local[e.a]);
      PointIndex b = static_cast<PointIndex>(local[e.b]);
      if (a > b) std::swap(a, b);
      s.edges_.push_back({a, b, e.length});
    }
  }
  s.from_edges_ = from_edges_;
  s.build_adjacency();
  return s;
}

MetricMeasureSpace MetricMeasureSpace::with_measure(std::vector<double> measure) const {
  validate_measure(measure, size());
  MetricMeasureSpace s = *this;
  s.measure_ = std::move(measure);
  return s;
}

Ball ball(const MetricMeasureSpace& space, PointIndex center, double radius) {
  if (center >= space.size()) throw Error(ErrorCode::UnknownPoint, "ball centre out of range");
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
  Ball b{center, radius, {}};
  for (PointIndex y = 0; y < space.size(); ++y) {
    if (space.distance(center, y) < radius) b.members.push_back(y);
  }
  return b;
}

std::vector<double> radius_breakpoints(const MetricMeasureSpace& space) {
  std::vector<double> bp;
  const std::size_t n = space.size();
  bp.reserve(n * (n - 1));
  for (PointIndex i = 0; i < n; ++i) {
    for (PointIndex j = i + 1; j < n; ++j) {
      const double d = space.distance(i, j);
      bp.push_back(d);
      bp.push_back(d / 2.0);
    }
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

std::vector<double> membership_representatives(std::vector<double> breakpoints, double bound, bool inclusive) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  std::vector<double> reps;
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    const double v = breakpoints[k];
    if (!(v < bound)) break;
    double r = v * (1.0 + kRadiusNudge);
    if (k + 1 < breakpoints.size()) r = std::min(r, 0.5 * (v + breakpoints[k + 1]));
    if (std::isfinite(bound)) {
      if (inclusive) {
        r = std::min(r, bound);
      } else if (r >= bound) {
        r = 0.5 * (v + bound);
      }
    }
    reps.push_back(r);
  }
  return reps;
}

std::vector<double> candidate_radii(const MetricMeasureSpace& space) {
  std::vector<double> radii = membership_representatives(radius_breakpoints(space), kInf, false);
  radii.push_back(2.0 * space.diameter() + 1.0);
  return radii;
}

double doubling_constant(const MetricMeasureSpace& space, double r0) {
  if (!(r0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "R0 must be positive");
  const std::vector<double> radii = membership_representatives(radius_breakpoints(space), r0, false);
  const std::size_t n = space.size();
  double best = 1.0;
  for (PointIndex x = 0; x < n; ++x) {
    // Centres range over the support of the measure.
    if (space.measure(x) <= 0.0) continue;
    for (double r : radii) {
      double inner = 0.0;
      double outer = 0.0;
      for (PointIndex y = 0; y < n; ++y) {
        const double d = space.distance(x, y);
        if (d < r) inner += space.measure(y);
        if (d < 2.0 * r) outer += space.measure(y);
      }
      const double ratio = (inner == 0.0 && outer == 0.0) ? 1.0 : ext_ratio(outer, inner);
      best = std::max(best, ratio);
    }
  }
  return best;
}

BallPrefixes ball_prefixes(const MetricMeasureSpace& space, PointIndex center) {
  BallPrefixes bp;
  const std::size_t n = space.size();
  bp.order.resize(n);
  for (PointIndex i = 0; i < n; ++i) bp.order[i] = i;
  std::sort(bp.order.begin(), bp.order.end(), [&](PointIndex a, PointIndex b) {
    const double da = space.distance(center, a);
    const double db = space.distance(center, b);
    return da < db || (da == db && a < b);
  });
  bp.distance.resize(n);
  for (std::size_t k = 0; k < n; ++k) bp.distance[k] = space.distance(center, bp.order[k]);
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 == n || bp.distance[k + 1] != bp.distance[k]) bp.ends.push_back(k + 1);
  }
  return bp;
}

Cover make_cover(const MetricMeasureSpace& space, std::vector<std::vector<PointIndex>> patches) {
  std::vector<bool> covered(space.size(), false);
  for (auto& patch : patches) {
    if (patch.empty()) throw Error(ErrorCode::InvalidArgument, "cover patch is empty");
    std::sort(patch.begin(), patch.end());
    patch.erase(std::unique(patch.begin(), patch.end()), patch.end());
    for (PointIndex p : patch) {
      if (p >= space.size()) throw Error(ErrorCode::UnknownPoint, "cover index out of range");
      covered[p] = true;
    }
  }
  for (PointIndex i = 0; i < space.size(); ++i) {
    if (!covered[i]) throw Error(ErrorCode::InvalidArgument, "cover misses point '" + space.id(i) + "'");
  }
  return Cover{std::move(patches)};
}

Cover ball_cover(const MetricMeasureSpace& space, double radius) {
  std::vector<std::vector<PointIndex>> patches;
  std::set<std::vector<PointIndex>> seen;
  for (PointIndex z = 0; z < space.size(); ++z) {
    Ball b = ball(space, z, radius);
    if (seen.insert(b.members).second) patches.push_back(std::move(b.members));
  }
  return make_cover(space, std::move(patches));
}

}  // namespace mmgrad
