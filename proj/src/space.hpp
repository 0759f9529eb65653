#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mmgrad {

using PointIndex = std::size_t;

/// Absolute tolerance for metric axioms and edge/metric consistency.
inline constexpr double kMetricTolerance = 1e-12;

/// Relative nudge placing a radius just above a membership breakpoint.
inline constexpr double kRadiusNudge = 1e-9;

struct Edge {
  PointIndex a;
  PointIndex b;
  double length;
};

/// Edge given by point ids, as read from input.
struct EdgeSpec {
  std::string a;
  std::string b;
  double length;
};

/// Finite metric measure space with a weighted edge structure that generates
/// curves. Immutable after construction.
class MetricMeasureSpace {
 public:
  struct Neighbor {
    PointIndex to;
    double length;
  };

  /// Validates a full distance matrix. Without an edge list every pair is
  /// joined by an edge.
  static MetricMeasureSpace build_explicit(std::vector<std::string> ids,
                                           const std::vector<std::vector<double>>& dist,
                                           std::vector<double> measure,
                                           std::optional<std::vector<EdgeSpec>> edges = std::nullopt);

  /// Shortest-path metric over a connected, positively weighted edge list.
  static MetricMeasureSpace build_from_edges(std::vector<std::string> ids,
                                             const std::vector<EdgeSpec>& edges,
                                             std::vector<double> measure);

  std::size_t size() const { return ids_.size(); }
  const std::string& id(PointIndex i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const { return ids_; }
  PointIndex index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return index_.count(id) != 0; }

  double distance(PointIndex i, PointIndex j) const { return dist_[i * ids_.size() + j]; }
  double measure(PointIndex i) const { return measure_[i]; }
  const std::vector<double>& measures() const { return measure_; }
  double total_measure() const;
  double diameter() const;

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Neighbor>& neighbors(PointIndex i) const { return adjacency_[i]; }
  /// Length of the edge joining i and j, if any.
  std::optional<double> edge_length(PointIndex i, PointIndex j) const;
  bool built_from_edges() const { return from_edges_; }

  /// Induced subspace on the given points (in the given order): restricted
  /// metric and measure, edges internal to the subset.
  MetricMeasureSpace subspace(const std::vector<PointIndex>& points) const;

  /// Copy of this space with a different measure.
  MetricMeasureSpace with_measure(std::vector<double> measure) const;

 private:
  MetricMeasureSpace() = default;
  void index_ids();
  void build_adjacency();

  std::vector<std::string> ids_;
  std::unordered_map<std::string, PointIndex> index_;
  std::vector<double> dist_;
  std::vector<double> measure_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  bool from_edges_ = false;
};

/// Open ball B(center, radius) = {y : d(center, y) < radius}.
struct Ball {
  PointIndex center;
  double radius;
  std::vector<PointIndex> members;  // ascending index order
};

/// Patches U_j covering every point.
struct Cover {
  std::vector<std::vector<PointIndex>> patches;
};

Ball ball(const MetricMeasureSpace& space, PointIndex center, double radius);

/// Radii on which every ball-membership-determined supremum over r > 0 is
/// attained: one representative just above each distinct distance and each
/// half distance, plus one radius above the diameter.
std::vector<double> candidate_radii(const MetricMeasureSpace& space);

/// Representatives of every membership class of radii r in (0, bound)
/// (or (0, bound] when inclusive) over the given breakpoints. Each
/// representative lies just above its breakpoint and never crosses the next
/// breakpoint or the bound.
std::vector<double> membership_representatives(std::vector<double> breakpoints, double bound,
                                               bool inclusive);

/// Sorted distinct positive distance values together with their halves.
std::vector<double> radius_breakpoints(const MetricMeasureSpace& space);

/// sup over x and candidate r < r0 of mu(B(x,2r)) / mu(B(x,r)). Pass
/// +infinity for the global constant.
double doubling_constant(const MetricMeasureSpace& space, double r0);

/// Distinct balls centred at x, as a distance-sorted point order plus the
/// prefix lengths at which distance groups end. Ball k is order[0..ends[k]).
struct BallPrefixes {
  std::vector<PointIndex> order;
  std::vector<double> distance;   // distance of order[i] from the centre
  std::vector<std::size_t> ends;  // increasing, last == size()
};

BallPrefixes ball_prefixes(const MetricMeasureSpace& space, PointIndex center);

Cover make_cover(const MetricMeasureSpace& space, std::vector<std::vector<PointIndex>> patches);

/// {B(z, radius) : z in X}, duplicates removed, in centre order.
Cover ball_cover(const MetricMeasureSpace& space, double radius);

}  // namespace mmgrad
