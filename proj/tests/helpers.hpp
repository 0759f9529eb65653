#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "instances.hpp"
#include "space.hpp"

namespace helpers {

using mmgrad::MetricMeasureSpace;
using mmgrad::PointIndex;

inline std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

/// Path a-b-c-... with the given step lengths.
inline MetricMeasureSpace path(const std::vector<double>& lengths, std::vector<double> mu = {}) {
  const std::size_t n = lengths.size() + 1;
  const auto names = ids(n);
  std::vector<mmgrad::EdgeSpec> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({names[i], names[i + 1], lengths[i]});
  if (mu.empty()) mu.assign(n, 1.0);
  return MetricMeasureSpace::build_from_edges(names, edges, mu);
}

inline MetricMeasureSpace from_edges(std::size_t n, const std::vector<std::tuple<int, int, double>>& list,
                                     std::vector<double> mu = {}) {
  const auto names = ids(n);
  std::vector<mmgrad::EdgeSpec> edges;
  for (const auto& [a, b, l] : list) edges.push_back({names[a], names[b], l});
  if (mu.empty()) mu.assign(n, 1.0);
  return MetricMeasureSpace::build_from_edges(names, edges, mu);
}

inline MetricMeasureSpace explicit_space(const std::vector<std::vector<double>>& d, std::vector<double> mu = {}) {
  if (mu.empty()) mu.assign(d.size(), 1.0);
  return MetricMeasureSpace::build_explicit(ids(d.size()), d, mu);
}

inline double max_edge(const MetricMeasureSpace& s) {
  double m = 0.0;
  for (const auto& e : s.edges()) m = std::max(m, e.length);
  return m;
}

/// Balls of the given radius around randomly ordered centres, taken until
/// every point is covered and every edge lies inside some ball.
inline mmgrad::Cover random_ball_cover(const MetricMeasureSpace& s, double radius, std::uint64_t seed) {
  mmgrad::Rng rng(seed);
  std::vector<PointIndex> order(s.size());
  for (PointIndex i = 0; i < s.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.next() % i]);

  std::vector<std::vector<PointIndex>> patches;
  std::vector<bool> covered(s.size(), false);
  auto add = [&](PointIndex z) {
    auto b = mmgrad::ball(s, z, radius);
    for (PointIndex y : b.members) covered[y] = true;
    patches.push_back(std::move(b.members));
  };
  for (PointIndex z : order) {
    if (!covered[z]) add(z);
  }
  auto together = [&](PointIndex a, PointIndex b) {
    for (const auto& p : patches) {
      if (std::binary_search(p.begin(), p.end(), a) && std::binary_search(p.begin(), p.end(), b)) return true;
    }
    return false;
  };
  for (const auto& e : s.edges()) {
    if (!together(e.a, e.b)) add(e.a);
  }
  return mmgrad::make_cover(s, std::move(patches));
}

}  // namespace helpers
