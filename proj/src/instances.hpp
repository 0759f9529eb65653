#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "norms.hpp"
#include "space.hpp"

namespace mmgrad {

inline constexpr std::size_t kPointCap = 10'000;

struct Instance {
  MetricMeasureSpace space;
  std::map<std::string, Field> fields;
};

/// Uniform doubles in [0, 1) from the top 53 bits of mt19937_64, so a seed
/// reproduces the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// nx * ny lattice with 4-neighbour edges of the given spacing and unit
/// measure. Fields: x, y.
Instance grid(std::size_t nx, std::size_t ny, double spacing);

/// n uniform points in the unit square; edges join pairs closer than radius,
/// plus a Euclidean spanning tree for connectivity. Unit measure. Fields: x, y.
Instance random_geometric(std::size_t n, double radius, std::uint64_t seed);

/// [-3, 3]^2 lattice at step h with 4-neighbour edges and unit measure.
/// Fields: x, y, f (1 on |p| < 1, 0 on |p| >= 2, 2 - |p| between) and g (1 on
/// 3/4 <= |p| < 9/4, else 0).
Instance annulus(double h);

double annulus_f(double x, double y);
double annulus_g(double x, double y);

/// u(v) = sum_k c_k d(v, a_k) + c_0 with random anchors a_k and coefficients
/// c_k in [-1, 1]: Lipschitz with constant at most sum |c_k|.
Field lipschitz_field(const MetricMeasureSpace& space, std::uint64_t seed, std::size_t anchors = 3);

/// Independent uniform values in [lo, hi).
Field random_field(const MetricMeasureSpace& space, std::uint64_t seed, double lo = 0.0, double hi = 1.0);

/// Parses "grid:NX:NY[:SPACING]", "random:N:RADIUS" (seed separate) or
/// "annulus:H" where H may be written as a fraction such as 1/8.
Instance generate(const std::string& spec, std::uint64_t seed);

}  // namespace mmgrad
