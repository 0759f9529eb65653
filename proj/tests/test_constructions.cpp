#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "constructions.hpp"
#include "error.hpp"
#include "helpers.hpp"
#include "instances.hpp"
#include "suite.hpp"

using namespace mmgrad;

namespace {

std::vector<PointIndex> all_points(const MetricMeasureSpace& s) {
  std::vector<PointIndex> v(s.size());
  for (PointIndex i = 0; i < s.size(); ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_CASE("McShane extension examples") {
  const auto s = helpers::path({1.0, 1.0});  // a - b - x
  CHECK(mcshane_extend(s, {0, 1}, {0.0, 3.0}, 1.0)[2] == 2.0);
  const Field cone = mcshane_extend(s, {0}, {5.0}, 2.0);
  CHECK(cone == Field{5.0, 7.0, 9.0});
  const Field lip{0.0, 1.0, 0.5};
  CHECK(mcshane_extend(s, all_points(s), lip, 1.0) == lip);

  CHECK_THROWS_AS(mcshane_extend(s, {}, {}, 1.0), Error);
  CHECK_THROWS_AS(mcshane_extend(s, {0}, {1.0}, 0.0), Error);
}

TEST_CASE("McShane extension is bounded by every anchor cone") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = random_geometric(12, 0.4, seed).space;
    Rng rng(seed);
    std::vector<PointIndex> A;
    std::vector<double> f;
    for (PointIndex x = 0; x < s.size(); ++x)
      if (rng.uniform() < 0.4) {
        A.push_back(x);
        f.push_back(rng.uniform(-3, 3));
      }
    if (A.empty()) continue;
    const double L = rng.uniform(0.5, 4.0);
    const Field F = mcshane_extend(s, A, f, L);
    for (PointIndex x = 0; x < s.size(); ++x)
      for (std::size_t i = 0; i < A.size(); ++i) CHECK(F[x] <= f[i] + L * s.distance(x, A[i]));
  }
}

TEST_CASE("level sets") {
  CHECK(level_set({0.0, 0.0}, -5) == std::vector<PointIndex>{0, 1});
  const Field g{1.0, 3.0, INFINITY};
  CHECK(level_set(g, 1) == std::vector<PointIndex>{0});
  CHECK(level_set(g, 2) == std::vector<PointIndex>{0, 1});
  CHECK(level_set(g, 60) == std::vector<PointIndex>{0, 1});
  CHECK(level_set({8.0}, 3) == std::vector<PointIndex>{0});
}

TEST_CASE("conversion of a constant function") {
  const auto s = grid(3, 3, 1.0).space;
  const ConversionCertificate c = hajlasz_to_upper(s, Field(s.size(), 2.0), Field(s.size(), 0.0));
  CHECK(c.corrected_u == Field(s.size(), 2.0));
  CHECK(c.corrected_g == Field(s.size(), 0.0));
  CHECK(c.factor == 0.0);
  CHECK(c.infinity_set.empty());
  CHECK(c.passed());
}

TEST_CASE("conversion with a null violator") {
  const auto s = helpers::path({1.0, 1.0}, {1.0, 0.0, 1.0});
  const Field u{0.0, 5.0, 1.0};
  const Field g{1.0, 1.0, 1.0};
  const ConversionCertificate c = hajlasz_to_upper(s, u, g);
  CHECK(c.infinity_set == std::vector<PointIndex>{1});
  CHECK(std::isinf(c.corrected_g[1]));
  CHECK(c.corrected_u[0] == 0.0);
  CHECK(c.corrected_u[2] == 1.0);
  // b sits at distance 1 from both anchors; the top level's cone is attained at a.
  const double top = std::ldexp(1.0, c.k_max + 1);
  CHECK(c.corrected_u[1] == std::min(0.0 + top, 1.0 + top));
  CHECK_FALSE(c.stabilized);
  CHECK(c.factor <= 4.0);
  CHECK(c.passed());
}

TEST_CASE("conversion without null violators keeps u and the edge bound") {
  for (std::size_t i = 0; i < 30; ++i) {
    const auto s = random_geometric(10 + i % 8, suite::sparse_radius(10 + i % 8), i).space;
    const suite::Case c = suite::make_case("c", s, i, i);
    const ConversionCertificate cert = hajlasz_to_upper(c.space, c.u, c.g);
    CHECK(cert.corrected_u == c.u);
    CHECK(cert.infinity_set.empty());
    CHECK(cert.edge_factor <= 2.0 + 1e-9);
    CHECK(cert.factor <= 4.0 + 1e-9);
    for (std::size_t k = 1; k < cert.levels.size(); ++k) {
      const auto& lo = cert.levels[k - 1].level_set;
      const auto& hi = cert.levels[k].level_set;
      CHECK(std::includes(hi.begin(), hi.end(), lo.begin(), lo.end()));
    }
  }
}

TEST_CASE("truncated gradients stay within twice g-hat off the level set") {
  for (std::size_t i = 0; i < 20; ++i) {
    const suite::Case c = suite::make_case("c", grid(4, 4, 1.0).space, i, i);
    const ConversionCertificate cert = hajlasz_to_upper(c.space, c.u, c.g);
    for (const LevelRecord& lv : cert.levels) {
      for (PointIndex x = 0; x < c.space.size(); ++x) {
        const bool inside = std::binary_search(lv.level_set.begin(), lv.level_set.end(), x);
        if (inside) {
          CHECK(lv.truncated_gradient[x] == cert.refined_gradient[x]);
          CHECK(lv.extension[x] == c.u[x]);
        } else if (std::isfinite(cert.refined_gradient[x])) {
          CHECK(lv.truncated_gradient[x] < 2.0 * cert.refined_gradient[x]);
        }
      }
    }
  }
}

TEST_CASE("conversion rejects gradients failing at positive mass") {
  const auto s = helpers::path({1.0});
  CHECK_THROWS_AS(hajlasz_to_upper(s, {0.0, 1.0}, {0.0, 0.0}), Error);
}

TEST_CASE("gluing with the whole space as one patch matches conversion") {
  for (std::size_t i = 0; i < 10; ++i) {
    const suite::Case c = suite::make_adversarial("c", random_geometric(9, suite::sparse_radius(9), i).space, i, i);
    const ConversionCertificate direct = hajlasz_to_upper(c.space, c.u, c.g);
    const GlueCertificate glued = glue_local(c.space, c.u, c.g, make_cover(c.space, {all_points(c.space)}));
    CHECK(glued.zero_set.empty());
    CHECK(glued.glued_u == direct.corrected_u);
    CHECK(glued.glued_g == direct.corrected_g);
    CHECK(glued.factor == direct.factor);
  }
}

TEST_CASE("gluing zeroes a null point where patch corrections disagree") {
  // a - z - b with z massless, patches {a, z} and {z, b}. Each patch pushes
  // its own cone value onto z, and the two cones differ.
  const auto s = helpers::from_edges(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}, {1.0, 0.0, 1.0, 1.0});
  const Field u{0.0, 50.0, 3.0, 3.5};
  const Field g{0.1, 0.1, 0.5, 0.5};
  const Cover cover = make_cover(s, {{0, 1}, {1, 2, 3}});
  REQUIRE(check_local_hajlasz(s, u, g, cover).passed);
  const GlueCertificate cert = glue_local(s, u, g, cover);
  REQUIRE(cert.zero_set == std::vector<PointIndex>{1});
  CHECK(cert.glued_u[1] == 0.0);
  CHECK(std::isinf(cert.glued_g[1]));
  CHECK(cert.glued_u[0] == 0.0);
  CHECK(cert.glued_u[2] == 3.0);
  CHECK(cert.passed());
}

TEST_CASE("annulus gluing keeps f at every massive point") {
  const Instance inst = annulus(0.25);
  const Field& f = inst.fields.at("f");
  const Field& g = inst.fields.at("g");
  ConversionOptions opts;
  opts.family = FamilyPolicy::edges();
  const GlueCertificate cert = glue_local(inst.space, f, g, ball_cover(inst.space, 0.5), opts);
  CHECK(cert.glued_u == f);
  CHECK(cert.factor <= 4.0);
}

TEST_CASE("restricted maximal function examples") {
  const auto two = helpers::path({1.0});
  const Field m = maximal_restricted(two, {0.0, 4.0}, 2.0);
  CHECK(m[0] == 2.0);
  CHECK(m[1] == 4.0);
  CHECK(maximal_restricted(two, {-3.0, -3.0}, 5.0) == Field{3.0, 3.0});
  CHECK(maximal_restricted(two, {0.0, 4.0}, 0.5) == Field{0.0, 4.0});
}

TEST_CASE("restricted maximal function is monotone in R") {
  const auto s = random_geometric(12, 0.4, 5).space;
  const Field f = random_field(s, 2, -1.0, 1.0);
  Field prev(s.size(), 0.0);
  for (double R : {0.05, 0.1, 0.2, 0.4, 0.8, 2.0}) {
    const Field m = maximal_restricted(s, f, R);
    for (PointIndex x = 0; x < s.size(); ++x) CHECK(m[x] >= prev[x]);
    prev = m;
  }
}

TEST_CASE("non-centred maximal function examples") {
  const auto two = helpers::path({1.0});
  const Field m = maximal_noncentered(two, {0.0, 4.0}, 2.0);
  CHECK(m[0] == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  CHECK(maximal_noncentered(two, {-2.0, -2.0}, 3.0)[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(maximal_noncentered(two, {0.0, 1.0}, 0.5), Error);
}

TEST_CASE("non-centred maximal function dominates every ball average it can see") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto s = random_geometric(8, 0.5, seed).space;
    const Field f = random_field(s, seed, -1.0, 1.0);
    const double r = 2.0;
    const Field M = maximal_noncentered(s, f, r);
    for (PointIndex z = 0; z < s.size(); ++z) {
      for (double rad : candidate_radii(s)) {
        const Ball b = ball(s, z, rad);
        double m = 0, sum = 0;
        for (PointIndex y : b.members) {
          m += s.measure(y);
          sum += s.measure(y) * std::pow(std::abs(f[y]), r);
        }
        if (m == 0) continue;
        const double avg = std::pow(sum / m, 1 / r);
        for (PointIndex y : b.members) CHECK(M[y] >= avg * (1 - 1e-12));
      }
    }
  }
}

TEST_CASE("maximal-function gradients on a single edge") {
  const auto two = helpers::path({1.0});
  const Field u{0.0, 1.0};
  const Field rho{1.0, 1.0};
  const MaximalGradient wide = hajlasz_from_upper_local(two, u, rho, 8.0, 1.0);
  CHECK(wide.field == Field{1.0, 1.0});
  CHECK(wide.constant == 0.5);
  const MaximalGradient narrow = hajlasz_from_upper_local(two, u, rho, 2.0, 1.0);
  CHECK(narrow.constant == 0.0);
  const MaximalGradient glob = hajlasz_from_upper_global(two, u, rho, 1.0);
  CHECK(glob.field == Field{1.0, 1.0});
  CHECK(glob.constant == 0.5);
  CHECK(hajlasz_from_upper_global(two, {4.0, 4.0}, {0.0, 0.0}, 1.0).constant == 0.0);
  CHECK(hajlasz_from_upper_local(two, {4.0, 4.0}, {0.0, 0.0}, 3.0, 1.0).constant == 0.0);
  CHECK_THROWS_AS(hajlasz_from_upper_local(two, u, {0.1, 0.1}, 3.0, 1.0), Error);
}

TEST_CASE("global maximal-gradient constant is scale invariant") {
  const Instance inst = grid(4, 4, 1.0);
  const Field u = lipschitz_field(inst.space, 3);
  const Field rho = min_upper_gradient(inst.space, u, FunctionNorm::lp(INFINITY)).x;
  const double c = hajlasz_from_upper_global(inst.space, u, rho, 2.0).constant;
  Field u5 = u, rho5 = rho;
  for (double& v : u5) v *= 5.0;
  for (double& v : rho5) v *= 5.0;
  CHECK(hajlasz_from_upper_global(inst.space, u5, rho5, 2.0).constant == doctest::Approx(c).epsilon(1e-12));
}
