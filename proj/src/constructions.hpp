#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "curves.hpp"
#include "gradients.hpp"
#include "norms.hpp"
#include "space.hpp"

namespace mmgrad {

/// F(x) = min over a in A of f(a) + L d(x, a); values[i] belongs to A[i].
Field mcshane_extend(const MetricMeasureSpace& space, const std::vector<PointIndex>& A,
                     const std::vector<double>& values, double L);

/// {x : g(x) <= 2^k}, ascending.
std::vector<PointIndex> level_set(const Field& g, int k);

struct ConversionOptions {
  int tail = 8;  // K_tail
  FamilyPolicy family = FamilyPolicy::simple_paths(6);
  std::size_t curve_cap = kDefaultCurveCap;
};

struct LevelRecord {
  int k = 0;
  std::vector<PointIndex> level_set;  // E_k
  Field extension;                    // u_k
  Field truncated_gradient;           // g_k
  bool nested = true;                 // E_{k-1} is contained in E_k
  bool extension_matches = true;      // u_k == u on E_k, exact
  double strong_ratio = 0.0;          // strong check of (u_k, g_k) on all points
  double edge_ratio = 0.0;            // max over edges |du_k| / (2 * integral of g_k)
};

struct ConversionCertificate {
  int k_min = 0;
  int k_max = 0;
  Field refined_gradient;  // g-hat
  std::vector<LevelRecord> levels;
  Field corrected_u;       // u-tilde
  Field corrected_g;       // g-tilde
  std::vector<PointIndex> infinity_set;  // F
  bool stabilized = true;
  double factor = 0.0;       // minimal_factor(u-tilde, g-tilde) on the family
  double edge_factor = 0.0;  // same on the edge family
  FamilyPolicy family;
  std::size_t family_size = 0;

  bool levels_ok() const;
  /// Level identities hold and factor <= 4 + 1e-9.
  bool passed() const;
};

inline constexpr double kConversionFactor = 4.0;

ConversionCertificate hajlasz_to_upper(const MetricMeasureSpace& space, const Field& u, const Field& g,
                                       const ConversionOptions& options = {});

struct Disagreement {
  std::size_t patch_a = 0;
  std::size_t patch_b = 0;
  std::vector<PointIndex> points;  // Z_{a,b}
};

struct GlueCertificate {
  Field glued_u;
  Field glued_g;
  std::vector<ConversionCertificate> patches;
  std::vector<Disagreement> disagreements;
  std::vector<PointIndex> zero_set;  // union of every Z_{a,b}
  std::vector<std::size_t> degenerate_patches;  // patches with g-hat = +inf everywhere
  double factor = 0.0;
  FamilyPolicy family;
  std::size_t family_size = 0;

  bool passed() const;
};

GlueCertificate glue_local(const MetricMeasureSpace& space, const Field& u, const Field& g, const Cover& cover,
                           const ConversionOptions& options = {});

/// sup over 0 < t <= R of the mean of |f| on B(x, t); balls of measure 0 skipped.
Field maximal_restricted(const MetricMeasureSpace& space, const Field& f, double R);

/// sup over balls B containing x with mu(B) > 0 of (mean of |f|^r on B)^(1/r).
Field maximal_noncentered(const MetricMeasureSpace& space, const Field& f, double r);

struct MaximalGradient {
  Field field;
  double constant = 0.0;  // C_emp
  std::optional<Cover> cover;
  ViolationReport report;  // of the unscaled field
};

/// g_r = M_r(rho^q)^(1/q), C_emp the worst ratio over the cover {B(z, r/4)}.
MaximalGradient hajlasz_from_upper_local(const MetricMeasureSpace& space, const Field& u, const Field& rho,
                                         double r, double q);

/// field = non-centred maximal function of rho with exponent r, C_emp the worst
/// global ratio.
MaximalGradient hajlasz_from_upper_global(const MetricMeasureSpace& space, const Field& u, const Field& rho,
                                          double r);

}  // namespace mmgrad
