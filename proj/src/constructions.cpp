#include "constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"
#include "extended.hpp"

namespace mmgrad {

namespace {

void require_size(const MetricMeasureSpace& space, const Field& f, const char* name) {
  if (f.size() != space.size()) {
    throw Error(ErrorCode::InvalidArgument, std::string(name) + " does not match the space size");
  }
}

double finite_min_positive(const Field& g) {
  double m = kInf;
  for (double v : g) {
    if (v > 0.0 && !is_inf(v)) m = std::min(m, v);
  }
  return m;
}

double finite_max(const Field& g) {
  double m = -1.0;
  for (double v : g) {
    if (!is_inf(v)) m = std::max(m, v);
  }
  return m;
}

int ceil_log2(double v) { return static_cast<int>(std::ceil(std::log2(v))); }

/// Mean of |f|^r over a ball given by its mu-positive members; exact |f| when
/// a single point carries all the mass.
struct BallMean {
  double mass = 0.0;
  double weighted = 0.0;  // sum mu |f|^r
  std::size_t positive = 0;
  PointIndex sole = 0;

  void add(const MetricMeasureSpace& space, const Field& f, PointIndex y, double r) {
    const double mu = space.measure(y);
    if (mu <= 0.0) return;
    mass += mu;
    const double a = std::abs(f[y]);
    weighted += ext_mul(mu, r == 1.0 ? a : std::pow(a, r));
    ++positive;
    sole = y;
  }

  double value(const Field& f, double r) const {
    if (positive == 1) return std::abs(f[sole]);
    const double mean = weighted / mass;
    return r == 1.0 ? mean : std::pow(mean, 1.0 / r);
  }
};

}  // namespace

Field mcshane_extend(const MetricMeasureSpace& space, const std::vector<PointIndex>& A,
                     const std::vector<double>& values, double L) {
  if (A.empty()) throw Error(ErrorCode::EmptySet, "extension needs a nonempty anchor set");
  if (A.size() != values.size()) throw Error(ErrorCode::InvalidArgument, "anchor values do not match the anchor set");
  if (!(L > 0.0) || !std::isfinite(L)) throw Error(ErrorCode::ParameterRange, "Lipschitz constant must be positive");
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i] >= space.size()) throw Error(ErrorCode::UnknownPoint, "anchor index out of range");
    if (!std::isfinite(values[i])) throw Error(ErrorCode::InvalidArgument, "anchor values must be finite");
  }
  Field F(space.size(), kInf);
  for (PointIndex x = 0; x < space.size(); ++x) {
    for (std::size_t i = 0; i < A.size(); ++i) F[x] = std::min(F[x], values[i] + L * space.distance(x, A[i]));
  }
  return F;
}

std::vector<PointIndex> level_set(const Field& g, int k) {
  const double bound = std::ldexp(1.0, k);
  std::vector<PointIndex> E;
  for (PointIndex x = 0; x < g.size(); ++x) {
    if (g[x] <= bound) E.push_back(x);
  }
  return E;
}

bool ConversionCertificate::levels_ok() const {
  for (const LevelRecord& lv : levels) {
    if (!lv.nested || !lv.extension_matches || !ratio_passes(lv.strong_ratio) || !ratio_passes(lv.edge_ratio)) {
      return false;
    }
  }
  return true;
}

bool ConversionCertificate::passed() const {
  return levels_ok() && factor <= kConversionFactor + kRatioTolerance;
}

ConversionCertificate hajlasz_to_upper(const MetricMeasureSpace& space, const Field& u, const Field& g,
                                       const ConversionOptions& options) {
  require_size(space, u, "u");
  require_size(space, g, "g");
  if (options.tail < 1) throw Error(ErrorCode::ParameterRange, "tail must be at least 1");
  const std::size_t n = space.size();

  ConversionCertificate cert;
  cert.family = options.family;
  cert.refined_gradient = refine_hajlasz(space, u, g);
  const Field& ghat = cert.refined_gradient;

  const double top = finite_max(ghat);
  if (top < 0.0) throw Error(ErrorCode::DegenerateGradient, "the refined gradient is +inf at every point");
  const double low = finite_min_positive(ghat);
  int k_min = ceil_log2(is_inf(low) ? 1.0 : std::max(low, 1.0)) - 1;
  while (level_set(ghat, k_min).empty()) ++k_min;
  const int k_top = top > 0.0 ? std::max(k_min, ceil_log2(top)) : k_min;
  cert.k_min = k_min;
  cert.k_max = k_top + options.tail;

  const CurveFamily edges = enumerate_family(space, FamilyPolicy::edges());
  std::vector<PointIndex> all(n);
  for (PointIndex x = 0; x < n; ++x) all[x] = x;

  std::vector<bool> previous(n, false);
  for (int k = cert.k_min; k <= cert.k_max; ++k) {
    LevelRecord lv;
    lv.k = k;
    lv.level_set = level_set(ghat, k);
    std::vector<bool> in(n, false);
    for (PointIndex x : lv.level_set) in[x] = true;
    for (PointIndex x = 0; x < n; ++x) {
      if (previous[x] && !in[x]) lv.nested = false;
    }
    previous = in;

    const double L = std::ldexp(1.0, k + 1);
    std::vector<double> anchors;
    for (PointIndex x : lv.level_set) anchors.push_back(u[x]);
    lv.extension = mcshane_extend(space, lv.level_set, anchors, L);
    for (PointIndex x : lv.level_set) {
      if (lv.extension[x] != u[x]) lv.extension_matches = false;
    }
    lv.truncated_gradient.assign(n, L);
    for (PointIndex x : lv.level_set) lv.truncated_gradient[x] = ghat[x];

    lv.strong_ratio = check_strong_hajlasz(space, lv.extension, lv.truncated_gradient, all).worst_ratio;
    lv.edge_ratio = minimal_factor(space, lv.extension, lv.truncated_gradient, edges) / 2.0;
    cert.levels.push_back(std::move(lv));
  }

  const LevelRecord& last = cert.levels.back();
  std::vector<bool> in_E(n, false);
  for (PointIndex x : last.level_set) in_E[x] = true;
  cert.corrected_u = u;
  cert.corrected_g = ghat;
  for (PointIndex x = 0; x < n; ++x) {
    if (in_E[x]) continue;
    cert.infinity_set.push_back(x);
    cert.corrected_u[x] = last.extension[x];
  }
  const std::size_t tail_start = cert.levels.size() - static_cast<std::size_t>(options.tail) - 1;
  for (PointIndex x : cert.infinity_set) {
    for (std::size_t i = tail_start; i < cert.levels.size(); ++i) {
      if (cert.levels[i].extension[x] != last.extension[x]) cert.stabilized = false;
    }
  }

  const CurveFamily family = enumerate_family(space, options.family, options.curve_cap);
  cert.family_size = family.curves.size();
  cert.factor = minimal_factor(space, cert.corrected_u, cert.corrected_g, family);
  cert.edge_factor = minimal_factor(space, cert.corrected_u, cert.corrected_g, edges);
  return cert;
}

bool GlueCertificate::passed() const {
  if (factor > kConversionFactor + kRatioTolerance) return false;
  for (const ConversionCertificate& c : patches) {
    if (!c.levels_ok()) return false;
  }
  return true;
}

GlueCertificate glue_local(const MetricMeasureSpace& space, const Field& u, const Field& g, const Cover& cover,
                           const ConversionOptions& options) {
  require_size(space, u, "u");
  require_size(space, g, "g");
  const std::size_t n = space.size();
  const std::size_t patches = cover.patches.size();

  GlueCertificate cert;
  cert.family = options.family;
  std::vector<Field> local_u(patches, Field(n, 0.0));
  std::vector<std::vector<bool>> member(patches, std::vector<bool>(n, false));
  std::vector<bool> infinite(n, false);

  for (std::size_t j = 0; j < patches; ++j) {
    const std::vector<PointIndex>& patch = cover.patches[j];
    const MetricMeasureSpace sub = space.subspace(patch);
    Field su(patch.size()), sg(patch.size());
    for (std::size_t i = 0; i < patch.size(); ++i) {
      su[i] = u[patch[i]];
      sg[i] = g[patch[i]];
      member[j][patch[i]] = true;
    }
    ConversionCertificate pc;
    try {
      pc = hajlasz_to_upper(sub, su, sg, options);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateGradient) throw;
      // Every point of the patch is a null violator: keep u, mark +inf.
      pc.refined_gradient.assign(patch.size(), kInf);
      pc.corrected_u = su;
      pc.corrected_g = pc.refined_gradient;
      for (std::size_t i = 0; i < patch.size(); ++i) pc.infinity_set.push_back(i);
      cert.degenerate_patches.push_back(j);
    }
    for (std::size_t i = 0; i < patch.size(); ++i) local_u[j][patch[i]] = pc.corrected_u[i];
    for (std::size_t i : pc.infinity_set) infinite[patch[i]] = true;
    cert.patches.push_back(std::move(pc));
  }

  std::vector<bool> in_Z(n, false);
  for (std::size_t a = 0; a < patches; ++a) {
    for (std::size_t b = a + 1; b < patches; ++b) {
      Disagreement d{a, b, {}};
      for (PointIndex x : cover.patches[a]) {
        if (member[b][x] && local_u[a][x] != local_u[b][x]) d.points.push_back(x);
      }
      if (d.points.empty()) continue;
      for (PointIndex x : d.points) {
        if (space.measure(x) > 0.0) {
          throw Error(ErrorCode::PatchDisagreementOnPositiveMeasure,
                      "patches " + std::to_string(a) + " and " + std::to_string(b) + " disagree at '" + space.id(x) +
                          "'");
        }
        if (!infinite[x]) {
          throw Error(ErrorCode::PatchDisagreementOnPositiveMeasure,
                      "patches disagree at '" + space.id(x) + "' where the refined gradient is finite");
        }
        in_Z[x] = true;
      }
      cert.disagreements.push_back(std::move(d));
    }
  }

  cert.glued_u.assign(n, 0.0);
  cert.glued_g = g;
  for (PointIndex x = 0; x < n; ++x) {
    if (infinite[x]) cert.glued_g[x] = kInf;
    if (in_Z[x]) {
      cert.zero_set.push_back(x);
      continue;
    }
    for (std::size_t j = 0; j < patches; ++j) {
      if (member[j][x]) {
        cert.glued_u[x] = local_u[j][x];
        break;
      }
    }
  }

  const CurveFamily family = enumerate_family(space, options.family, options.curve_cap);
  cert.family_size = family.curves.size();
  cert.factor = minimal_factor(space, cert.glued_u, cert.glued_g, family);
  return cert;
}

Field maximal_restricted(const MetricMeasureSpace& space, const Field& f, double R) {
  require_size(space, f, "f");
  if (!(R > 0.0)) throw Error(ErrorCode::ParameterRange, "radius must be positive");
  Field out(space.size(), 0.0);
  for (PointIndex x = 0; x < space.size(); ++x) {
    const BallPrefixes bp = ball_prefixes(space, x);
    BallMean mean;
    double best = 0.0;
    std::size_t start = 0;
    for (std::size_t end : bp.ends) {
      // B(x, t) equals this prefix for t in (distance, next distance].
      if (!(bp.distance[start] < R)) break;
      for (std::size_t i = start; i < end; ++i) mean.add(space, f, bp.order[i], 1.0);
      if (mean.positive > 0) best = std::max(best, mean.value(f, 1.0));
      start = end;
    }
    out[x] = best;
  }
  return out;
}

Field maximal_noncentered(const MetricMeasureSpace& space, const Field& f, double r) {
  require_size(space, f, "f");
  if (!(r >= 1.0) || !std::isfinite(r)) throw Error(ErrorCode::ParameterRange, "exponent must be in [1, inf)");
  Field out(space.size(), 0.0);
  for (PointIndex z = 0; z < space.size(); ++z) {
    const BallPrefixes bp = ball_prefixes(space, z);
    std::vector<double> values(bp.ends.size(), -1.0);
    BallMean mean;
    std::size_t start = 0;
    for (std::size_t k = 0; k < bp.ends.size(); ++k) {
      for (std::size_t i = start; i < bp.ends[k]; ++i) mean.add(space, f, bp.order[i], r);
      if (mean.positive > 0) values[k] = mean.value(f, r);
      start = bp.ends[k];
    }
    // A point in group k lies in every ball k' >= k: suffix maxima.
    for (std::size_t k = bp.ends.size(); k-- > 1;) values[k - 1] = std::max(values[k - 1], values[k]);
    start = 0;
    for (std::size_t k = 0; k < bp.ends.size(); ++k) {
      for (std::size_t i = start; i < bp.ends[k]; ++i) out[bp.order[i]] = std::max(out[bp.order[i]], values[k]);
      start = bp.ends[k];
    }
  }
  return out;
}

MaximalGradient hajlasz_from_upper_local(const MetricMeasureSpace& space, const Field& u, const Field& rho,
                                         double r, double q) {
  require_size(space, u, "u");
  require_size(space, rho, "rho");
  if (!(r > 0.0)) throw Error(ErrorCode::ParameterRange, "radius must be positive");
  if (!(q >= 1.0) || !std::isfinite(q)) throw Error(ErrorCode::ParameterRange, "exponent must be in [1, inf)");
  const CurveFamily edges = enumerate_family(space, FamilyPolicy::edges());
  const ViolationReport upper = check_upper(space, u, rho, edges);
  if (!upper.passed) throw Error(ErrorCode::UpperGradientFailure, "rho is not an upper gradient of u on the edges");

  Field powered(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) powered[i] = q == 1.0 ? rho[i] : std::pow(rho[i], q);
  MaximalGradient out;
  out.field = maximal_restricted(space, powered, r);
  if (q != 1.0) {
    for (double& v : out.field) v = std::pow(v, 1.0 / q);
  }
  out.cover = ball_cover(space, r / 4.0);
  out.report = check_local_hajlasz(space, u, out.field, *out.cover);
  out.constant = out.report.worst_ratio;
  return out;
}

MaximalGradient hajlasz_from_upper_global(const MetricMeasureSpace& space, const Field& u, const Field& rho,
                                          double r) {
  require_size(space, u, "u");
  require_size(space, rho, "rho");
  const CurveFamily edges = enumerate_family(space, FamilyPolicy::edges());
  const ViolationReport upper = check_upper(space, u, rho, edges);
  if (!upper.passed) throw Error(ErrorCode::UpperGradientFailure, "rho is not an upper gradient of u on the edges");
  MaximalGradient out;
  out.field = maximal_noncentered(space, rho, r);
  out.report = check_hajlasz(space, u, out.field);
  out.constant = out.report.worst_ratio;
  return out;
}

}  // namespace mmgrad
