#include "sobolev.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "extended.hpp"

namespace mmgrad {

SobolevNormSpec::Gradient SobolevNormSpec::parse_gradient(const std::string& name) {
  if (name == "hajlasz") return Gradient::Hajlasz;
  if (name == "upper") return Gradient::Upper;
  if (name == "local" || name == "local_hajlasz") return Gradient::LocalHajlasz;
  throw Error(ErrorCode::Parse, "gradient kind must be hajlasz, upper or local, got '" + name + "'");
}

const char* SobolevNormSpec::gradient_name(Gradient g) {
  switch (g) {
    case Gradient::Hajlasz: return "hajlasz";
    case Gradient::Upper: return "upper";
    case Gradient::LocalHajlasz: return "local";
  }
  return "upper";
}

SobolevNorm sobolev_norm(const MetricMeasureSpace& space, const Field& u, const SobolevNormSpec& spec) {
  const bool local = spec.gradient == SobolevNormSpec::Gradient::LocalHajlasz;
  if (local != spec.cover.has_value()) {
    throw Error(ErrorCode::InvalidArgument, "a cover is required for the local kind and only for it");
  }
  solver::NormMinimization min;
  switch (spec.gradient) {
    case SobolevNormSpec::Gradient::Hajlasz:
      min = min_hajlasz_gradient(space, u, spec.lattice);
      break;
    case SobolevNormSpec::Gradient::LocalHajlasz:
      min = min_hajlasz_gradient(space, u, spec.lattice, HajlaszMode::local(*spec.cover));
      break;
    case SobolevNormSpec::Gradient::Upper:
      min = min_upper_gradient(space, u, spec.lattice);
      break;
  }
  SobolevNorm out;
  out.function_norm = spec.homogeneous ? 0.0 : spec.lattice.evaluate(space, u);
  out.gradient_norm = min.value;
  out.value = out.function_norm + out.gradient_norm;
  out.gradient = std::move(min.x);
  out.stats = min.stats;
  return out;
}

double poincare_constant(const MetricMeasureSpace& space, const Field& u, const Field& g, double p, double lambda,
                         double R0) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::ParameterRange, "p must be in [1, inf)");
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw Error(ErrorCode::ParameterRange, "lambda must be >= 1");
  if (!(R0 > 0.0)) throw Error(ErrorCode::ParameterRange, "R0 must be positive");
  if (u.size() != space.size() || g.size() != space.size()) {
    throw Error(ErrorCode::InvalidArgument, "fields do not match the space size");
  }

  std::vector<double> radii;
  for (double r : candidate_radii(space)) {
    if (r < R0) radii.push_back(r);
  }

  double worst = 0.0;
  for (PointIndex x = 0; x < space.size(); ++x) {
    const BallPrefixes bp = ball_prefixes(space, x);
    const std::size_t groups = bp.ends.size();
    // Per prefix: mass, sum mu g^p, and the mean oscillation of u.
    std::vector<double> mass(groups), gsum(groups), oscillation(groups);
    double m = 0.0, s = 0.0;
    std::size_t start = 0;
    for (std::size_t k = 0; k < groups; ++k) {
      for (std::size_t i = start; i < bp.ends[k]; ++i) {
        const PointIndex y = bp.order[i];
        m += space.measure(y);
        s += ext_mul(space.measure(y), p == 1.0 ? g[y] : std::pow(g[y], p));
      }
      mass[k] = m;
      gsum[k] = s;
      start = bp.ends[k];
      if (m <= 0.0) continue;
      double lo = kInf, hi = -kInf, weighted = 0.0;
      for (std::size_t i = 0; i < bp.ends[k]; ++i) {
        const PointIndex y = bp.order[i];
        if (space.measure(y) <= 0.0) continue;
        lo = std::min(lo, u[y]);
        hi = std::max(hi, u[y]);
        weighted += space.measure(y) * u[y];
      }
      if (lo == hi) continue;
      const double mean = weighted / m;
      double dev = 0.0;
      for (std::size_t i = 0; i < bp.ends[k]; ++i) {
        const PointIndex y = bp.order[i];
        dev += ext_mul(space.measure(y), std::abs(u[y] - mean));
      }
      oscillation[k] = dev / m;
    }
    auto group_distance = [&](std::size_t k) { return bp.distance[k == 0 ? 0 : bp.ends[k - 1]]; };

    for (double r : radii) {
      // Ball B(x, r): groups at distance < r.
      std::size_t base = 0;
      while (base + 1 < groups && group_distance(base + 1) < r) ++base;
      if (mass[base] <= 0.0 || oscillation[base] == 0.0) continue;
      double best = kInf;
      for (std::size_t k = base; k < groups; ++k) {
        if (k > base && group_distance(k) / r * (1.0 + kRadiusNudge) > lambda) break;
        const double mean = gsum[k] / mass[k];
        const double bracket = p == 1.0 ? mean : std::pow(mean, 1.0 / p);
        best = std::min(best, ext_ratio(oscillation[base], r * bracket));
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

EmbeddingReport embedding_report(const MetricMeasureSpace& space, const Field& u, const FunctionNorm& lattice,
                                 const Cover& cover, bool homogeneous) {
  SobolevNormSpec spec;
  spec.lattice = lattice;
  spec.homogeneous = homogeneous;

  EmbeddingReport report;
  spec.gradient = SobolevNormSpec::Gradient::Hajlasz;
  report.m_norm = sobolev_norm(space, u, spec).value;
  spec.gradient = SobolevNormSpec::Gradient::Upper;
  report.n_norm = sobolev_norm(space, u, spec).value;
  spec.gradient = SobolevNormSpec::Gradient::LocalHajlasz;
  spec.cover = cover;
  report.m_local_norm = sobolev_norm(space, u, spec).value;

  report.n_over_m = ext_ratio(report.n_norm, report.m_norm);
  report.n_over_m_local = ext_ratio(report.n_norm, report.m_local_norm);
  report.bound_ok = report.n_norm <= kEmbeddingFactor * report.m_norm * (1.0 + kEmbeddingTolerance);
  report.local_ok = report.m_local_norm <= report.m_norm * (1.0 + kEmbeddingTolerance);
  return report;
}

}  // namespace mmgrad
