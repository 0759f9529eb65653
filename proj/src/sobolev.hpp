#pragma once

#include <optional>

#include "gradients.hpp"
#include "norms.hpp"
#include "space.hpp"

namespace mmgrad {

struct SobolevNormSpec {
  enum class Gradient { Hajlasz, Upper, LocalHajlasz };

  Gradient gradient = Gradient::Upper;
  FunctionNorm lattice = FunctionNorm::lp(2.0);
  bool homogeneous = false;
  std::optional<Cover> cover;  // required for LocalHajlasz only

  static Gradient parse_gradient(const std::string& name);  // hajlasz | upper | local
  static const char* gradient_name(Gradient g);
};

struct SobolevNorm {
  double value = 0.0;
  double function_norm = 0.0;  // 0 when homogeneous
  double gradient_norm = 0.0;
  Field gradient;
  solver::SolverStats stats;
};

/// (homogeneous ? 0 : ||u||) + min ||g|| over gradients of the chosen kind.
SobolevNorm sobolev_norm(const MetricMeasureSpace& space, const Field& u, const SobolevNormSpec& spec);

/// Best C in the (1, p)-Poincare inequality over balls B(x, r), r a candidate
/// radius below R0, with the dilated ball lambda' B for the most favourable
/// lambda' in [1, lambda].
double poincare_constant(const MetricMeasureSpace& space, const Field& u, const Field& g, double p, double lambda,
                         double R0);

struct EmbeddingReport {
  double m_norm = 0.0;        // Hajlasz
  double n_norm = 0.0;        // upper
  double m_local_norm = 0.0;  // local Hajlasz
  double n_over_m = 0.0;
  double n_over_m_local = 0.0;
  bool bound_ok = true;  // n <= 4 m (1 + 1e-3)
  bool local_ok = true;  // m_local <= m (1 + 1e-3)
};

inline constexpr double kEmbeddingTolerance = 1e-3;
inline constexpr double kEmbeddingFactor = 4.0;

EmbeddingReport embedding_report(const MetricMeasureSpace& space, const Field& u, const FunctionNorm& lattice,
                                 const Cover& cover, bool homogeneous = false);

}  // namespace mmgrad
