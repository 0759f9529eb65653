#include "solver/barrier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace mmgrad::solver {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kKktTolerance = 1e-6;

class Barrier {
 public:
  explicit Barrier(const BarrierProblem& pb) : pb_(pb), n_(pb.num_vars), dim_(pb.num_vars + (pb.epigraph ? 1 : 0)) {}

  Index dim() const { return static_cast<Index>(dim_); }

  std::size_t barrier_terms() const { return pb_.rows.size() + n_ + pb_.power_rows.size(); }

  double objective(const VectorXd& z) const {
    if (pb_.epigraph) return z(static_cast<Index>(n_));
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += pb_.weights[i] * std::pow(z(static_cast<Index>(i)), pb_.p);
    return s;
  }

  double power_sum(const PowerRow& row, const VectorXd& z) const {
    double s = 0.0;
    for (const Term& t : row.terms) s += t.coef * std::pow(z(static_cast<Index>(t.var)), pb_.p);
    return s;
  }

  double row_slack(const CoverRow& row, const VectorXd& z) const {
    double s = -row.rhs;
    for (const Term& t : row.terms) s += t.coef * z(static_cast<Index>(t.var));
    return s;
  }

  /// Barrier-augmented value t*f0 + phi; NaN outside the domain.
  double value(const VectorXd& z, double t) const {
    double phi = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double xi = z(static_cast<Index>(i));
      if (!(xi > 0.0)) return kNaN;
      phi -= std::log(xi);
    }
    for (const CoverRow& row : pb_.rows) {
      const double s = row_slack(row, z);
      if (!(s > 0.0)) return kNaN;
      phi -= std::log(s);
    }
    if (pb_.epigraph) {
      const double T = z(static_cast<Index>(n_));
      for (const PowerRow& row : pb_.power_rows) {
        const double s = T - power_sum(row, z);
        if (!(s > 0.0)) return kNaN;
        phi -= std::log(s);
      }
    }
    return t * objective(z) + phi;
  }

  /// Gradient of f0 alone.
  VectorXd objective_gradient(const VectorXd& z) const {
    VectorXd g = VectorXd::Zero(dim());
    if (pb_.epigraph) {
      g(static_cast<Index>(n_)) = 1.0;
    } else {
      for (std::size_t i = 0; i < n_; ++i) {
        g(static_cast<Index>(i)) = pb_.p * pb_.weights[i] * std::pow(z(static_cast<Index>(i)), pb_.p - 1.0);
      }
    }
    return g;
  }

  /// Gradient of the barrier phi alone.
  VectorXd barrier_gradient(const VectorXd& z) const {
    VectorXd g = VectorXd::Zero(dim());
    for (std::size_t i = 0; i < n_; ++i) g(static_cast<Index>(i)) -= 1.0 / z(static_cast<Index>(i));
    for (const CoverRow& row : pb_.rows) {
      const double s = row_slack(row, z);
      for (const Term& t : row.terms) g(static_cast<Index>(t.var)) -= t.coef / s;
    }
    if (pb_.epigraph) {
      const Index tIdx = static_cast<Index>(n_);
      for (const PowerRow& row : pb_.power_rows) {
        const double s = z(tIdx) - power_sum(row, z);
        g(tIdx) -= 1.0 / s;
        for (const Term& t : row.terms) {
          g(static_cast<Index>(t.var)) += pb_.p * t.coef * std::pow(z(static_cast<Index>(t.var)), pb_.p - 1.0) / s;
        }
      }
    }
    return g;
  }

  void hessian(const VectorXd& z, double t, MatrixXd& H) const {
    H.setZero(dim(), dim());
    const double p = pb_.p;
    for (std::size_t i = 0; i < n_; ++i) {
      const Index ii = static_cast<Index>(i);
      const double xi = z(ii);
      H(ii, ii) += 1.0 / (xi * xi);
      if (!pb_.epigraph) H(ii, ii) += t * p * (p - 1.0) * pb_.weights[i] * std::pow(xi, p - 2.0);
    }
    for (const CoverRow& row : pb_.rows) {
      const double s = row_slack(row, z);
      const double s2 = s * s;
      for (const Term& a : row.terms) {
        for (const Term& b : row.terms) {
          H(static_cast<Index>(a.var), static_cast<Index>(b.var)) += a.coef * b.coef / s2;
        }
      }
    }
    if (pb_.epigraph) {
      const Index tIdx = static_cast<Index>(n_);
      std::vector<std::pair<Index, double>> grad;
      for (const PowerRow& row : pb_.power_rows) {
        const double s = z(tIdx) - power_sum(row, z);
        const double s2 = s * s;
        grad.clear();
        grad.push_back({tIdx, 1.0});
        for (const Term& t : row.terms) {
          const Index v = static_cast<Index>(t.var);
          const double xv = z(v);
          grad.push_back({v, -p * t.coef * std::pow(xv, p - 1.0)});
          H(v, v) += p * (p - 1.0) * t.coef * std::pow(xv, p - 2.0) / s;
        }
        for (const auto& [ia, ga] : grad) {
          for (const auto& [ib, gb] : grad) H(ia, ib) += ga * gb / s2;
        }
      }
    }
  }

 private:
  const BarrierProblem& pb_;
  std::size_t n_;
  std::size_t dim_;
};

/// Active-set Newton on the KKT equalities, seeded from a centred point at
/// parameter t: constraints with slack at most 1/sqrt(t) (multiplier 1/(t s)
/// at least the slack) start active, and active bounds x_i >= 0 pin x_i to
/// zero. Variables that leave the domain get pinned, violated constraints
/// join, wrong-signed multipliers leave, and an inconsistent active set sheds
/// its loosest member. Returns false, leaving z alone, unless the result
/// verifies as a KKT point.
bool polish(const BarrierProblem& pb, const Barrier& barrier, double t, VectorXd& z, double& residual) {
  const std::size_t n = pb.num_vars;
  const Index dim = barrier.dim();
  const Index tIdx = static_cast<Index>(n);
  const double p = pb.p;
  const double cut = 1.0 / std::sqrt(t);
  const auto power_slack = [&](const PowerRow& row, const VectorXd& at) { return at(tIdx) - barrier.power_sum(row, at); };

  std::vector<bool> pinned(n), row_on(pb.rows.size()), power_on(pb.power_rows.size());
  std::vector<bool> row_kept(pb.rows.size()), power_kept(pb.power_rows.size());
  for (std::size_t i = 0; i < n; ++i) pinned[i] = z(static_cast<Index>(i)) <= cut;
  for (std::size_t j = 0; j < pb.rows.size(); ++j) row_on[j] = barrier.row_slack(pb.rows[j], z) <= cut;
  for (std::size_t j = 0; j < pb.power_rows.size(); ++j) power_on[j] = pb.epigraph && power_slack(pb.power_rows[j], z) <= cut;

  const std::size_t max_rounds = 8 + pb.rows.size() + pb.power_rows.size();
  for (std::size_t round = 0; round < max_rounds; ++round) {
    std::vector<Index> pos(static_cast<std::size_t>(dim), -1);
    std::vector<Index> free_vars;
    for (Index i = 0; i < dim; ++i) {
      if (i < tIdx && pinned[static_cast<std::size_t>(i)]) continue;
      pos[static_cast<std::size_t>(i)] = static_cast<Index>(free_vars.size());
      free_vars.push_back(i);
    }
    std::vector<std::size_t> rows_on, powers_on;
    for (std::size_t j = 0; j < pb.rows.size(); ++j) {
      if (row_on[j]) rows_on.push_back(j);
    }
    for (std::size_t j = 0; j < pb.power_rows.size(); ++j) {
      if (power_on[j]) powers_on.push_back(j);
    }
    const Index nf = static_cast<Index>(free_vars.size());
    const Index na = static_cast<Index>(rows_on.size() + powers_on.size());
    if (nf == 0) return false;

    VectorXd x = z;
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) x(static_cast<Index>(i)) = 0.0;
    }
    VectorXd lam(na);
    {
      Index k = 0;
      for (std::size_t j : rows_on) lam(k++) = 1.0 / (t * std::max(barrier.row_slack(pb.rows[j], z), cut * cut));
      for (std::size_t j : powers_on) lam(k++) = 1.0 / (t * std::max(power_slack(pb.power_rows[j], z), cut * cut));
    }

    VectorXd gl, c(na);
    MatrixXd J, HL;
    double g0_scale = 1.0;
    // Lagrangian gradient (all coordinates), active constraint values, their
    // Jacobian and the Lagrangian Hessian on the free coordinates.
    const auto linearise = [&]() {
      const VectorXd g0 = barrier.objective_gradient(x);
      g0_scale = 1.0 + g0.cwiseAbs().maxCoeff();
      gl = g0;
      J.setZero(na, nf);
      HL.setZero(nf, nf);
      if (!pb.epigraph) {
        for (Index i : free_vars) {
          const Index f = pos[static_cast<std::size_t>(i)];
          HL(f, f) += p * (p - 1.0) * pb.weights[static_cast<std::size_t>(i)] * std::pow(x(i), p - 2.0);
        }
      }
      Index k = 0;
      for (std::size_t j : rows_on) {
        c(k) = barrier.row_slack(pb.rows[j], x);
        for (const Term& term : pb.rows[j].terms) {
          gl(static_cast<Index>(term.var)) -= lam(k) * term.coef;
          if (pos[term.var] >= 0) J(k, pos[term.var]) += term.coef;
        }
        ++k;
      }
      for (std::size_t j : powers_on) {
        const PowerRow& row = pb.power_rows[j];
        c(k) = power_slack(row, x);
        gl(tIdx) -= lam(k);
        J(k, pos[static_cast<std::size_t>(tIdx)]) += 1.0;
        for (const Term& term : row.terms) {
          const Index v = static_cast<Index>(term.var);
          gl(v) += lam(k) * p * term.coef * std::pow(x(v), p - 1.0);
          const Index f = pos[term.var];
          if (f < 0) continue;
          J(k, f) -= p * term.coef * std::pow(x(v), p - 1.0);
          HL(f, f) += lam(k) * p * (p - 1.0) * term.coef * std::pow(x(v), p - 2.0);
        }
        ++k;
      }
    };
    const auto stationarity = [&]() {
      double worst = 0.0;
      for (Index i : free_vars) worst = std::max(worst, std::abs(gl(i)));
      return worst / g0_scale;
    };

    Index escaped = -1;
    for (int iter = 0; iter < 30 && escaped < 0; ++iter) {
      linearise();
      if (!gl.allFinite() || !HL.allFinite()) return false;
      const double c_norm = na > 0 ? c.cwiseAbs().maxCoeff() : 0.0;
      if (stationarity() <= 1e-15 && c_norm <= 1e-15) break;
      MatrixXd K = MatrixXd::Zero(nf + na, nf + na);
      K.topLeftCorner(nf, nf) = HL;
      K.topRightCorner(nf, na) = J.transpose();
      K.bottomLeftCorner(na, nf) = J;
      VectorXd rhs(nf + na);
      for (Index i : free_vars) rhs(pos[static_cast<std::size_t>(i)]) = -gl(i);
      rhs.tail(na) = -c;
      const VectorXd sol = Eigen::CompleteOrthogonalDecomposition<MatrixXd>(K).solve(rhs);
      if (!sol.allFinite()) return false;
      for (Index i : free_vars) x(i) += sol(pos[static_cast<std::size_t>(i)]);
      lam -= sol.tail(na);
      for (Index i : free_vars) {
        if (i < tIdx && !(x(i) > 0.0) && (escaped < 0 || x(i) < x(escaped))) escaped = i;
      }
    }
    if (escaped >= 0) {
      pinned[static_cast<std::size_t>(escaped)] = true;
      continue;
    }
    if (na > 0 && !(c.cwiseAbs().maxCoeff() <= 1e-12)) {
      // The equalities are inconsistent: the loosest one at z is not active,
      // unless it was brought back for being violated; then a pin is wrong.
      double loosest = -1.0;
      std::size_t drop = 0;
      bool drop_power = false;
      for (std::size_t j : rows_on) {
        const double sl = barrier.row_slack(pb.rows[j], z);
        if (!row_kept[j] && sl > loosest) {
          loosest = sl;
          drop = j;
          drop_power = false;
        }
      }
      for (std::size_t j : powers_on) {
        const double sl = power_slack(pb.power_rows[j], z);
        if (!power_kept[j] && sl > loosest) {
          loosest = sl;
          drop = j;
          drop_power = true;
        }
      }
      if (loosest >= 0.0) {
        (drop_power ? power_on : row_on)[drop] = false;
        continue;
      }
      bool released = false;
      const auto release = [&](const std::vector<Term>& terms) {
        for (const Term& term : terms) {
          released = released || pinned[term.var];
          pinned[term.var] = false;
        }
      };
      for (std::size_t j : rows_on) release(pb.rows[j].terms);
      for (std::size_t j : powers_on) release(pb.power_rows[j].terms);
      if (!released) return false;
      continue;
    }
    linearise();

    // Verify: primal feasibility everywhere, dual signs, stationarity.
    double infeasible = 0.0;
    std::size_t worst_row = pb.rows.size(), worst_power = pb.power_rows.size();
    for (std::size_t j = 0; j < pb.rows.size(); ++j) {
      const double v = -barrier.row_slack(pb.rows[j], x) / (1.0 + pb.rows[j].rhs);
      if (v > infeasible) {
        infeasible = v;
        worst_row = j;
        worst_power = pb.power_rows.size();
      }
    }
    if (pb.epigraph) {
      for (std::size_t j = 0; j < pb.power_rows.size(); ++j) {
        const double v = -power_slack(pb.power_rows[j], x) / (1.0 + std::abs(x(tIdx)));
        if (v > infeasible) {
          infeasible = v;
          worst_power = j;
          worst_row = pb.rows.size();
        }
      }
    }
    if (infeasible > 1e-12) {
      // An active constraint that stays violated was starved by a wrong pin.
      bool changed = false;
      const auto release = [&](const std::vector<Term>& terms) {
        for (const Term& term : terms) {
          if (pinned[term.var]) changed = true;
          pinned[term.var] = false;
        }
      };
      if (worst_row < pb.rows.size()) {
        if (row_on[worst_row]) release(pb.rows[worst_row].terms);
        changed = changed || !row_on[worst_row];
        row_on[worst_row] = true;
        row_kept[worst_row] = true;
      }
      if (worst_power < pb.power_rows.size()) {
        if (power_on[worst_power]) release(pb.power_rows[worst_power].terms);
        changed = changed || !power_on[worst_power];
        power_on[worst_power] = true;
        power_kept[worst_power] = true;
      }
      if (!changed) return false;
      continue;
    }
    double dual_sign = 0.0;
    Index worst_dual = -1;
    for (Index k = 0; k < na; ++k) {
      if (-lam(k) > dual_sign) {
        dual_sign = -lam(k);
        worst_dual = k;
      }
    }
    Index worst_pin = -1;
    for (Index i = 0; i < tIdx; ++i) {
      if (pinned[static_cast<std::size_t>(i)] && -gl(i) / g0_scale > dual_sign) {
        dual_sign = -gl(i) / g0_scale;
        worst_pin = i;
      }
    }
    if (dual_sign > 1e-10) {
      if (worst_pin >= 0) {
        pinned[static_cast<std::size_t>(worst_pin)] = false;
      } else if (static_cast<std::size_t>(worst_dual) < rows_on.size()) {
        row_on[rows_on[static_cast<std::size_t>(worst_dual)]] = false;
      } else {
        power_on[powers_on[static_cast<std::size_t>(worst_dual) - rows_on.size()]] = false;
      }
      continue;
    }
    const double stat = stationarity();
    if (!(stat <= 1e-10)) return false;
    const double before = barrier.objective(z);
    if (!(barrier.objective(x) <= before + 1e-8 * (1.0 + std::abs(before)))) return false;
    z = x;
    residual = std::max({stat, infeasible, dual_sign});
    return true;
  }
  return false;
}

BarrierResult solve_normalized(const BarrierProblem& pb, const BarrierOptions& options) {
  if (!(pb.p > 1.0) || !std::isfinite(pb.p)) throw Error(ErrorCode::ParameterRange, "barrier solver needs p in (1, inf)");
  if (!pb.epigraph && pb.weights.size() != pb.num_vars) throw Error(ErrorCode::InvalidArgument, "weight size mismatch");
  if (pb.epigraph && pb.power_rows.empty()) throw Error(ErrorCode::InvalidArgument, "epigraph form needs power rows");

  BarrierResult result;
  const std::size_t n = pb.num_vars;
  Barrier barrier(pb);
  const Index dim = barrier.dim();

  // Uniform strictly feasible start.
  double start = 1.0;
  for (const CoverRow& row : pb.rows) {
    double coef_sum = 0.0;
    for (const Term& t : row.terms) coef_sum += t.coef;
    if (coef_sum <= 0.0) throw Error(ErrorCode::SolverFailure, "row without variables");
    start = std::max(start, 2.0 * row.rhs / coef_sum);
  }
  VectorXd z(dim);
  for (std::size_t i = 0; i < n; ++i) z(static_cast<Index>(i)) = start;
  if (pb.epigraph) {
    double top = 0.0;
    for (const PowerRow& row : pb.power_rows) top = std::max(top, barrier.power_sum(row, z));
    z(static_cast<Index>(n)) = 2.0 * top + 1.0;
  }

  const double m_terms = static_cast<double>(barrier.barrier_terms());
  double t = m_terms / std::max(barrier.objective(z), 1e-300);
  MatrixXd H;
  bool budget_exhausted = false;

  // Stationarity of the Lagrangian with multipliers 1/(t s), and the duality
  // gap m/t, both relative.
  const auto kkt = [&](const VectorXd& at, double tt) {
    const VectorXd g0 = barrier.objective_gradient(at);
    const VectorXd stationarity = g0 + barrier.barrier_gradient(at) / tt;
    const double scale = 1.0 + g0.cwiseAbs().maxCoeff();
    const double complementarity = m_terms / tt / (1.0 + std::abs(barrier.objective(at)));
    return std::max(stationarity.cwiseAbs().maxCoeff() / scale, complementarity);
  };
  VectorXd best_z = z;
  double best_kkt = std::numeric_limits<double>::infinity();
  double best_t = t;

  double mu = options.mu;
  std::size_t stage_start = 0;
  int repeats = 0;
  while (true) {
    // Centring by damped Newton.
    bool centred = false;
    bool stuck = false;
    // Near the end a centred start needs a handful of quadratic steps; more
    // than that means rounding has taken over.
    const bool near_end = m_terms / t <= 1e-6 * (1.0 + std::abs(barrier.objective(z)));
    const int inner_cap = near_end ? 25 : 200;
    for (int inner = 0; inner < inner_cap; ++inner) {
      if (result.newton_steps >= options.max_newton) {
        budget_exhausted = true;
        break;
      }
      VectorXd grad = t * barrier.objective_gradient(z) + barrier.barrier_gradient(z);
      barrier.hessian(z, t, H);
      VectorXd d = H.diagonal().cwiseAbs().cwiseSqrt();
      for (Index i = 0; i < dim; ++i) {
        if (!(d(i) > 0.0) || !std::isfinite(d(i))) d(i) = 1.0;
      }
      const VectorXd dinv = d.cwiseInverse();
      MatrixXd Hs = dinv.asDiagonal() * H * dinv.asDiagonal();
      Eigen::LDLT<MatrixXd> ldlt(Hs);
      VectorXd step = dinv.asDiagonal() * ldlt.solve(-(dinv.asDiagonal() * grad));
      if (ldlt.info() != Eigen::Success || !step.allFinite()) {
        Hs.diagonal().array() += 1e-10;
        Eigen::LDLT<MatrixXd> reg(Hs);
        step = dinv.asDiagonal() * reg.solve(-(dinv.asDiagonal() * grad));
        if (!step.allFinite()) {
          stuck = true;
          break;
        }
      }
      ++result.newton_steps;
      const double decrement = -grad.dot(step);
      const double f0 = barrier.value(z, t);
      const double stationarity =
          grad.cwiseAbs().maxCoeff() / (t * (1.0 + barrier.objective_gradient(z).cwiseAbs().maxCoeff()));
      if (decrement <= 1e-18 || stationarity <= 1e-10) {
        centred = true;
        break;
      }
      // Below this the decrement is lost in the rounding of f.
      const double floor = 1e-14 * (1.0 + std::abs(f0));
      if (decrement <= floor) {
        stuck = true;
        break;
      }

      double s = 1.0;
      VectorXd trial = z + s * step;
      double ft = barrier.value(trial, t);
      while (std::isnan(ft) && s > 1e-20) {
        s *= 0.5;
        trial = z + s * step;
        ft = barrier.value(trial, t);
      }
      // Near the centre t * f0 + phi is too large for Armijo to resolve the
      // decrease, so allow a rounding-level rise.
      const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(f0);
      while (!(ft <= f0 - 0.25 * s * decrement + slack) && s > 1e-20) {
        s *= 0.5;
        trial = z + s * step;
        ft = barrier.value(trial, t);
      }
      if (std::isnan(ft) || s <= 1e-20) {  // no representable progress
        stuck = true;
        break;
      }
      z = trial;
      if (decrement <= 1e-16) {
        centred = true;
        break;
      }
      if (s < 1e-6 && decrement <= 1e6 * floor) {
        stuck = true;
        break;
      }
    }
    // Early on, running out of inner steps is a slow damped phase; raising t
    // from there jams the iterate against a boundary, so keep centring and
    // grow t more gently afterwards.
    const bool late = m_terms / t <= 1e-6 * (1.0 + std::abs(barrier.objective(z)));
    if (!centred && !stuck && !late && !budget_exhausted && ++repeats <= 20) {
      mu = std::max(2.0, std::sqrt(mu));
      continue;
    }
    repeats = 0;
    // Once the slacks approach rounding level centring stalls and the
    // multipliers 1/(t s) turn noisy; keep the best point and leave the rest
    // to the polish.
    const double r = kkt(z, t);
    if (r <= best_kkt) {
      best_kkt = r;
      best_z = z;
      best_t = t;
    }
    if (!centred && late) break;
    if (budget_exhausted) break;
    const double f0 = barrier.objective(z);
    if (m_terms / t <= options.gap_rel * std::max(std::abs(f0), 1e-300)) break;
    const std::size_t stage_steps = result.newton_steps - stage_start;
    stage_start = result.newton_steps;
    if (stage_steps > 60) mu = std::max(2.0, std::sqrt(mu));
    if (stage_steps < 20) mu = std::min(options.mu, mu * mu);
    t *= mu;
  }
  z = best_z;
  double polished = 0.0;
  if (polish(pb, barrier, best_t, z, polished)) best_kkt = std::min(best_kkt, polished);
  for (std::size_t i = 0; i < n; ++i) z(static_cast<Index>(i)) = std::max(z(static_cast<Index>(i)), 0.0);

  result.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.x[i] = z(static_cast<Index>(i));
  result.epigraph_value = pb.epigraph ? z(static_cast<Index>(n)) : 0.0;
  result.objective = barrier.objective(z);
  result.converged = !budget_exhausted && best_kkt <= kKktTolerance;

  result.kkt_residual = best_kkt;
  return result;
}

}  // namespace

BarrierResult solve_barrier(const BarrierProblem& pb, const BarrierOptions& options) {
  // Solve with the largest row bound at 1, so that scaling every bound by c
  // scales the solution by exactly c.
  double scale = 0.0;
  for (const CoverRow& row : pb.rows) scale = std::max(scale, row.rhs);
  if (!(scale > 0.0) || !std::isfinite(scale) || scale == 1.0) return solve_normalized(pb, options);
  BarrierProblem unit = pb;
  for (CoverRow& row : unit.rows) row.rhs /= scale;
  BarrierResult r = solve_normalized(unit, options);
  const double power = std::pow(scale, pb.p);
  for (double& v : r.x) v *= scale;
  r.epigraph_value *= power;
  r.objective *= power;
  return r;
}

}  // namespace mmgrad::solver
