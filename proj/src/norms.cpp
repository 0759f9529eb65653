#include "norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "error.hpp"
#include "extended.hpp"

namespace mmgrad {

namespace {

void check_size(const MetricMeasureSpace& space, const Field& f) {
  if (f.size() != space.size()) throw Error(ErrorCode::InvalidArgument, "field size differs from space size");
}

double root(double sum, double p) {
  if (is_inf(sum)) return kInf;
  if (p == 1.0) return sum;
  if (p == 2.0) return std::sqrt(sum);
  return std::pow(sum, 1.0 / p);
}

double power(double v, double p) {
  if (p == 1.0) return v;
  if (p == 2.0) return v * v;
  return std::pow(v, p);
}

double parse_number(const std::string& s) {
  if (s == "inf" || s == "infinity") return kInf;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw Error(ErrorCode::Parse, "bad number '" + s + "'");
  return v;
}

}  // namespace

FunctionNorm FunctionNorm::lp(double p) {
  if (!(p >= 1.0)) throw Error(ErrorCode::ParameterRange, "L^p needs p in [1, inf]");
  return FunctionNorm{Kind::Lp, p, p};
}

FunctionNorm FunctionNorm::morrey(double p, double q) {
  if (!(p > 1.0) || !(q >= p) || !std::isfinite(q)) {
    throw Error(ErrorCode::ParameterRange, "Morrey norm needs 1 < p <= q < inf");
  }
  return FunctionNorm{Kind::Morrey, p, q};
}

FunctionNorm FunctionNorm::parse(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 2 && parts[0] == "lp") return lp(parse_number(parts[1]));
  if (parts.size() == 3 && parts[0] == "morrey") return morrey(parse_number(parts[1]), parse_number(parts[2]));
  throw Error(ErrorCode::Parse, "norm spec must be lp:P or morrey:P:Q, got '" + spec + "'");
}

std::string FunctionNorm::to_string() const {
  auto num = [](double v) {
    if (is_inf(v)) return std::string("inf");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  if (kind == Kind::Lp) return "lp:" + num(p);
  return "morrey:" + num(p) + ":" + num(q);
}

double FunctionNorm::evaluate(const MetricMeasureSpace& space, const Field& f) const {
  return kind == Kind::Lp ? lp_norm(space, f, p) : morrey_norm(space, f, p, q);
}

double lp_norm(const MetricMeasureSpace& space, const Field& f, double p) {
  check_size(space, f);
  if (!(p >= 1.0)) throw Error(ErrorCode::ParameterRange, "L^p needs p in [1, inf]");
  if (is_inf(p)) {
    double best = 0.0;
    for (PointIndex i = 0; i < f.size(); ++i) {
      if (space.measure(i) > 0.0) best = std::max(best, std::abs(f[i]));
    }
    return best;
  }
  double sum = 0.0;
  for (PointIndex i = 0; i < f.size(); ++i) {
    const double mu = space.measure(i);
    if (mu <= 0.0) continue;
    sum += ext_mul(mu, power(std::abs(f[i]), p));
  }
  return root(sum, p);
}

double morrey_norm(const MetricMeasureSpace& space, const Field& f, double p, double q) {
  check_size(space, f);
  if (!(p > 1.0) || !(q >= p) || !std::isfinite(q)) {
    throw Error(ErrorCode::ParameterRange, "Morrey norm needs 1 < p <= q < inf");
  }
  // Exponent 1/q - 1/p vanishes: the whole space is a ball and attains the sup.
  if (q == p) return lp_norm(space, f, p);

  const double exponent = 1.0 / q - 1.0 / p;
  double best = 0.0;
  for (PointIndex x = 0; x < space.size(); ++x) {
    const BallPrefixes bp = ball_prefixes(space, x);
    double mass = 0.0;
    double sum = 0.0;
    std::size_t k = 0;
    for (std::size_t end : bp.ends) {
      for (; k < end; ++k) {
        const PointIndex y = bp.order[k];
        const double mu = space.measure(y);
        if (mu <= 0.0) continue;
        mass += mu;
        sum += ext_mul(mu, power(std::abs(f[y]), p));
      }
      if (mass <= 0.0) continue;
      const double value = ext_mul(std::pow(mass, exponent), root(sum, p));
      best = std::max(best, value);
    }
  }
  return best;
}

bool lattice_check(const MetricMeasureSpace& space, const FunctionNorm& norm, const Field& f, const Field& g) {
  check_size(space, f);
  check_size(space, g);
  for (PointIndex i = 0; i < space.size(); ++i) {
    if (space.measure(i) > 0.0 && std::abs(g[i]) > std::abs(f[i])) return true;
  }
  return norm.evaluate(space, g) <= norm.evaluate(space, f);
}

}  // namespace mmgrad
