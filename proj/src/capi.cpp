#include "mmgrad/mmgrad.h"

#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "commands.hpp"
#include "constructions.hpp"
#include "curves.hpp"
#include "error.hpp"
#include "gradients.hpp"
#include "io.hpp"
#include "space.hpp"

struct mmgrad_space {
  mmgrad::MetricMeasureSpace space;
};

struct mmgrad_certificate {
  mmgrad::MetricMeasureSpace space;
  mmgrad::ConversionCertificate cert;
};

namespace {

thread_local std::string last_error;

template <typename F>
mmgrad_status guarded(F&& body) {
  try {
    body();
    return MMGRAD_OK;
  } catch (const mmgrad::Error& e) {
    last_error = e.what();
    return static_cast<mmgrad_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MMGRAD_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MMGRAD_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw mmgrad::Error(mmgrad::ErrorCode::InvalidArgument, what);
}

mmgrad::Field copy_field(const mmgrad_space* s, const double* values) {
  require(values != nullptr, "field pointer is null");
  return mmgrad::Field(values, values + s->space.size());
}

char* duplicate(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* mmgrad_version(void) { return "1.0.0"; }

const char* mmgrad_status_name(mmgrad_status status) {
  if (status == MMGRAD_OK) return "Ok";
  if (status == MMGRAD_INTERNAL) return "Internal";
  if (status >= MMGRAD_INVALID_ARGUMENT && status <= MMGRAD_SOLVER_FAILURE) {
    return mmgrad::error_code_name(static_cast<mmgrad::ErrorCode>(static_cast<int>(status)));
  }
  return "Unknown";
}

const char* mmgrad_last_error(void) { return last_error.c_str(); }

mmgrad_status mmgrad_space_from_json(const char* json, mmgrad_space** out) {
  return guarded([&] {
    require(json != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    *out = new mmgrad_space{mmgrad::io::parse_space(mmgrad::io::parse_text(json))};
  });
}

mmgrad_status mmgrad_space_from_matrix(size_t n, const char* const* ids, const double* dist, const double* measure,
                                       mmgrad_space** out) {
  return guarded([&] {
    require(out != nullptr && dist != nullptr && measure != nullptr, "null argument");
    require(n > 0, "space needs at least one point");
    *out = nullptr;
    std::vector<std::string> names(n);
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i) {
      names[i] = ids ? std::string(ids[i]) : std::to_string(i);
      for (size_t j = 0; j < n; ++j) d[i][j] = dist[i * n + j];
    }
    *out = new mmgrad_space{
        mmgrad::MetricMeasureSpace::build_explicit(std::move(names), d, std::vector<double>(measure, measure + n))};
  });
}

void mmgrad_space_free(mmgrad_space* space) { delete space; }

size_t mmgrad_space_size(const mmgrad_space* space) { return space ? space->space.size() : 0; }

const char* mmgrad_space_point_id(const mmgrad_space* space, size_t index) {
  if (!space || index >= space->space.size()) return nullptr;
  return space->space.id(index).c_str();
}

double mmgrad_space_distance(const mmgrad_space* space, size_t a, size_t b) {
  if (!space || a >= space->space.size() || b >= space->space.size()) return -1.0;
  return space->space.distance(a, b);
}

mmgrad_status mmgrad_check_hajlasz(const mmgrad_space* space, const double* u, const double* g, int* passed,
                                   double* worst_ratio) {
  return guarded([&] {
    require(space && passed && worst_ratio, "null argument");
    const mmgrad::ViolationReport r = mmgrad::check_hajlasz(space->space, copy_field(space, u), copy_field(space, g));
    *passed = r.passed ? 1 : 0;
    *worst_ratio = r.worst_ratio;
  });
}

mmgrad_status mmgrad_min_gradient(const mmgrad_space* space, const double* u, const char* kind, const char* norm,
                                  double* g_out, double* value) {
  return guarded([&] {
    require(space && kind && norm && g_out && value, "null argument");
    const mmgrad::FunctionNorm n = mmgrad::FunctionNorm::parse(norm);
    const std::string k = kind;
    mmgrad::solver::NormMinimization m;
    if (k == "hajlasz") {
      m = mmgrad::min_hajlasz_gradient(space->space, copy_field(space, u), n);
    } else if (k == "upper") {
      m = mmgrad::min_upper_gradient(space->space, copy_field(space, u), n);
    } else {
      throw mmgrad::Error(mmgrad::ErrorCode::Parse, "kind must be hajlasz or upper");
    }
    std::copy(m.x.begin(), m.x.end(), g_out);
    *value = m.value;
  });
}

mmgrad_status mmgrad_mcshane(const mmgrad_space* space, size_t anchor_count, const size_t* anchors,
                             const double* values, double lipschitz, double* out) {
  return guarded([&] {
    require(space && out, "null argument");
    require(anchor_count == 0 || (anchors && values), "null anchor arrays");
    std::vector<mmgrad::PointIndex> A(anchors, anchors + anchor_count);
    std::vector<double> v(values, values + anchor_count);
    const mmgrad::Field F = mmgrad::mcshane_extend(space->space, A, v, lipschitz);
    std::copy(F.begin(), F.end(), out);
  });
}

mmgrad_status mmgrad_modulus(const mmgrad_space* space, const char* policy, double p, double* value,
                             double* rho_out) {
  return guarded([&] {
    require(space && policy && value, "null argument");
    const mmgrad::CurveFamily family =
        mmgrad::enumerate_family(space->space, mmgrad::FamilyPolicy::parse(policy));
    const mmgrad::ModulusResult m = mmgrad::modulus(space->space, family, p);
    *value = m.value;
    if (rho_out) std::copy(m.rho.begin(), m.rho.end(), rho_out);
  });
}

mmgrad_status mmgrad_convert(const mmgrad_space* space, const double* u, const double* g, const char* policy,
                             mmgrad_certificate** out) {
  return guarded([&] {
    require(space && out, "null argument");
    *out = nullptr;
    mmgrad::ConversionOptions opt;
    if (policy) opt.family = mmgrad::FamilyPolicy::parse(policy);
    mmgrad::ConversionCertificate c =
        mmgrad::hajlasz_to_upper(space->space, copy_field(space, u), copy_field(space, g), opt);
    *out = new mmgrad_certificate{space->space, std::move(c)};
  });
}

void mmgrad_certificate_free(mmgrad_certificate* cert) { delete cert; }

double mmgrad_certificate_factor(const mmgrad_certificate* cert) { return cert ? cert->cert.factor : -1.0; }

int mmgrad_certificate_passed(const mmgrad_certificate* cert) { return cert && cert->cert.passed() ? 1 : 0; }

int mmgrad_certificate_stabilized(const mmgrad_certificate* cert) { return cert && cert->cert.stabilized ? 1 : 0; }

size_t mmgrad_certificate_level_count(const mmgrad_certificate* cert) { return cert ? cert->cert.levels.size() : 0; }

mmgrad_status mmgrad_certificate_corrected_u(const mmgrad_certificate* cert, double* out) {
  return guarded([&] {
    require(cert && out, "null argument");
    std::copy(cert->cert.corrected_u.begin(), cert->cert.corrected_u.end(), out);
  });
}

mmgrad_status mmgrad_certificate_to_json(const mmgrad_certificate* cert, char** json_out) {
  return guarded([&] {
    require(cert && json_out, "null argument");
    *json_out = nullptr;
    const auto& s = cert->space;
    const auto& c = cert->cert;
    mmgrad::io::Json j{{"passed", c.passed()},
                       {"factor", mmgrad::io::value_to_json(c.factor)},
                       {"edge_factor", mmgrad::io::value_to_json(c.edge_factor)},
                       {"k_range", {c.k_min, c.k_max}},
                       {"stabilized", c.stabilized},
                       {"infinity_set", mmgrad::io::ids_to_json(s, c.infinity_set)},
                       {"corrected_u", mmgrad::io::field_to_json(s, c.corrected_u)},
                       {"corrected_g", mmgrad::io::field_to_json(s, c.corrected_g)}};
    *json_out = duplicate(mmgrad::io::write(j));
  });
}

mmgrad_status mmgrad_run(const char* request_json, char** response_json, int* exit_code) {
  return guarded([&] {
    require(request_json && response_json && exit_code, "null argument");
    *response_json = nullptr;
    const mmgrad::Response r = mmgrad::run_text(request_json);
    *response_json = duplicate(r.text());
    *exit_code = r.exit_code;
  });
}

void mmgrad_string_free(char* text) { std::free(text); }

}  // extern "C"
