/* C interface to the mmgrad shared library.
 *
 * Objects are opaque handles released with their matching _free call.
 * Every function returning mmgrad_status sets a thread-local message that
 * mmgrad_last_error() returns until the next failing call on that thread.
 * Field arrays are indexed in the space's point order; +infinity is INFINITY.
 */
#ifndef MMGRAD_H
#define MMGRAD_H

#include <stddef.h>

#if defined(_WIN32)
#define MMGRAD_API __declspec(dllexport)
#else
#define MMGRAD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mmgrad_status {
  MMGRAD_OK = 0,
  MMGRAD_INVALID_ARGUMENT = 1,
  MMGRAD_PARSE = 2,
  MMGRAD_TRIANGLE_VIOLATION = 3,
  MMGRAD_ASYMMETRIC_DISTANCE = 4,
  MMGRAD_DUPLICATE_POINT = 5,
  MMGRAD_DISCONNECTED_GRAPH = 6,
  MMGRAD_NONPOSITIVE_EDGE_LENGTH = 7,
  MMGRAD_EDGE_LONGER_THAN_METRIC = 8,
  MMGRAD_UNKNOWN_POINT = 9,
  MMGRAD_PARAMETER_RANGE = 10,
  MMGRAD_HOP_LIMIT_TOO_LARGE = 11,
  MMGRAD_NOT_A_HAJLASZ_GRADIENT = 12,
  MMGRAD_DEGENERATE_GRADIENT = 13,
  MMGRAD_EMPTY_SET = 14,
  MMGRAD_PATCH_DISAGREEMENT = 15,
  MMGRAD_UPPER_GRADIENT_FAILURE = 16,
  MMGRAD_RESOLUTION_TOO_FINE = 17,
  MMGRAD_SOLVER_FAILURE = 18,
  MMGRAD_INTERNAL = 99
} mmgrad_status;

typedef struct mmgrad_space mmgrad_space;
typedef struct mmgrad_certificate mmgrad_certificate;

MMGRAD_API const char* mmgrad_version(void);
MMGRAD_API const char* mmgrad_status_name(mmgrad_status status);
MMGRAD_API const char* mmgrad_last_error(void);

/* Spaces */
MMGRAD_API mmgrad_status mmgrad_space_from_json(const char* json, mmgrad_space** out);
/* dist is row-major n*n; ids may be NULL for "0", "1", ... */
MMGRAD_API mmgrad_status mmgrad_space_from_matrix(size_t n, const char* const* ids, const double* dist,
                                                  const double* measure, mmgrad_space** out);
MMGRAD_API void mmgrad_space_free(mmgrad_space* space);
MMGRAD_API size_t mmgrad_space_size(const mmgrad_space* space);
/* Borrowed pointer, valid while the space lives; NULL when out of range. */
MMGRAD_API const char* mmgrad_space_point_id(const mmgrad_space* space, size_t index);
MMGRAD_API double mmgrad_space_distance(const mmgrad_space* space, size_t a, size_t b);

/* Checks and solvers. passed is 1 or 0. */
MMGRAD_API mmgrad_status mmgrad_check_hajlasz(const mmgrad_space* space, const double* u, const double* g,
                                              int* passed, double* worst_ratio);
/* kind: "hajlasz" | "upper"; norm: "lp:P" | "lp:inf" | "morrey:P:Q". g_out has size() entries. */
MMGRAD_API mmgrad_status mmgrad_min_gradient(const mmgrad_space* space, const double* u, const char* kind,
                                             const char* norm, double* g_out, double* value);
MMGRAD_API mmgrad_status mmgrad_mcshane(const mmgrad_space* space, size_t anchor_count, const size_t* anchors,
                                        const double* values, double lipschitz, double* out);
/* policy: "edges" | "shortest" | "simple:H"; rho_out may be NULL. */
MMGRAD_API mmgrad_status mmgrad_modulus(const mmgrad_space* space, const char* policy, double p, double* value,
                                        double* rho_out);

/* Conversion certificates; policy as for mmgrad_modulus. */
MMGRAD_API mmgrad_status mmgrad_convert(const mmgrad_space* space, const double* u, const double* g,
                                        const char* policy, mmgrad_certificate** out);
MMGRAD_API void mmgrad_certificate_free(mmgrad_certificate* cert);
MMGRAD_API double mmgrad_certificate_factor(const mmgrad_certificate* cert);
MMGRAD_API int mmgrad_certificate_passed(const mmgrad_certificate* cert);
MMGRAD_API int mmgrad_certificate_stabilized(const mmgrad_certificate* cert);
MMGRAD_API size_t mmgrad_certificate_level_count(const mmgrad_certificate* cert);
MMGRAD_API mmgrad_status mmgrad_certificate_corrected_u(const mmgrad_certificate* cert, double* out);
MMGRAD_API mmgrad_status mmgrad_certificate_to_json(const mmgrad_certificate* cert, char** json_out);

/* Runs one JSON request (see the README). The response text is always set on
 * MMGRAD_OK and must be released with mmgrad_string_free. exit_code follows
 * the CLI: 0 success, 1 check failure, 2 input error. */
MMGRAD_API mmgrad_status mmgrad_run(const char* request_json, char** response_json, int* exit_code);
MMGRAD_API void mmgrad_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* MMGRAD_H */
