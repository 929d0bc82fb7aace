/* C interface to the lebesgue library. All handles are opaque; every
 * function returning int reports one of the LEB_* status codes and leaves a
 * message for leb_last_error() on failure. Strings returned through char**
 * are released with leb_string_free; strings returned as const char* are
 * owned by their handle. */
#ifndef LEBESGUE_H
#define LEBESGUE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LEB_API __declspec(dllexport)
#else
#define LEB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  LEB_OK = 0,
  LEB_INVALID_ARGUMENT = 1,
  LEB_NOT_CONVERGED = 2,
  LEB_IDENTITY_VIOLATION = 3,
  LEB_RESOURCE_LIMIT = 4,
  LEB_PRECISION_EXHAUSTED = 5,
  LEB_INTERNAL = 6
};

enum { LEB_MU_THEOREM = 0, LEB_MU_PROOF = 1 };

typedef struct leb_context leb_context;
typedef struct leb_norm_result leb_norm_result;
typedef struct leb_identity_report leb_identity_report;
typedef struct leb_frak_value leb_frak_value;
typedef struct leb_alpha leb_alpha;
typedef struct leb_cf leb_cf;

typedef struct {
  double tol;
  int rho;
  int max_doublings;
  int nu_max;
  uint64_t memory_budget; /* complex entries */
  unsigned workers;
  int t_nodes;
  int mu_range;
} leb_options;

LEB_API const char* leb_version(void);
LEB_API const char* leb_status_string(int status);
/* Message of the last failure on the calling thread. */
LEB_API const char* leb_last_error(void);
LEB_API void leb_string_free(char* s);

LEB_API void leb_options_default(leb_options* opts);
LEB_API int leb_context_create(const leb_options* opts, leb_context** out);
LEB_API void leb_context_destroy(leb_context* ctx);

/* kernel: "D", "F", "S", "Fcomposite" or "R". On LEB_NOT_CONVERGED *out is
 * still set and carries the last refinement. */
LEB_API int leb_norm(leb_context* ctx, const char* kernel, const double* n, size_t d, leb_norm_result** out);
LEB_API double leb_norm_value(const leb_norm_result* r);
LEB_API double leb_norm_normalized(const leb_norm_result* r);
LEB_API double leb_norm_error_estimate(const leb_norm_result* r);
LEB_API double leb_norm_parseval_error(const leb_norm_result* r);
LEB_API int leb_norm_converged(const leb_norm_result* r);
LEB_API const char* leb_norm_json(const leb_norm_result* r);
LEB_API void leb_norm_destroy(leb_norm_result* r);

/* Returns LEB_IDENTITY_VIOLATION (with *out set) when a residual exceeds
 * its tail bound plus 1e-9 P. */
LEB_API int leb_verify(leb_context* ctx, const double* n, size_t d, size_t points, int nu_max, uint64_t seed,
                       leb_identity_report** out);
LEB_API int leb_identity_passed(const leb_identity_report* r);
LEB_API double leb_identity_max_residual(const leb_identity_report* r);
LEB_API double leb_identity_median_residual(const leb_identity_report* r);
LEB_API const char* leb_identity_json(const leb_identity_report* r);
LEB_API void leb_identity_destroy(leb_identity_report* r);

LEB_API int leb_frak(leb_context* ctx, int k, const double* n, size_t d, leb_frak_value** out);
LEB_API double leb_frak_value_get(const leb_frak_value* f);
LEB_API double leb_frak_t_error(const leb_frak_value* f);
LEB_API const char* leb_frak_json(const leb_frak_value* f);
LEB_API void leb_frak_destroy(leb_frak_value* f);

/* rational:p/q | golden | sqrt:D | liouville:b,m | dec:0.707... */
LEB_API int leb_alpha_parse(const char* text, leb_alpha** out);
LEB_API const char* leb_alpha_label(const leb_alpha* a);
LEB_API void leb_alpha_destroy(leb_alpha* a);

LEB_API int leb_cf_expand(const leb_alpha* a, size_t max_terms, leb_cf** out);
/* Number of partial quotients after a_0. */
LEB_API size_t leb_cf_length(const leb_cf* cf);
LEB_API int leb_cf_terminated(const leb_cf* cf);
LEB_API const char* leb_cf_json(const leb_cf* cf);
LEB_API void leb_cf_destroy(leb_cf* cf);

LEB_API int leb_I_n(leb_context* ctx, const leb_alpha* a, size_t n, double* value);

/* Sweep over axis expressions (see the README grammar). meta_lines is a
 * '\n'-separated block echoed as '#' lines ahead of the convention flags.
 * Returns LEB_NOT_CONVERGED when any norm missed the tolerance; the CSV is
 * produced regardless. */
LEB_API int leb_sweep_csv(leb_context* ctx, const char* const* axes, size_t d, int with_S, int with_frak,
                          int timing, const char* meta_lines, char** csv);

/* Ratio study I_n / ln^2 n on an increasing grid with entries >= 2. */
LEB_API int leb_irrational_csv(leb_context* ctx, const leb_alpha* a, const size_t* n_grid, size_t count,
                               const char* meta_lines, char** csv, char** summary_json);

#ifdef __cplusplus
}
#endif

#endif
