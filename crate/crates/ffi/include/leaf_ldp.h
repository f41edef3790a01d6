#ifndef LEAF_LDP_H
#define LEAF_LDP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * How `ldp_pressure_new` evaluates the pressure.
 */
typedef enum LdpMethod {
  /**
   * Closed form for alpha in {1/2, 1, 2}, quadrature otherwise.
   */
  LDP_METHOD_AUTO = 0,
  LDP_METHOD_QUADRATURE = 1,
} LdpMethod;

/**
 * Result of every fallible call.
 */
typedef enum LdpStatus {
  LDP_STATUS_OK = 0,
  LDP_STATUS_NULL_POINTER = 1,
  LDP_STATUS_INVALID_ARGUMENT = 2,
  LDP_STATUS_INVALID_MODEL = 3,
  LDP_STATUS_DOMAIN = 4,
  LDP_STATUS_NUMERICAL = 5,
  LDP_STATUS_BUDGET = 6,
  LDP_STATUS_PANIC = 7,
} LdpStatus;

/**
 * A chain preset.
 */
typedef struct LdpModel LdpModel;

/**
 * The exact law of `Z_n`.
 */
typedef struct LdpPmf LdpPmf;

/**
 * The limiting pressure for one `alpha`.
 */
typedef struct LdpPressure LdpPressure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next `ldp_*` call on the same thread.
 */
const char *ldp_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *ldp_version(void);

/**
 * Parses a preset such as `plane_oriented` or `pa:beta=1/2`.
 *
 * # Safety
 * `preset` must be a NUL-terminated string; `out` must be writable.
 */
enum LdpStatus ldp_model_parse(const char *preset, struct LdpModel **out);

/**
 * A copy of `model` started from `k0`.
 *
 * # Safety
 * `model` must come from this library; `out` must be writable.
 */
enum LdpStatus ldp_model_with_k0(const struct LdpModel *model, uint64_t k0, struct LdpModel **out);

/**
 * # Safety
 * `model` must come from this library and not be used afterwards.
 */
void ldp_model_free(struct LdpModel *model);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LdpStatus ldp_model_alpha(const struct LdpModel *model, double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LdpStatus ldp_model_k0(const struct LdpModel *model, uint64_t *out);

/**
 * Final state `Z_n` of replicate `replicate` under `seed`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LdpStatus ldp_simulate_final(const struct LdpModel *model,
                                  uint64_t n,
                                  uint64_t seed,
                                  uint64_t replicate,
                                  uint64_t *out);

/**
 * Law of `Z_n`.
 *
 * # Safety
 * `model` must be valid; `out` must be writable.
 */
enum LdpStatus ldp_pmf_new(const struct LdpModel *model, uint64_t n, struct LdpPmf **out);

/**
 * # Safety
 * `pmf` must come from this library and not be used afterwards.
 */
void ldp_pmf_free(struct LdpPmf *pmf);

/**
 * Smallest and largest `k` with positive probability.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LdpStatus ldp_pmf_support(const struct LdpPmf *pmf, uint64_t *lo, uint64_t *hi);

/**
 * `log P(Z_n = k)`; `-inf` off the support.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LdpStatus ldp_pmf_log_prob(const struct LdpPmf *pmf, uint64_t k, double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LdpStatus ldp_pmf_mean(const struct LdpPmf *pmf, double *out);

/**
 * `log E[e^{λ Z_n}]`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LdpStatus ldp_pmf_log_mgf(const struct LdpPmf *pmf, double lambda, double *out);

/**
 * `(1/n) log P(Z_n >= x n)`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LdpStatus ldp_pmf_tail_log_prob(const struct LdpPmf *pmf, double x, double *out);

/**
 * Pressure evaluator for `alpha > 0`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LdpStatus ldp_pressure_new(double alpha, enum LdpMethod method, struct LdpPressure **out);

/**
 * # Safety
 * `p` must come from this library and not be used afterwards.
 */
void ldp_pressure_free(struct LdpPressure *p);

/**
 * `Λ(λ)`, `Λ'(λ)` and `Λ''(λ)`. Any of the out pointers may be null.
 *
 * # Safety
 * `p` must be valid; non-null out pointers must be writable.
 */
enum LdpStatus ldp_pressure_eval(const struct LdpPressure *p,
                                 double lambda,
                                 double *value,
                                 double *d1,
                                 double *d2);

/**
 * `I(x)` and the maximizing `λ*` (either out pointer may be null).
 *
 * # Safety
 * `p` must be valid; non-null out pointers must be writable.
 */
enum LdpStatus ldp_rate(const struct LdpPressure *p, double x, double *lambda_star, double *rate);

/**
 * Cost of the optimal path from 0 to `x` at time 1, for `alpha > 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LdpStatus ldp_euler_cost(double alpha, double x, double tol, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEAF_LDP_H */
