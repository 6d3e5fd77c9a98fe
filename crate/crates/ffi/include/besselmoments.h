#ifndef BESSELMOMENTS_H
#define BESSELMOMENTS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum BmStatus {
  BM_STATUS_OK = 0,
  BM_STATUS_NULL_POINTER = 1,
  BM_STATUS_INVALID_INPUT = 2,
  BM_STATUS_DIVERGENT = 3,
  BM_STATUS_DOMAIN = 4,
  BM_STATUS_PRECISION = 5,
  BM_STATUS_VERIFICATION_FAILED = 6,
  BM_STATUS_UTF8 = 7,
  BM_STATUS_PANIC = 8,
} BmStatus;

typedef enum BmFamily {
  BM_FAMILY_Z = 0,
  BM_FAMILY_Y = 1,
} BmFamily;

/**
 * Opaque precision context.
 */
typedef struct BmContext BmContext;

/**
 * One numeric result. `exact` is null when there is no reference value;
 * `pass` is -1 when the call is not a check, otherwise 0 or 1.
 */
typedef struct BmResult {
  char *value;
  char *error_bound;
  char *exact;
  double approx;
  int32_t pass;
} BmResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a context. `guard_digits == 0` selects the default guard.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum BmStatus bm_context_new(uint32_t target_digits, uint32_t guard_digits, struct BmContext **out);

/**
 * Cap the quadrature refinement depth of `ctx`.
 *
 * # Safety
 * `ctx` must be a live handle from [`bm_context_new`].
 */
enum BmStatus bm_context_set_max_level(struct BmContext *ctx, uint32_t max_level);

/**
 * # Safety
 * `ctx` must be null or a handle from [`bm_context_new`] not yet freed.
 */
void bm_context_free(struct BmContext *ctx);

/**
 * `pi^pi_power * int_0^inf I0^a K0^b t^c dt`.
 *
 * # Safety
 * `ctx` must be a live handle and `out` valid for writing.
 */
enum BmStatus bm_moment(const struct BmContext *ctx,
                        uint32_t a,
                        uint32_t b,
                        uint32_t c,
                        int32_t pi_power,
                        struct BmResult *out);

/**
 * Evaluate a Z or Y sum rule; `fused != 0` integrates it as one integrand.
 *
 * # Safety
 * `ctx` must be a live handle and `out` valid for writing.
 */
enum BmStatus bm_verify_sum_rule(const struct BmContext *ctx,
                                 enum BmFamily family,
                                 uint32_t n,
                                 uint32_t k,
                                 int32_t fused,
                                 struct BmResult *out);

/**
 * Crandall number `A(n)` by quadrature, checked against the exact value.
 *
 * # Safety
 * `ctx` must be a live handle and `out` valid for writing.
 */
enum BmStatus bm_verify_crandall(const struct BmContext *ctx, uint32_t n, struct BmResult *out);

/**
 * Principal-value Hilbert transform of `function` (e.g. `"kappa_sq"`) at
 * `x` (decimal or `p/q`), with the closed-form image as reference.
 *
 * # Safety
 * `ctx` must be a live handle, the strings NUL-terminated, `out` writable.
 */
enum BmStatus bm_hilbert_pv(const struct BmContext *ctx,
                            const char *function,
                            const char *x,
                            struct BmResult *out);

/**
 * Exact sequence member as a decimal integer or `p/q` string. `name` is one
 * of `domb`, `alpha`, `crandall`, `alpha_m`, `beta_m`, `br`; `m` is used by
 * the last three (it is `M` for `br`).
 *
 * # Safety
 * `name` must be NUL-terminated and `out` valid for writing.
 */
enum BmStatus bm_sequence(const char *name, uint32_t m, uint32_t n, char **out);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread; do not free.
 */
const char *bm_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void bm_string_free(char *s);

/**
 * Release the strings inside `r` and null them out.
 *
 * # Safety
 * `r` must be null or point to a result filled by this library.
 */
void bm_result_free(struct BmResult *r);

/**
 * Library version, static storage.
 */
const char *bm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BESSELMOMENTS_H */
