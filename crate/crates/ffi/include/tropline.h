#ifndef TROPLINE_H
#define TROPLINE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of every call.
 */
typedef enum TroplineStatus {
  TROPLINE_STATUS_OK = 0,
  TROPLINE_STATUS_NULL_POINTER = 1,
  TROPLINE_STATUS_INVALID_UTF8 = 2,
  TROPLINE_STATUS_INVALID_INPUT = 3,
  TROPLINE_STATUS_VERIFICATION_FAILED = 4,
  TROPLINE_STATUS_INTERNAL = 5,
} TroplineStatus;

/**
 * Matroid on labelled elements.
 */
typedef struct TroplineMatroid TroplineMatroid;

/**
 * Linear subspace `X` of `K^n` of dimension `d + 1`.
 */
typedef struct TroplineSubspace TroplineSubspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *tropline_last_error(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void tropline_string_free(char *s);

/**
 * Parses `{"basis": [[...]]}` or `{"plucker": {...}}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for one write.
 */
enum TroplineStatus tropline_subspace_from_json(const char *json, struct TroplineSubspace **out);

/**
 * # Safety
 * `x` must be NULL or a handle from `tropline_subspace_from_json` not yet freed.
 */
void tropline_subspace_free(struct TroplineSubspace *x);

/**
 * Writes `n` and `d` of the subspace.
 *
 * # Safety
 * `x` must be a live handle; `n` and `d` must be valid for one write.
 */
enum TroplineStatus tropline_subspace_shape(const struct TroplineSubspace *x, size_t *n, size_t *d);

/**
 * Report on `U`, `V` and the three matroids of lines as JSON. Returns
 * `VERIFICATION_FAILED` (with the report still written) if the routes disagree.
 *
 * # Safety
 * `x` must be a live handle; `out` must be valid for one write.
 */
enum TroplineStatus tropline_lines_report_json(const struct TroplineSubspace *x, char **out);

/**
 * Whether the arrangement of lines of `x` is generic.
 *
 * # Safety
 * `x` must be a live handle; `out` must be valid for one write.
 */
enum TroplineStatus tropline_is_generic(const struct TroplineSubspace *x, bool *out);

/**
 * Matroid of the lines `ℓ_J` of `x`.
 *
 * # Safety
 * `x` must be a live handle; `out` must be valid for one write.
 */
enum TroplineStatus tropline_lines_matroid(const struct TroplineSubspace *x,
                                           struct TroplineMatroid **out);

/**
 * Relabeled Dilworth truncation of the free matroid on `n` elements at rank `k`.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum TroplineStatus tropline_dilworth_uniform(size_t n, size_t k, struct TroplineMatroid **out);

/**
 * Parses `{"ground": [...], "rank": r, "bases": [[...], ...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid for one write.
 */
enum TroplineStatus tropline_matroid_from_json(const char *json, struct TroplineMatroid **out);

/**
 * # Safety
 * `m` must be NULL or a matroid handle not yet freed.
 */
void tropline_matroid_free(struct TroplineMatroid *m);

/**
 * Writes the ground-set size and the rank.
 *
 * # Safety
 * `m` must be a live handle; `size` and `rank` must be valid for one write.
 */
enum TroplineStatus tropline_matroid_shape(const struct TroplineMatroid *m,
                                           size_t *size,
                                           size_t *rank);

/**
 * Matroid JSON.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for one write.
 */
enum TroplineStatus tropline_matroid_to_json(const struct TroplineMatroid *m, char **out);

/**
 * Whether two matroids have the same labelled bases.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be valid for one write.
 */
enum TroplineStatus tropline_matroid_equal(const struct TroplineMatroid *a,
                                           const struct TroplineMatroid *b,
                                           bool *out);

/**
 * Bergman fan chart (rays and maximal cones) as JSON.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for one write.
 */
enum TroplineStatus tropline_bergman_chart_json(const struct TroplineMatroid *m, char **out);

/**
 * Exchange identities and saturation certificates for one `(n, d)` as JSON. Returns
 * `VERIFICATION_FAILED` (with the report still written) if any check fails.
 *
 * # Safety
 * `out` must be valid for one write.
 */
enum TroplineStatus tropline_verify_identities_json(size_t n, size_t d, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPLINE_H */
