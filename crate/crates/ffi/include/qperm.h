#ifndef QPERM_H
#define QPERM_H

/* Generated by cbindgen from crates/ffi. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum QpStatus {
  QP_STATUS_OK = 0,
  QP_STATUS_INVALID_ARGUMENT = 1,
  QP_STATUS_DIMENSION_MISMATCH = 2,
  QP_STATUS_SINGULAR_MATRIX = 3,
  QP_STATUS_DOMAIN = 4,
  QP_STATUS_RESOURCE = 5,
  QP_STATUS_NUMERIC = 6,
  QP_STATUS_MISMATCH = 7,
  QP_STATUS_INCONSISTENT = 8,
  QP_STATUS_PARSE = 9,
  QP_STATUS_NULL_POINTER = 10,
  QP_STATUS_PANIC = 11,
} QpStatus;

/**
 * Opaque exact rational matrix.
 */
typedef struct QpMatrix QpMatrix;

/**
 * Opaque finitely supported measure on the integers.
 */
typedef struct QpMeasure QpMeasure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next `qp_*` call on the same thread.
 */
const char *qp_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *qp_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from a `qp_*` function and must not be freed twice.
 */
void qp_string_free(char *s);

/**
 * Gram matrix `G_kn` in canonical `NC(k)` order.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum QpStatus qp_gram_matrix(size_t k, uint64_t n, struct QpMatrix **out);

/**
 * Weingarten matrix `W_kn = G_kn⁻¹`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum QpStatus qp_weingarten_matrix(size_t k, uint64_t n, struct QpMatrix **out);

/**
 * # Safety
 * `m` must be null or a live handle from this library.
 */
size_t qp_matrix_rows(const struct QpMatrix *m);

/**
 * # Safety
 * `m` must be null or a live handle from this library.
 */
size_t qp_matrix_cols(const struct QpMatrix *m);

/**
 * Entry `(row, col)` (0-based) as a `p/q` string.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for a pointer write.
 */
enum QpStatus qp_matrix_entry(const struct QpMatrix *m, size_t row, size_t col, char **out);

/**
 * The matrix as a JSON array of arrays of `p/q` strings.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for a pointer write.
 */
enum QpStatus qp_matrix_to_json(const struct QpMatrix *m, char **out);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void qp_matrix_free(struct QpMatrix *m);

/**
 * `∫ u_{i1 j1} … u_{ik jk}` with 1-based `rows` and `cols` of length `k`.
 *
 * # Safety
 * `rows` and `cols` must point to `k` readable values; `out` must be valid
 * for a pointer write.
 */
enum QpStatus qp_monomial_integral(uint64_t n,
                                   const size_t *rows,
                                   const size_t *cols,
                                   size_t k,
                                   char **out);

/**
 * `∫ (u_11 + … + u_ss)^k`; the closed forms are used when `closed_form` is
 * nonzero (only `k ≤ 4`).
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum QpStatus qp_truncated_moment(uint64_t n, uint64_t s, size_t k, bool closed_form, char **out);

/**
 * `k`-th moment of the free Poisson law with parameter `t` given as `p/q`.
 *
 * # Safety
 * `t` must be a NUL-terminated string; `out` must be valid for a pointer write.
 */
enum QpStatus qp_free_poisson_moment(size_t k, const char *t, char **out);

/**
 * `k`-th moment of the Poisson law with parameter `t` given as `p/q`.
 *
 * # Safety
 * `t` must be a NUL-terminated string; `out` must be valid for a pointer write.
 */
enum QpStatus qp_poisson_moment(size_t k, const char *t, char **out);

/**
 * Law of `u_11 + … + u_ss` on `S_n`; `oracle` nonzero enumerates all `n!`
 * permutations instead.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum QpStatus qp_sn_law(uint64_t n, uint64_t s, bool oracle, struct QpMeasure **out);

/**
 * Weight at `point` as a `p/q` string (`0` off the support).
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for a pointer write.
 */
enum QpStatus qp_measure_weight(const struct QpMeasure *m, int64_t point, char **out);

/**
 * The measure as `{"atoms": {"0": "3/4", …}, "signed": false}`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be valid for a pointer write.
 */
enum QpStatus qp_measure_to_json(const struct QpMeasure *m, char **out);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void qp_measure_free(struct QpMeasure *m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QPERM_H */
