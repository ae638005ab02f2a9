#ifndef HYPERLOG_H
#define HYPERLOG_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Classification label of a triple `(q, a, b)`.
 */
typedef enum HlLabel {
  HL_LABEL_FAILS_PRECONDITIONS = 0,
  HL_LABEL_LOG_FUNCTIONAL = 1,
  HL_LABEL_LOG_AT_ONE_ONLY = 2,
  HL_LABEL_NEITHER = 3,
} HlLabel;

/**
 * Result code of every fallible call.
 */
typedef enum HlStatus {
  HL_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  HL_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  HL_STATUS_INVALID_UTF8 = 2,
  /**
   * A string argument could not be parsed as a rational or list of rationals.
   */
  HL_STATUS_PARSE = 3,
  /**
   * Inputs violate a mathematical precondition.
   */
  HL_STATUS_PRECONDITION = 4,
  /**
   * A numerical routine could not produce a result (domain, branch cut, convergence).
   */
  HL_STATUS_NUMERIC = 5,
  /**
   * Internal panic caught at the boundary.
   */
  HL_STATUS_PANIC = 6,
} HlStatus;

/**
 * A real ball `[mid ± rad]`.
 */
typedef struct HlBall HlBall;

/**
 * Parameters `(q, a, b)` of `3F2(1, 1, q; a, b; x)`.
 */
typedef struct HlParams HlParams;

/**
 * Recurrence parameters `(mu, β₁, β₂)`.
 */
typedef struct HlRecurrence HlRecurrence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *hl_version(void);

/**
 * Message of the last failed call on this thread, or null if the last call succeeded.
 *
 * The pointer stays valid until the next `hl_*` call on the same thread.
 */
const char *hl_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` is null or a pointer obtained from this library and not yet freed.
 */
void hl_string_free(char *s);

/**
 * Parses `(q, a, b)` into a new handle.
 *
 * # Safety
 * String arguments are NUL-terminated; `out` is valid for writing a pointer.
 */
enum HlStatus hl_params_new(const char *q, const char *a, const char *b, struct HlParams **out);

/**
 * # Safety
 * `p` is null or a live handle from [`hl_params_new`].
 */
void hl_params_free(struct HlParams *p);

/**
 * Classifies the triple. Failing preconditions is a label, not an error.
 *
 * # Safety
 * `p` is a live handle; `out` is valid for writing.
 */
enum HlStatus hl_classify(const struct HlParams *p, enum HlLabel *out);

/**
 * Classification record as a JSON string owned by the caller.
 *
 * # Safety
 * `p` is a live handle; `out` is valid for writing a pointer.
 */
enum HlStatus hl_classify_json(const struct HlParams *p, char **out);

/**
 * Encloses `pFq(upper; lower; x)` at `prec` bits.
 *
 * # Safety
 * String arguments are NUL-terminated; `out` is valid for writing a pointer.
 */
enum HlStatus hl_pfq(const char *upper,
                     const char *lower,
                     const char *x,
                     uint32_t prec,
                     struct HlBall **out);

/**
 * Residual `₃F₂(1,1,1/2; 7/6,11/6; x) − (closed form)` at `prec` bits; contains 0 when the
 * identity holds.
 *
 * # Safety
 * `x` is NUL-terminated; `out` is valid for writing a pointer.
 */
enum HlStatus hl_explicit_log_residual(const char *x, uint32_t prec, struct HlBall **out);

/**
 * Midpoint rounded to the nearest double.
 *
 * # Safety
 * `b` is a live handle; `out` is valid for writing.
 */
enum HlStatus hl_ball_mid(const struct HlBall *b, double *out);

/**
 * Radius rounded up to a double.
 *
 * # Safety
 * `b` is a live handle; `out` is valid for writing.
 */
enum HlStatus hl_ball_rad(const struct HlBall *b, double *out);

/**
 * Whether the ball contains zero.
 *
 * # Safety
 * `b` is a live handle; `out` is valid for writing.
 */
enum HlStatus hl_ball_contains_zero(const struct HlBall *b, bool *out);

/**
 * Whether the radius is a rigorous bound (false when a heuristic step such as quadrature was used).
 *
 * # Safety
 * `b` is a live handle; `out` is valid for writing.
 */
enum HlStatus hl_ball_is_rigorous(const struct HlBall *b, bool *out);

/**
 * Decimal rendering `[mid +/- rad]`, owned by the caller.
 *
 * # Safety
 * `b` is a live handle; `out` is valid for writing a pointer.
 */
enum HlStatus hl_ball_to_string(const struct HlBall *b, char **out);

/**
 * # Safety
 * `b` is null or a live ball handle.
 */
void hl_ball_free(struct HlBall *b);

/**
 * Validates `(mu, β₁, β₂)` into a new handle.
 *
 * # Safety
 * String arguments are NUL-terminated; `out` is valid for writing a pointer.
 */
enum HlStatus hl_recurrence_new(const char *mu,
                                const char *beta1,
                                const char *beta2,
                                struct HlRecurrence **out);

/**
 * # Safety
 * `r` is null or a live handle from [`hl_recurrence_new`].
 */
void hl_recurrence_free(struct HlRecurrence *r);

/**
 * Number of `r ∈ [0, rmax]` whose E-pair determinant vanishes identically.
 *
 * # Safety
 * `r` is a live handle; `out` is valid for writing.
 */
enum HlStatus hl_det_scan(const struct HlRecurrence *r, uint64_t rmax, size_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HYPERLOG_H */
