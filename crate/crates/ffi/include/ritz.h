#ifndef RITZ_H
#define RITZ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define RITZ_FORM_ORIGINAL 0

#define RITZ_FORM_ROTATED 1

#define RITZ_BASIS_TRIG 0

#define RITZ_BASIS_HO 1

typedef enum RitzStatus {
  RITZ_STATUS_OK = 0,
  RITZ_STATUS_NULL_POINTER = 1,
  RITZ_STATUS_INVALID_ARGUMENT = 2,
  RITZ_STATUS_INVALID_PRECISION = 3,
  RITZ_STATUS_NO_CONVERGENCE = 4,
  RITZ_STATUS_NO_STATIONARY_POINT = 5,
  RITZ_STATUS_UNSUPPORTED = 6,
  /**
   * The output buffer is too small; `*required` holds the needed size.
   */
  RITZ_STATUS_BUFFER_TOO_SMALL = 7,
  RITZ_STATUS_IO = 8,
  RITZ_STATUS_INTERNAL = 9,
} RitzStatus;

/**
 * Working-precision configuration.
 */
typedef struct RitzContext RitzContext;

/**
 * A Hamiltonian, basis and basis size.
 */
typedef struct RitzProblem RitzProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a context with `target_digits` (≥ 16) and `guard_digits` (≥ 10).
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle to release
 * with [`ritz_context_free`].
 */
enum RitzStatus ritz_context_new(uint32_t target_digits,
                                 uint32_t guard_digits,
                                 struct RitzContext **out);

/**
 * # Safety
 * `ctx` must be null or a handle from [`ritz_context_new`] not yet freed.
 */
void ritz_context_free(struct RitzContext *ctx);

/**
 * Describes a problem. `lambda` is a decimal or fraction string (`"10"`,
 * `"2.5"`, `"5/2"`); `form` is `RITZ_FORM_*`, `basis` is `RITZ_BASIS_*`.
 *
 * # Safety
 * `lambda` must be a NUL-terminated string and `out` a valid pointer.
 */
enum RitzStatus ritz_problem_new(const char *lambda,
                                 uint32_t form,
                                 uint32_t basis,
                                 size_t m,
                                 struct RitzProblem **out);

/**
 * # Safety
 * `problem` must be null or a handle from [`ritz_problem_new`] not yet freed.
 */
void ritz_problem_free(struct RitzProblem *problem);

/**
 * Writes the trace-stationary basis parameter (`L` or `Omega`) as a decimal
 * string with the context's target digits.
 *
 * # Safety
 * Handles must be live; `buf` must hold `len` bytes; `required` may be null.
 */
enum RitzStatus ritz_optimize(const struct RitzProblem *problem,
                              const struct RitzContext *ctx,
                              char *buf,
                              size_t len,
                              size_t *required);

/**
 * Writes the Rayleigh-Ritz ground energy at the optimal parameter.
 *
 * # Safety
 * As for [`ritz_optimize`].
 */
enum RitzStatus ritz_ground_energy(const struct RitzProblem *problem,
                                   const struct RitzContext *ctx,
                                   char *buf,
                                   size_t len,
                                   size_t *required);

/**
 * Writes the collocation ground-energy estimate for the half-width `l`
 * (decimal string). Trig basis only.
 *
 * # Safety
 * As for [`ritz_optimize`]; `l` must be a NUL-terminated string.
 */
enum RitzStatus ritz_collocation_energy(const struct RitzProblem *problem,
                                        const struct RitzContext *ctx,
                                        const char *l,
                                        char *buf,
                                        size_t len,
                                        size_t *required);

/**
 * Writes the Rayleigh-Ritz matrix at the optimal parameter to `path`, one
 * `i j value` line per nonzero upper-triangle entry.
 *
 * # Safety
 * Handles must be live; `path` must be a NUL-terminated string.
 */
enum RitzStatus ritz_dump_matrix(const struct RitzProblem *problem,
                                 const struct RitzContext *ctx,
                                 const char *path);

/**
 * Message of the last failed call on this thread (empty after a success).
 * The pointer stays valid until the next call on the same thread.
 */
const char *ritz_last_error(void);

/**
 * Library version, e.g. `"0.1.0"`. Static storage.
 */
const char *ritz_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RITZ_H */
