/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef PADIC_SOS_H
#define PADIC_SOS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum PsStatus {
  PS_STATUS_OK = 0,
  PS_STATUS_NULL_POINTER = 1,
  /**
   * Bad argument or value outside the mathematical domain.
   */
  PS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Solver non-convergence or enumeration cap.
   */
  PS_STATUS_LIMIT = 3,
  PS_STATUS_INVALID_UTF8 = 4,
  PS_STATUS_PANIC = 5,
} PsStatus;

/**
 * Binary operation on two p-adic numbers.
 */
typedef enum PsOp {
  PS_OP_ADD = 0,
  PS_OP_SUB = 1,
  PS_OP_MUL = 2,
  PS_OP_DIV = 3,
} PsOp;

/**
 * Unary function of a p-adic number.
 */
typedef enum PsFunction {
  PS_FUNCTION_EXP = 0,
  PS_FUNCTION_LOG = 1,
  PS_FUNCTION_SQRT = 2,
} PsFunction;

typedef enum PsVerdict {
  PS_VERDICT_UNIQUE_NO_TRANSITION = 0,
  PS_VERDICT_TRANSITION_CERTIFIED = 1,
  PS_VERDICT_INCONCLUSIVE = 2,
} PsVerdict;

/**
 * Outcome of a uniqueness / phase-transition certification.
 */
typedef struct PsCertificate PsCertificate;

/**
 * A p-adic number with capped relative precision.
 */
typedef struct PsPadic PsPadic;

/**
 * Model parameters `(p, k, m, θ, N)`.
 */
typedef struct PsParams PsParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ps_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a pointer returned by this library and not yet freed.
 */
void ps_string_free(char *s);

/**
 * Evaluates a literal such as `"-3/7"`, `"sqrt(7)"` or `"exp(3)"` in `Q_p`
 * at relative precision `precision`.
 *
 * # Safety
 * `literal` must be a NUL-terminated string; `out` must be writable.
 */
enum PsStatus ps_padic_from_literal(uint64_t p,
                                    const char *literal,
                                    uint32_t precision,
                                    struct PsPadic **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum PsStatus ps_padic_from_i64(uint64_t p,
                                int64_t value,
                                uint32_t precision,
                                struct PsPadic **out);

/**
 * # Safety
 * `x` must be null or a handle from this library.
 */
void ps_padic_free(struct PsPadic *x);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum PsStatus ps_padic_binary(enum PsOp op,
                              const struct PsPadic *a,
                              const struct PsPadic *b,
                              struct PsPadic **out);

/**
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum PsStatus ps_padic_apply(enum PsFunction f, const struct PsPadic *x, struct PsPadic **out);

/**
 * Valuation `v(x)`; for zero this is the absolute precision `M` of
 * `O(p^M)`.
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum PsStatus ps_padic_valuation(const struct PsPadic *x, int64_t *out);

/**
 * `x mod p^j` for `x ∈ Z_p`, when it fits in 64 bits.
 *
 * # Safety
 * `x` must be a live handle; `out` must be writable.
 */
enum PsStatus ps_padic_residue(const struct PsPadic *x, uint32_t j, uint64_t *out);

/**
 * JSON form `{"prime", "valuation", "digits", "precision"}`; release with
 * [`ps_string_free`].
 *
 * # Safety
 * `x` must be a live handle.
 */
char *ps_padic_to_json(const struct PsPadic *x);

/**
 * Model with `θ` given as an exact rational literal in `E_p`.
 *
 * # Safety
 * `theta` must be a NUL-terminated string; `out` must be writable.
 */
enum PsStatus ps_params_new(uint64_t p,
                            uint32_t k,
                            uint32_t m,
                            const char *theta,
                            uint32_t precision,
                            struct PsParams **out);

/**
 * Model with the coupling `J` given as an exact rational literal;
 * `θ = exp_p(J)`.
 *
 * # Safety
 * `coupling` must be a NUL-terminated string; `out` must be writable.
 */
enum PsStatus ps_params_from_coupling(uint64_t p,
                                      uint32_t k,
                                      uint32_t m,
                                      const char *coupling,
                                      uint32_t precision,
                                      struct PsParams **out);

/**
 * # Safety
 * `params` must be null or a handle from this library.
 */
void ps_params_free(struct PsParams *params);

/**
 * # Safety
 * `params` must be a live handle; `out` must be writable.
 */
enum PsStatus ps_certify(const struct PsParams *params, struct PsCertificate **out);

/**
 * # Safety
 * `cert` must be a live handle; `out` must be writable.
 */
enum PsStatus ps_certificate_verdict(const struct PsCertificate *cert, enum PsVerdict *out);

/**
 * # Safety
 * `cert` must be a live handle; `out` must be writable.
 */
enum PsStatus ps_certificate_solution_count(const struct PsCertificate *cert, size_t *out);

/**
 * Component `i` of solution `index` as a new p-adic handle.
 *
 * # Safety
 * `cert` must be a live handle; `out` must be writable.
 */
enum PsStatus ps_certificate_component(const struct PsCertificate *cert,
                                       size_t index,
                                       size_t i,
                                       struct PsPadic **out);

/**
 * Full certificate as JSON; release with [`ps_string_free`].
 *
 * # Safety
 * `cert` must be a live handle.
 */
char *ps_certificate_to_json(const struct PsCertificate *cert);

/**
 * # Safety
 * `cert` must be null or a handle from this library.
 */
void ps_certificate_free(struct PsCertificate *cert);

/**
 * Boundedness report at the given levels as JSON, measured on a solved
 * field. Release `*json_out` with [`ps_string_free`].
 *
 * # Safety
 * `params` must be a live handle; `levels` must point to `n_levels`
 * values; `json_out` must be writable.
 */
enum PsStatus ps_classify_boundedness(const struct PsParams *params,
                                      const uint32_t *levels,
                                      size_t n_levels,
                                      uint64_t cap,
                                      char **json_out);

/**
 * Brute-force compatibility of the measures at level `n` for a solved
 * field, resolved to the model's working precision.
 *
 * # Safety
 * `params` must be a live handle; `passed` and `residual_valuation` must
 * be writable.
 */
enum PsStatus ps_check_compatibility(const struct PsParams *params,
                                     uint32_t n,
                                     uint64_t cap,
                                     bool *passed,
                                     int64_t *residual_valuation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PADIC_SOS_H */
