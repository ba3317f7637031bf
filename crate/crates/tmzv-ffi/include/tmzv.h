#ifndef TMZV_H
#define TMZV_H

/* Generated by cbindgen from crates/tmzv-ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Zero is success.
 */
enum TmzvStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  TMZV_STATUS_OK = 0,
  TMZV_STATUS_NULL_ARGUMENT = 1,
  TMZV_STATUS_UTF8 = 2,
  TMZV_STATUS_INVALID_FIELD = 3,
  TMZV_STATUS_REDUCIBLE = 4,
  TMZV_STATUS_PARSE = 5,
  TMZV_STATUS_DOMAIN = 6,
  TMZV_STATUS_PRECISION = 7,
  TMZV_STATUS_BUDGET = 8,
  TMZV_STATUS_CHECK_FAILED = 9,
  TMZV_STATUS_INVALID = 10,
  TMZV_STATUS_PANIC = 11,
};
#ifndef __cplusplus
typedef int32_t TmzvStatus;
#endif // __cplusplus

/**
 * A finite field F_q.
 */
typedef struct TmzvField TmzvField;

/**
 * The t-module G_{𝔰,u} with its special point.
 */
typedef struct TmzvModule TmzvModule;

/**
 * A JSON report and its overall verdict.
 */
typedef struct TmzvReport TmzvReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty if none.
 */
const char *tmzv_last_error(void);

/**
 * F_q with a built-in modulus (q ∈ {4, 8, 9} or prime).
 */
TmzvStatus tmzv_field_new(uint32_t q, struct TmzvField **out);

/**
 * F_p[x]/(m) with `len` modulus coefficients, constant term first. Reducible moduli are
 * rejected with the factor in the error message.
 */
TmzvStatus tmzv_field_with_modulus(uint32_t p,
                                   const uint32_t *coeffs,
                                   size_t len,
                                   struct TmzvField **out);

/**
 * Field size q, or 0 for a null handle.
 */
uint32_t tmzv_field_q(const struct TmzvField *field);

void tmzv_field_free(struct TmzvField *field);

/**
 * ζ_A(𝔰) by brute force at precision `prec`; `index` is like "1,3".
 */
TmzvStatus tmzv_mzv(const struct TmzvField *field,
                    const char *index,
                    int64_t prec,
                    struct TmzvReport **out);

/**
 * The t-module G_{𝔰,u}; `point` is a comma-separated tuple like "θ^2,1".
 */
TmzvStatus tmzv_module_new(const struct TmzvField *field,
                           const char *index,
                           const char *point,
                           struct TmzvModule **out);

/**
 * Dimension of the module, or 0 for a null handle.
 */
size_t tmzv_module_dim(const struct TmzvModule *module);

/**
 * Log of the special point three ways and Exp back; passes when all agree to `prec`.
 */
TmzvStatus tmzv_module_log(const struct TmzvModule *module, int64_t prec, struct TmzvReport **out);

void tmzv_module_free(struct TmzvModule *module);

/**
 * Fiber coproduct of 𝔰 and its logarithmic vector Z_𝔰, checked against the closed form.
 */
TmzvStatus tmzv_coproduct(const struct TmzvField *field,
                          const char *index,
                          int64_t prec,
                          struct TmzvReport **out);

/**
 * Run one verification suite by name ("interp", "example13", …). A null field runs
 * q = 2 and 3.
 */
TmzvStatus tmzv_verify(const struct TmzvField *field,
                       const char *suite,
                       int64_t prec,
                       struct TmzvReport **out);

/**
 * The report as JSON; owned by the report.
 */
const char *tmzv_report_json(const struct TmzvReport *report);

/**
 * 1 if every check in the report passed, 0 otherwise (or for null).
 */
int32_t tmzv_report_passed(const struct TmzvReport *report);

void tmzv_report_free(struct TmzvReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TMZV_H */
