#ifndef BIANCHI_H
#define BIANCHI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum BianchiStatus {
  BIANCHI_STATUS_OK = 0,
  BIANCHI_STATUS_INVALID_ARGUMENT = 1,
  BIANCHI_STATUS_UNSUPPORTED_FIELD = 2,
  BIANCHI_STATUS_POLE = 3,
  BIANCHI_STATUS_OUT_OF_WINDOW = 4,
  BIANCHI_STATUS_SINGULAR_POINT = 5,
  BIANCHI_STATUS_TRUNCATION_FAILURE = 6,
  BIANCHI_STATUS_NONCONVERGENCE = 7,
  BIANCHI_STATUS_PARSE = 8,
  BIANCHI_STATUS_INVALID_DATA = 9,
  BIANCHI_STATUS_POLICY_MISMATCH = 10,
  BIANCHI_STATUS_IO = 11,
  BIANCHI_STATUS_NULL_POINTER = 12,
  BIANCHI_STATUS_PANIC = 13,
} BianchiStatus;

/**
 * Cusp form loaded from a coefficient file.
 */
typedef struct BianchiCuspForm BianchiCuspForm;

/**
 * Eisenstein series evaluator for one field.
 */
typedef struct BianchiEvaluator BianchiEvaluator;

/**
 * Dedekind zeta function of one field.
 */
typedef struct BianchiZeta BianchiZeta;

/**
 * A complex number as two doubles.
 */
typedef struct BianchiComplex {
  double re;
  double im;
} BianchiComplex;

/**
 * Aggregated exponent bound at one `(t_f, t_g, t_k)`.
 */
typedef struct BianchiBoundSummary {
  /**
   * Log of the sum below the truncation threshold.
   */
  double aggregate_ln;
  /**
   * Log of the tail above the threshold.
   */
  double tail_ln;
  double threshold;
  /**
   * `Q1` at the dominant term.
   */
  double q1;
  double dominant_t_j;
  /**
   * 1 in the exponential-decay regime, 0 in the main regime.
   */
  int32_t exponential_regime;
} BianchiBoundSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *bianchi_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bianchi_version(void);

/**
 * Creates an evaluator over `Q(√d)` with Fourier tail tolerance
 * `tail_tolerance`.
 *
 * # Safety
 * `out_evaluator` must be null or valid for writes.
 */
enum BianchiStatus bianchi_evaluator_new(int64_t d,
                                         double tail_tolerance,
                                         struct BianchiEvaluator **out_evaluator);

/**
 * Releases an evaluator; null is ignored.
 *
 * # Safety
 * `evaluator` must be null or a handle from [`bianchi_evaluator_new`] not yet freed.
 */
void bianchi_evaluator_free(struct BianchiEvaluator *evaluator);

/**
 * `E(P, it)` at `P = x + iy + rj`.
 *
 * # Safety
 * `evaluator` must be a live handle and `out_value` valid for writes.
 */
enum BianchiStatus bianchi_eisenstein_eval(const struct BianchiEvaluator *evaluator,
                                           double x,
                                           double y,
                                           double r,
                                           double t,
                                           struct BianchiComplex *out_value);

/**
 * Relative automorphy residual `|E(γP) − E(P)| / |E(P)|` for
 * `γ = Π_k T^{a_k + b_k ω} S`, with `letters` holding `2·n_letters`
 * integers `a_1, b_1, a_2, b_2, …`.
 *
 * # Safety
 * `evaluator` must be a live handle, `letters` valid for `2·n_letters`
 * reads (or null when `n_letters` is 0) and `out_residual` valid for writes.
 */
enum BianchiStatus bianchi_check_automorphy(const struct BianchiEvaluator *evaluator,
                                            const int64_t *letters,
                                            size_t n_letters,
                                            double x,
                                            double y,
                                            double r,
                                            double t,
                                            double *out_residual);

/**
 * Creates a Dedekind zeta context for `Q(√d)` with relative precision target
 * `precision`.
 *
 * # Safety
 * `out_zeta` must be null or valid for writes.
 */
enum BianchiStatus bianchi_zeta_new(int64_t d, double precision, struct BianchiZeta **out_zeta);

/**
 * Releases a zeta context; null is ignored.
 *
 * # Safety
 * `zeta` must be null or a handle from [`bianchi_zeta_new`] not yet freed.
 */
void bianchi_zeta_free(struct BianchiZeta *zeta);

/**
 * `ζ_K(s)`.
 *
 * # Safety
 * `zeta` must be a live handle and `out_value` valid for writes.
 */
enum BianchiStatus bianchi_dedekind_zeta(const struct BianchiZeta *zeta,
                                         struct BianchiComplex s,
                                         struct BianchiComplex *out_value);

/**
 * Scattering coefficient `φ(s)`.
 *
 * # Safety
 * `zeta` must be a live handle and `out_value` valid for writes.
 */
enum BianchiStatus bianchi_scattering_phi(const struct BianchiZeta *zeta,
                                          struct BianchiComplex s,
                                          struct BianchiComplex *out_value);

/**
 * Loads a cusp-form coefficient file.
 *
 * # Safety
 * `path` must be null or a NUL-terminated UTF-8 string and `out_form`
 * null or valid for writes.
 */
enum BianchiStatus bianchi_cuspform_load(const char *path, struct BianchiCuspForm **out_form);

/**
 * Releases a cusp form; null is ignored.
 *
 * # Safety
 * `form` must be null or a handle from [`bianchi_cuspform_load`] not yet freed.
 */
void bianchi_cuspform_free(struct BianchiCuspForm *form);

/**
 * Value of the cusp form at `P = x + iy + rj`. `out_tail_risk` may be null;
 * otherwise it receives 1 when the truncation may be unsafe.
 *
 * # Safety
 * `form` must be a live handle, `out_value` valid for writes and
 * `out_tail_risk` null or valid for writes.
 */
enum BianchiStatus bianchi_cuspform_eval(const struct BianchiCuspForm *form,
                                         double x,
                                         double y,
                                         double r,
                                         struct BianchiComplex *out_value,
                                         int32_t *out_tail_risk);

/**
 * Spectral parameter `t` of a loaded cusp form.
 *
 * # Safety
 * `form` must be a live handle and `out_t` valid for writes.
 */
enum BianchiStatus bianchi_cuspform_spectral_parameter(const struct BianchiCuspForm *form,
                                                       double *out_t);

/**
 * Principal-branch `ln Γ(z)`.
 *
 * # Safety
 * `out_value` must be valid for writes.
 */
enum BianchiStatus bianchi_log_gamma(struct BianchiComplex z, struct BianchiComplex *out_value);

/**
 * `cosh(πt/2) K_{it}(u)`.
 *
 * # Safety
 * `out_value` must be valid for writes.
 */
enum BianchiStatus bianchi_bessel_k_scaled(double t, double u, double *out_value);

/**
 * Gamma closed form of the archimedean triple-product integral.
 *
 * # Safety
 * `out_value` must be valid for writes.
 */
enum BianchiStatus bianchi_t_integral_closed(double t1,
                                             double t2,
                                             double t3,
                                             struct BianchiComplex *out_value);

/**
 * `Q1(t_j; t_f, t_g, t_k)`.
 *
 * # Safety
 * `out_value` must be valid for writes.
 */
enum BianchiStatus bianchi_q1(double t_j, double t_f, double t_g, double t_k, double *out_value);

/**
 * Aggregated bound under the GLH policy with exponent `delta`, spectral
 * density `t_j^{density_exponent}` and `Q1` kept exactly when `exact_q1` is
 * nonzero.
 *
 * # Safety
 * `out_summary` must be valid for writes.
 */
enum BianchiStatus bianchi_aggregate(double t_f,
                                     double t_g,
                                     double t_k,
                                     double delta,
                                     double density_exponent,
                                     int32_t exact_q1,
                                     struct BianchiBoundSummary *out_summary);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIANCHI_H */
