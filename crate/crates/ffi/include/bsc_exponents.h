/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef BSC_EXPONENTS_H
#define BSC_EXPONENTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes shared by all functions.
 */
typedef enum BscStatus {
  BSC_STATUS_OK = 0,
  BSC_STATUS_DOMAIN = 1,
  BSC_STATUS_BRACKET = 2,
  BSC_STATUS_NO_CONVERGENCE = 3,
  BSC_STATUS_QUADRATURE = 4,
  BSC_STATUS_INTEGRALITY = 5,
  BSC_STATUS_NOT_CONSTANT_WEIGHT = 6,
  BSC_STATUS_INVALID_CODE = 7,
  BSC_STATUS_NULL_POINTER = 8,
  BSC_STATUS_OUT_OF_RANGE = 9,
  BSC_STATUS_PANIC = 10,
} BscStatus;

/*
 Evaluation route for the spectrum exponent.
 */
typedef enum BscMuMethod {
  /*
   Closed form, with the `omega = 0` limit filled in.
   */
  BSC_MU_METHOD_AUTO = 0,
  BSC_MU_METHOD_QUADRATURE = 1,
  BSC_MU_METHOD_CLOSED = 2,
  /*
   Only for `alpha = 1/2`.
   */
  BSC_MU_METHOD_HALF = 3,
} BscMuMethod;

/*
 Active piece of the upper envelope.
 */
typedef enum BscRegion {
  BSC_REGION_BELOW_R2 = 0,
  BSC_REGION_STRAIGHT_LINE = 1,
  BSC_REGION_SPHERE_PACKING = 2,
} BscRegion;

/*
 Opaque sampled pair of envelopes.
 */
typedef struct BscBoundCurve BscBoundCurve;

/*
 Opaque binary code of length at most 64.
 */
typedef struct BscCode BscCode;

/*
 Rate-independent thresholds.
 */
typedef struct BscConstants {
  double tau0;
  double r0;
  double p0;
  double p1;
} BscConstants;

/*
 Rate thresholds of one channel.
 */
typedef struct BscRates {
  double p;
  double capacity;
  double r_crit;
  double r1;
  double r2;
  double r_min;
} BscRates;

/*
 Optimizer of the linear-programming bound.
 */
typedef struct BscLpPoint {
  double rate;
  double omega_r;
  double alpha_r;
  double tau_r;
} BscLpPoint;

/*
 One sampled rate of a bound curve.
 */
typedef struct BscBoundRow {
  double rate;
  double e_low;
  double e_up;
  enum BscRegion region;
} BscBoundRow;

/*
 Hypotheses and conclusion of the Johnson-type bound for one code.
 */
typedef struct BscLemma2Verdict {
  uint64_t close_pairs;
  bool spectrum_hypothesis;
  bool radius_hypothesis;
  bool conclusion;
  bool plotkin_holds;
} BscLemma2Verdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until the
 next call into this library from the same thread.
 */
const char *bsc_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *bsc_version(void);

/*
 Binary entropy in bits.
 */
enum BscStatus bsc_h2(double x, double *out);

/*
 Inverse of the binary entropy on `[0, 1/2]`.
 */
enum BscStatus bsc_h2_inv(double y, double *out);

/*
 Binary KL divergence `D(x || y)` in bits.
 */
enum BscStatus bsc_kl_div(double x, double y, double *out);

/*
 `G(alpha, tau)`.
 */
enum BscStatus bsc_g(double alpha, double tau, double *out);

/*
 Gilbert-Varshamov radius `h2_inv(1 - rate)`.
 */
enum BscStatus bsc_delta_gv(double rate, double *out);

/*
 `omega1(p) = 2 sqrt(pq) / (1 + 2 sqrt(pq))`.
 */
enum BscStatus bsc_omega1(double p, double *out);

enum BscStatus bsc_global_constants(struct BscConstants *out);

enum BscStatus bsc_critical_rates(double p, struct BscRates *out);

enum BscStatus bsc_omega_lp(double rate, struct BscLpPoint *out);

/*
 Spectrum exponent `mu(R, alpha, omega)`.
 */
enum BscStatus bsc_mu(double rate,
                      double alpha,
                      double omega,
                      enum BscMuMethod method,
                      double *out);

/*
 Sphere-packing exponent.
 */
enum BscStatus bsc_sphere_packing(double rate, double p, double *out);

/*
 Lower envelope of the reliability function.
 */
enum BscStatus bsc_e_low(double rate, double p, double *out);

/*
 Upper envelope of the reliability function.
 */
enum BscStatus bsc_e_up(double rate, double p, double *out);

/*
 Samples both envelopes on `n_points` rates plus the seams. Free the
 handle with [`bsc_bound_curve_free`].
 */
enum BscStatus bsc_bound_curve_new(double p, size_t n_points, struct BscBoundCurve **out);

/*
 Number of rows, 0 for a null handle.

 # Safety
 `curve` must be null or a live handle from [`bsc_bound_curve_new`].
 */
size_t bsc_bound_curve_len(const struct BscBoundCurve *curve);

/*
 Copies row `index`.

 # Safety
 `curve` must be null or a live handle; `out` must be null or writable.
 */
enum BscStatus bsc_bound_curve_row(const struct BscBoundCurve *curve,
                                   size_t index,
                                   struct BscBoundRow *out);

/*
 Critical rates the curve was sampled with.

 # Safety
 `curve` must be null or a live handle; `out` must be null or writable.
 */
enum BscStatus bsc_bound_curve_rates(const struct BscBoundCurve *curve, struct BscRates *out);

/*
 # Safety
 `curve` must be null or a handle not yet freed.
 */
void bsc_bound_curve_free(struct BscBoundCurve *curve);

/*
 Builds a code from `m` words packed in the low `n` bits. Free the handle
 with [`bsc_code_free`].

 # Safety
 `words` must point to `m` readable values.
 */
enum BscStatus bsc_code_new(size_t n, const uint64_t *words, size_t m, struct BscCode **out);

/*
 Number of codewords, 0 for a null handle.

 # Safety
 `code` must be null or a live handle.
 */
size_t bsc_code_len(const struct BscCode *code);

/*
 Writes the `n + 1` ordered-pair counts by distance into `counts`;
 `B_i = counts[i] / M`.

 # Safety
 `code` must be null or a live handle; `counts` must hold `len` values.
 */
enum BscStatus bsc_code_spectrum(const struct BscCode *code, uint64_t *counts, size_t len);

/*
 # Safety
 `code` must be null or a live handle; `out` must be null or writable.
 */
enum BscStatus bsc_lemma2_check(const struct BscCode *code,
                                double omega,
                                double delta,
                                double a,
                                struct BscLemma2Verdict *out);

/*
 # Safety
 `code` must be null or a handle not yet freed.
 */
void bsc_code_free(struct BscCode *code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BSC_EXPONENTS_H */
