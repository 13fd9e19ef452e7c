#ifndef STEERCLONE_H
#define STEERCLONE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_NULL_POINTER = 1,
  SC_STATUS_INVALID_ARGUMENT = 2,
  SC_STATUS_DIMENSION_MISMATCH = 3,
  SC_STATUS_INVALID_STATE = 4,
  SC_STATUS_NOT_BELL_DIAGONAL = 5,
  SC_STATUS_PARSE = 6,
  SC_STATUS_IO = 7,
  SC_STATUS_INTERNAL = 8,
  SC_STATUS_PANIC = 9,
} ScStatus;

/**
 * Cloner amplitudes (v0, v1, v2, v3), normalized.
 */
typedef struct ScCoefficients ScCoefficients;

/**
 * Validated bipartite density matrix.
 */
typedef struct ScDensityMatrix ScDensityMatrix;

typedef struct ScSteeringPair {
  double t_ab[3];
  double t_ac[3];
  double s_ab;
  double s_ac;
  bool steerable_ab;
  bool steerable_ac;
} ScSteeringPair;

typedef struct ScPerfectResult {
  bool is_zero_discord;
  bool pass;
  double max_commutator;
  /**
   * NaN when the state is not zero-discord.
   */
  double max_deviation_b;
  /**
   * NaN when the state is not zero-discord.
   */
  double max_deviation_c;
} ScPerfectResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into the library from the same thread.
 */
const char *sc_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sc_version(void);

/**
 * Builds normalized coefficients from real parts `re[4]` and optional
 * imaginary parts `im[4]` (may be NULL). The input norm is written to
 * `norm_out` when it is not NULL.
 *
 * # Safety
 * `re` must point to 4 doubles, `im` to 4 doubles or be NULL, and `out` must
 * be a valid pointer.
 */
enum ScStatus sc_coefficients_new(const double *re,
                                  const double *im,
                                  double *norm_out,
                                  struct ScCoefficients **out);

/**
 * Parses "v0,v1,v2,v3" (complex entries as "re:im") into normalized
 * coefficients.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ScStatus sc_coefficients_parse(const char *text,
                                    double *norm_out,
                                    struct ScCoefficients **out);

/**
 * Writes the stored amplitudes into `re[4]` and `im[4]`.
 *
 * # Safety
 * `v` must come from this library; `re` and `im` must hold 4 doubles each.
 */
enum ScStatus sc_coefficients_get(const struct ScCoefficients *v, double *re, double *im);

/**
 * # Safety
 * `v` must come from this library and not be used afterwards. NULL is a no-op.
 */
void sc_coefficients_free(struct ScCoefficients *v);

/**
 * F_B = (1 + 2v0²)/3 and F_C = (1 + 2|v0'|²)/3.
 *
 * # Safety
 * All pointers must be valid.
 */
enum ScStatus sc_closed_form_fidelities(const struct ScCoefficients *v, double *f_b, double *f_c);

/**
 * Direction-averaged fidelities by quadrature. `quadrature` is a scheme
 * string such as "grid:64x128" or "mc:100000:7"; NULL selects the default
 * grid. `std_err` (nullable) receives the two Monte Carlo standard errors.
 *
 * # Safety
 * `v`, `f_b` and `f_c` must be valid; `quadrature` NULL or NUL-terminated;
 * `std_err` NULL or pointing to 2 doubles.
 */
enum ScStatus sc_averaged_fidelities(const struct ScCoefficients *v,
                                     const char *quadrature,
                                     double *f_b,
                                     double *f_c,
                                     double *std_err);

/**
 * Correlation diagonals and steering measures of both clone pairs.
 *
 * # Safety
 * `v` and `result` must be valid; `quadrature` NULL or NUL-terminated.
 */
enum ScStatus sc_steering_pair(const struct ScCoefficients *v,
                               const char *quadrature,
                               struct ScSteeringPair *result);

/**
 * Mean |T x| over the sphere for a diagonal correlation matrix.
 *
 * # Safety
 * `t` must point to 3 doubles and `s` be valid.
 */
enum ScStatus sc_steering_measure(const double *t, const char *quadrature, double *s);

/**
 * (1−a) + (1−b) + √((1−a)(1−b)), the left side of both trade-off bounds.
 */
double sc_tradeoff_lhs(double a, double b);

/**
 * Density matrix on C^dA ⊗ C^dB from row-major real and imaginary parts of
 * length (dA·dB)². `im` may be NULL for a real matrix.
 *
 * # Safety
 * `re` (and `im` if not NULL) must hold (dA·dB)² doubles; `out` must be valid.
 */
enum ScStatus sc_state_new(size_t d_a,
                           size_t d_b,
                           const double *re,
                           const double *im,
                           struct ScDensityMatrix **out);

/**
 * Parses the JSON state format {"dims": [dA, dB], "matrix": [[re, im], ...]}.
 *
 * # Safety
 * `json` must be NUL-terminated and `out` valid.
 */
enum ScStatus sc_state_from_json(const char *json, struct ScDensityMatrix **out);

/**
 * Writes the subsystem dimensions.
 *
 * # Safety
 * All pointers must be valid.
 */
enum ScStatus sc_state_dims(const struct ScDensityMatrix *state, size_t *d_a, size_t *d_b);

/**
 * # Safety
 * `state` must come from this library and not be used afterwards. NULL is a no-op.
 */
void sc_state_free(struct ScDensityMatrix *state);

/**
 * Commutator test on ρ_B and the η operators. `seed` drives the random
 * combination used to find the common eigenbasis.
 *
 * # Safety
 * `state`, `is_zero_discord` and `max_commutator` must be valid.
 */
enum ScStatus sc_zero_discord_check(const struct ScDensityMatrix *state,
                                    double tol,
                                    uint64_t seed,
                                    bool *is_zero_discord,
                                    double *max_commutator);

/**
 * Full perfect-cloning check: certificate, constructive copier and
 * verification on 50 seeded measurements.
 *
 * # Safety
 * `state` and `result` must be valid.
 */
enum ScStatus sc_perfect_check(const struct ScDensityMatrix *state,
                               double tol,
                               uint64_t seed,
                               struct ScPerfectResult *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STEERCLONE_H */
