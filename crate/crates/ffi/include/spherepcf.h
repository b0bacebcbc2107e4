#ifndef SPHEREPCF_H
#define SPHEREPCF_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SpcfStatus {
  SPCF_STATUS_OK = 0,
  SPCF_STATUS_NULL_ARGUMENT = 1,
  SPCF_STATUS_DOMAIN = 2,
  SPCF_STATUS_DIMENSION_MISMATCH = 3,
  SPCF_STATUS_BUFFER_TOO_SMALL = 4,
  SPCF_STATUS_SAMPLING_FAILURE = 5,
  SPCF_STATUS_NUMERICAL = 6,
  SPCF_STATUS_PARSE = 7,
  SPCF_STATUS_IO = 8,
  SPCF_STATUS_PANIC = 9,
} SpcfStatus;

/**
 * Distance used by the pair statistic.
 */
typedef enum SpcfDistance {
  SPCF_DISTANCE_GEODESIC = 0,
  SPCF_DISTANCE_EUCLIDEAN = 1,
} SpcfDistance;

/**
 * Opaque handle to an EQ(2,N) partition.
 */
typedef struct SpcfPartition SpcfPartition;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null if it succeeded.
 * The pointer stays valid until the next call into this library on the same
 * thread.
 */
const char *spcf_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *spcf_version(void);

/**
 * Builds EQ(2,n). Free the handle with `spcf_partition_free`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SpcfStatus spcf_partition_new(size_t n, struct SpcfPartition **out);

/**
 * Reads a partition from its JSON form.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum SpcfStatus spcf_partition_from_json(const char *json, struct SpcfPartition **out);

/**
 * Serializes a partition to JSON. Free the string with `spcf_string_free`.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum SpcfStatus spcf_partition_to_json(const struct SpcfPartition *p, char **out);

/**
 * # Safety
 * `p` must be null or a handle returned by this library, freed once.
 */
void spcf_partition_free(struct SpcfPartition *p);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void spcf_string_free(char *s);

/**
 * Number of regions, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t spcf_partition_n_regions(const struct SpcfPartition *p);

/**
 * Number of collars, or 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t spcf_partition_n_collars(const struct SpcfPartition *p);

/**
 * Total boundary length of all regions.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum SpcfStatus spcf_partition_total_perimeter(const struct SpcfPartition *p, double *out);

/**
 * Regions per collar. `n_written` receives the collar count even when the
 * buffer is too small.
 *
 * # Safety
 * `out` must hold `capacity` values; `n_written` must be valid.
 */
enum SpcfStatus spcf_partition_region_counts(const struct SpcfPartition *p,
                                             size_t *out,
                                             size_t capacity,
                                             size_t *n_written);

/**
 * `n` i.i.d. uniform points on `S^d`. `capacity` and `n_written` count
 * points; the buffer needs `capacity * (d + 1)` doubles.
 *
 * # Safety
 * `out` must hold `capacity * (d + 1)` doubles; `n_written` must be valid.
 */
enum SpcfStatus spcf_sample_iid(size_t d,
                                size_t n,
                                uint64_t seed,
                                double *out,
                                size_t capacity,
                                size_t *n_written);

/**
 * Spherical ensemble with `n` points on `S^2`.
 *
 * # Safety
 * `out` must hold `3 * capacity` doubles; `n_written` must be valid.
 */
enum SpcfStatus spcf_sample_spherical(size_t n,
                                      uint64_t seed,
                                      double *out,
                                      size_t capacity,
                                      size_t *n_written);

/**
 * Harmonic ensemble of degree `l`, with `(l + 1)^2` points on `S^2`.
 *
 * # Safety
 * `out` must hold `3 * capacity` doubles; `n_written` must be valid.
 */
enum SpcfStatus spcf_sample_harmonic(size_t l,
                                     uint64_t seed,
                                     double *out,
                                     size_t capacity,
                                     size_t *n_written);

/**
 * One uniform point in each region of `p`.
 *
 * # Safety
 * `p` must be a live handle, `out` must hold `3 * capacity` doubles and
 * `n_written` must be valid.
 */
enum SpcfStatus spcf_sample_jittered(const struct SpcfPartition *p,
                                     uint64_t seed,
                                     double *out,
                                     size_t capacity,
                                     size_t *n_written);

/**
 * `G_{s,N}` of `n_points` unit vectors in `R^{d+1}`.
 *
 * # Safety
 * `points` must hold `n_points * (d + 1)` doubles and `out` must be valid.
 */
enum SpcfStatus spcf_g_statistic(const double *points,
                                 size_t n_points,
                                 size_t d,
                                 double s,
                                 enum SpcfDistance distance,
                                 double *out);

/**
 * i.i.d. limit `(omega_{d-1}/omega_d) s^d / d`.
 *
 * # Safety
 * `out` must be valid.
 */
enum SpcfStatus spcf_oracle_iid_limit(uint32_t d, double s, double *out);

/**
 * Exact i.i.d. expectation for `n` points.
 *
 * # Safety
 * `out` must be valid.
 */
enum SpcfStatus spcf_oracle_iid_finite(uint32_t d, size_t n, double s, double *out);

/**
 * Spherical ensemble expectation (euclidean distance) for `n` points.
 *
 * # Safety
 * `out` must be valid.
 */
enum SpcfStatus spcf_oracle_spherical_finite(size_t n, double s, double *out);

/**
 * Spherical ensemble limit `s^2/4 - 1 + exp(-s^2/4)`.
 *
 * # Safety
 * `out` must be valid.
 */
enum SpcfStatus spcf_oracle_spherical_limit(double s, double *out);

/**
 * Harmonic ensemble expectation on `S^d` at degree `l`, by quadrature.
 *
 * # Safety
 * `out` must be valid.
 */
enum SpcfStatus spcf_oracle_harmonic_finite(uint32_t d, size_t l, double s, double *out);

/**
 * Harmonic ensemble limit on `S^d`.
 *
 * # Safety
 * `out` must be valid.
 */
enum SpcfStatus spcf_oracle_harmonic_limit(uint32_t d, double s, double *out);

/**
 * Projective-space limit for Jacobi parameters `(alpha, beta)` and real
 * dimension `real_dim`.
 *
 * # Safety
 * `out` must be valid.
 */
enum SpcfStatus spcf_oracle_projective_limit(double alpha,
                                             double beta,
                                             uint32_t real_dim,
                                             double s,
                                             double *out);

/**
 * Jittered sampling at large `s`: the i.i.d. limit minus one.
 *
 * # Safety
 * `out` must be valid.
 */
enum SpcfStatus spcf_oracle_jittered_large_s(uint32_t d, double s, double *out);

/**
 * Jittered sampling at small `s` on EQ(2,N): value `s^3/(8 pi^2)` and error
 * bound `c2 s^4`. Valid for `0 <= s < 1/4`.
 *
 * # Safety
 * `value` and `bound` must be valid.
 */
enum SpcfStatus spcf_oracle_jittered_small_s(double s, double c2, double *value, double *bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPHEREPCF_H */
