#ifndef RADMAX_H
#define RADMAX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * sup_δ χ_{M,β}(δ) < ∞
 */
#define RADMAX_FLAG_MINKOWSKI_BOUNDED 1

/**
 * sup_δ χ_{A,γ}(δ) < ∞
 */
#define RADMAX_FLAG_ASSOUAD_BOUNDED 2

#define RADMAX_FLAG_QUASI_ASSOUAD_REGULAR 4

/**
 * Result of every fallible call.
 */
typedef enum RadmaxStatus {
  RADMAX_STATUS_OK = 0,
  RADMAX_STATUS_NULL_POINTER = 1,
  RADMAX_STATUS_INVALID_UTF8 = 2,
  RADMAX_STATUS_PARSE = 3,
  RADMAX_STATUS_INVALID_ARGUMENT = 4,
  RADMAX_STATUS_DOMAIN = 5,
  RADMAX_STATUS_CONSISTENCY = 6,
  RADMAX_STATUS_PRECISION = 7,
  RADMAX_STATUS_OUT_OF_RANGE = 8,
  RADMAX_STATUS_PANIC = 9,
} RadmaxStatus;

/**
 * Polygon families for [`radmax_region_polygon`].
 */
typedef enum RadmaxRegionKind {
  RADMAX_REGION_KIND_DELTA = 0,
  RADMAX_REGION_KIND_P = 1,
  RADMAX_REGION_KIND_Q = 2,
  RADMAX_REGION_KIND_Q_TILDE = 3,
} RadmaxRegionKind;

/**
 * Where (1/p, 1/q) falls relative to a region.
 */
typedef enum RadmaxMembership {
  RADMAX_MEMBERSHIP_INTERIOR = 0,
  RADMAX_MEMBERSHIP_BOUNDARY_INCLUDED = 1,
  RADMAX_MEMBERSHIP_BOUNDARY_RESTRICTED_WEAK = 2,
  RADMAX_MEMBERSHIP_BOUNDARY_EXCLUDED = 3,
  RADMAX_MEMBERSHIP_BOUNDARY_UNKNOWN = 4,
  RADMAX_MEMBERSHIP_UNDETERMINED = 5,
  RADMAX_MEMBERSHIP_OUTSIDE = 6,
} RadmaxMembership;

/**
 * Radial profile f₀.
 */
typedef struct RadmaxProfile RadmaxProfile;

/**
 * Type-set polygon with boundary statuses.
 */
typedef struct RadmaxRegion RadmaxRegion;

/**
 * Dilation set E ⊂ [1,2].
 */
typedef struct RadmaxSet RadmaxSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *radmax_last_error(void);

/**
 * Library version, static storage.
 */
const char *radmax_version(void);

/**
 * Parses a generator expression such as `cantor(1/3, 8)`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `out` must be writable.
 */
enum RadmaxStatus radmax_set_parse(const char *expr, struct RadmaxSet **out);

/**
 * # Safety
 * `set` must come from [`radmax_set_parse`] and not be used afterwards. NULL is ignored.
 */
void radmax_set_free(struct RadmaxSet *set);

/**
 * Number of maximal intervals (points count as degenerate intervals).
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum RadmaxStatus radmax_set_interval_count(const struct RadmaxSet *set, size_t *out);

/**
 * N(E, δ) with δ given as a rational string (`1/64`, `2^-6`, `0.125`).
 *
 * # Safety
 * `set` must be a live handle, `delta` NUL-terminated, `out` writable.
 */
enum RadmaxStatus radmax_set_covering_number(const struct RadmaxSet *set,
                                             const char *delta,
                                             uint64_t *out);

/**
 * |W_n|, rounded to double.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum RadmaxStatus radmax_set_neighborhood_measure(const struct RadmaxSet *set,
                                                  int64_t n,
                                                  double *out);

/**
 * Parses a profile such as `chi(1,2)` or `pow(1,1,0,0,8) + chi(3,4)`.
 *
 * # Safety
 * `expr` must be NUL-terminated; `out` must be writable.
 */
enum RadmaxStatus radmax_profile_parse(const char *expr, struct RadmaxProfile **out);

/**
 * # Safety
 * `profile` must come from [`radmax_profile_parse`] and not be used afterwards. NULL is ignored.
 */
void radmax_profile_free(struct RadmaxProfile *profile);

/**
 * A_t f(r) in dimension `d`. `rel_tol <= 0` selects the default tolerance.
 *
 * # Safety
 * `profile` must be a live handle; `out` must be writable.
 */
enum RadmaxStatus radmax_spherical_mean(uint32_t d,
                                        const struct RadmaxProfile *profile,
                                        double r,
                                        double t,
                                        double rel_tol,
                                        double *out);

/**
 * Radial type set for β ≤ γ ≤ γ* (rational strings) and `RADMAX_FLAG_*` bits.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum RadmaxStatus radmax_region_radial(uint32_t d,
                                       const char *beta,
                                       const char *gamma,
                                       const char *gamma_star,
                                       uint32_t flags,
                                       struct RadmaxRegion **out);

/**
 * One of the closed polygons Δ(β), 𝒫(β,γ), 𝒬(β,γ), 𝒬̃(β,γ).
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
enum RadmaxStatus radmax_region_polygon(enum RadmaxRegionKind kind,
                                        uint32_t d,
                                        const char *beta,
                                        const char *gamma,
                                        struct RadmaxRegion **out);

/**
 * # Safety
 * `region` must come from a `radmax_region_*` constructor and not be used afterwards. NULL is ignored.
 */
void radmax_region_free(struct RadmaxRegion *region);

/**
 * # Safety
 * `region` must be a live handle; `out` must be writable.
 */
enum RadmaxStatus radmax_region_vertex_count(const struct RadmaxRegion *region, size_t *out);

/**
 * Vertex `index` as doubles (1/p, 1/q), counter-clockwise from the origin.
 *
 * # Safety
 * `region` must be a live handle; `x` and `y` must be writable.
 */
enum RadmaxStatus radmax_region_vertex(const struct RadmaxRegion *region,
                                       size_t index,
                                       double *x,
                                       double *y);

/**
 * Classifies the exponent pair (p, q); either may be `inf`.
 *
 * # Safety
 * `region` must be a live handle, `p` and `q` NUL-terminated, `out` writable.
 */
enum RadmaxStatus radmax_region_membership(const struct RadmaxRegion *region,
                                           const char *p,
                                           const char *q,
                                           enum RadmaxMembership *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RADMAX_H */
