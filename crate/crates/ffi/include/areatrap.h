#ifndef AREATRAP_H
#define AREATRAP_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AreatrapMethod {
  AREATRAP_METHOD_AUTO = 0,
  AREATRAP_METHOD_LAGRANGIAN = 1,
  AREATRAP_METHOD_EXACT = 2,
} AreatrapMethod;

/**
 * Result codes. Zero is success.
 */
typedef enum AreatrapStatus {
  AREATRAP_STATUS_OK = 0,
  AREATRAP_STATUS_NULL_POINTER = 1,
  AREATRAP_STATUS_INVALID_ARGUMENT = 2,
  AREATRAP_STATUS_INFEASIBLE = 3,
  AREATRAP_STATUS_SIZE_CAP_EXCEEDED = 4,
  AREATRAP_STATUS_IO = 5,
  AREATRAP_STATUS_PARSE = 6,
  AREATRAP_STATUS_BUFFER_TOO_SMALL = 7,
  AREATRAP_STATUS_INTERNAL = 8,
} AreatrapStatus;

/**
 * Opaque Poisson cloud.
 */
typedef struct AreatrapCloud AreatrapCloud;

/**
 * Opaque constrained solution.
 */
typedef struct AreatrapSolution AreatrapSolution;

typedef struct AreatrapSolutionInfo {
  double n;
  double alpha;
  double threshold;
  size_t length;
  double achieved_area;
  double upper_bound;
  size_t gap;
  /**
   * The solver that produced the answer: `Lagrangian` or `Exact`.
   */
  enum AreatrapMethod method;
} AreatrapSolutionInfo;

typedef struct AreatrapRoughness {
  double mfl_all;
  double mfl_interior;
  double mlr_all;
  double mlr_interior;
  size_t facets;
  size_t interior_facets;
} AreatrapRoughness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length in bytes.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t areatrap_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *areatrap_version(void);

/**
 * Samples a rate-one Poisson cloud on `[0,n]²`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum AreatrapStatus areatrap_cloud_sample(double n,
                                          uint64_t master_seed,
                                          uint64_t trial_index,
                                          struct AreatrapCloud **out);

/**
 * Builds a cloud from `count` interleaved `x, y` pairs inside `[0,n]²`.
 *
 * # Safety
 * `xy` must be valid for `2 * count` reads; `out` for a pointer write.
 */
enum AreatrapStatus areatrap_cloud_from_points(double n,
                                               const double *xy,
                                               size_t count,
                                               struct AreatrapCloud **out);

/**
 * Reads a cloud file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` valid for a pointer write.
 */
enum AreatrapStatus areatrap_cloud_load(const char *path, struct AreatrapCloud **out);

/**
 * Writes a cloud file.
 *
 * # Safety
 * `cloud` must come from this library; `path` must be NUL-terminated.
 */
enum AreatrapStatus areatrap_cloud_save(const struct AreatrapCloud *cloud, const char *path);

/**
 * Releases a cloud. Null is ignored.
 *
 * # Safety
 * `cloud` must come from this library and not be used afterwards.
 */
void areatrap_cloud_free(struct AreatrapCloud *cloud);

/**
 * # Safety
 * `cloud` must come from this library; `out` valid for writes.
 */
enum AreatrapStatus areatrap_cloud_count(const struct AreatrapCloud *cloud, size_t *out);

/**
 * Copies the points, sorted by x then y, as interleaved pairs. Pass a null
 * `xy` to query the count only.
 *
 * # Safety
 * `xy` must be null or valid for `2 * capacity` writes; `count` for a write.
 */
enum AreatrapStatus areatrap_cloud_points(const struct AreatrapCloud *cloud,
                                          double *xy,
                                          size_t capacity,
                                          size_t *count);

/**
 * Last passage value `L(u, v)`.
 *
 * # Safety
 * `cloud` must come from this library; `out` valid for a write.
 */
enum AreatrapStatus areatrap_lpp_length(const struct AreatrapCloud *cloud,
                                        double ux,
                                        double uy,
                                        double vx,
                                        double vy,
                                        size_t *out);

/**
 * Solves the area-constrained problem on `(0,0) → (n,n)`.
 *
 * # Safety
 * `cloud` must come from this library; `out` valid for a pointer write.
 */
enum AreatrapStatus areatrap_solve(const struct AreatrapCloud *cloud,
                                   double alpha,
                                   enum AreatrapMethod method,
                                   struct AreatrapSolution **out);

/**
 * Releases a solution. Null is ignored.
 *
 * # Safety
 * `sol` must come from this library and not be used afterwards.
 */
void areatrap_solution_free(struct AreatrapSolution *sol);

/**
 * # Safety
 * `sol` must come from this library; `out` valid for a write.
 */
enum AreatrapStatus areatrap_solution_info(const struct AreatrapSolution *sol,
                                           struct AreatrapSolutionInfo *out);

/**
 * Copies the path vertices, including `(0,0)` and `(n,n)`. Pass a null
 * `xy` to query the count only.
 *
 * # Safety
 * As for [`areatrap_cloud_points`].
 */
enum AreatrapStatus areatrap_solution_vertices(const struct AreatrapSolution *sol,
                                               double *xy,
                                               size_t capacity,
                                               size_t *count);

/**
 * Writes the solved path in the `areatrap-path v1` format.
 *
 * # Safety
 * `sol` must come from this library; `path` must be NUL-terminated.
 */
enum AreatrapStatus areatrap_solution_save(const struct AreatrapSolution *sol, const char *path);

/**
 * Facet and roughness statistics of the solved path.
 *
 * # Safety
 * `sol` must come from this library; `out` valid for a write.
 */
enum AreatrapStatus areatrap_solution_roughness(const struct AreatrapSolution *sol,
                                                double delta,
                                                struct AreatrapRoughness *out);

/**
 * Limit-shape constants `c_α` and `w_α`.
 *
 * # Safety
 * `c` and `w` must be valid for writes.
 */
enum AreatrapStatus areatrap_limit_shape(double alpha, double *c, double *w);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AREATRAP_H */
