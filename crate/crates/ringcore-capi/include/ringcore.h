#ifndef RINGCORE_H
#define RINGCORE_H

/* Generated by cbindgen from ringcore-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by fallible entry points; on anything but
 * `RINGCORE_STATUS_OK`, `ringcore_last_error` carries the message.
 */
typedef enum {
  RINGCORE_STATUS_OK = 0,
  RINGCORE_STATUS_NULL_ARGUMENT = 1,
  RINGCORE_STATUS_INVALID_UTF8 = 2,
  RINGCORE_STATUS_PARSE_ERROR = 3,
  RINGCORE_STATUS_INVALID_CONFIG = 4,
  RINGCORE_STATUS_RUNTIME_ERROR = 5,
} RingcoreStatus;

/**
 * Budget form charged per sampled ring in assignment-preserving mode.
 */
typedef enum {
  RINGCORE_BUDGET_FORM_EPS5 = 0,
  RINGCORE_BUDGET_FORM_EPS3_WITH_DIM = 1,
} RingcoreBudgetForm;

/**
 * Coreset construction mode.
 */
typedef enum {
  RINGCORE_MODE_VANILLA = 0,
  RINGCORE_MODE_ASSIGNMENT_PRESERVING = 1,
  RINGCORE_MODE_FAIR = 2,
} RingcoreMode;

/**
 * Opaque coreset handle.
 */
typedef struct RingcoreCoreset RingcoreCoreset;

/**
 * Opaque dataset handle.
 */
typedef struct RingcoreDataset RingcoreDataset;

/**
 * Build parameters; `alpha <= 0` selects the configured default budget.
 */
typedef struct {
  uintptr_t k;
  double z;
  double eps;
  double delta;
  uint64_t seed;
  double c0;
  double c1;
  double alpha;
  RingcoreBudgetForm budget_form;
  RingcoreMode mode;
} RingcoreParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next failing call on the same thread; do not free it.
 */
const char *ringcore_last_error(void);

/**
 * Static version string; do not free.
 */
const char *ringcore_version(void);

/**
 * Default parameters: k=1 median at eps=0.2, theoretical budget constants.
 *
 * # Safety
 * `out` must be writable.
 */
RingcoreStatus ringcore_params_default(RingcoreParams *out);

/**
 * Loads a Euclidean dataset from a CSV file (`x1..xd[,weight][,groups]`
 * with a header row). Returns null on failure; see `ringcore_last_error`.
 *
 * # Safety
 * `path` must be a valid NUL-terminated string.
 */
RingcoreDataset *ringcore_dataset_load_csv(const char *path);

/**
 * Builds a Euclidean dataset from a row-major coordinate buffer of
 * `n * dim` doubles; `weights` may be null for unit weights.
 *
 * # Safety
 * `coords` must point to `n * dim` doubles; `weights`, when non-null, to
 * `n` doubles.
 */
RingcoreDataset *ringcore_dataset_from_points(uintptr_t dim,
                                              const double *coords,
                                              uintptr_t n,
                                              const double *weights);

/**
 * Number of points in the dataset; 0 for null.
 *
 * # Safety
 * `ds` must be null or a live dataset handle.
 */
uintptr_t ringcore_dataset_len(const RingcoreDataset *ds);

/**
 * # Safety
 * `ds` must come from a ringcore constructor and not be freed twice.
 */
void ringcore_dataset_free(RingcoreDataset *ds);

/**
 * Builds a coreset; null on failure.
 *
 * # Safety
 * `ds` and `params` must be valid pointers.
 */
RingcoreCoreset *ringcore_coreset_build(const RingcoreDataset *ds, const RingcoreParams *params);

/**
 * Number of coreset points; 0 for null.
 *
 * # Safety
 * `cs` must be null or a live coreset handle.
 */
uintptr_t ringcore_coreset_size(const RingcoreCoreset *cs);

/**
 * Reads entry `i` as (input point index, weight).
 *
 * # Safety
 * `cs` must be valid; `point_out` and `weight_out` must be writable.
 */
RingcoreStatus ringcore_coreset_entry(const RingcoreCoreset *cs,
                                      uintptr_t i,
                                      uintptr_t *point_out,
                                      double *weight_out);

/**
 * Canonical JSON of the coreset; free with `ringcore_string_free`.
 *
 * # Safety
 * `cs` must be a valid coreset handle.
 */
char *ringcore_coreset_to_json(const RingcoreCoreset *cs);

/**
 * # Safety
 * `cs` must come from `ringcore_coreset_build` and not be freed twice.
 */
void ringcore_coreset_free(RingcoreCoreset *cs);

/**
 * # Safety
 * `s` must come from a ringcore function returning `char *`.
 */
void ringcore_string_free(char *s);

/**
 * Evaluates a coreset against its dataset over `trials` random center sets
 * and writes the maximum relative error to `max_rel_err_out`.
 *
 * # Safety
 * All pointers must be valid; `constrained != 0` routes the evaluation
 * through the transport solver.
 */
RingcoreStatus ringcore_eval(const RingcoreDataset *ds,
                             const RingcoreCoreset *cs,
                             uintptr_t trials,
                             uint64_t seed,
                             int32_t constrained,
                             double *max_rel_err_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RINGCORE_H */
