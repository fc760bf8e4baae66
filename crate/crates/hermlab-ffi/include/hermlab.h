/* C interface to the hermlab invariant Hermitian geometry engine. */

#ifndef HERMLAB_H
#define HERMLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum {
  HERMLAB_STATUS_OK = 0,
  HERMLAB_STATUS_NULL_ARGUMENT = 1,
  HERMLAB_STATUS_INVALID_UTF8 = 2,
  /**
   * Parse or validation failure; the error string has details.
   */
  HERMLAB_STATUS_INVALID_INPUT = 3,
  HERMLAB_STATUS_UNKNOWN_NAME = 4,
  /**
   * The search terminated without reaching the residual tolerance.
   */
  HERMLAB_STATUS_SEARCH_DID_NOT_CONVERGE = 5,
  HERMLAB_STATUS_INTERNAL_ERROR = 6,
} HermlabStatus;

/**
 * Opaque handle to a parsed and validated manifold (coframe structure
 * constants plus Hermitian metric).
 */
typedef struct HermlabManifold HermlabManifold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *hermlab_version(void);

/**
 * Frees a string allocated by this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library's string
 * outputs, passed at most once.
 */
void hermlab_string_free(char *s);

/**
 * Parses a manifold spec from JSON text. On success writes a handle the
 * caller must release with [`hermlab_manifold_free`]; on `InvalidInput`
 * writes a diagnostic into `err` (if non-null, free with
 * [`hermlab_string_free`]).
 *
 * # Safety
 * `json` must be null or a valid NUL-terminated string; `out` and `err`
 * must be null or valid for writes.
 */
HermlabStatus hermlab_manifold_parse_json(const char *json, HermlabManifold **out, char **err);

/**
 * Builds a handle from a bundled catalog entry (see `hermlab catalog list`).
 *
 * # Safety
 * `name` must be null or a valid NUL-terminated string; `out` must be
 * null or valid for writes.
 */
HermlabStatus hermlab_manifold_from_catalog(const char *name, HermlabManifold **out);

/**
 * Releases a manifold handle. Null is a no-op.
 *
 * # Safety
 * `m` must be null or a handle from this library, passed at most once.
 */
void hermlab_manifold_free(HermlabManifold *m);

/**
 * Complex dimension of the coframe, or -1 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle from this library.
 */
int hermlab_manifold_dim(const HermlabManifold *m);

/**
 * Serializes the manifold back to spec-file JSON.
 *
 * # Safety
 * `m` must be null or a live handle; `out` null or valid for writes.
 */
HermlabStatus hermlab_manifold_export_json(const HermlabManifold *m, char **out);

/**
 * Runs the full pipeline and writes the report as JSON. `tol <= 0` selects
 * the default tolerance.
 *
 * # Safety
 * `m` must be null or a live handle; `out` null or valid for writes.
 */
HermlabStatus hermlab_inspect_json(const HermlabManifold *m, double tol, char **out);

/**
 * Verifies one identity suite (`"all"`, `"structure"`, `"lemma2"`,
 * `"skl"`, or `"surface"`; null means `"all"`). Writes true into
 * `out_all_pass` iff every applicable check passes.
 *
 * # Safety
 * `m` must be null or a live handle; `suite` null or a valid
 * NUL-terminated string; `out_all_pass` null or valid for writes.
 */
HermlabStatus hermlab_verify(const HermlabManifold *m,
                             const char *suite,
                             double tol,
                             bool *out_all_pass);

/**
 * Runs the Kaehler-like metric search from the handle's metric. Writes the
 * report JSON (with the embedded trace) and whether the search converged;
 * returns `SearchDidNotConverge` when it stalled or hit the iteration cap,
 * with the outputs still populated. `max_iter = 0`, `residual_tol <= 0`,
 * or `step_tol <= 0` select the defaults.
 *
 * # Safety
 * `m` must be null or a live handle; `out_report` and `out_converged`
 * null or valid for writes.
 */
HermlabStatus hermlab_search_json(const HermlabManifold *m,
                                  uintptr_t max_iter,
                                  uint64_t seed,
                                  double residual_tol,
                                  double step_tol,
                                  char **out_report,
                                  bool *out_converged);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HERMLAB_H */
