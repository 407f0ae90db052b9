#ifndef QORESOLVE_H
#define QORESOLVE_H

#pragma once

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every function.
 */
typedef enum QoStatus {
  QO_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  QO_STATUS_NULL_ARGUMENT = 1,
  /**
   * Malformed or out-of-scope input.
   */
  QO_STATUS_INVALID_INPUT = 2,
  /**
   * The step cap was reached before every branch resolved.
   */
  QO_STATUS_STEP_CAP_EXCEEDED = 3,
  /**
   * The resolver disagreed with direct substitution.
   */
  QO_STATUS_DIVERGENCE = 4,
  /**
   * Any other failure, including a caught panic.
   */
  QO_STATUS_INTERNAL = 5,
} QoStatus;

/**
 * Opaque resolution tree.
 */
typedef struct QoResolution QoResolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *qo_last_error(void);

/**
 * Library version as a static string.
 */
const char *qo_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void qo_string_free(char *s);

/**
 * Resolves the binomial surface z^m + x^a y^b. A `step_cap` of 0 picks a
 * default scaled to the input.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum QoStatus qo_resolve_binomial(uint32_t m,
                                  uint32_t a,
                                  uint32_t b,
                                  size_t step_cap,
                                  struct QoResolution **out);

/**
 * Resolves the surface with multiplicity `m` and pairs written as
 * `"l1,m1;l2,m2"` with rational entries such as `2/3`.
 *
 * # Safety
 * `pairs` must be a nul-terminated string; `out` must be writable.
 */
enum QoStatus qo_resolve_pairs(uint32_t m,
                               const char *pairs,
                               size_t step_cap,
                               struct QoResolution **out);

/**
 * Resolves the input described by a JSON document (`{"m":..,"pairs":..}`,
 * `{"binomial":..}` or `{"state":..}`), honoring its `step_cap` key.
 *
 * # Safety
 * `document` must be a nul-terminated string; `out` must be writable.
 */
enum QoStatus qo_resolve_document(const char *document, struct QoResolution **out);

/**
 * Frees a resolution. Null is ignored.
 *
 * # Safety
 * `r` must come from a resolve call and not be freed twice.
 */
void qo_resolution_free(struct QoResolution *r);

/**
 * Number of distinct chart states in the tree, or 0 for null.
 *
 * # Safety
 * `r` must be null or a live resolution.
 */
size_t qo_resolution_node_count(const struct QoResolution *r);

/**
 * Number of root-to-leaf chart sequences, or 0 for null.
 *
 * # Safety
 * `r` must be null or a live resolution.
 */
uint64_t qo_resolution_path_count(const struct QoResolution *r);

/**
 * Blow-ups on the longest branch.
 *
 * # Safety
 * `r` must be a live resolution; `out` must be writable.
 */
enum QoStatus qo_resolution_longest_path(const struct QoResolution *r, size_t *out);

/**
 * Invariant of the start state, e.g. `(3,0;2,0;1,0;inf)`.
 *
 * # Safety
 * `r` must be a live resolution; `out` must be writable.
 */
enum QoStatus qo_resolution_root_invariant(const struct QoResolution *r, char **out);

/**
 * Text trace of the branches chosen by `path`: `leftmost`, `all`, or a
 * chart list like `x,y,y`. Null means `leftmost`.
 *
 * # Safety
 * `r` must be a live resolution; `path` null or nul-terminated; `out` writable.
 */
enum QoStatus qo_resolution_trace(const struct QoResolution *r, const char *path, char **out);

/**
 * The whole tree as JSON.
 *
 * # Safety
 * `r` must be a live resolution; `out` must be writable.
 */
enum QoStatus qo_resolution_json(const struct QoResolution *r, char **out);

/**
 * The whole tree in Graphviz DOT syntax.
 *
 * # Safety
 * `r` must be a live resolution; `out` must be writable.
 */
enum QoStatus qo_resolution_dot(const struct QoResolution *r, char **out);

/**
 * Checks every chart move for z^m + x^a y^b against direct substitution.
 * Returns `QO_STATUS_DIVERGENCE` on the first disagreement; `edges` (may be
 * null) receives the number of moves checked.
 *
 * # Safety
 * `edges` must be null or writable.
 */
enum QoStatus qo_validate_binomial(uint32_t m,
                                   uint32_t a,
                                   uint32_t b,
                                   size_t step_cap,
                                   size_t *edges);

/**
 * Compares two invariants written like `(3,0;0)`; `out` receives -1, 0 or 1.
 *
 * # Safety
 * `a` and `b` must be nul-terminated; `out` must be writable.
 */
enum QoStatus qo_compare_invariants(const char *a, const char *b, int32_t *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QORESOLVE_H */
