#ifndef DELTACOVER_H
#define DELTACOVER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum DcStatus {
  DC_STATUS_OK = 0,
  DC_STATUS_NULL_POINTER = 1,
  DC_STATUS_INVALID_GRAPH = 2,
  DC_STATUS_INVALID_DELTA = 3,
  DC_STATUS_INVALID_POINT = 4,
  DC_STATUS_PARSE = 5,
  DC_STATUS_NOT_A_COVER = 6,
  DC_STATUS_BUDGET_EXHAUSTED = 7,
  DC_STATUS_NOT_APPLICABLE = 8,
  DC_STATUS_INTERNAL = 9,
} DcStatus;

/**
 * Opaque cover handle.
 */
typedef struct DcCover DcCover;

/**
 * Opaque graph handle.
 */
typedef struct DcGraph DcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a graph on `n` vertices from `m` edges given as `2m` zero-based
 * vertex ids.
 *
 * # Safety
 * `edges` must point to `2 * m` readable values (or be null when `m == 0`);
 * `out` must be writable.
 */
enum DcStatus dc_graph_new(size_t n, const size_t *edges, size_t m, struct DcGraph **out);

/**
 * Parses a graph in the `p n m` / `e u v` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum DcStatus dc_graph_parse(const char *text, struct DcGraph **out);

/**
 * # Safety
 * `g` must come from this library and not be freed twice; null is ignored.
 */
void dc_graph_free(struct DcGraph *g);

/**
 * # Safety
 * `g` must be a live handle or null (returns 0).
 */
size_t dc_graph_vertex_count(const struct DcGraph *g);

/**
 * # Safety
 * `g` must be a live handle or null (returns 0).
 */
size_t dc_graph_edge_count(const struct DcGraph *g);

/**
 * Minimum cover. Zero limits select the defaults (10^7 nodes, 60 s). When
 * the limits stop the search the best cover found is still returned and
 * `*optimal` is false.
 *
 * # Safety
 * `g` must be a live handle; `out` and `optimal` must be writable.
 */
enum DcStatus dc_min_cover(const struct DcGraph *g,
                           int64_t delta_num,
                           int64_t delta_den,
                           uint64_t max_nodes,
                           uint64_t max_millis,
                           struct DcCover **out,
                           bool *optimal);

/**
 * Minimum cover of a forest; `NotApplicable` otherwise.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum DcStatus dc_tree_cover(const struct DcGraph *g,
                            int64_t delta_num,
                            int64_t delta_den,
                            struct DcCover **out);

/**
 * Approximate cover. When `claimed_factor` is non-null it receives the
 * guaranteed factor as an `a/b` string, released with [`dc_string_free`].
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable; `claimed_factor` must
 * be writable or null.
 */
enum DcStatus dc_approx_cover(const struct DcGraph *g,
                              int64_t delta_num,
                              int64_t delta_den,
                              uint64_t max_nodes,
                              uint64_t max_millis,
                              struct DcCover **out,
                              char **claimed_factor);

/**
 * Sets `*is_cover` to whether `s` is a δ-cover of `g`.
 *
 * # Safety
 * `g` and `s` must be live handles; `is_cover` must be writable.
 */
enum DcStatus dc_verify(const struct DcGraph *g,
                        const struct DcCover *s,
                        int64_t delta_num,
                        int64_t delta_den,
                        bool *is_cover);

/**
 * Parses a cover of `g` in the `v u` / `i u v a/b` text format.
 *
 * # Safety
 * `g` must be a live handle; `text` NUL-terminated; `out` writable.
 */
enum DcStatus dc_cover_parse(const struct DcGraph *g, const char *text, struct DcCover **out);

/**
 * # Safety
 * `s` must be a live handle or null (returns 0).
 */
size_t dc_cover_len(const struct DcCover *s);

/**
 * Cover in the canonical text format; release with [`dc_string_free`].
 * Null when `s` is null.
 *
 * # Safety
 * `s` must be a live handle or null.
 */
char *dc_cover_to_string(const struct DcCover *s);

/**
 * # Safety
 * `s` must come from this library and not be freed twice; null is ignored.
 */
void dc_cover_free(struct DcCover *s);

/**
 * # Safety
 * `s` must come from this library and not be freed twice; null is ignored.
 */
void dc_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library and valid until the next call on the same thread.
 */
const char *dc_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DELTACOVER_H */
