#ifndef GRAPHK_H
#define GRAPHK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum GkStatus {
  GK_STATUS_OK = 0,
  GK_STATUS_NULL_POINTER = 1,
  GK_STATUS_INVALID_UTF8 = 2,
  GK_STATUS_IO = 3,
  GK_STATUS_PARSE = 4,
  GK_STATUS_INVALID_ARGUMENT = 5,
  GK_STATUS_BLOCK_SIZE = 6,
  GK_STATUS_TOO_SMALL = 7,
  GK_STATUS_DEGENERATE_NORMALIZATION = 8,
  GK_STATUS_COMPRESSOR_UNAVAILABLE = 9,
  /**
   * A Rust panic was caught at the boundary.
   */
  GK_STATUS_INTERNAL = 10,
} GkStatus;

/**
 * Undirected graph handle.
 */
typedef struct GkGraph GkGraph;

/**
 * CTM block table handle.
 */
typedef struct GkTable GkTable;

/**
 * Normalized BDM result.
 */
typedef struct GkNbdm {
  double raw;
  double min;
  double max;
  double normalized;
  bool raw_exceeds_max;
  size_t fallback_lookups;
} GkNbdm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *gk_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *gk_version(void);

/**
 * Loads a native or external `hex<TAB>km` table file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GkStatus gk_table_load(const char *path, struct GkTable **out);

/**
 * The built-in d=3 table.
 *
 * # Safety
 * `out` must be writable.
 */
enum GkStatus gk_table_builtin(struct GkTable **out);

/**
 * Block side of a table, or 0 for a null handle.
 *
 * # Safety
 * `table` must be null or a live handle.
 */
size_t gk_table_side(const struct GkTable *table);

/**
 * km of the block whose cells, row-major with the first cell in the most
 * significant of the low d*d bits, are `bits`.
 *
 * # Safety
 * `table` must be a live handle; `km` and `fallback` must be writable.
 */
enum GkStatus gk_table_km(const struct GkTable *table, uint16_t bits, double *km, bool *fallback);

/**
 * # Safety
 * `table` must be null or a handle not yet freed.
 */
void gk_table_free(struct GkTable *table);

/**
 * Edgeless graph on `n` vertices.
 *
 * # Safety
 * `out` must be writable.
 */
enum GkStatus gk_graph_new(size_t n, struct GkGraph **out);

/**
 * # Safety
 * `graph` must be a live handle.
 */
enum GkStatus gk_graph_add_edge(struct GkGraph *graph, size_t u, size_t v);

/**
 * Reads an edge-list file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum GkStatus gk_graph_read(const char *path, struct GkGraph **out);

/**
 * Parses edge-list text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum GkStatus gk_graph_parse(const char *text, struct GkGraph **out);

/**
 * Generates a graph from a JSON spec such as
 * `{"family":"ba","n":100,"m":2,"seed":1}`.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string; `out` must be writable.
 */
enum GkStatus gk_graph_generate(const char *spec_json, struct GkGraph **out);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t gk_graph_order(const struct GkGraph *graph);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t gk_graph_edge_count(const struct GkGraph *graph);

/**
 * # Safety
 * `graph` must be null or a handle not yet freed.
 */
void gk_graph_free(struct GkGraph *graph);

/**
 * BDM of an n x n matrix given as row-major bytes, nonzero meaning 1.
 *
 * # Safety
 * `cells` must point to `n * n` readable bytes; `table` must be a live
 * handle; `out` must be writable.
 */
enum GkStatus gk_matrix_bdm(const uint8_t *cells,
                            size_t n,
                            const struct GkTable *table,
                            double *out);

/**
 * BDM of the adjacency matrix in the graph's own vertex order.
 *
 * # Safety
 * `graph` and `table` must be live handles; `out` must be writable.
 */
enum GkStatus gk_graph_bdm(const struct GkGraph *graph, const struct GkTable *table, double *out);

/**
 * Normalized BDM minimized over the identity and `perms - 1` seeded
 * random vertex orderings.
 *
 * # Safety
 * `graph` and `table` must be live handles; `out` must be writable.
 */
enum GkStatus gk_nbdm(const struct GkGraph *graph,
                      const struct GkTable *table,
                      size_t perms,
                      uint64_t seed,
                      struct GkNbdm *out);

/**
 * log2 of the automorphism group order and the number of vertex orbits.
 *
 * # Safety
 * `graph` must be a live handle; `log2_order` and `orbits` must be
 * writable.
 */
enum GkStatus gk_aut(const struct GkGraph *graph, double *log2_order, size_t *orbits);

/**
 * DEFLATE length in bytes of the bit-packed adjacency matrix.
 *
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum GkStatus gk_compressed_length(const struct GkGraph *graph, uint32_t level, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRAPHK_H */
