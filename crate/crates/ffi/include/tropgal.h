#ifndef TROPGAL_H
#define TROPGAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TgStatus {
  TG_STATUS_OK = 0,
  TG_STATUS_NULL_POINTER,
  TG_STATUS_INVALID_UTF8,
  TG_STATUS_INVALID_GRAPH,
  TG_STATUS_INVALID_MOVE,
  TG_STATUS_NOT_FOUND,
  TG_STATUS_EXCISION,
  TG_STATUS_PRECONDITION,
  TG_STATUS_RANK_GAP,
  TG_STATUS_NOT_A_CONE,
  TG_STATUS_CODIMENSION,
  TG_STATUS_NOT_FULL_RANK,
  TG_STATUS_GENERICITY,
  TG_STATUS_NOT_LAMAN,
  TG_STATUS_INTERNAL,
  TG_STATUS_PARSE,
  TG_STATUS_IO,
  TG_STATUS_JSON,
  TG_STATUS_PANIC,
} TgStatus;

// Opaque galaxy.
typedef struct TgGalaxy TgGalaxy;

// Opaque simple graph.
typedef struct TgGraph TgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next failing call on this thread.
const char *tg_last_error_message(void);

// # Safety
// `s` must come from this library or be null.
void tg_string_free(char *s);

// Parses `{"n": .., "edges": [[u, v], ..]}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum TgStatus tg_graph_from_json(const char *json, struct TgGraph **out);

// # Safety
// `out` must be writable.
enum TgStatus tg_graph_laman_db(size_t n, size_t index, struct TgGraph **out);

// # Safety
// `g` must come from this library or be null.
void tg_graph_free(struct TgGraph *g);

// # Safety
// `g` must be a live handle; `out` must be writable.
enum TgStatus tg_graph_to_json(const struct TgGraph *g, char **out);

// # Safety
// `g` must be a live handle; `out` must be writable.
enum TgStatus tg_graph_is_laman(const struct TgGraph *g, bool *out);

// # Safety
// `g` must be a live handle; `out` must be writable.
enum TgStatus tg_realization_number(const struct TgGraph *g, uint64_t seed, uint64_t *out);

// Applies an excision history such as `[[1],[2,3]]` and returns the
// resulting multigraph as JSON.
//
// # Safety
// `g` must be a live handle, `history_json` NUL-terminated, `out` writable.
enum TgStatus tg_excise(const struct TgGraph *g, const char *history_json, char **out);

// Galactic pairing of two excision histories; writes the value and, when
// `result_json` is non-null, the full certificate.
//
// # Safety
// `g` must be a live handle, histories NUL-terminated, `value` writable.
enum TgStatus tg_pairing(const struct TgGraph *g,
                         const char *history_a,
                         const char *history_b,
                         uint64_t seed,
                         uint64_t *value,
                         char **result_json);

// Builds the galaxy; a negative `max_depth` means unbounded.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum TgStatus tg_galaxy_build(const struct TgGraph *g, int64_t max_depth, struct TgGalaxy **out);

// # Safety
// `gal` must come from this library or be null.
void tg_galaxy_free(struct TgGalaxy *gal);

// # Safety
// `gal` must be a live handle; outputs must be writable.
enum TgStatus tg_galaxy_counts(const struct TgGalaxy *gal, size_t *nodes, size_t *edges);

// # Safety
// `gal` must be a live handle; `out` must be writable.
enum TgStatus tg_galaxy_to_dot(const struct TgGalaxy *gal, char **out);

// # Safety
// `gal` must be a live handle; `out` must be writable.
enum TgStatus tg_galaxy_to_json(const struct TgGalaxy *gal, char **out);

// Pairing table as CSV; a null `base_key` selects the root.
//
// # Safety
// `gal` must be a live handle, `base_key` null or NUL-terminated, `out`
// writable.
enum TgStatus tg_galaxy_pairing_table(const struct TgGalaxy *gal,
                                      const char *base_key,
                                      bool use_shortcuts,
                                      uint64_t seed,
                                      char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TROPGAL_H */
