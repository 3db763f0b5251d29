#ifndef SUPERPOLY_H
#define SUPERPOLY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Values accepted by the `mode` argument of [`sp_solve`].
typedef enum SpMode {
  SP_MODE_EXACT = 0,
  SP_MODE_STEINER = 1,
  SP_MODE_GREEDY = 2,
  SP_MODE_BRUTE = 3,
  SP_MODE_DECK = 4,
  SP_MODE_ALIGNED = 5,
} SpMode;

typedef enum SpStatus {
  SP_STATUS_OK = 0,
  SP_STATUS_NULL_POINTER = 1,
  SP_STATUS_INVALID_UTF8 = 2,
  SP_STATUS_PARSE = 3,
  SP_STATUS_INVALID_ARGUMENT = 4,
  SP_STATUS_GRAPH_TOO_SMALL = 5,
  SP_STATUS_PROVENANCE_MISMATCH = 6,
  SP_STATUS_SOLVE_FAILED = 7,
  SP_STATUS_PANIC = 8,
} SpStatus;

// A parsed instance together with its reduction provenance, if any.
typedef struct SpInstance SpInstance;

// The outcome of one [`sp_solve`] call.
typedef struct SpResult SpResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *sp_last_error(void);

// Parses an instance file.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum SpStatus sp_instance_from_text(const char *text, struct SpInstance **out);

// Builds the coloring reduction of a graph given in edge-list text.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum SpStatus sp_instance_from_graph_text(const char *text,
                                          bool two_color,
                                          struct SpInstance **out);

// Builds the set-cover reduction of a set system given in text.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum SpStatus sp_instance_from_setcover_text(const char *text, struct SpInstance **out);

// # Safety
// `inst` must be null or a handle from this library not yet freed.
void sp_instance_free(struct SpInstance *inst);

// Returns 0 for a null handle.
//
// # Safety
// `inst` must be null or a live handle.
size_t sp_instance_piece_count(const struct SpInstance *inst);

// Returns 0 for a null handle.
//
// # Safety
// `inst` must be null or a live handle.
size_t sp_instance_total_cells(const struct SpInstance *inst);

// Serializes the instance, provenance header included.
//
// # Safety
// `inst` must be a live handle; `out` must be writable.
enum SpStatus sp_instance_to_text(const struct SpInstance *inst, char **out);

// Solves `inst` with one of the [`SpMode`] values. `timeout_ms == 0` means
// no limit; `threads == 0` is treated as 1. A timed-out search still
// succeeds and reports its incumbent, see [`sp_result_timed_out`].
//
// # Safety
// `inst` must be a live handle; `out` must be writable.
enum SpStatus sp_solve(const struct SpInstance *inst,
                       uint32_t mode,
                       uint64_t timeout_ms,
                       size_t threads,
                       struct SpResult **out);

// # Safety
// `res` must be null or a live handle.
size_t sp_result_size(const struct SpResult *res);

// # Safety
// `res` must be null or a live handle.
bool sp_result_optimal(const struct SpResult *res);

// # Safety
// `res` must be null or a live handle.
bool sp_result_timed_out(const struct SpResult *res);

// # Safety
// `res` must be null or a live handle.
uint64_t sp_result_nodes(const struct SpResult *res);

// The layout in the text format, one `place <name> <dx> <dy>` line per piece.
//
// # Safety
// `res` must be a live handle; `out` must be writable.
enum SpStatus sp_result_layout_text(const struct SpResult *res, char **out);

// # Safety
// `res` must be null or a handle from this library not yet freed.
void sp_result_free(struct SpResult *res);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void sp_string_free(char *s);

// Counts the offsets at which `piece` embeds in `container`; both are
// polyomino texts.
//
// # Safety
// Both strings must be NUL-terminated; `count` must be writable.
enum SpStatus sp_is_superpolyomino(const char *container, const char *piece, size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERPOLY_H */
