#ifndef TDMTW_H
#define TDMTW_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum TdmStatus {
  TDM_STATUS_OK = 0,
  TDM_STATUS_NULL_POINTER = 1,
  TDM_STATUS_INVALID_UTF8 = 2,
  TDM_STATUS_PARSE = 3,
  TDM_STATUS_INVALID = 4,
  TDM_STATUS_LIMIT = 5,
  TDM_STATUS_PANIC = 6,
} TdmStatus;

// Graph families for `tdm_gen`.
typedef enum TdmFamily {
  TDM_FAMILY_GRID = 0,
  TDM_FAMILY_ROOTED_GRID = 1,
  TDM_FAMILY_HANDLE = 2,
  TDM_FAMILY_VORTEX = 3,
  TDM_FAMILY_CYLINDER = 4,
} TdmFamily;

// Tree decomposition of any kind.
typedef struct TdmDecomposition TdmDecomposition;

// Rooted signed graph.
typedef struct TdmGraph TdmGraph;

// Integer program with two nonzeros per row.
typedef struct TdmInstance TdmInstance;

// Outcome of a solver call.
typedef struct TdmSolveResult TdmSolveResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next failing call on the same thread.
const char *tdm_last_error(void);

// Library version as a static string.
const char *tdm_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void tdm_string_free(char *s);

// Parses the graph text format.
//
// # Safety
// `src` must be a NUL-terminated string; `out` must be writable.
enum TdmStatus tdm_graph_parse(const char *src, struct TdmGraph **out);

// Generates a family member; `m` is used by cylinders only.
//
// # Safety
// `out` must be writable.
enum TdmStatus tdm_gen(enum TdmFamily family, size_t k, size_t m, struct TdmGraph **out);

// # Safety
// `g` must come from this library and not have been freed. Null is ignored.
void tdm_graph_free(struct TdmGraph *g);

// Vertex, edge and root counts; any output pointer may be null.
//
// # Safety
// `g` must be a live graph handle.
enum TdmStatus tdm_graph_counts(const struct TdmGraph *g,
                                size_t *vertices,
                                size_t *edges,
                                size_t *roots);

// Odd cycle packing number.
//
// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum TdmStatus tdm_graph_ocp(const struct TdmGraph *g, size_t *out);

// Graph in its text format.
//
// # Safety
// `g` must be a live graph handle; `out` must be writable.
enum TdmStatus tdm_graph_to_string(const struct TdmGraph *g, char **out);

// Parses the instance text format.
//
// # Safety
// `src` must be a NUL-terminated string; `out` must be writable.
enum TdmStatus tdm_instance_parse(const char *src, struct TdmInstance **out);

// # Safety
// `i` must come from this library and not have been freed. Null is ignored.
void tdm_instance_free(struct TdmInstance *i);

// The instance's rooted signed graph.
//
// # Safety
// `i` must be a live instance handle; `out` must be writable.
enum TdmStatus tdm_instance_graph(const struct TdmInstance *i, struct TdmGraph **out);

// Parses the decomposition text format.
//
// # Safety
// `src` must be a NUL-terminated string; `out` must be writable.
enum TdmStatus tdm_decomposition_parse(const char *src, struct TdmDecomposition **out);

// # Safety
// `d` must come from this library and not have been freed. Null is ignored.
void tdm_decomposition_free(struct TdmDecomposition *d);

// Decomposition in its text format.
//
// # Safety
// `d` must be a live handle; `out` must be writable.
enum TdmStatus tdm_decomposition_to_string(const struct TdmDecomposition *d, char **out);

// Heuristic TDM decomposition and its width.
//
// # Safety
// `g` must be a live graph handle; `out` and `out_width` must be writable.
enum TdmStatus tdm_decompose(const struct TdmGraph *g,
                             size_t budget,
                             uint64_t seed,
                             struct TdmDecomposition **out,
                             size_t *out_width);

// Checks `d` against `g`. `out_valid` receives the verdict; when
// `out_report` is not null it receives one line per violated clause.
//
// # Safety
// `g` and `d` must be live handles; `out_valid` must be writable.
enum TdmStatus tdm_validate(const struct TdmGraph *g,
                            const struct TdmDecomposition *d,
                            bool *out_valid,
                            char **out_report);

// Width of a valid decomposition.
//
// # Safety
// `g` and `d` must be live handles; `out` must be writable.
enum TdmStatus tdm_width(const struct TdmGraph *g, const struct TdmDecomposition *d, size_t *out);

// Dynamic-programming solve. `d` must be a K-free decomposition of the
// instance graph, or null for a heuristic one.
//
// # Safety
// `i` must be a live instance handle, `d` null or live; `out` writable.
enum TdmStatus tdm_solve(const struct TdmInstance *i,
                         const struct TdmDecomposition *d,
                         struct TdmSolveResult **out);

// Exhaustive solve over the box.
//
// # Safety
// `i` must be a live instance handle; `out` must be writable.
enum TdmStatus tdm_oracle(const struct TdmInstance *i, struct TdmSolveResult **out);

// # Safety
// `r` must come from this library and not have been freed. Null is ignored.
void tdm_result_free(struct TdmSolveResult *r);

// True when the result is optimal (false for infeasible).
//
// # Safety
// `r` must be a live result handle; `out` must be writable.
enum TdmStatus tdm_result_is_optimal(const struct TdmSolveResult *r, bool *out);

// Objective value as a decimal string; fails on infeasible results.
//
// # Safety
// `r` must be a live result handle; `out` must be writable.
enum TdmStatus tdm_result_objective(const struct TdmSolveResult *r, char **out);

// Value of variable `var` in the witness, when it fits in 64 bits.
//
// # Safety
// `r` must be a live result handle; `out` must be writable.
enum TdmStatus tdm_result_value_i64(const struct TdmSolveResult *r, size_t var, int64_t *out);

// Result record in its text format.
//
// # Safety
// `r` must be a live result handle; `out` must be writable.
enum TdmStatus tdm_result_to_string(const struct TdmSolveResult *r, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TDMTW_H */
