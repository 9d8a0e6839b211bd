#ifndef QMAXFIND_H
#define QMAXFIND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QmfStatus {
  QMF_STATUS_OK = 0,
  QMF_STATUS_NULL_POINTER = 1,
  QMF_STATUS_INVALID_ARGUMENT = 2,
  QMF_STATUS_SIZE = 3,
  QMF_STATUS_INDEX = 4,
  QMF_STATUS_EMPTY_TABLE = 5,
  QMF_STATUS_DUPLICATE = 6,
  QMF_STATUS_PARSE = 7,
  QMF_STATUS_INVARIANT = 8,
  QMF_STATUS_IO = 9,
  QMF_STATUS_PANIC = 10,
} QmfStatus;

typedef enum QmfObjective {
  QMF_OBJECTIVE_MAXIMIZE = 0,
  QMF_OBJECTIVE_MINIMIZE = 1,
} QmfObjective;

typedef enum QmfMode {
  QMF_MODE_BUDGETED = 0,
  QMF_MODE_ORACLE_TERMINATED = 1,
} QmfMode;

typedef enum QmfBasePreset {
  QMF_BASE_PRESET_SIX = 0,
  QMF_BASE_PRESET_PI4 = 1,
} QmfBasePreset;

/**
 * Opaque handle to a finished run.
 */
typedef struct QmfRun QmfRun;

/**
 * Opaque table handle.
 */
typedef struct QmfTable QmfTable;

typedef struct QmfRunSummary {
  size_t final_index;
  uint64_t total_grover_queries;
  uint64_t total_verification_queries;
  uint64_t rounds;
  size_t trace_len;
} QmfRunSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *qmf_status_string(enum QmfStatus status);

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *qmf_last_error_message(void);

/**
 * Builds a table from `len` doubles. Values must be distinct and not NaN.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum QmfStatus qmf_table_new(const double *values,
                             size_t len,
                             enum QmfObjective objective,
                             struct QmfTable **out);

/**
 * Random permutation of `0..n` drawn from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QmfStatus qmf_table_permutation(size_t n, uint64_t seed, struct QmfTable **out);

/**
 * Parses the line-oriented table format (one number per line, `#`
 * comments).
 *
 * # Safety
 * `text` must be a NUL-terminated UTF-8 string; `out` must be writable.
 */
enum QmfStatus qmf_table_parse(const char *text, struct QmfTable **out);

/**
 * # Safety
 * `table` must be NULL or a handle from a `qmf_table_*` constructor that
 * has not been freed.
 */
void qmf_table_free(struct QmfTable *table);

/**
 * Number of items, or 0 for NULL.
 *
 * # Safety
 * `table` must be NULL or a live table handle.
 */
size_t qmf_table_len(const struct QmfTable *table);

/**
 * Classical argmax (argmin for minimizing tables).
 *
 * # Safety
 * `table` must be a live table handle; `out` must be writable.
 */
enum QmfStatus qmf_table_best_index(const struct QmfTable *table, size_t *out);

/**
 * Runs maximum finding on a ChaCha8 stream seeded with `seed`. A `budget`
 * of 0 selects the default `ceil(13.6 sqrt(N))`.
 *
 * # Safety
 * `table` must be a live table handle; `out` must be writable.
 */
enum QmfStatus qmf_find_max(const struct QmfTable *table,
                            uint64_t seed,
                            enum QmfMode mode,
                            uint64_t budget,
                            struct QmfRun **out);

/**
 * Best of `k` budgeted runs on one stream.
 *
 * # Safety
 * `table` must be a live table handle; `out` must be writable.
 */
enum QmfStatus qmf_find_max_boosted(const struct QmfTable *table,
                                    uint64_t seed,
                                    uint32_t k,
                                    uint64_t budget,
                                    struct QmfRun **out);

/**
 * # Safety
 * `run` must be a live run handle; `out` must be writable.
 */
enum QmfStatus qmf_run_summary(const struct QmfRun *run, struct QmfRunSummary *out);

/**
 * Copies up to `cap` accepted guesses into `buf` and stores the full trace
 * length in `out_len`. Pass `cap = 0` to query the length only.
 *
 * # Safety
 * `run` must be a live run handle; `buf` must have room for `cap` values
 * (may be NULL when `cap` is 0); `out_len` must be writable.
 */
enum QmfStatus qmf_run_trace(const struct QmfRun *run, size_t *buf, size_t cap, size_t *out_len);

/**
 * # Safety
 * `run` must be NULL or a live run handle.
 */
void qmf_run_free(struct QmfRun *run);

/**
 * `sin^2((2j+1) asin(sqrt(t/n)))`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QmfStatus qmf_success_probability(uint64_t n, uint64_t t, uint64_t j, double *out);

/**
 * Expected query count from the recurrence, `1 <= t < n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QmfStatus qmf_expected_exact(uint64_t n, uint64_t t, enum QmfBasePreset preset, double *out);

/**
 * Expected query count from the telescoped sum.
 *
 * # Safety
 * `out` must be writable.
 */
enum QmfStatus qmf_expected_telescoped(uint64_t n,
                                       uint64_t t,
                                       enum QmfBasePreset preset,
                                       double *out);

/**
 * Closed-form upper bound `E(N,1) + 6 sqrt(N)(1 - 1/sqrt(t))`.
 *
 * # Safety
 * `out` must be writable.
 */
enum QmfStatus qmf_expected_bound(uint64_t n, uint64_t t, enum QmfBasePreset preset, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QmfStatus qmf_markov_tail_bound(double k, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum QmfStatus qmf_boosted_success_prob(uint32_t k, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QMAXFIND_H */
