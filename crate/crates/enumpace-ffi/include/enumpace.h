#ifndef ENUMPACE_H
#define ENUMPACE_H

/* Generated by cbindgen from enumpace-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum EnumpaceStatus {
  /**
   * The call succeeded.
   */
  ENUMPACE_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ENUMPACE_STATUS_NULL_ARGUMENT = 1,
  /**
   * An argument was outside its documented domain.
   */
  ENUMPACE_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Input text or bytes did not parse.
   */
  ENUMPACE_STATUS_PARSE_ERROR = 3,
  /**
   * The run stopped early, for example on an exhausted cost cap.
   */
  ENUMPACE_STATUS_RUN_ERROR = 4,
  /**
   * The enumerator broke its own contract: a duplicate emission, broken
   * cost accounting, or a violated declared bound.
   */
  ENUMPACE_STATUS_CONTRACT_VIOLATION = 5,
  /**
   * No emission is waiting in the hand-off buffer.
   */
  ENUMPACE_STATUS_NOTHING_PENDING = 6,
  /**
   * The accessor needs a prior successful `enumpace_run_to_completion`.
   */
  ENUMPACE_STATUS_NO_COMPLETED_RUN = 7,
} EnumpaceStatus;

/**
 * An enumerator plus everything its runs have produced so far. Opaque to
 * C; create through the `enumpace_*_new` constructors and release with
 * [`enumpace_free`].
 */
typedef struct EnumpaceEnumerator EnumpaceEnumerator;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, empty until
 * one happens. The pointer stays valid until the next failing call on the
 * same thread; do not free it.
 */
const char *enumpace_last_error(void);

/**
 * Build a vertex-cover enumerator from edge-list text (header `V E`, then
 * one `u v` line per edge) and a cover size budget. On success `*out`
 * owns a fresh enumerator.
 *
 * # Safety
 * `edge_list` must be a valid NUL-terminated string and `out` a writable
 * pointer slot.
 */
enum EnumpaceStatus enumpace_vertex_cover_new(const char *edge_list,
                                              uint32_t k,
                                              struct EnumpaceEnumerator **out);

/**
 * Build a Horn-SAT enumerator from DIMACS bytes. On success `*out` owns a
 * fresh enumerator.
 *
 * # Safety
 * `dimacs` must point to `len` readable bytes and `out` must be a writable
 * pointer slot.
 */
enum EnumpaceStatus enumpace_horn_new(const uint8_t *dimacs,
                                      size_t len,
                                      struct EnumpaceEnumerator **out);

/**
 * Build a synthetic enumerator from a profile description in JSON. On
 * success `*out` owns a fresh enumerator.
 *
 * # Safety
 * `spec_json` must be a valid NUL-terminated string and `out` a writable
 * pointer slot.
 */
enum EnumpaceStatus enumpace_synthetic_new(const char *spec_json, struct EnumpaceEnumerator **out);

/**
 * Wrap a fresh enumerator so emissions are released on the thresholds
 * `scale * i^exponent` of the schedule JSON. `inner` is consumed and must
 * not be used or freed afterwards, whether or not the call succeeds; on
 * success `*out` owns the paced enumerator.
 *
 * # Safety
 * `inner` must be an unconsumed handle from a constructor in this library,
 * `schedule_json` a valid NUL-terminated string, and `out` a writable
 * pointer slot.
 */
enum EnumpaceStatus enumpace_regularize(struct EnumpaceEnumerator *inner,
                                        const char *schedule_json,
                                        bool continue_on_violation,
                                        struct EnumpaceEnumerator **out);

/**
 * Run for exactly `budget` ticks unless the enumerator finishes first.
 * Emissions produced along the way queue up for
 * [`enumpace_take_solution`]. A contract breach poisons the handle.
 *
 * # Safety
 * `handle` must be a live pointer from this library.
 */
enum EnumpaceStatus enumpace_advance(struct EnumpaceEnumerator *handle, uint64_t budget);

/**
 * Number of emissions waiting in the hand-off buffer. Null yields 0.
 *
 * # Safety
 * `handle` must be null or a live pointer from this library.
 */
uint64_t enumpace_pending_count(const struct EnumpaceEnumerator *handle);

/**
 * Pop the oldest buffered emission. `*out_solution` receives a
 * NUL-terminated copy to release with [`enumpace_string_free`], and
 * `*out_at_cost` the cumulative tick the emission rode on.
 *
 * # Safety
 * `handle` must be a live pointer from this library; `out_solution` and
 * `out_at_cost` must be writable.
 */
enum EnumpaceStatus enumpace_take_solution(struct EnumpaceEnumerator *handle,
                                           char **out_solution,
                                           uint64_t *out_at_cost);

/**
 * Whether the enumerator has reported termination. Null yields false.
 *
 * # Safety
 * `handle` must be null or a live pointer from this library.
 */
bool enumpace_is_finished(const struct EnumpaceEnumerator *handle);

/**
 * Total ticks consumed so far. Null yields 0.
 *
 * # Safety
 * `handle` must be null or a live pointer from this library.
 */
uint64_t enumpace_cost_consumed(const struct EnumpaceEnumerator *handle);

/**
 * Number of emissions produced so far, taken or not. Null yields 0.
 *
 * # Safety
 * `handle` must be null or a live pointer from this library.
 */
uint64_t enumpace_emitted_count(const struct EnumpaceEnumerator *handle);

/**
 * Drive a fresh enumerator to termination, failing once `cost_cap` ticks
 * are consumed without one. On success the solutions and the delay trace
 * become readable through the accessors below.
 *
 * # Safety
 * `handle` must be a live pointer from this library.
 */
enum EnumpaceStatus enumpace_run_to_completion(struct EnumpaceEnumerator *handle,
                                               uint64_t cost_cap);

/**
 * Number of solutions a completed run produced.
 *
 * # Safety
 * `handle` must be a live pointer from this library; `out` must be
 * writable.
 */
enum EnumpaceStatus enumpace_solution_count(const struct EnumpaceEnumerator *handle, uint64_t *out);

/**
 * Copy the `index`-th solution (0-based, emission order) of a completed
 * run. Release the copy with [`enumpace_string_free`].
 *
 * # Safety
 * `handle` must be a live pointer from this library; `out` must be
 * writable.
 */
enum EnumpaceStatus enumpace_solution(const struct EnumpaceEnumerator *handle,
                                      uint64_t index,
                                      char **out);

/**
 * Number of delays of a completed run: one per emission, plus the trailing
 * postcomputation delay.
 *
 * # Safety
 * `handle` must be a live pointer from this library; `out` must be
 * writable.
 */
enum EnumpaceStatus enumpace_delay_count(const struct EnumpaceEnumerator *handle, uint64_t *out);

/**
 * The `index`-th delay (0-based) of a completed run.
 *
 * # Safety
 * `handle` must be a live pointer from this library; `out` must be
 * writable.
 */
enum EnumpaceStatus enumpace_delay(const struct EnumpaceEnumerator *handle,
                                   uint64_t index,
                                   uint64_t *out);

/**
 * Total ticks of a completed run.
 *
 * # Safety
 * `handle` must be a live pointer from this library; `out` must be
 * writable.
 */
enum EnumpaceStatus enumpace_total_cost(const struct EnumpaceEnumerator *handle, uint64_t *out);

/**
 * Deepest queue a regularized enumerator has reached so far, 0 before the
 * first release. Fails on a handle that never went through
 * [`enumpace_regularize`].
 *
 * # Safety
 * `handle` must be a live pointer from this library; `out` must be
 * writable.
 */
enum EnumpaceStatus enumpace_max_queue(const struct EnumpaceEnumerator *handle, uint64_t *out);

/**
 * Release a string obtained from this library. Null is a no-op.
 *
 * # Safety
 * `s` must be null or an unreleased string from this library.
 */
void enumpace_string_free(char *s);

/**
 * Release an enumerator handle. Null is a no-op.
 *
 * # Safety
 * `handle` must be null or an unreleased handle from this library.
 */
void enumpace_free(struct EnumpaceEnumerator *handle);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENUMPACE_H */
