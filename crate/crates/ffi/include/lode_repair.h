#ifndef LODE_REPAIR_H
#define LODE_REPAIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LrStatus {
  LR_STATUS_OK = 0,
  LR_STATUS_NULL_POINTER = 1,
  LR_STATUS_INVALID_UTF8 = 2,
  LR_STATUS_PARSE = 3,
  LR_STATUS_PARAM = 4,
  LR_STATUS_NOT_PLAYABLE = 5,
  LR_STATUS_BAND_UNREACHABLE = 6,
  LR_STATUS_PANIC = 7,
} LrStatus;

typedef enum LrAlgorithm {
  LR_ALGORITHM_RANDOM_SEARCH = 0,
  LR_ALGORITHM_HILL_CLIMBER = 1,
  LR_ALGORITHM_EVOLUTION_STRATEGY = 2,
  LR_ALGORITHM_MAP_ELITES = 3,
} LrAlgorithm;

/**
 * A parsed level.
 */
typedef struct LrLevel LrLevel;

/**
 * The outcome of one repair run.
 */
typedef struct LrSearchResult LrSearchResult;

/**
 * Fitness of a level against a start level.
 */
typedef struct LrFitness {
  double playability;
  double similarity;
  double total;
  bool playable;
  uint32_t gold_collect;
  uint32_t gold_total;
  uint32_t tiles_explored;
} LrFitness;

typedef struct LrRepairParams {
  uint64_t budget;
  uint32_t mu;
  uint32_t lambda;
  uint32_t init_count;
  uint32_t m_max;
  /**
   * Charge the ES initial population to the budget.
   */
  bool count_initialization;
} LrRepairParams;

typedef struct LrResultSummary {
  bool success;
  uint32_t changes;
  double best_fitness;
  uint64_t evals_used;
  uint64_t iterations;
  /**
   * Archive coverage in `[0, 1]`, or -1 when the run kept no archive.
   */
  double coverage;
  /**
   * Archive QD score, or -1 when the run kept no archive.
   */
  double qd_score;
} LrResultSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or NULL.
 *
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *lr_last_error_message(void);

/**
 * Parses a NUL-terminated level text into a new handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a writable pointer.
 */
enum LrStatus lr_level_parse(const char *text, struct LrLevel **out);

/**
 * Frees a level handle. NULL is ignored.
 *
 * # Safety
 * `level` must come from this library and not have been freed.
 */
void lr_level_free(struct LrLevel *level);

/**
 * Level text, one LF-terminated line per row. Free with [`lr_string_free`].
 * Returns NULL if `level` is NULL.
 *
 * # Safety
 * `level` must be a live handle or NULL.
 */
char *lr_level_serialize(const struct LrLevel *level);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void lr_string_free(char *s);

/**
 * Number of cells whose tiles differ.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum LrStatus lr_level_hamming(const struct LrLevel *a, const struct LrLevel *b, uint32_t *out);

/**
 * Number of tiles drawn with `glyph` (one of `.bB-#GEM`).
 *
 * # Safety
 * `level` must be a live handle and `out` writable.
 */
enum LrStatus lr_level_count_tiles(const struct LrLevel *level, char glyph, uint32_t *out);

/**
 * Fitness of `level` relative to `start`.
 *
 * # Safety
 * `level` and `start` must be live handles and `out` writable.
 */
enum LrStatus lr_evaluate(const struct LrLevel *level,
                          const struct LrLevel *start,
                          struct LrFitness *out);

/**
 * Default parameters for `algo`.
 */
struct LrRepairParams lr_repair_params_default(enum LrAlgorithm algo);

/**
 * Runs one single-threaded repair of `start`.
 *
 * `params` may be NULL for the algorithm's defaults.
 *
 * # Safety
 * `start` must be a live handle, `params` NULL or readable, `out` writable.
 */
enum LrStatus lr_repair(const struct LrLevel *start,
                        enum LrAlgorithm algo,
                        const struct LrRepairParams *params,
                        uint64_t seed,
                        struct LrSearchResult **out);

/**
 * Headline numbers of a repair run.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum LrStatus lr_result_summary(const struct LrSearchResult *result, struct LrResultSummary *out);

/**
 * Copies the best level of a run into a new handle.
 *
 * # Safety
 * `result` must be a live handle and `out` writable.
 */
enum LrStatus lr_result_best(const struct LrSearchResult *result, struct LrLevel **out);

/**
 * Frees a result handle. NULL is ignored.
 *
 * # Safety
 * `result` must come from this library and not have been freed.
 */
void lr_result_free(struct LrSearchResult *result);

/**
 * Breaks a playable level so that between `lo`% and `hi`% of its gold is reachable.
 *
 * # Safety
 * `playable` must be a live handle and `out` writable.
 */
enum LrStatus lr_corrupt(const struct LrLevel *playable,
                         uint32_t lo,
                         uint32_t hi,
                         uint64_t seed,
                         uint32_t max_attempts,
                         struct LrLevel **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LODE_REPAIR_H */
