/* C interface to the projrecon library.
 *
 * Objects are opaque handles created by *_create / *_from_json / *_sample
 * functions and released with the matching *_free. Every fallible call
 * returns a projrecon_status; on failure projrecon_last_error() describes the
 * problem for the calling thread. Strings returned through char** out
 * parameters are owned by the caller and released with projrecon_string_free.
 * Tuple indices in JSON documents are zero-based.
 */
#ifndef PROJRECON_H
#define PROJRECON_H

#include <stddef.h>
#include <stdint.h>

#if defined(PROJRECON_BUILDING_LIBRARY)
#define PROJRECON_API __attribute__((visibility("default")))
#else
#define PROJRECON_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  PROJRECON_OK = 0,
  PROJRECON_ERR_INVALID_ARGUMENT = 1,
  PROJRECON_ERR_DIMENSION_MISMATCH = 2,
  PROJRECON_ERR_DUPLICATE_POINTS = 3,
  PROJRECON_ERR_NONPOSITIVE_WEIGHT = 4,
  PROJRECON_ERR_WEIGHT_SUM_MISMATCH = 5,
  PROJRECON_ERR_RANK_DEFICIENT = 6,
  PROJRECON_ERR_TUPLE_BUDGET_EXCEEDED = 7,
  PROJRECON_ERR_INFEASIBLE = 8,
  PROJRECON_ERR_SUPERCRITICAL_REGIME = 9,
  PROJRECON_ERR_DEGENERATE_INSTANCE = 10,
  PROJRECON_ERR_INVALID_ORDER = 11,
  PROJRECON_ERR_CONFIG = 12,
  PROJRECON_ERR_PARSE = 13,
  PROJRECON_ERR_INTERNAL = 99
} projrecon_status;

typedef enum {
  PROJRECON_LAW_GAUSSIAN = 0,
  PROJRECON_LAW_SPHERE = 1
} projrecon_law;

typedef enum {
  PROJRECON_REGIME_SUBCRITICAL = 0,
  PROJRECON_REGIME_CRITICAL = 1,
  PROJRECON_REGIME_SUPERCRITICAL = 2
} projrecon_regime;

typedef enum {
  PROJRECON_VERDICT_UNIQUE_SOLUTION = 0,
  PROJRECON_VERDICT_FINITELY_SUPPORTED_FAMILY = 1,
  PROJRECON_VERDICT_UNBOUNDED_FAMILY = 2
} projrecon_verdict;

typedef enum {
  PROJRECON_TRIALS_UNIQUENESS = 0,
  PROJRECON_TRIALS_CRITICAL = 1,
  PROJRECON_TRIALS_SW_SEPARABILITY = 2
} projrecon_trial_kind;

typedef struct projrecon_measure projrecon_measure;
typedef struct projrecon_stack projrecon_stack;
typedef struct projrecon_directions projrecon_directions;
typedef struct projrecon_report projrecon_report;

/* Tolerances; a negative accept_tol selects 1e-8 * (1 + max|z|). */
typedef struct {
  double accept_tol;
  double dedup_tol;
  double merge_tol;
  double zero_tol;
  double separation_tol;
  double uniqueness_tol;
  double feasibility_tol;
  uint64_t tuple_budget;
} projrecon_tolerances;

PROJRECON_API const char* projrecon_version(void);
PROJRECON_API const char* projrecon_last_error(void);
PROJRECON_API const char* projrecon_status_name(projrecon_status status);
PROJRECON_API void projrecon_string_free(char* s);
PROJRECON_API void projrecon_default_tolerances(projrecon_tolerances* out);

/* Measures. `points` holds n rows of `dim` coordinates (row-major). */
PROJRECON_API projrecon_status projrecon_measure_create(
    size_t dim, size_t n, const double* points, const double* weights,
    double dedup_tol, projrecon_measure** out);
PROJRECON_API projrecon_status projrecon_measure_from_json(
    const char* json, projrecon_measure** out);
PROJRECON_API projrecon_status projrecon_measure_to_json(
    const projrecon_measure* m, char** out);
PROJRECON_API size_t projrecon_measure_dim(const projrecon_measure* m);
PROJRECON_API size_t projrecon_measure_size(const projrecon_measure* m);
PROJRECON_API projrecon_status projrecon_measure_pushforward(
    const projrecon_measure* m, size_t rows, const double* matrix,
    double merge_tol, projrecon_measure** out);
PROJRECON_API projrecon_status projrecon_measures_equal(
    const projrecon_measure* a, const projrecon_measure* b, double tol,
    int* equal);
PROJRECON_API void projrecon_measure_free(projrecon_measure* m);

/* Projection stacks. */
PROJRECON_API projrecon_status projrecon_stack_sample(
    size_t dim, const size_t* block_dims, size_t num_blocks,
    projrecon_law law, uint64_t seed, projrecon_stack** out);
PROJRECON_API projrecon_status projrecon_stack_from_json(
    const char* json, projrecon_stack** out);
PROJRECON_API projrecon_status projrecon_stack_to_json(
    const projrecon_stack* s, char** out);
PROJRECON_API size_t projrecon_stack_num_blocks(const projrecon_stack* s);
PROJRECON_API void projrecon_stack_free(projrecon_stack* s);

PROJRECON_API projrecon_regime projrecon_classify_regime(
    size_t dim, const size_t* block_dims, size_t num_blocks);

/* Directions for the sliced distance. */
PROJRECON_API projrecon_status projrecon_directions_sample(
    size_t dim, size_t p, uint64_t seed, projrecon_directions** out);
PROJRECON_API projrecon_status projrecon_directions_from_json(
    const char* json, projrecon_directions** out);
PROJRECON_API projrecon_status projrecon_directions_from_stack(
    const projrecon_stack* s, projrecon_directions** out);
PROJRECON_API projrecon_status projrecon_directions_to_json(
    const projrecon_directions* d, char** out);
PROJRECON_API void projrecon_directions_free(projrecon_directions* d);

/* Reconstruction. A NULL tolerance pointer selects the defaults. */
PROJRECON_API projrecon_status projrecon_candidate_support_json(
    const projrecon_measure* z, const projrecon_stack* s,
    const projrecon_tolerances* tols, char** out);
PROJRECON_API projrecon_status projrecon_reconstruct(
    const projrecon_measure* z, const projrecon_stack* s,
    const projrecon_tolerances* tols, projrecon_report** out);
PROJRECON_API projrecon_verdict projrecon_report_verdict(
    const projrecon_report* r);
PROJRECON_API size_t projrecon_report_support_size(const projrecon_report* r);
PROJRECON_API projrecon_status projrecon_report_to_json(
    const projrecon_report* r, char** out);
PROJRECON_API void projrecon_report_free(projrecon_report* r);

/* Sliced and one-dimensional distances. */
PROJRECON_API projrecon_status projrecon_empirical_sw(
    const projrecon_measure* a, const projrecon_measure* b,
    const projrecon_directions* d, double* out);
PROJRECON_API projrecon_status projrecon_wasserstein2_1d(
    const projrecon_measure* a, const projrecon_measure* b, double* out);
PROJRECON_API projrecon_status projrecon_null_sw_witness(
    const projrecon_measure* z, const projrecon_directions* d,
    double translation, uint64_t seed, projrecon_measure** out);

/* Symmetric 2n-gon instance as {"n", "Z", "Y", "stack"} JSON. */
PROJRECON_API projrecon_status projrecon_counterexample_json(uint32_t n,
                                                              char** out);

/* Runs a Monte Carlo experiment described by a TrialConfig JSON document.
 * `summary` receives the TrialSummary JSON, `csv` (optional) the support
 * cardinality histogram, `passed` (optional) whether every trial succeeded.
 * Wall time is included only when include_timing is nonzero. */
PROJRECON_API projrecon_status projrecon_trials_run(
    projrecon_trial_kind kind, const char* config_json, int include_timing,
    char** summary, char** csv, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* PROJRECON_H */
