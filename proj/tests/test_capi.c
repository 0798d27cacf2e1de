#include <math.h>
#include <stdio.h>
#include <string.h>

#include "projrecon/projrecon.h"

static int failures = 0;

#define EXPECT(cond)                                              \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,      \
              __LINE__, #cond);                                   \
      ++failures;                                                 \
    }                                                             \
  } while (0)

static void test_measures(void) {
  const double pts[] = {0.0, 1.0};
  const double w[] = {0.5, 0.5};
  projrecon_measure* m = NULL;
  EXPECT(projrecon_measure_create(1, 2, pts, w, 1e-9, &m) == PROJRECON_OK);
  EXPECT(projrecon_measure_dim(m) == 1);
  EXPECT(projrecon_measure_size(m) == 2);

  const double dup[] = {0.0, 0.0};
  projrecon_measure* bad = NULL;
  EXPECT(projrecon_measure_create(1, 2, dup, w, 1e-9, &bad) ==
         PROJRECON_ERR_DUPLICATE_POINTS);
  EXPECT(bad == NULL);
  EXPECT(strlen(projrecon_last_error()) > 0);

  const double heavy[] = {0.5, 0.6};
  EXPECT(projrecon_measure_create(1, 2, pts, heavy, 1e-9, &bad) ==
         PROJRECON_ERR_WEIGHT_SUM_MISMATCH);

  char* json = NULL;
  EXPECT(projrecon_measure_to_json(m, &json) == PROJRECON_OK);
  projrecon_measure* back = NULL;
  EXPECT(projrecon_measure_from_json(json, &back) == PROJRECON_OK);
  int equal = 0;
  EXPECT(projrecon_measures_equal(m, back, 0.0, &equal) == PROJRECON_OK);
  EXPECT(equal == 1);
  projrecon_string_free(json);

  const double plane[] = {0.0, 5.0, 0.0, 7.0};
  projrecon_measure* m2 = NULL;
  EXPECT(projrecon_measure_create(2, 2, plane, w, 1e-9, &m2) == PROJRECON_OK);
  const double first_axis[] = {1.0, 0.0};
  projrecon_measure* img = NULL;
  EXPECT(projrecon_measure_pushforward(m2, 1, first_axis, 1e-9, &img) ==
         PROJRECON_OK);
  EXPECT(projrecon_measure_size(img) == 1);

  double w2 = -1.0;
  EXPECT(projrecon_wasserstein2_1d(m, back, &w2) == PROJRECON_OK);
  EXPECT(w2 == 0.0);
  EXPECT(projrecon_wasserstein2_1d(m, m2, &w2) ==
         PROJRECON_ERR_DIMENSION_MISMATCH);

  EXPECT(projrecon_measure_from_json("{not json", &bad) == PROJRECON_ERR_PARSE);

  projrecon_measure_free(img);
  projrecon_measure_free(m2);
  projrecon_measure_free(back);
  projrecon_measure_free(m);
  projrecon_measure_free(NULL);
}

static void test_reconstruction(void) {
  const size_t dims[] = {2, 2};
  EXPECT(projrecon_classify_regime(3, dims, 2) ==
         PROJRECON_REGIME_SUPERCRITICAL);
  projrecon_stack* s = NULL;
  EXPECT(projrecon_stack_sample(3, dims, 2, PROJRECON_LAW_GAUSSIAN, 4, &s) ==
         PROJRECON_OK);
  EXPECT(projrecon_stack_num_blocks(s) == 2);

  const double pts[] = {0.3, -1.2, 0.8, 1.1, 0.4, -0.7, -0.5, 2.0, 0.1};
  const double w[] = {0.2, 0.3, 0.5};
  projrecon_measure* z = NULL;
  EXPECT(projrecon_measure_create(3, 3, pts, w, 1e-9, &z) == PROJRECON_OK);

  projrecon_report* r = NULL;
  EXPECT(projrecon_reconstruct(z, s, NULL, &r) == PROJRECON_OK);
  EXPECT(projrecon_report_verdict(r) == PROJRECON_VERDICT_UNIQUE_SOLUTION);
  EXPECT(projrecon_report_support_size(r) == 3);
  char* json = NULL;
  EXPECT(projrecon_report_to_json(r, &json) == PROJRECON_OK);
  EXPECT(strstr(json, "\"unique_solution\"") != NULL);
  projrecon_string_free(json);
  projrecon_report_free(r);

  projrecon_tolerances tols;
  projrecon_default_tolerances(&tols);
  EXPECT(tols.accept_tol < 0.0);
  tols.tuple_budget = 4;
  EXPECT(projrecon_candidate_support_json(z, s, &tols, &json) ==
         PROJRECON_ERR_TUPLE_BUDGET_EXCEEDED);

  const size_t bad_dims[] = {3};
  projrecon_stack* bad = NULL;
  EXPECT(projrecon_stack_sample(3, bad_dims, 1, PROJRECON_LAW_GAUSSIAN, 0,
                                &bad) == PROJRECON_ERR_DIMENSION_MISMATCH);

  projrecon_measure_free(z);
  projrecon_stack_free(s);
}

static void test_counterexample(void) {
  char* json = NULL;
  EXPECT(projrecon_counterexample_json(2, &json) ==
         PROJRECON_ERR_INVALID_ORDER);
  EXPECT(projrecon_counterexample_json(3, &json) == PROJRECON_OK);
  EXPECT(strstr(json, "\"stack\"") != NULL);
  projrecon_string_free(json);
}

static void test_sliced(void) {
  const double pts[] = {0.0, 0.0, 1.0, 0.5, -0.3, 2.0};
  const double w[] = {0.25, 0.25, 0.5};
  projrecon_measure* z = NULL;
  EXPECT(projrecon_measure_create(2, 3, pts, w, 1e-9, &z) == PROJRECON_OK);
  projrecon_directions* d = NULL;
  EXPECT(projrecon_directions_sample(2, 2, 6, &d) == PROJRECON_OK);
  projrecon_measure* witness = NULL;
  EXPECT(projrecon_null_sw_witness(z, d, 1.0, 3, &witness) == PROJRECON_OK);
  double sw = 1.0;
  EXPECT(projrecon_empirical_sw(witness, z, d, &sw) == PROJRECON_OK);
  EXPECT(sw < 1e-12);
  projrecon_directions_free(d);

  EXPECT(projrecon_directions_sample(2, 3, 6, &d) == PROJRECON_OK);
  projrecon_measure* none = NULL;
  EXPECT(projrecon_null_sw_witness(z, d, 1.0, 3, &none) ==
         PROJRECON_ERR_SUPERCRITICAL_REGIME);
  projrecon_directions_free(d);
  projrecon_measure_free(witness);
  projrecon_measure_free(z);
}

static void test_trials(void) {
  const char* cfg = "{\"d\": 3, \"n\": 4, \"block_dims\": [2, 2], \"trials\": 20, \"seed\": 1}";
  char* a = NULL;
  char* b = NULL;
  char* csv = NULL;
  int passed = 0;
  EXPECT(projrecon_trials_run(PROJRECON_TRIALS_UNIQUENESS, cfg, 0, &a, &csv,
                              &passed) == PROJRECON_OK);
  EXPECT(passed == 1);
  EXPECT(strcmp(csv, "cardinality,frequency\n4,20\n") == 0);
  EXPECT(projrecon_trials_run(PROJRECON_TRIALS_UNIQUENESS, cfg, 0, &b, NULL,
                              NULL) == PROJRECON_OK);
  EXPECT(strcmp(a, b) == 0);
  EXPECT(strstr(a, "wall_time") == NULL);
  projrecon_string_free(a);
  projrecon_string_free(b);
  projrecon_string_free(csv);

  EXPECT(projrecon_trials_run(PROJRECON_TRIALS_UNIQUENESS,
                              "{\"d\": 3, \"block_dims\": [1, 1]}", 0, &a,
                              NULL, NULL) == PROJRECON_ERR_CONFIG);
}

int main(void) {
  EXPECT(strlen(projrecon_version()) > 0);
  EXPECT(strcmp(projrecon_status_name(PROJRECON_ERR_INFEASIBLE), "Infeasible") == 0);
  test_measures();
  test_reconstruction();
  test_counterexample();
  test_sliced();
  test_trials();
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
