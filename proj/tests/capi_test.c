/* Exercises the C API from C: handles, status codes, callbacks. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qgrass/qgrass.h"

static int failures = 0;

#define CHECK(cond)                                               \
  do {                                                            \
    if (!(cond)) {                                                \
      fprintf(stderr, "%s:%d: CHECK(%s)\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                 \
    }                                                             \
  } while (0)

struct tally {
  int records;
  int passed;
  int matched;
  const char* needle;
  int stop_after;
};

static int count_records(const char* json, double elapsed_ms, int passed, void* user) {
  struct tally* t = (struct tally*)user;
  (void)elapsed_ms;
  ++t->records;
  t->passed += passed;
  if (t->needle && strstr(json, t->needle)) ++t->matched;
  return t->stop_after > 0 && t->records >= t->stop_after;
}

static qgrass_config* make(int q, int n, int k, int i, const char* suite) {
  qgrass_config* cfg = NULL;
  CHECK(qgrass_config_create(&cfg) == QGRASS_OK);
  qgrass_config_set_q(cfg, q);
  qgrass_config_set_n(cfg, n);
  qgrass_config_set_k(cfg, k);
  qgrass_config_set_i(cfg, i);
  CHECK(qgrass_config_set_suite(cfg, suite) == QGRASS_OK);
  return cfg;
}

int main(void) {
  CHECK(qgrass_version() != NULL && strlen(qgrass_version()) > 0);
  CHECK(strcmp(qgrass_status_string(QGRASS_OK), "ok") == 0);

  /* null handles */
  CHECK(qgrass_config_create(NULL) == QGRASS_E_NULL);
  CHECK(qgrass_config_set_n(NULL, 4) == QGRASS_E_NULL);
  CHECK(qgrass_verify(NULL, count_records, NULL, NULL) == QGRASS_E_NULL);
  qgrass_config_destroy(NULL);

  {
    qgrass_config* cfg = make(2, 4, 2, -1, "algebra");
    CHECK(qgrass_config_set_suite(cfg, "bogus") == QGRASS_E_INVALID_ARGUMENT);
    CHECK(strstr(qgrass_last_error(), "bogus") != NULL);
    CHECK(qgrass_config_set_mode(cfg, "sideways") == QGRASS_E_INVALID_ARGUMENT);
    CHECK(qgrass_config_set_workers(cfg, 0) == QGRASS_E_INVALID_ARGUMENT);
    CHECK(qgrass_verify(cfg, NULL, NULL, NULL) == QGRASS_E_NULL);
    CHECK(qgrass_config_validate(cfg) == QGRASS_OK);

    struct tally t = {0, 0, 0, "\"suite\":\"algebra\"", 0};
    int all = 0;
    CHECK(qgrass_verify(cfg, count_records, &t, &all) == QGRASS_OK);
    CHECK(all == 1);
    CHECK(t.records > 50 && t.passed == t.records && t.matched == t.records);

    struct tally stop = {0, 0, 0, NULL, 3};
    CHECK(qgrass_verify(cfg, count_records, &stop, NULL) == QGRASS_E_CALLBACK);
    CHECK(stop.records == 3);
    qgrass_config_destroy(cfg);
  }

  {
    /* precondition failures are usage errors */
    qgrass_config* cfg = make(2, 4, 5, -1, "all");
    CHECK(qgrass_config_validate(cfg) == QGRASS_E_INVALID_ARGUMENT);
    qgrass_config_destroy(cfg);
    cfg = make(4, 7, 3, 2, "graph");
    CHECK(qgrass_config_validate(cfg) == QGRASS_E_INVALID_ARGUMENT);
    qgrass_config_destroy(cfg);
    cfg = make(2, 7, 3, -1, "graph");
    CHECK(qgrass_config_validate(cfg) == QGRASS_E_INVALID_ARGUMENT);
    qgrass_config_destroy(cfg);
    cfg = make(2, 7, 3, 3, "entries");
    CHECK(qgrass_config_validate(cfg) == QGRASS_E_INVALID_ARGUMENT);
    qgrass_config_destroy(cfg);
  }

  {
    qgrass_config* cfg = make(2, 7, 3, 2, "graph");
    struct tally t = {0, 0, 0, "\"check\":\"orbit_size.A+\",\"expected\":72", 0};
    int all = 0;
    CHECK(qgrass_verify(cfg, count_records, &t, &all) == QGRASS_OK);
    CHECK(all == 1 && t.matched == 1);

    struct tally cells = {0, 0, 0, "\"brute_force\":[3,0,8]", 0};
    CHECK(qgrass_tables(cfg, count_records, &cells, &all) == QGRASS_OK);
    CHECK(all == 1 && cells.records == 50 && cells.matched == 1);
    qgrass_config_destroy(cfg);
  }

  {
    qgrass_config* cfg = make(2, 4, 2, -1, "geometry");
    struct tally t = {0, 0, 0, "\"kind\":\"total\",\"size\":67", 0};
    CHECK(qgrass_enumerate(cfg, count_records, &t) == QGRASS_OK);
    CHECK(t.matched == 1);
    qgrass_config_set_list_covers(cfg, 1);
    struct tally covers = {0, 0, 0, "\"kind\":\"cover\"", 0};
    CHECK(qgrass_enumerate(cfg, count_records, &covers) == QGRASS_OK);
    CHECK(covers.matched == 240);
    qgrass_config_destroy(cfg);
  }

  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return EXIT_FAILURE;
  }
  printf("capi_test: all checks passed\n");
  return EXIT_SUCCESS;
}
