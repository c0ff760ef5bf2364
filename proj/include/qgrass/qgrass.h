#ifndef QGRASS_H
#define QGRASS_H

/* C interface to the qgrass verifier. All functions are thread-compatible:
 * a config handle must not be mutated while a run is using it. Error text
 * for the most recent failing call on the current thread is available from
 * qgrass_last_error(). */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QGRASS_API __declspec(dllexport)
#else
#define QGRASS_API __attribute__((visibility("default")))
#endif

typedef enum qgrass_status {
  QGRASS_OK = 0,
  QGRASS_E_NULL = 1,             /* a required pointer was NULL */
  QGRASS_E_INVALID_ARGUMENT = 2, /* bad value or violated precondition */
  QGRASS_E_CALLBACK = 3,         /* the record callback asked to stop */
  QGRASS_E_INTERNAL = 4
} qgrass_status;

typedef struct qgrass_config qgrass_config;

/* One record per check. record_json is a single-line JSON object valid only
 * for the duration of the call. Return nonzero to abort the run. */
typedef int (*qgrass_record_fn)(const char* record_json, double elapsed_ms, int passed, void* user);

QGRASS_API const char* qgrass_version(void);
QGRASS_API const char* qgrass_last_error(void);
QGRASS_API const char* qgrass_status_string(qgrass_status status);

QGRASS_API qgrass_status qgrass_config_create(qgrass_config** out);
QGRASS_API void qgrass_config_destroy(qgrass_config* cfg);

/* q defaults to 2 when only n and k are set. Pass a negative value to unset. */
QGRASS_API qgrass_status qgrass_config_set_q(qgrass_config* cfg, int q);
QGRASS_API qgrass_status qgrass_config_set_n(qgrass_config* cfg, int n);
QGRASS_API qgrass_status qgrass_config_set_k(qgrass_config* cfg, int k);
QGRASS_API qgrass_status qgrass_config_set_i(qgrass_config* cfg, int i);
/* "algebra", "geometry", "graph", "entries" or "all". */
QGRASS_API qgrass_status qgrass_config_set_suite(qgrass_config* cfg, const char* suite);
/* "full" or "columns"; NULL restores the per-suite default. */
QGRASS_API qgrass_status qgrass_config_set_mode(qgrass_config* cfg, const char* mode);
QGRASS_API qgrass_status qgrass_config_set_workers(qgrass_config* cfg, unsigned workers);
QGRASS_API qgrass_status qgrass_config_set_sweep_x(qgrass_config* cfg, int enabled);
QGRASS_API qgrass_status qgrass_config_set_list_covers(qgrass_config* cfg, int enabled);

/* Checks every precondition without running anything. */
QGRASS_API qgrass_status qgrass_config_validate(const qgrass_config* cfg);

/* all_passed (optional) receives 1 iff every emitted record passed. */
QGRASS_API qgrass_status qgrass_verify(const qgrass_config* cfg, qgrass_record_fn fn, void* user, int* all_passed);
/* Closed-form vs brute-force table cells at one graph instance. */
QGRASS_API qgrass_status qgrass_tables(const qgrass_config* cfg, qgrass_record_fn fn, void* user, int* all_agree);
QGRASS_API qgrass_status qgrass_enumerate(const qgrass_config* cfg, qgrass_record_fn fn, void* user);

#ifdef __cplusplus
}
#endif

#endif /* QGRASS_H */
