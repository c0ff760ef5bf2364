#include "qgrass/qgrass.h"

#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "qgrass/suites.hpp"

struct qgrass_config {
  qgrass::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

struct CallbackStop {};

qgrass_status fail(qgrass_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

template <class F>
qgrass_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return QGRASS_OK;
  } catch (const CallbackStop&) {
    return fail(QGRASS_E_CALLBACK, "run aborted by callback");
  } catch (const std::invalid_argument& e) {
    return fail(QGRASS_E_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(QGRASS_E_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QGRASS_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QGRASS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(QGRASS_E_INTERNAL, "unknown error");
  }
}

std::optional<int> opt(int v) { return v < 0 ? std::nullopt : std::optional<int>(v); }

qgrass::RecordSink sink_for(qgrass_record_fn fn, void* user) {
  return [fn, user](const qgrass::CheckRecord& r) {
    const std::string text = r.json.dump();
    if (fn(text.c_str(), r.elapsed_ms, r.pass ? 1 : 0, user) != 0) throw CallbackStop{};
  };
}

#define QGRASS_REQUIRE(ptr) \
  if (!(ptr)) return fail(QGRASS_E_NULL, #ptr " is NULL")

}  // namespace

extern "C" {

const char* qgrass_version(void) { return "1.0.0"; }

const char* qgrass_last_error(void) { return g_last_error.c_str(); }

const char* qgrass_status_string(qgrass_status status) {
  switch (status) {
    case QGRASS_OK:
      return "ok";
    case QGRASS_E_NULL:
      return "null pointer";
    case QGRASS_E_INVALID_ARGUMENT:
      return "invalid argument";
    case QGRASS_E_CALLBACK:
      return "aborted by callback";
    case QGRASS_E_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

qgrass_status qgrass_config_create(qgrass_config** out) {
  QGRASS_REQUIRE(out);
  return guarded([&] { *out = new qgrass_config{}; });
}

void qgrass_config_destroy(qgrass_config* cfg) { delete cfg; }

qgrass_status qgrass_config_set_q(qgrass_config* cfg, int q) {
  QGRASS_REQUIRE(cfg);
  cfg->cfg.q = opt(q);
  return QGRASS_OK;
}

qgrass_status qgrass_config_set_n(qgrass_config* cfg, int n) {
  QGRASS_REQUIRE(cfg);
  cfg->cfg.n = opt(n);
  return QGRASS_OK;
}

qgrass_status qgrass_config_set_k(qgrass_config* cfg, int k) {
  QGRASS_REQUIRE(cfg);
  cfg->cfg.k = opt(k);
  return QGRASS_OK;
}

qgrass_status qgrass_config_set_i(qgrass_config* cfg, int i) {
  QGRASS_REQUIRE(cfg);
  cfg->cfg.i = opt(i);
  return QGRASS_OK;
}

qgrass_status qgrass_config_set_suite(qgrass_config* cfg, const char* suite) {
  QGRASS_REQUIRE(cfg);
  QGRASS_REQUIRE(suite);
  return guarded([&] { cfg->cfg.suite = qgrass::suite_from_name(suite); });
}

qgrass_status qgrass_config_set_mode(qgrass_config* cfg, const char* mode) {
  QGRASS_REQUIRE(cfg);
  if (!mode) {
    cfg->cfg.mode.reset();
    return QGRASS_OK;
  }
  return guarded([&] { cfg->cfg.mode = qgrass::mode_from_name(mode); });
}

qgrass_status qgrass_config_set_workers(qgrass_config* cfg, unsigned workers) {
  QGRASS_REQUIRE(cfg);
  if (workers == 0) return fail(QGRASS_E_INVALID_ARGUMENT, "workers must be positive");
  cfg->cfg.workers = workers;
  return QGRASS_OK;
}

qgrass_status qgrass_config_set_sweep_x(qgrass_config* cfg, int enabled) {
  QGRASS_REQUIRE(cfg);
  cfg->cfg.sweep_x = enabled != 0;
  return QGRASS_OK;
}

qgrass_status qgrass_config_set_list_covers(qgrass_config* cfg, int enabled) {
  QGRASS_REQUIRE(cfg);
  cfg->cfg.list_covers = enabled != 0;
  return QGRASS_OK;
}

qgrass_status qgrass_config_validate(const qgrass_config* cfg) {
  QGRASS_REQUIRE(cfg);
  return guarded([&] { qgrass::plan_runs(cfg->cfg); });
}

qgrass_status qgrass_verify(const qgrass_config* cfg, qgrass_record_fn fn, void* user, int* all_passed) {
  QGRASS_REQUIRE(cfg);
  QGRASS_REQUIRE(fn);
  return guarded([&] {
    const bool ok = qgrass::run_verify(cfg->cfg, sink_for(fn, user));
    if (all_passed) *all_passed = ok ? 1 : 0;
  });
}

qgrass_status qgrass_tables(const qgrass_config* cfg, qgrass_record_fn fn, void* user, int* all_agree) {
  QGRASS_REQUIRE(cfg);
  QGRASS_REQUIRE(fn);
  return guarded([&] {
    const bool ok = qgrass::run_tables(cfg->cfg, sink_for(fn, user));
    if (all_agree) *all_agree = ok ? 1 : 0;
  });
}

qgrass_status qgrass_enumerate(const qgrass_config* cfg, qgrass_record_fn fn, void* user) {
  QGRASS_REQUIRE(cfg);
  QGRASS_REQUIRE(fn);
  return guarded([&] { qgrass::run_enumerate(cfg->cfg, sink_for(fn, user)); });
}

}  // extern "C"
