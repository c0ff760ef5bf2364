#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qgrass/relations.hpp"

namespace qgrass {

enum class Suite { Algebra, Geometry, Graph, Entries, All };

std::string_view suite_name(Suite s);
/// Throws std::invalid_argument for unknown names.
Suite suite_from_name(std::string_view name);
CheckMode mode_from_name(std::string_view name);

struct RunConfig {
  std::optional<int> q;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<int> i;
  Suite suite = Suite::All;
  /// Unset: Full, except Columns for algebra at a graph-mode instance.
  std::optional<CheckMode> mode;
  unsigned workers = 1;
  bool sweep_x = false;
  bool list_covers = false;
};

/// One concrete piece of work derived from a RunConfig.
struct SuiteRun {
  Suite suite;
  int q;
  int n;
  int k;
  std::optional<int> i;
  CheckMode mode;
};

/// Expands the config into runs, filling defaults. Throws
/// std::invalid_argument when a precondition fails.
std::vector<SuiteRun> plan_runs(const RunConfig& cfg);

/// Self-describing check result: {"v":1, suite, check, instance, expected,
/// actual, pass, ...}. No timing inside, so output is reproducible.
struct CheckRecord {
  nlohmann::json json;
  bool pass = false;
  double elapsed_ms = 0;
};

using RecordSink = std::function<void(const CheckRecord&)>;

/// Runs every planned suite; returns true iff every record passed.
bool run_verify(const RunConfig& cfg, const RecordSink& sink);

/// Per-cell closed form vs brute force for the structure-constant and
/// edge-type tables at one graph instance; returns true iff all agree.
bool run_tables(const RunConfig& cfg, const RecordSink& sink);

/// Strata sizes, cover-pair counts by kind and optionally every cover pair.
void run_enumerate(const RunConfig& cfg, const RecordSink& sink);

}  // namespace qgrass
