#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qgrass/algebra.hpp"

namespace qgrass {

/// An identity lhs = rhs between elements of the algebra at one (q, n, k).
struct Relation {
  std::string id;
  Expr lhs;
  Expr rhs;
};

/// Every individual relation id, in catalogue order.
const std::vector<std::string>& relation_ids();

/// Group ids ("REL-CENT", "REL-A1", "REL-8", "ALL", ...) expand to their
/// members; a single id expands to itself. Throws std::invalid_argument for
/// unknown ids.
std::vector<std::string> expand_relation_id(std::string_view id);

Relation make_relation(std::string_view id, FieldModulus q, int n, int k);

enum class CheckMode { Full, Columns };

std::string_view mode_name(CheckMode mode);

struct Violation {
  ElementId row;
  ElementId col;
  QSqrtScalar lhs;
  QSqrtScalar rhs;
};

struct RelationReport {
  std::string relation_id;
  int q = 0;
  int n = 0;
  int k = 0;
  CheckMode mode = CheckMode::Full;
  std::vector<ElementId> columns;  // Columns mode only
  bool holds = false;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // first kMaxListedViolations, by (col, row)
};

inline constexpr std::size_t kMaxListedViolations = 16;

/// Full: lhs - rhs is formed as an operator; needs a full context.
/// Columns: both sides are applied to e_c for each listed c (all elements
/// when the list is empty), spread over `workers` threads. Results do not
/// depend on the worker count.
RelationReport verify_relation(const Relation& rel, const OperatorAlgebra& alg, CheckMode mode,
                               std::span<const ElementId> columns = {}, unsigned workers = 1);
RelationReport verify_relation(std::string_view id, const OperatorAlgebra& alg, CheckMode mode,
                               std::span<const ElementId> columns = {}, unsigned workers = 1);

/// Outcome of checking both readings of the qRL identity.
struct VariantResolution {
  RelationReport printed;    // "(q^{(n-k)/2} - I) F-"
  RelationReport corrected;  // "(q^{(n-k)/2} K2 - I) F-"
  /// Id of the unique variant that holds, or empty when zero or two hold.
  std::string holding_variant() const;
};

VariantResolution resolve_rl_variant(const OperatorAlgebra& alg, CheckMode mode,
                                     std::span<const ElementId> columns = {}, unsigned workers = 1);

nlohmann::json to_json(const RelationReport& report);

}  // namespace qgrass
