#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "qgrass/field.hpp"

namespace qgrass {

using ElementId = std::uint32_t;

/// Position of u relative to y: i = dim(u ∩ y), j = dim u - i.
struct Stratum {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Stratum&, const Stratum&) = default;
};

/// Refinement of a cover v > u: Slash raises i, Backslash raises j.
enum class CoverKind { Slash, Backslash };

struct CoverEdge {
  ElementId id;
  CoverKind kind;
};

struct IdRange {
  ElementId first = 0;
  ElementId last = 0;  // exclusive
  std::size_t size() const { return last - first; }
};

/// The subspace lattice of F_q^n (or a band of dimensions of it) with a fixed
/// reference k-space y.
///
/// Elements get consecutive ids grouped by dimension, in enumeration order
/// within a dimension. Cover incidence is precomputed between adjacent
/// dimensions that are both present. Immutable once built.
class GeometryContext {
 public:
  /// All dimensions 0..n. y defaults to the span of the first k basis vectors.
  static std::shared_ptr<const GeometryContext> full(FieldModulus q, int n, int k,
                                                     std::optional<Subspace> y = std::nullopt);
  /// Only dimensions lo..hi.
  static std::shared_ptr<const GeometryContext> banded(FieldModulus q, int n, int k, int lo, int hi,
                                                       std::optional<Subspace> y = std::nullopt);
  /// The k-1..k+1 band used by graph-mode work.
  static std::shared_ptr<const GeometryContext> graph_band(FieldModulus q, int n, int k,
                                                           std::optional<Subspace> y = std::nullopt);

  FieldModulus field() const { return q_; }
  int n() const { return n_; }
  int k() const { return k_; }
  const Subspace& y() const { return y_; }
  int min_dim() const { return lo_; }
  int max_dim() const { return hi_; }
  bool is_full() const { return lo_ == 0 && hi_ == n_; }
  bool has_dim(int l) const { return l >= lo_ && l <= hi_; }

  std::size_t size() const { return elements_.size(); }
  const Subspace& element(ElementId id) const { return elements_.at(id); }
  std::optional<ElementId> find(const Subspace& u) const;
  /// Throws std::out_of_range if u is not in the context.
  ElementId id_of(const Subspace& u) const;

  Stratum stratum(ElementId id) const { return strata_[id]; }
  int dim_of(ElementId id) const { return strata_[id].i + strata_[id].j; }
  IdRange dim_range(int l) const;

  /// Elements covered by id (one dimension down).
  std::span<const CoverEdge> down_covers(ElementId id) const;
  /// Elements covering id (one dimension up).
  std::span<const CoverEdge> up_covers(ElementId id) const;
  std::size_t cover_pair_count() const { return down_edges_.size(); }

  /// "(q=2,n=4,k=2)" style label.
  std::string label() const;

 private:
  GeometryContext(FieldModulus q, int n, int k, int lo, int hi, Subspace y);
  void build();

  FieldModulus q_;
  int n_;
  int k_;
  int lo_;
  int hi_;
  Subspace y_;
  std::vector<Subspace> elements_;
  std::vector<Stratum> strata_;
  std::vector<ElementId> dim_offsets_;  // size hi-lo+2
  std::unordered_map<Subspace, ElementId> index_;
  std::vector<std::uint32_t> down_ptr_, up_ptr_;
  std::vector<CoverEdge> down_edges_, up_edges_;
};

/// Stratum of an arbitrary subspace relative to ctx.y().
Stratum classify_stratum(const Subspace& u, const GeometryContext& ctx);
Stratum classify_stratum(const Subspace& u, const Subspace& y);

/// Kind of the cover v > u, or nullopt when v does not cover u.
std::optional<CoverKind> cover_kind(const Subspace& u, const Subspace& v, const GeometryContext& ctx);
std::optional<CoverKind> cover_kind(const Subspace& u, const Subspace& v, const Subspace& y);

/// [m] = 1 + q + ... + q^(m-1); qint(0) = 0. Requires m >= 0.
std::int64_t qint(int m, FieldModulus q);
std::int64_t qint(int m, int q);
std::int64_t ipow(std::int64_t base, int exp);

struct CoverCountViolation {
  ElementId id;
  std::string basis_hex;
  Stratum stratum;
  std::string which;  // "slash-down", "backslash-down", "slash-up", "backslash-up"
  std::int64_t expected;
  std::int64_t actual;
};

struct CoverCountReport {
  std::size_t elements_checked = 0;
  std::vector<CoverCountViolation> violations;
  bool holds() const { return violations.empty(); }
};

/// Checks, for every element u in P_{i,j}, that u /-covers q^j[i] elements,
/// \-covers [j], is /-covered by [k-i] and is \-covered by q^(k-i)[n-k-j].
/// Requires a full context.
CoverCountReport verify_cover_counts(const GeometryContext& ctx);

}  // namespace qgrass
