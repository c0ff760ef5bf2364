#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qgrass/algebra.hpp"

namespace qgrass {

/// Vertices x, y of J_q(n,k) at distance i with n > 2k >= 6 and 1 < i < k.
struct GrassmannInstance {
  FieldModulus q;
  int n;
  int k;
  int i;
  Subspace x;
  Subspace y;

  /// x is the first k-space in enumeration order at distance i from y;
  /// y defaults to the span of the first k basis vectors.
  static GrassmannInstance make(FieldModulus q, int n, int k, int i, std::optional<Subspace> y = std::nullopt);
  /// Validates an explicit pair.
  static GrassmannInstance with_x(Subspace x, Subspace y);

  std::string label() const;
};

/// Throws std::invalid_argument unless n > 2k >= 6 and 1 < i < k.
void check_graph_parameters(int n, int k, int i);

/// Streams every k-space at distance i from y; return false to stop.
void for_each_vertex_at_distance(FieldModulus q, int n, int k, int i, const Subspace& y,
                                 const std::function<bool(const Subspace&)>& visit);

/// k - dim(u ∩ v); both must be k-spaces of the same ambient space.
int graph_distance(const Subspace& u, const Subspace& v);

struct IntersectionNumbers {
  std::int64_t b;
  std::int64_t c;
};

/// b_i = q^(2i+1)[k-i][n-k-i], c_i = [i]^2.
IntersectionNumbers intersection_numbers(int i, FieldModulus q, int n, int k);

enum class Orbit { B, C, A0, Aplus, Aminus };
inline constexpr std::array<Orbit, 5> kOrbits = {Orbit::B, Orbit::C, Orbit::A0, Orbit::Aplus, Orbit::Aminus};
std::string_view orbit_name(Orbit o);
inline std::size_t index_of(Orbit o) { return static_cast<std::size_t>(o); }

/// Orbit of a neighbour w of inst.x. Throws std::invalid_argument when w is
/// not adjacent to x.
Orbit classify_orbit(const Subspace& w, const GrassmannInstance& inst);

enum class EdgeType { T0, Tplus, Tminus, NotEquidistant };
std::string_view edge_type_name(EdgeType t);

/// Type of the edge wz relative to inst.y. Throws std::invalid_argument when
/// w, z are not adjacent.
EdgeType edge_type(const Subspace& w, const Subspace& z, const GrassmannInstance& inst);

template <class T>
using OrbitMatrix = std::array<std::array<T, 5>, 5>;

struct TypeCounts {
  std::int64_t zero = 0;
  std::int64_t plus = 0;
  std::int64_t minus = 0;
  std::int64_t total() const { return zero + plus + minus; }
  friend auto operator<=>(const TypeCounts&, const TypeCounts&) = default;
};

/// Γ(x) with orbit labels and adjacency, built by brute force.
struct LocalGraph {
  GrassmannInstance inst;
  std::vector<Subspace> vertices;
  std::vector<Orbit> orbit;
  std::vector<std::vector<std::uint32_t>> adjacency;

  std::array<std::size_t, 5> orbit_sizes() const;
};

/// Neighbours of x come from pairs (hyperplane h of x, cover v of h), v != x.
LocalGraph build_local_graph(const GrassmannInstance& inst, unsigned workers = 1);

/// Per-source-vertex neighbour counts between orbits. A cell is equitable
/// when every w in the row orbit sees the same count.
struct StructureConstants {
  OrbitMatrix<std::int64_t> counts{};
  OrbitMatrix<bool> equitable{};
  bool all_equitable() const;
};

StructureConstants structure_constants(const LocalGraph& g);

struct CountTable {
  OrbitMatrix<TypeCounts> cells{};
  OrbitMatrix<bool> equitable{};
  /// Unordered edges of each type inside Γ(x).
  TypeCounts edge_totals;
  bool all_equitable() const;
};

CountTable count_edge_types(const LocalGraph& g, unsigned workers = 1);

std::array<std::int64_t, 5> closed_form_orbit_sizes(FieldModulus q, int n, int k, int i);
OrbitMatrix<std::int64_t> closed_form_structure_constants(FieldModulus q, int n, int k, int i);
OrbitMatrix<TypeCounts> closed_form_edge_types(FieldModulus q, int n, int k, int i);

/// The nine products of two F operators, in table order.
struct ProductSpec {
  std::string_view name;
  std::array<Op, 2> word;
};
const std::array<ProductSpec, 9>& entry_products();

/// Expected (w,x)-entries: rows follow entry_products(), columns A0, A+, A-.
std::array<std::array<std::int64_t, 3>, 9> closed_form_entry_table(FieldModulus q, int n, int k, int i);

struct EntryCell {
  std::string product;
  Orbit orbit;
  std::int64_t expected;
  QSqrtScalar observed;  // value at the first vertex of the orbit
  std::size_t vertices = 0;
  std::size_t mismatches = 0;
  bool pass() const { return mismatches == 0 && vertices > 0; }
};

/// A statement about the (w,x)-entries checked directly against the
/// computed entries, with no closed form involved.
struct EntryFact {
  std::string name;
  std::size_t checked = 0;
  std::size_t failures = 0;
  bool holds() const { return failures == 0 && checked > 0; }
};

struct EntryTableReport {
  std::vector<EntryCell> cells;
  std::vector<EntryFact> facts;
  bool holds() const;
};

/// Builds the F operators on the k-1..k+1 band around inst.y and reads the
/// (w,x)-entries of the nine products for every w in the A-orbits by
/// sparse mat-vec on e_x.
EntryTableReport verify_entry_table(const LocalGraph& g);
/// Same, reusing operators built on a graph_band context around g.inst.y.
EntryTableReport verify_entry_table(const LocalGraph& g, const OperatorAlgebra& alg);

}  // namespace qgrass
