#include "qgrass/grassmann.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace qgrass {

namespace {

constexpr std::array<std::string_view, 5> kOrbitNames = {"B", "C", "A0", "A+", "A-"};

// dim(u ∩ y): the i-coordinate of u's stratum
int meet_y(const Subspace& u, const Subspace& y) { return intersection_dim(u, y); }

void require_k_spaces(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim() || u.field().value() != v.field().value()) {
    throw std::invalid_argument("subspaces live in different ambient spaces");
  }
  if (u.dim() != v.dim()) throw std::invalid_argument("vertices must have equal dimension");
}

bool adjacent(const Subspace& u, const Subspace& v) { return intersection_dim(u, v) == u.dim() - 1; }

// Runs body(t) for t in [0, count) over up to `workers` threads.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, const Body& body) {
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t t = 0; t < count; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t t = w; t < count; t += threads) body(t);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Q {
  std::int64_t q;
  int n, k, i;
  std::int64_t b(int m) const { return qint(m, static_cast<int>(q)); }  // [m]
  std::int64_t p(int e) const { return ipow(q, e); }
};

}  // namespace

void check_graph_parameters(int n, int k, int i) {
  if (!(n > 2 * k && 2 * k >= 6)) {
    throw std::invalid_argument("graph mode needs n > 2k >= 6, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  if (!(1 < i && i < k)) {
    throw std::invalid_argument("graph mode needs 1 < i < k, got i=" + std::to_string(i) + " k=" + std::to_string(k));
  }
}

GrassmannInstance GrassmannInstance::make(FieldModulus q, int n, int k, int i, std::optional<Subspace> y) {
  check_graph_parameters(n, k, i);
  Subspace ref = y ? *y : coordinate_span(q, n, 0, k);
  std::optional<Subspace> x;
  for_each_vertex_at_distance(q, n, k, i, ref, [&](const Subspace& s) {
    x = s;
    return false;
  });
  if (!x) throw std::invalid_argument("no vertex at the requested distance");
  return with_x(*x, ref);
}

GrassmannInstance GrassmannInstance::with_x(Subspace x, Subspace y) {
  require_k_spaces(x, y);
  const int k = x.dim();
  const int i = graph_distance(x, y);
  check_graph_parameters(x.ambient_dim(), k, i);
  return {x.field(), x.ambient_dim(), k, i, std::move(x), std::move(y)};
}

std::string GrassmannInstance::label() const {
  return "(q=" + std::to_string(q.value()) + ",n=" + std::to_string(n) + ",k=" + std::to_string(k) +
         ",i=" + std::to_string(i) + ")";
}

void for_each_vertex_at_distance(FieldModulus q, int n, int k, int i, const Subspace& y,
                                 const std::function<bool(const Subspace&)>& visit) {
  for_each_subspace(n, k, q, [&](const Subspace& s) { return meet_y(s, y) != k - i || visit(s); });
}

int graph_distance(const Subspace& u, const Subspace& v) {
  require_k_spaces(u, v);
  return u.dim() - intersection_dim(u, v);
}

IntersectionNumbers intersection_numbers(int i, FieldModulus q, int n, int k) {
  if (i < 0 || i > k) throw std::invalid_argument("distance out of range");
  const Q z{q.value(), n, k, i};
  return {z.p(2 * i + 1) * z.b(k - i) * z.b(n - k - i), z.b(i) * z.b(i)};
}

std::string_view orbit_name(Orbit o) { return kOrbitNames[index_of(o)]; }

Orbit classify_orbit(const Subspace& w, const GrassmannInstance& inst) {
  require_k_spaces(w, inst.x);
  if (!adjacent(w, inst.x)) throw std::invalid_argument("vertex is not adjacent to x");
  const int d = graph_distance(w, inst.y);
  if (d == inst.i + 1) return Orbit::B;
  if (d == inst.i - 1) return Orbit::C;
  const Subspace s = subspace_sum(w, inst.x);
  const Subspace h = subspace_intersect(w, inst.x);
  const int iw = meet_y(w, inst.y), ix = meet_y(inst.x, inst.y);
  const int is = meet_y(s, inst.y), ih = meet_y(h, inst.y);
  if (is == iw + 1 && is == ix + 1 && iw == ih && ix == ih) return Orbit::A0;
  if (is == iw && is == ix) return Orbit::Aplus;
  if (iw == ih + 1 && ix == ih + 1) return Orbit::Aminus;
  throw std::logic_error("neighbour of x fits none of the five orbits");
}

std::string_view edge_type_name(EdgeType t) {
  switch (t) {
    case EdgeType::T0:
      return "0";
    case EdgeType::Tplus:
      return "+";
    case EdgeType::Tminus:
      return "-";
    default:
      return "none";
  }
}

EdgeType edge_type(const Subspace& w, const Subspace& z, const GrassmannInstance& inst) {
  require_k_spaces(w, z);
  if (!adjacent(w, z)) throw std::invalid_argument("edge endpoints are not adjacent");
  if (graph_distance(w, inst.y) != graph_distance(z, inst.y)) return EdgeType::NotEquidistant;
  const int iw = meet_y(w, inst.y), iz = meet_y(z, inst.y);
  const int is = meet_y(subspace_sum(w, z), inst.y);
  const int ih = meet_y(subspace_intersect(w, z), inst.y);
  if (is == iw + 1 && is == iz + 1 && iw == ih && iz == ih) return EdgeType::T0;
  if (is == iw && is == iz) return EdgeType::Tplus;
  if (iw == ih + 1 && iz == ih + 1) return EdgeType::Tminus;
  throw std::logic_error("equidistant edge fits none of the three types");
}

std::array<std::size_t, 5> LocalGraph::orbit_sizes() const {
  std::array<std::size_t, 5> sizes{};
  for (Orbit o : orbit) ++sizes[index_of(o)];
  return sizes;
}

LocalGraph build_local_graph(const GrassmannInstance& inst, unsigned workers) {
  LocalGraph g{inst, {}, {}, {}};
  for (const auto& h : hyperplanes_of(inst.x)) {
    for (auto& v : covers_above(h)) {
      if (!(v == inst.x)) g.vertices.push_back(std::move(v));
    }
  }
  std::sort(g.vertices.begin(), g.vertices.end());
  g.orbit.resize(g.vertices.size());
  g.adjacency.resize(g.vertices.size());
  parallel_for(g.vertices.size(), workers, [&](std::size_t a) {
    g.orbit[a] = classify_orbit(g.vertices[a], inst);
    for (std::size_t b = 0; b < g.vertices.size(); ++b) {
      if (a != b && adjacent(g.vertices[a], g.vertices[b])) g.adjacency[a].push_back(static_cast<std::uint32_t>(b));
    }
  });
  return g;
}

bool StructureConstants::all_equitable() const {
  for (const auto& row : equitable) {
    for (bool e : row) {
      if (!e) return false;
    }
  }
  return true;
}

bool CountTable::all_equitable() const {
  for (const auto& row : equitable) {
    for (bool e : row) {
      if (!e) return false;
    }
  }
  return true;
}

StructureConstants structure_constants(const LocalGraph& g) {
  StructureConstants out;
  std::array<bool, 5> seen{};
  for (auto& row : out.equitable) row.fill(true);
  for (std::size_t w = 0; w < g.vertices.size(); ++w) {
    std::array<std::int64_t, 5> counts{};
    for (auto z : g.adjacency[w]) ++counts[index_of(g.orbit[z])];
    const std::size_t o = index_of(g.orbit[w]);
    if (!seen[o]) {
      out.counts[o] = counts;
      seen[o] = true;
    } else {
      for (std::size_t n = 0; n < 5; ++n) out.equitable[o][n] = out.equitable[o][n] && counts[n] == out.counts[o][n];
    }
  }
  return out;
}

CountTable count_edge_types(const LocalGraph& g, unsigned workers) {
  // per source vertex, merged in vertex order
  std::vector<std::array<TypeCounts, 5>> per(g.vertices.size());
  parallel_for(g.vertices.size(), workers, [&](std::size_t w) {
    for (auto z : g.adjacency[w]) {
      auto& cell = per[w][index_of(g.orbit[z])];
      switch (edge_type(g.vertices[w], g.vertices[z], g.inst)) {
        case EdgeType::T0:
          ++cell.zero;
          break;
        case EdgeType::Tplus:
          ++cell.plus;
          break;
        case EdgeType::Tminus:
          ++cell.minus;
          break;
        case EdgeType::NotEquidistant:
          break;
      }
    }
  });
  CountTable out;
  std::array<bool, 5> seen{};
  for (auto& row : out.equitable) row.fill(true);
  TypeCounts ordered;
  for (std::size_t w = 0; w < g.vertices.size(); ++w) {
    const std::size_t o = index_of(g.orbit[w]);
    for (const auto& c : per[w]) {
      ordered.zero += c.zero;
      ordered.plus += c.plus;
      ordered.minus += c.minus;
    }
    if (!seen[o]) {
      out.cells[o] = per[w];
      seen[o] = true;
    } else {
      for (std::size_t n = 0; n < 5; ++n) out.equitable[o][n] = out.equitable[o][n] && per[w][n] == out.cells[o][n];
    }
  }
  out.edge_totals = {ordered.zero / 2, ordered.plus / 2, ordered.minus / 2};
  return out;
}

std::array<std::int64_t, 5> closed_form_orbit_sizes(FieldModulus q, int n, int k, int i) {
  check_graph_parameters(n, k, i);
  const Q z{q.value(), n, k, i};
  const auto bc = intersection_numbers(i, q, n, k);
  return {bc.b, bc.c, (z.q - 1) * z.b(i) * z.b(i), z.p(i + 1) * z.b(i) * z.b(n - k - i), z.p(i + 1) * z.b(i) * z.b(k - i)};
}

OrbitMatrix<std::int64_t> closed_form_structure_constants(FieldModulus q, int n, int k, int i) {
  check_graph_parameters(n, k, i);
  const Q z{q.value(), n, k, i};
  const std::int64_t qq = z.q;
  return {{
      {z.p(i + 1) * z.b(k - i) + z.p(i + 1) * z.b(n - k - i) - qq - 1, 0, 0, qq * z.b(i), qq * z.b(i)},
      {0, 2 * qq * z.b(i - 1), 2 * z.p(i) - qq - 1, z.p(i + 1) * z.b(n - k - i), z.p(i + 1) * z.b(k - i)},
      {0, 2 * z.b(i) - 1, 2 * z.p(i) - qq - 2, z.p(i + 1) * z.b(n - k - i), z.p(i + 1) * z.b(k - i)},
      {z.p(i + 1) * z.b(k - i), z.b(i), (qq - 1) * z.b(i), qq * z.b(n - k) - qq - 1, 0},
      {z.p(i + 1) * z.b(n - k - i), z.b(i), (qq - 1) * z.b(i), 0, qq * z.b(k) - qq - 1},
  }};
}

OrbitMatrix<TypeCounts> closed_form_edge_types(FieldModulus q, int n, int k, int i) {
  check_graph_parameters(n, k, i);
  const Q z{q.value(), n, k, i};
  const std::int64_t qq = z.q;
  OrbitMatrix<TypeCounts> t{};
  const auto at = [&](Orbit o, Orbit m) -> TypeCounts& { return t[index_of(o)][index_of(m)]; };
  at(Orbit::B, Orbit::B) = {2 * z.p(i + 1) - qq - 1, z.p(i + 2) * z.b(n - k - i - 1), z.p(i + 2) * z.b(k - i - 1)};
  at(Orbit::C, Orbit::C) = {0, qq * z.b(i - 1), qq * z.b(i - 1)};
  at(Orbit::A0, Orbit::A0) = {2 * z.p(i) - qq - 2, 0, 0};
  at(Orbit::A0, Orbit::Aplus) = {0, z.p(i + 1) * z.b(n - k - i), 0};
  at(Orbit::A0, Orbit::Aminus) = {0, 0, z.p(i + 1) * z.b(k - i)};
  at(Orbit::Aplus, Orbit::A0) = {0, (qq - 1) * z.b(i), 0};
  at(Orbit::Aplus, Orbit::Aplus) = {(qq - 1) * z.b(i), qq * z.b(n - k) - z.p(i) - qq, 0};
  at(Orbit::Aminus, Orbit::A0) = {0, 0, (qq - 1) * z.b(i)};
  at(Orbit::Aminus, Orbit::Aminus) = {(qq - 1) * z.b(i), 0, qq * z.b(k) - z.p(i) - qq};
  return t;
}

const std::array<ProductSpec, 9>& entry_products() {
  static const std::array<ProductSpec, 9> products = {{
      {"F0F0", {Op::F0, Op::F0}},
      {"F0F+", {Op::F0, Op::Fplus}},
      {"F0F-", {Op::F0, Op::Fminus}},
      {"F+F0", {Op::Fplus, Op::F0}},
      {"F+F+", {Op::Fplus, Op::Fplus}},
      {"F+F-", {Op::Fplus, Op::Fminus}},
      {"F-F0", {Op::Fminus, Op::F0}},
      {"F-F+", {Op::Fminus, Op::Fplus}},
      {"F-F-", {Op::Fminus, Op::Fminus}},
  }};
  return products;
}

std::array<std::array<std::int64_t, 3>, 9> closed_form_entry_table(FieldModulus q, int n, int k, int i) {
  check_graph_parameters(n, k, i);
  const Q z{q.value(), n, k, i};
  const std::int64_t qq = z.q;
  const std::int64_t mixed = (qq - 1) * z.b(i);
  return {{
      {2 * z.p(i) - qq - 2, 0, 0},
      {0, mixed, 0},
      {0, 0, mixed},
      {0, mixed, 0},
      {z.p(i + 1) * z.b(n - k - i), qq * z.b(n - k) - z.p(i) - qq, 0},
      {0, 0, 0},
      {0, 0, mixed},
      {0, 0, 0},
      {z.p(i + 1) * z.b(k - i), 0, qq * z.b(k) - z.p(i) - qq},
  }};
}

bool EntryTableReport::holds() const {
  return std::all_of(cells.begin(), cells.end(), [](const EntryCell& c) { return c.pass(); }) &&
         std::all_of(facts.begin(), facts.end(), [](const EntryFact& f) { return f.holds(); });
}

EntryTableReport verify_entry_table(const LocalGraph& g) {
  const OperatorAlgebra alg(GeometryContext::graph_band(g.inst.q, g.inst.n, g.inst.k, g.inst.y));
  return verify_entry_table(g, alg);
}

EntryTableReport verify_entry_table(const LocalGraph& g, const OperatorAlgebra& alg) {
  const GrassmannInstance& inst = g.inst;
  const auto& ctx = alg.context();
  if (!(ctx.y() == inst.y) || ctx.n() != inst.n || ctx.k() != inst.k || !ctx.has_dim(inst.k - 1) ||
      !ctx.has_dim(inst.k + 1)) {
    throw std::invalid_argument("operator context does not match the instance");
  }
  const ElementId x = ctx.id_of(inst.x);
  const auto& products = entry_products();

  // entries[p][v]: (w,x)-entry of product p for local vertex v (A-orbits only)
  std::vector<std::vector<QSqrtScalar>> entries(products.size());
  ColumnEvaluator eval(alg);
  for (std::size_t p = 0; p < products.size(); ++p) {
    const SparseVector column = eval.apply_word(products[p].word, x);
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      const ElementId w = ctx.id_of(g.vertices[v]);
      const auto hit =
          std::lower_bound(column.begin(), column.end(), w, [](const auto& e, ElementId r) { return e.first < r; });
      entries[p].push_back(hit != column.end() && hit->first == w ? hit->second : QSqrtScalar(inst.q));
    }
  }

  EntryTableReport rep;
  const auto expected = closed_form_entry_table(inst.q, inst.n, inst.k, inst.i);
  constexpr std::array<Orbit, 3> a_orbits = {Orbit::A0, Orbit::Aplus, Orbit::Aminus};
  for (std::size_t p = 0; p < products.size(); ++p) {
    for (std::size_t c = 0; c < 3; ++c) {
      EntryCell cell{std::string(products[p].name), a_orbits[c], expected[p][c], QSqrtScalar(inst.q), 0, 0};
      const QSqrtScalar want(inst.q, expected[p][c]);
      for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        if (g.orbit[v] != a_orbits[c]) continue;
        if (cell.vertices++ == 0) cell.observed = entries[p][v];
        if (entries[p][v] != want) ++cell.mismatches;
      }
      rep.cells.push_back(std::move(cell));
    }
  }

  // Statements about the entries themselves, independent of the table above.
  const auto idx = [&](std::string_view name) {
    for (std::size_t p = 0; p < products.size(); ++p) {
      if (products[p].name == name) return p;
    }
    throw std::logic_error("unknown product");
  };
  const auto vanishes = [&](std::string fact, std::string_view product, std::vector<Orbit> where) {
    EntryFact f{std::move(fact)};
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      if (std::find(where.begin(), where.end(), g.orbit[v]) == where.end()) continue;
      ++f.checked;
      if (!entries[idx(product)][v].is_zero()) ++f.failures;
    }
    rep.facts.push_back(std::move(f));
  };
  const std::vector<Orbit> all_a = {Orbit::A0, Orbit::Aplus, Orbit::Aminus};
  vanishes("F+F- vanishes on A", "F+F-", all_a);
  vanishes("F-F+ vanishes on A", "F-F+", all_a);
  vanishes("F0F- vanishes on A+", "F0F-", {Orbit::Aplus});
  vanishes("F-F0 vanishes on A+", "F-F0", {Orbit::Aplus});
  vanishes("F-F- vanishes on A+", "F-F-", {Orbit::Aplus});
  vanishes("F0F+ vanishes on A-", "F0F+", {Orbit::Aminus});
  vanishes("F+F0 vanishes on A-", "F+F0", {Orbit::Aminus});
  vanishes("F+F+ vanishes on A-", "F+F+", {Orbit::Aminus});

  // Double counting type-0 / type-+ / type-- edges between A0 and A+ (A-)
  // gives |A0| * lhs(w) = |A+| * rhs(w') for every w in A0, w' in A+.
  const Q z{inst.q.value(), inst.n, inst.k, inst.i};
  const std::int64_t a0 = (z.q - 1) * z.b(inst.i) * z.b(inst.i);
  const auto balance = [&](std::string fact, std::string_view at_a0, Orbit other, std::string_view at_other,
                           std::int64_t other_size) {
    EntryFact f{std::move(fact)};
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      if (g.orbit[v] != Orbit::A0) continue;
      for (std::size_t u = 0; u < g.vertices.size(); ++u) {
        if (g.orbit[u] != other) continue;
        ++f.checked;
        if (QSqrtScalar(inst.q, a0) * entries[idx(at_a0)][v] != QSqrtScalar(inst.q, other_size) * entries[idx(at_other)][u]) {
          ++f.failures;
        }
      }
    }
    rep.facts.push_back(std::move(f));
  };
  const std::int64_t ap = z.p(inst.i + 1) * z.b(inst.i) * z.b(inst.n - inst.k - inst.i);
  const std::int64_t am = z.p(inst.i + 1) * z.b(inst.i) * z.b(inst.k - inst.i);
  balance("type-0 edges A0-A+ double count", "F0F+", Orbit::Aplus, "F0F0", ap);
  balance("type-+ edges A0-A+ double count", "F+F+", Orbit::Aplus, "F0F+", ap);
  balance("type-0 edges A0-A- double count", "F0F-", Orbit::Aminus, "F0F0", am);
  balance("type-- edges A0-A- double count", "F-F-", Orbit::Aminus, "F0F-", am);

  EntryFact commute{"F-products commute at (w,x)"};
  for (const auto& [ab, ba] : std::vector<std::pair<std::string_view, std::string_view>>{
           {"F0F+", "F+F0"}, {"F0F-", "F-F0"}, {"F+F-", "F-F+"}}) {
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      if (g.orbit[v] == Orbit::B || g.orbit[v] == Orbit::C) continue;
      ++commute.checked;
      if (entries[idx(ab)][v] != entries[idx(ba)][v]) ++commute.failures;
    }
  }
  rep.facts.push_back(std::move(commute));
  return rep;
}

}  // namespace qgrass
