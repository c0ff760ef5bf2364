#include "qgrass/relations.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <thread>

namespace qgrass {

namespace {

// Shorthand for writing identities at a fixed (q, n, k).
struct Ring {
  FieldModulus q;
  int n;
  int k;

  QSqrtScalar h(int m) const { return q_pow_half(m, q); }  // q^{m/2}
  QSqrtScalar s(Rational v) const { return scalar(q, std::move(v)); }
  QSqrtScalar c() const { return s(Rational(1, q.value() - 1)); }  // (q-1)^{-1}
  QSqrtScalar qs() const { return s(q.value()); }
  Expr zero() const { return Expr(q); }
  Expr I() const { return Expr::constant(s(1)); }
  Expr E(std::initializer_list<Op> ops) const {
    Expr e = I();
    for (Op o : ops) e = e * Expr::op(q, o);
    return e;
  }
};

using Maker = std::function<Relation(const Ring&)>;

struct Entry {
  std::string id;
  Maker make;
};

Relation eq(std::string id, Expr lhs, Expr rhs) { return {std::move(id), std::move(lhs), std::move(rhs)}; }
Relation zero_eq(std::string id, Expr lhs) {
  const FieldModulus q = lhs.field();
  return {std::move(id), std::move(lhs), Expr(q)};
}

Expr rl_common(const Ring& r, bool corrected) {
  using enum Op;
  const int n = r.n, k = r.k;
  const auto c = r.c();
  const Expr f_minus_coeff = corrected ? r.h(n - k) * r.E({K2}) - r.I() : r.h(n - k) * r.I() - r.I();
  return r.qs() * r.E({R, L}) - r.E({F, F0}) - r.E({Fplus, Fminus}) -
         c * ((r.h(k) * r.E({K1}) + r.h(n - k) * r.E({K2}) - r.s(2) * r.I()) * r.E({F0}) +
              (r.h(k) * r.E({K1}) - r.I()) * r.E({Fplus}) + f_minus_coeff * r.E({Fminus})) -
         (c * c) * (r.h(n) * r.E({K1, K2}) - r.h(k) * r.E({K1}) - r.h(n - k) * r.E({K2}) + r.I());
}

std::vector<Entry> build_catalogue() {
  using enum Op;
  std::vector<Entry> cat;
  const auto add = [&](std::string id, Maker m) { cat.push_back({std::move(id), std::move(m)}); };

  add("REL-1", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return zero_eq("REL-1", r.s(r.q.value() * r.q.value()) * r.E({R, F0}) - r.E({F0, R}) +
                                (r.h(k) * r.E({K1}) + r.h(n - k) * r.E({K2}) - r.s(r.q.value() + 1) * r.I()) * r.E({R}));
  });
  add("REL-2", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return zero_eq("REL-2", r.qs() * r.E({R, Fplus}) - r.E({Fplus, R}) - r.E({F0, R}) +
                                r.c() * (r.h(n + 2) * r.E({K1, K2inv}) - r.h(k) * r.E({K1}) - r.h(n - k) * r.E({K2}) + r.I()) *
                                    r.E({R}));
  });
  add("REL-3", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return zero_eq("REL-3", r.qs() * r.E({R, Fminus}) - r.E({Fminus, R}) - r.E({F0, R}) +
                                r.c() * (r.h(n + 2) * r.E({K1inv, K2}) - r.h(k) * r.E({K1}) - r.h(n - k) * r.E({K2}) + r.I()) *
                                    r.E({R}));
  });
  add("REL-4", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return zero_eq("REL-4", r.s(r.q.value() * r.q.value()) * r.E({F0, L}) - r.E({L, F0}) +
                                (r.h(k + 2) * r.E({K1}) + r.h(n - k + 2) * r.E({K2}) - r.s(r.q.value() + 1) * r.I()) *
                                    r.E({L}));
  });
  add("REL-5", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return zero_eq("REL-5", r.qs() * r.E({Fplus, L}) - r.E({L, Fplus}) - r.E({L, F0}) +
                                r.c() *
                                    (r.h(n + 2) * r.E({K1, K2inv}) - r.h(k + 2) * r.E({K1}) - r.h(n - k + 2) * r.E({K2}) +
                                     r.I()) *
                                    r.E({L}));
  });
  add("REL-6", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return zero_eq("REL-6", r.qs() * r.E({Fminus, L}) - r.E({L, Fminus}) - r.E({L, F0}) +
                                r.c() *
                                    (r.h(n + 2) * r.E({K1inv, K2}) - r.h(k + 2) * r.E({K1}) - r.h(n - k + 2) * r.E({K2}) +
                                     r.I()) *
                                    r.E({L}));
  });
  add("REL-7", [](const Ring& r) {
    const int n = r.n, k = r.k;
    const auto c = r.c();
    return zero_eq("REL-7",
                   r.E({L, R}) - r.qs() * r.E({Fplus, Fminus}) -
                       c * ((r.h(n + 2) * r.E({K1inv, K2}) - r.h(n - k + 2) * r.E({K2})) * r.E({Fplus}) +
                            (r.h(n + 2) * r.E({K1, K2inv}) - r.h(k + 2) * r.E({K1})) * r.E({Fminus})) -
                       (c * c) * (r.h(n + 2) * r.E({K1, K2}) - r.h(2 * n - k + 2) * r.E({K1}) -
                                  r.h(n + k + 2) * r.E({K2}) + r.h(2 * n + 2) * r.I()));
  });
  add("REL-8-printed", [](const Ring& r) { return zero_eq("REL-8-printed", rl_common(r, false)); });
  add("REL-8-K2", [](const Ring& r) { return zero_eq("REL-8-K2", rl_common(r, true)); });

  add("REL-F0A", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return eq("REL-F0A", r.E({F0}),
              r.E({L1, R1}) - r.E({R1, L1}) +
                  r.c() * (r.h(n) * r.E({K1inv, K2}) - r.h(k) * r.E({K1}) - r.h(n - k) * r.E({K2}) + r.I()));
  });
  add("REL-F0B", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return eq("REL-F0B", r.E({F0}),
              r.E({R2, L2}) - r.E({L2, R2}) +
                  r.c() * (r.h(n) * r.E({K1, K2inv}) - r.h(k) * r.E({K1}) - r.h(n - k) * r.E({K2}) + r.I()));
  });
  add("REL-F+", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return eq("REL-F+", r.E({Fplus}),
              r.E({L2, R2}) - (r.h(k) * r.c()) * r.E({K1}) * (r.h(n - k) * r.E({K2inv}) - r.I()));
  });
  add("REL-F-", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return eq("REL-F-", r.E({Fminus}),
              r.E({R1, L1}) - (r.h(n - k) * r.c()) * (r.h(k) * r.E({K1inv}) - r.I()) * r.E({K2}));
  });

  for (Op omega : {Omega0, Omega1, Omega2}) {
    for (Op g : {L1, L2, R1, R2, K1, K2}) {
      const std::string oname = omega == Omega0 ? "O0" : omega == Omega1 ? "O1" : "O2";
      const std::string id = "REL-CENT-" + oname + "-" + std::string(op_name(g));
      add(id, [id, omega, g](const Ring& r) { return eq(id, r.E({omega, g}), r.E({g, omega})); });
    }
  }

  add("REL-FC0", [](const Ring& r) {
    const int n = r.n, k = r.k;
    return eq("REL-FC0", r.E({F0}),
              r.c() * (r.h(n) * r.E({Omega0, K1, K2}) - r.h(k) * r.E({K1}) - r.h(n - k) * r.E({K2}) + r.I()));
  });
  add("REL-FC+", [](const Ring& r) {
    const int n = r.n, k = r.k;
    const auto c = r.c();
    return eq("REL-FC+", r.E({Fplus}),
              c * (r.h(k) * r.E({Omega2}) -
                   c * (r.h(n + 2) * (r.E({Omega0, K2}) + r.E({K2inv})) - (r.s(2) * r.h(k + 2)) * r.I())) *
                  r.E({K1}));
  });
  add("REL-FC-", [](const Ring& r) {
    const int n = r.n, k = r.k;
    const auto c = r.c();
    return eq("REL-FC-", r.E({Fminus}),
              c * (r.h(n - k) * r.E({Omega1}) -
                   c * (r.h(n + 2) * (r.E({Omega0, K1}) + r.E({K1inv})) - (r.s(2) * r.h(n - k + 2)) * r.I())) *
                  r.E({K2}));
  });

  const std::vector<std::pair<Op, std::string>> fs = {{F0, "F0"}, {Fplus, "F+"}, {Fminus, "F-"}, {F, "F"}};
  for (std::size_t a = 0; a < fs.size(); ++a) {
    for (std::size_t b = a + 1; b < fs.size(); ++b) {
      const std::string id = "REL-COMM-" + fs[a].second + "-" + fs[b].second;
      const Op x = fs[a].first, y = fs[b].first;
      add(id, [id, x, y](const Ring& r) { return eq(id, r.E({x, y}), r.E({y, x})); });
    }
  }

  add("REL-A1(i)", [](const Ring& r) { return eq("REL-A1(i)", r.E({K1, L1}), r.qs() * r.E({L1, K1})); });
  add("REL-A1(ii)", [](const Ring& r) { return eq("REL-A1(ii)", r.E({K1, L2}), r.E({L2, K1})); });
  add("REL-A1(iii)", [](const Ring& r) { return eq("REL-A1(iii)", r.qs() * r.E({K1, R1}), r.E({R1, K1})); });
  add("REL-A1(iv)", [](const Ring& r) { return eq("REL-A1(iv)", r.E({K1, R2}), r.E({R2, K1})); });
  add("REL-A1(v)", [](const Ring& r) { return eq("REL-A1(v)", r.E({K2, L1}), r.E({L1, K2})); });
  add("REL-A1(vi)", [](const Ring& r) { return eq("REL-A1(vi)", r.qs() * r.E({K2, L2}), r.E({L2, K2})); });
  add("REL-A1(vii)", [](const Ring& r) { return eq("REL-A1(vii)", r.E({K2, R1}), r.E({R1, K2})); });
  add("REL-A1(viii)", [](const Ring& r) { return eq("REL-A1(viii)", r.E({K2, R2}), r.qs() * r.E({R2, K2})); });

  add("REL-A2(i)", [](const Ring& r) { return eq("REL-A2(i)", r.E({L1, R2}), r.E({R2, L1})); });
  add("REL-A2(ii)", [](const Ring& r) { return eq("REL-A2(ii)", r.E({L2, R1}), r.E({R1, L2})); });
  add("REL-A2(iii)", [](const Ring& r) { return eq("REL-A2(iii)", r.qs() * r.E({L1, L2}), r.E({L2, L1})); });
  add("REL-A2(iv)", [](const Ring& r) { return eq("REL-A2(iv)", r.E({R1, R2}), r.qs() * r.E({R2, R1})); });

  add("REL-A3(i)", [](const Ring& r) {
    const auto q1 = r.s(r.q.value() + 1);
    return eq("REL-A3(i)", r.E({R1, R1, L1}) - q1 * r.E({R1, L1, R1}) + r.qs() * r.E({L1, R1, R1}),
              -(r.h(r.n - 2) * q1) * r.E({K1inv, K2, R1}));
  });
  add("REL-A3(ii)", [](const Ring& r) {
    const auto q1 = r.s(r.q.value() + 1);
    return eq("REL-A3(ii)", r.qs() * r.E({R2, R2, L2}) - q1 * r.E({R2, L2, R2}) + r.E({L2, R2, R2}),
              -(r.h(r.n) * q1) * r.E({K1, K2inv, R2}));
  });
  add("REL-A3(iii)", [](const Ring& r) {
    const auto q1 = r.s(r.q.value() + 1);
    return eq("REL-A3(iii)", r.qs() * r.E({L1, L1, R1}) - q1 * r.E({L1, R1, L1}) + r.E({R1, L1, L1}),
              -(r.h(r.n) * q1) * r.E({K1inv, K2, L1}));
  });
  add("REL-A3(iv)", [](const Ring& r) {
    const auto q1 = r.s(r.q.value() + 1);
    return eq("REL-A3(iv)", r.E({L2, L2, R2}) - q1 * r.E({L2, R2, L2}) + r.qs() * r.E({R2, L2, L2}),
              -(r.h(r.n - 2) * q1) * r.E({K1, K2inv, L2}));
  });
  add("REL-A4", [](const Ring& r) {
    return eq("REL-A4", r.E({L1, R1}) - r.E({R1, L1}) + r.E({L2, R2}) - r.E({R2, L2}),
              (r.h(r.n) * r.c()) * (r.E({K1, K2inv}) - r.E({K1inv, K2})));
  });
  return cat;
}

const std::vector<Entry>& catalogue() {
  static const std::vector<Entry> cat = build_catalogue();
  return cat;
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::vector<Violation> compare_columns(const SparseVector& lhs, const SparseVector& rhs, ElementId col, FieldModulus q) {
  std::vector<Violation> out;
  std::size_t a = 0, b = 0;
  while (a < lhs.size() || b < rhs.size()) {
    const ElementId ra = a < lhs.size() ? lhs[a].first : ~ElementId{0};
    const ElementId rb = b < rhs.size() ? rhs[b].first : ~ElementId{0};
    const ElementId row = std::min(ra, rb);
    const QSqrtScalar x = ra == row ? lhs[a++].second : QSqrtScalar(q);
    const QSqrtScalar y = rb == row ? rhs[b++].second : QSqrtScalar(q);
    if (x != y) out.push_back({row, col, x, y});
  }
  return out;
}

RelationReport empty_report(const Relation& rel, const OperatorAlgebra& alg, CheckMode mode) {
  RelationReport rep;
  rep.relation_id = rel.id;
  rep.q = alg.field().value();
  rep.n = alg.context().n();
  rep.k = alg.context().k();
  rep.mode = mode;
  return rep;
}

void record(RelationReport& rep, std::vector<Violation> found) {
  rep.violation_count += found.size();
  for (auto& v : found) {
    if (rep.violations.size() < kMaxListedViolations) rep.violations.push_back(std::move(v));
  }
}

}  // namespace

const std::vector<std::string>& relation_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& e : catalogue()) out.push_back(e.id);
    return out;
  }();
  return ids;
}

std::vector<std::string> expand_relation_id(std::string_view id) {
  const auto& ids = relation_ids();
  if (id == "ALL") return ids;
  if (std::find(ids.begin(), ids.end(), id) != ids.end()) return {std::string(id)};
  static const std::vector<std::pair<std::string_view, std::string_view>> prefixes = {
      {"REL-8", "REL-8-"},       {"REL-CENT", "REL-CENT-"}, {"REL-COMM", "REL-COMM-"}, {"REL-FC", "REL-FC"},
      {"REL-A1", "REL-A1("},     {"REL-A2", "REL-A2("},     {"REL-A3", "REL-A3("},
  };
  std::vector<std::string> out;
  if (id == "REL-F") return {"REL-F0A", "REL-F0B", "REL-F+", "REL-F-"};
  if (id == "REL-RF") {
    for (const char* x : {"REL-1", "REL-2", "REL-3", "REL-4", "REL-5", "REL-6", "REL-7", "REL-8-printed", "REL-8-K2"}) {
      out.emplace_back(x);
    }
    return out;
  }
  for (const auto& [group, prefix] : prefixes) {
    if (group != id) continue;
    for (const auto& x : ids) {
      if (starts_with(x, prefix)) out.push_back(x);
    }
  }
  if (out.empty()) throw std::invalid_argument("unknown relation id: " + std::string(id));
  return out;
}

Relation make_relation(std::string_view id, FieldModulus q, int n, int k) {
  for (const auto& e : catalogue()) {
    if (e.id == id) return e.make(Ring{q, n, k});
  }
  throw std::invalid_argument("unknown relation id: " + std::string(id));
}

std::string_view mode_name(CheckMode mode) { return mode == CheckMode::Full ? "full" : "columns"; }

RelationReport verify_relation(const Relation& rel, const OperatorAlgebra& alg, CheckMode mode,
                               std::span<const ElementId> columns, unsigned workers) {
  const GeometryContext& g = alg.context();
  const FieldModulus q = alg.field();
  RelationReport rep = empty_report(rel, alg, mode);

  if (mode == CheckMode::Full) {
    if (!g.is_full()) throw std::invalid_argument("full-mode verification needs a full context");
    const SparseOperator diff = evaluate(rel.lhs - rel.rhs, alg);
    if (!diff.is_zero()) {
      const SparseOperator lhs = evaluate(rel.lhs, alg);
      const SparseOperator rhs = evaluate(rel.rhs, alg);
      rep.violation_count = diff.nnz();
      for (ElementId col = 0; col < diff.dimension() && rep.violations.size() < kMaxListedViolations; ++col) {
        for (ElementId row : diff.column(col).rows) {
          if (rep.violations.size() == kMaxListedViolations) break;
          rep.violations.push_back({row, col, lhs.entry(row, col), rhs.entry(row, col)});
        }
      }
    }
    rep.holds = rep.violation_count == 0;
    return rep;
  }

  std::vector<ElementId> cols(columns.begin(), columns.end());
  if (cols.empty()) {
    cols.resize(g.size());
    for (ElementId c = 0; c < g.size(); ++c) cols[c] = c;
  }
  for (ElementId c : cols) {
    if (c >= g.size()) throw std::invalid_argument("column id " + std::to_string(c) + " outside the context");
  }
  rep.columns = cols;

  const Expr diff = rel.lhs - rel.rhs;
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cols.size())));
  std::vector<std::vector<Violation>> found(cols.size());
  std::vector<std::exception_ptr> errors(threads);
  const auto work = [&](unsigned w) {
    try {
      ColumnEvaluator eval(alg);
      for (std::size_t t = w; t < cols.size(); t += threads) {
        if (eval.evaluate(diff, cols[t]).empty()) continue;
        found[t] = compare_columns(eval.evaluate(rel.lhs, cols[t]), eval.evaluate(rel.rhs, cols[t]), cols[t], q);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  // merge in column-id order regardless of how work was split
  std::vector<std::size_t> order(cols.size());
  for (std::size_t t = 0; t < order.size(); ++t) order[t] = t;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cols[a] < cols[b]; });
  for (std::size_t t : order) record(rep, std::move(found[t]));
  rep.holds = rep.violation_count == 0;
  return rep;
}

RelationReport verify_relation(std::string_view id, const OperatorAlgebra& alg, CheckMode mode,
                               std::span<const ElementId> columns, unsigned workers) {
  const GeometryContext& g = alg.context();
  return verify_relation(make_relation(id, g.field(), g.n(), g.k()), alg, mode, columns, workers);
}

std::string VariantResolution::holding_variant() const {
  if (printed.holds == corrected.holds) return {};
  return printed.holds ? printed.relation_id : corrected.relation_id;
}

VariantResolution resolve_rl_variant(const OperatorAlgebra& alg, CheckMode mode, std::span<const ElementId> columns,
                                     unsigned workers) {
  return {verify_relation("REL-8-printed", alg, mode, columns, workers),
          verify_relation("REL-8-K2", alg, mode, columns, workers)};
}

nlohmann::json to_json(const RelationReport& report) {
  nlohmann::json j;
  j["v"] = 1;
  j["relation_id"] = report.relation_id;
  j["instance"] = {{"q", report.q}, {"n", report.n}, {"k", report.k}};
  j["mode"] = std::string(mode_name(report.mode));
  if (report.mode == CheckMode::Columns) j["columns_checked"] = report.columns.size();
  j["holds"] = report.holds;
  j["violation_count"] = report.violation_count;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& v : report.violations) {
    list.push_back({{"row", v.row}, {"col", v.col}, {"lhs", v.lhs.to_string()}, {"rhs", v.rhs.to_string()}});
  }
  j["violations"] = std::move(list);
  return j;
}

}  // namespace qgrass
