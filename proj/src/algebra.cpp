#include "qgrass/algebra.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qgrass {

namespace {

constexpr std::array<std::string_view, kOpCount> kNames = {
    "I", "K1", "K2", "K1inv", "K2inv", "L1", "L2", "R1", "R2",
    "R", "L", "F0", "Fplus", "Fminus", "F", "Omega0", "Omega1", "Omega2",
};

std::size_t slot(Op op) { return static_cast<std::size_t>(op); }

bool is_f_family(Op op) { return op == Op::F0 || op == Op::Fplus || op == Op::Fminus; }

SparseVector ones(std::vector<ElementId> rows, FieldModulus q) {
  std::sort(rows.begin(), rows.end());
  SparseVector out;
  out.reserve(rows.size());
  for (ElementId r : rows) out.emplace_back(r, QSqrtScalar(q, 1));
  return out;
}

// Incidence columns: for L the rows are the elements below col, for R the
// elements above.
SparseVector cover_column(const GeometryContext& ctx, ElementId col, bool down, CoverKind kind) {
  std::vector<ElementId> rows;
  for (const auto& e : down ? ctx.down_covers(col) : ctx.up_covers(col)) {
    if (e.kind == kind) rows.push_back(e.id);
  }
  return ones(std::move(rows), ctx.field());
}

Expr omega_expr(Op which, FieldModulus q, int n, int k) {
  const auto h = [q](int m) { return q_pow_half(m, q); };
  const auto c = scalar(q, Rational(1, q.value() - 1));
  const auto s = [q](std::int64_t v) { return scalar(q, v); };
  const auto E = [q](auto... ops) {
    Expr e = Expr::constant(QSqrtScalar(q, 1));
    ((e = e * Expr::op(q, ops)), ...);
    return e;
  };
  const Expr I = Expr::constant(s(1));
  const int qv = q.value();
  switch (which) {
    case Op::Omega0:
      return h(-n) * (s(qv - 1) * E(Op::F0, Op::K1inv, Op::K2inv) + h(n - k) * E(Op::K1inv) + h(k) * E(Op::K2inv) -
                      E(Op::K1inv, Op::K2inv));
    case Op::Omega1:
      return h(-(n - k)) * (s(qv) * E(Op::F0, Op::K2inv) + s(qv - 1) * E(Op::Fminus, Op::K2inv) +
                            c * (h(k + 2) * E(Op::K1, Op::K2inv) + h(n + 2) * E(Op::K1inv) - s(qv) * E(Op::K2inv))) -
             (s(qv) * c) * I;
    case Op::Omega2:
      return h(-k) * (s(qv) * E(Op::F0, Op::K1inv) + s(qv - 1) * E(Op::Fplus, Op::K1inv) +
                      c * (h(n - k + 2) * E(Op::K1inv, Op::K2) + h(n + 2) * E(Op::K2inv) - s(qv) * E(Op::K1inv))) -
             (s(qv) * c) * I;
    default:
      throw std::logic_error("not an Omega");
  }
}

}  // namespace

std::string_view op_name(Op op) { return kNames[slot(op)]; }

std::optional<Op> op_from_name(std::string_view name) {
  for (std::size_t t = 0; t < kOpCount; ++t) {
    if (kNames[t] == name) return static_cast<Op>(t);
  }
  return std::nullopt;
}

bool is_generator(Op op) { return op >= Op::K1 && op <= Op::R2; }

int dim_shift(Op op) {
  switch (op) {
    case Op::L1:
    case Op::L2:
      return -1;
    case Op::R1:
    case Op::R2:
      return 1;
    default:
      return 0;
  }
}

SparseOperator build_generator(Op which, const std::shared_ptr<const GeometryContext>& ctx) {
  const FieldModulus q = ctx->field();
  const int n = ctx->n();
  const int k = ctx->k();
  const GeometryContext& g = *ctx;
  switch (which) {
    case Op::K1:
      return SparseOperator::diagonal(ctx, [&](ElementId u) { return q_pow_half(k - 2 * g.stratum(u).i, q); });
    case Op::K2:
      return SparseOperator::diagonal(ctx, [&](ElementId u) { return q_pow_half(2 * g.stratum(u).j - (n - k), q); });
    case Op::K1inv:
      return SparseOperator::diagonal(ctx, [&](ElementId u) { return q_pow_half(2 * g.stratum(u).i - k, q); });
    case Op::K2inv:
      return SparseOperator::diagonal(ctx, [&](ElementId u) { return q_pow_half((n - k) - 2 * g.stratum(u).j, q); });
    // (L1)_{u,v} = 1 when v /-covers u: column v lists what v covers.
    case Op::L1:
      return SparseOperator::from_columns(ctx, [&](ElementId v) { return cover_column(g, v, true, CoverKind::Slash); });
    case Op::L2:
      return SparseOperator::from_columns(ctx, [&](ElementId v) { return cover_column(g, v, true, CoverKind::Backslash); });
    case Op::R1:
      return SparseOperator::from_columns(ctx, [&](ElementId v) { return cover_column(g, v, false, CoverKind::Slash); });
    case Op::R2:
      return SparseOperator::from_columns(ctx, [&](ElementId v) { return cover_column(g, v, false, CoverKind::Backslash); });
    default:
      throw std::invalid_argument("not a generator: " + std::string(op_name(which)));
  }
}

Expr Expr::op(FieldModulus q, Op o) {
  Expr e(q);
  if (o == Op::I) {
    e.add_term(QSqrtScalar(q, 1), {});
  } else {
    e.add_term(QSqrtScalar(q, 1), {o});
  }
  return e;
}

Expr Expr::constant(const QSqrtScalar& c) {
  Expr e(FieldModulus::trusted(c.q()));
  e.add_term(c, {});
  return e;
}

void Expr::add_term(const QSqrtScalar& coeff, const std::vector<Op>& word) {
  if (coeff.q() != q_.value()) throw std::invalid_argument("expression terms over different fields");
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (it->word == word) {
      it->coeff += coeff;
      if (it->coeff.is_zero()) terms_.erase(it);
      return;
    }
  }
  if (!coeff.is_zero()) terms_.push_back({coeff, word});
}

Expr& Expr::operator+=(const Expr& o) {
  for (const auto& t : o.terms_) add_term(t.coeff, t.word);
  return *this;
}

Expr& Expr::operator-=(const Expr& o) {
  for (const auto& t : o.terms_) add_term(-t.coeff, t.word);
  return *this;
}

Expr operator*(const Expr& a, const Expr& b) {
  Expr out(a.q_);
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      std::vector<Op> word = x.word;
      word.insert(word.end(), y.word.begin(), y.word.end());
      out.add_term(x.coeff * y.coeff, word);
    }
  }
  return out;
}

Expr operator*(const QSqrtScalar& c, const Expr& a) {
  Expr out(a.q_);
  for (const auto& t : a.terms_) out.add_term(c * t.coeff, t.word);
  return out;
}

OperatorAlgebra::OperatorAlgebra(std::shared_ptr<const GeometryContext> ctx) : ctx_(std::move(ctx)) {}

OperatorAlgebra::~OperatorAlgebra() = default;

const SparseOperator& OperatorAlgebra::get(Op op) const {
  if (op == Op::I) throw std::invalid_argument("the identity is implicit");
  if (is_f_family(op)) {
    // one traversal yields all three
    std::call_once(once_[slot(Op::F0)], [this] {
      auto family = build_f_family();
      cache_[slot(Op::F0)] = std::make_unique<SparseOperator>(std::move(family[0]));
      cache_[slot(Op::Fplus)] = std::make_unique<SparseOperator>(std::move(family[1]));
      cache_[slot(Op::Fminus)] = std::make_unique<SparseOperator>(std::move(family[2]));
    });
  } else {
    std::call_once(once_[slot(op)], [this, op] { cache_[slot(op)] = std::make_unique<SparseOperator>(build(op)); });
  }
  return *cache_[slot(op)];
}

SparseOperator OperatorAlgebra::build(Op op) const {
  if (is_generator(op)) return build_generator(op, ctx_);
  const int k = ctx_->k();
  if (!ctx_->is_full() && !(ctx_->has_dim(k - 1) && ctx_->has_dim(k + 1))) {
    throw std::invalid_argument("banded context lacks dimensions k-1..k+1 needed for " + std::string(op_name(op)));
  }
  SparseOperator out(ctx_);
  switch (op) {
    case Op::R:
      out = get(Op::L1) * get(Op::R2);
      break;
    case Op::L:
      out = get(Op::R1) * get(Op::L2);
      break;
    case Op::F:
      out = get(Op::F0) + get(Op::Fplus) + get(Op::Fminus);
      break;
    case Op::Omega0:
    case Op::Omega1:
    case Op::Omega2:
      out = evaluate(omega_expr(op, field(), ctx_->n(), k), *this);
      break;
    default:
      throw std::logic_error("unhandled operator");
  }
  return ctx_->is_full() ? out : out.restricted_to_dim(k);
}

// Entrywise construction. For u != v of equal dimension, u+v covers both iff
// h = u ∩ v is covered by both, so every candidate v is reached exactly once
// as an upper cover of a lower cover h of u.
std::array<SparseOperator, 3> OperatorAlgebra::build_f_family() const {
  const GeometryContext& g = *ctx_;
  const FieldModulus q = g.field();
  const int k = g.k();
  if (!g.is_full() && !(g.has_dim(k - 1) && g.has_dim(k + 1))) {
    throw std::invalid_argument("banded context lacks dimensions k-1..k+1 needed for the F operators");
  }
  std::array<std::vector<std::vector<ElementId>>, 3> rows;
  for (auto& r : rows) r.resize(g.size());
  for (ElementId u = 0; u < g.size(); ++u) {
    if (!g.is_full() && g.dim_of(u) != k) continue;
    const Subspace& us = g.element(u);
    const int iu = g.stratum(u).i;
    for (const auto& down : g.down_covers(u)) {
      const int ih = g.stratum(down.id).i;
      for (const auto& up : g.up_covers(down.id)) {
        const ElementId v = up.id;
        if (v == u) continue;
        const int iv = g.stratum(v).i;
        const int is = intersection_dim(subspace_sum(us, g.element(v)), g.y());
        const bool s_slash_both = is == iu + 1 && is == iv + 1;
        const bool s_backslash_both = is == iu && is == iv;
        const bool h_slash_both = iu == ih + 1 && iv == ih + 1;
        const bool h_backslash_both = iu == ih && iv == ih;
        if (s_slash_both && h_backslash_both) rows[0][u].push_back(v);
        if (s_backslash_both) rows[1][u].push_back(v);
        if (h_slash_both) rows[2][u].push_back(v);
      }
    }
  }
  const auto make = [&](std::vector<std::vector<ElementId>>& r) {
    return SparseOperator::from_columns(ctx_, [&](ElementId u) { return ones(std::move(r[u]), q); });
  };
  return {make(rows[0]), make(rows[1]), make(rows[2])};
}

SparseOperator build_derived(Op which, const std::shared_ptr<const GeometryContext>& ctx) {
  if (is_generator(which) || which == Op::I) throw std::invalid_argument("not a derived operator");
  return OperatorAlgebra(ctx).get(which);
}

SparseOperator evaluate(const Expr& e, const OperatorAlgebra& alg) {
  const auto& ctx = alg.context_ptr();
  SparseOperator result(ctx);
  QSqrtScalar identity(alg.field());
  std::map<std::vector<Op>, SparseOperator> products;
  for (const auto& term : e.terms()) {
    if (term.word.empty()) {
      identity += term.coeff;
      continue;
    }
    // build right-to-left so shared suffixes are reused
    std::vector<Op> suffix{term.word.back()};
    if (!products.count(suffix)) products.emplace(suffix, alg.get(term.word.back()));
    for (std::size_t t = term.word.size() - 1; t-- > 0;) {
      std::vector<Op> longer{term.word[t]};
      longer.insert(longer.end(), suffix.begin(), suffix.end());
      if (!products.count(longer)) products.emplace(longer, alg.get(term.word[t]) * products.at(suffix));
      suffix = std::move(longer);
    }
    result = result + term.coeff * products.at(suffix);
  }
  if (!identity.is_zero()) result = op_add_identity(result, identity);
  return result;
}

ColumnEvaluator::ColumnEvaluator(const OperatorAlgebra& alg)
    : alg_(alg), scratch_(alg.field(), alg.context().size()), result_(alg.field(), alg.context().size()) {}

const SparseVector& ColumnEvaluator::suffix(std::span<const Op> word, std::size_t from, ElementId col, int col_dim) {
  std::vector<Op> key(word.begin() + static_cast<std::ptrdiff_t>(from), word.end());
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  if (from == word.size()) return cache_.emplace(key, basis_vector(alg_.field(), col)).first->second;

  const SparseVector& inner = suffix(word, from + 1, col, col_dim);
  const GeometryContext& g = alg_.context();
  const Op op = word[from];
  if (op == Op::I) return cache_.emplace(key, inner).first->second;
  if (!g.is_full()) {
    int d = col_dim;
    for (std::size_t t = from + 1; t < word.size(); ++t) d += dim_shift(word[t]);
    if (!is_generator(op) && d != g.k()) {
      throw std::invalid_argument(std::string(op_name(op)) + " applied off dimension k in a banded context");
    }
    if (!g.has_dim(d + dim_shift(op))) {
      throw std::invalid_argument("word leaves the dimension band of the context");
    }
  }
  scratch_.add_product(alg_.get(op), inner);
  return cache_.emplace(key, scratch_.drain()).first->second;
}

SparseVector ColumnEvaluator::evaluate(const Expr& e, ElementId col) {
  cache_.clear();
  const int d = alg_.context().dim_of(col);
  for (const auto& term : e.terms()) result_.add_scaled(suffix(term.word, 0, col, d), term.coeff);
  cache_.clear();
  return result_.drain();
}

SparseVector ColumnEvaluator::apply_word(std::span<const Op> word, ElementId col) {
  cache_.clear();
  SparseVector out = suffix(word, 0, col, alg_.context().dim_of(col));
  cache_.clear();
  return out;
}

QSqrtScalar entry_of_product(std::span<const SparseOperator* const> factors, ElementId row, ElementId col) {
  if (factors.empty()) throw std::invalid_argument("empty product");
  const FieldModulus q = factors.front()->field();
  SparseVector v = basis_vector(q, col);
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    if ((*it)->context_ptr() != factors.front()->context_ptr()) {
      throw std::invalid_argument("operators belong to different contexts");
    }
    v = mat_vec(**it, v);
  }
  const auto hit = std::lower_bound(v.begin(), v.end(), row, [](const auto& e, ElementId r) { return e.first < r; });
  return hit != v.end() && hit->first == row ? hit->second : QSqrtScalar(q);
}

QSqrtScalar entry_of_product(const OperatorAlgebra& alg, std::span<const Op> word, ElementId row, ElementId col) {
  ColumnEvaluator eval(alg);
  const SparseVector v = eval.apply_word(word, col);
  const auto hit = std::lower_bound(v.begin(), v.end(), row, [](const auto& e, ElementId r) { return e.first < r; });
  return hit != v.end() && hit->first == row ? hit->second : QSqrtScalar(alg.field());
}

}  // namespace qgrass
