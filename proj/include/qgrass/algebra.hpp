#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qgrass/sparse_operator.hpp"

namespace qgrass {

/// Named elements of the algebra: the generators, their inverses, and the
/// derived operators.
enum class Op {
  I,
  K1,
  K2,
  K1inv,
  K2inv,
  L1,
  L2,
  R1,
  R2,
  R,
  L,
  F0,
  Fplus,
  Fminus,
  F,
  Omega0,
  Omega1,
  Omega2,
};

inline constexpr std::size_t kOpCount = 18;

std::string_view op_name(Op op);
std::optional<Op> op_from_name(std::string_view name);
bool is_generator(Op op);

/// Change in subspace dimension when op is applied to a basis vector e_u.
int dim_shift(Op op);

/// K1, K2, K1inv, K2inv, L1, L2, R1, R2 on every element of ctx. In a banded
/// context the cover matrices only link dimensions that are both present.
SparseOperator build_generator(Op which, const std::shared_ptr<const GeometryContext>& ctx);

/// Linear combination of words in Op with coefficients in Q(sqrt q).
/// The empty word is the identity.
class Expr {
 public:
  struct Term {
    QSqrtScalar coeff;
    std::vector<Op> word;
  };

  explicit Expr(FieldModulus q) : q_(q) {}

  static Expr op(FieldModulus q, Op o);
  static Expr constant(const QSqrtScalar& c);

  FieldModulus field() const { return q_; }
  const std::vector<Term>& terms() const { return terms_; }

  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator*(const QSqrtScalar& c, const Expr& a);

 private:
  void add_term(const QSqrtScalar& coeff, const std::vector<Op>& word);

  FieldModulus q_;
  std::vector<Term> terms_;
};

/// The operators of one context, built on first use and cached.
///
/// In a banded context the derived operators (R, L, the F family and the
/// Omegas) are only meaningful on dimension k and are restricted to it.
/// Thread-safe.
class OperatorAlgebra {
 public:
  explicit OperatorAlgebra(std::shared_ptr<const GeometryContext> ctx);
  ~OperatorAlgebra();

  const GeometryContext& context() const { return *ctx_; }
  const std::shared_ptr<const GeometryContext>& context_ptr() const { return ctx_; }
  FieldModulus field() const { return ctx_->field(); }

  /// Throws std::invalid_argument for Op::I (identity is implicit).
  const SparseOperator& get(Op op) const;

 private:
  SparseOperator build(Op op) const;
  std::array<SparseOperator, 3> build_f_family() const;

  std::shared_ptr<const GeometryContext> ctx_;
  mutable std::array<std::once_flag, kOpCount> once_;
  mutable std::array<std::unique_ptr<SparseOperator>, kOpCount> cache_;
};

/// Derived operator on its own context; convenience over OperatorAlgebra.
SparseOperator build_derived(Op which, const std::shared_ptr<const GeometryContext>& ctx);

/// Materialises an expression as an operator.
SparseOperator evaluate(const Expr& e, const OperatorAlgebra& alg);

/// Applies expressions to single basis vectors by repeated mat-vec, sharing
/// word suffixes between terms. One instance per thread.
///
/// In a banded context every intermediate vector must stay inside the band
/// and derived operators may only act on dimension k; anything else throws
/// std::invalid_argument because the truncated operators would be wrong.
class ColumnEvaluator {
 public:
  explicit ColumnEvaluator(const OperatorAlgebra& alg);

  SparseVector evaluate(const Expr& e, ElementId col);
  SparseVector apply_word(std::span<const Op> word, ElementId col);

 private:
  const SparseVector& suffix(std::span<const Op> word, std::size_t from, ElementId col, int col_dim);

  const OperatorAlgebra& alg_;
  Accumulator scratch_;
  Accumulator result_;
  std::map<std::vector<Op>, SparseVector> cache_;
};

/// ((a_1 a_2 ... a_m) e_col)_row by repeated mat-vec; the product is never
/// formed. Factors must share a context.
QSqrtScalar entry_of_product(std::span<const SparseOperator* const> factors, ElementId row, ElementId col);
QSqrtScalar entry_of_product(const OperatorAlgebra& alg, std::span<const Op> word, ElementId row, ElementId col);

}  // namespace qgrass
