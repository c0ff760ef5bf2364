#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "qgrass/geometry.hpp"
#include "qgrass/scalar.hpp"

namespace qgrass {

/// Sparse vector over the ids of a context, sorted by id, no explicit zeros.
using SparseVector = std::vector<std::pair<ElementId, QSqrtScalar>>;

/// Exact matrix indexed by the elements of a GeometryContext.
///
/// Stored column-major (CSC) because every consumer walks columns: products
/// are built column by column and mat-vec on a sparse input is a sum of
/// scaled columns. Distinct entry values are interned, so 0/1 incidence
/// matrices cost eight bytes per nonzero.
class SparseOperator {
 public:
  struct Triplet {
    ElementId row;
    ElementId col;
    QSqrtScalar value;
  };

  struct ColumnView {
    std::span<const ElementId> rows;
    std::span<const std::uint32_t> value_ids;
  };

  explicit SparseOperator(std::shared_ptr<const GeometryContext> ctx);

  /// Duplicate (row, col) entries are summed and zeros dropped.
  static SparseOperator from_triplets(std::shared_ptr<const GeometryContext> ctx, std::vector<Triplet> triplets);
  static SparseOperator diagonal(std::shared_ptr<const GeometryContext> ctx,
                                 const std::function<QSqrtScalar(ElementId)>& entry);
  static SparseOperator identity(std::shared_ptr<const GeometryContext> ctx);
  /// column(c) must return entries sorted by row with no zeros.
  static SparseOperator from_columns(std::shared_ptr<const GeometryContext> ctx,
                                     const std::function<SparseVector(ElementId)>& column);

  const GeometryContext& context() const { return *ctx_; }
  const std::shared_ptr<const GeometryContext>& context_ptr() const { return ctx_; }
  FieldModulus field() const { return ctx_->field(); }
  std::size_t dimension() const { return ctx_->size(); }
  std::size_t nnz() const { return rows_.size(); }
  bool is_zero() const { return rows_.empty(); }

  QSqrtScalar entry(ElementId row, ElementId col) const;
  ColumnView column(ElementId col) const;
  const QSqrtScalar& value(std::uint32_t value_id) const { return values_[value_id]; }
  bool value_is_one(std::uint32_t value_id) const { return unit_[value_id] != 0; }

  SparseOperator transpose() const;
  /// Keeps only entries whose row and column both have dimension l.
  SparseOperator restricted_to_dim(int l) const;

  /// All entries ordered row-major by (row, col).
  std::vector<Triplet> entries_row_major() const;

 private:
  friend class OperatorBuilder;

  std::shared_ptr<const GeometryContext> ctx_;
  std::vector<std::uint32_t> col_ptr_;
  std::vector<ElementId> rows_;
  std::vector<std::uint32_t> value_ids_;
  std::vector<QSqrtScalar> values_;
  std::vector<char> unit_;
};

/// Scatter accumulator over the ids of one context.
class Accumulator {
 public:
  Accumulator(FieldModulus q, std::size_t size);

  void add(ElementId row, const QSqrtScalar& value);
  /// Adds every entry of v scaled by coeff.
  void add_scaled(const SparseVector& v, const QSqrtScalar& coeff);
  /// Adds A * v.
  void add_product(const SparseOperator& a, const SparseVector& v);
  /// Sorted nonzero entries; resets the accumulator.
  SparseVector drain();

 private:
  std::vector<QSqrtScalar> dense_;
  std::vector<char> used_;
  std::vector<ElementId> touched_;
  QSqrtScalar zero_;
};

SparseOperator op_add(const SparseOperator& a, const SparseOperator& b);
SparseOperator op_scale(const QSqrtScalar& c, const SparseOperator& a);
SparseOperator op_compose(const SparseOperator& a, const SparseOperator& b);
/// a + c·I without materialising I separately.
SparseOperator op_add_identity(const SparseOperator& a, const QSqrtScalar& c);

inline SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) { return op_add(a, b); }
inline SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) { return op_compose(a, b); }
inline SparseOperator operator*(const QSqrtScalar& c, const SparseOperator& a) { return op_scale(c, a); }
SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);

bool operator==(const SparseOperator& a, const SparseOperator& b);

SparseVector mat_vec(const SparseOperator& a, const SparseVector& v);
SparseVector basis_vector(FieldModulus q, ElementId id);

}  // namespace qgrass
