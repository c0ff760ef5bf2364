#include "qgrass/sparse_operator.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace qgrass {

// Assembles a CSC operator column by column, interning values.
class OperatorBuilder {
 public:
  explicit OperatorBuilder(std::shared_ptr<const GeometryContext> ctx) : op_(std::move(ctx)) {
    op_.col_ptr_.assign(1, 0);
  }

  // Columns must be appended in order; entries sorted by row, nonzero.
  void push_column(const SparseVector& entries) {
    for (const auto& [row, value] : entries) {
      op_.rows_.push_back(row);
      op_.value_ids_.push_back(intern(value));
    }
    op_.col_ptr_.push_back(static_cast<std::uint32_t>(op_.rows_.size()));
  }

  SparseOperator finish() && {
    while (op_.col_ptr_.size() < op_.dimension() + 1) op_.col_ptr_.push_back(static_cast<std::uint32_t>(op_.rows_.size()));
    return std::move(op_);
  }

 private:
  std::uint32_t intern(const QSqrtScalar& value) {
    const auto it = pool_.find(value);
    if (it != pool_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(op_.values_.size());
    op_.values_.push_back(value);
    op_.unit_.push_back(value.is_one() ? 1 : 0);
    pool_.emplace(value, id);
    return id;
  }

  SparseOperator op_;
  std::unordered_map<QSqrtScalar, std::uint32_t> pool_;
};

namespace {

void require_same_context(const SparseOperator& a, const SparseOperator& b) {
  if (a.context_ptr() != b.context_ptr()) throw std::invalid_argument("operators belong to different contexts");
}

}  // namespace

SparseOperator::SparseOperator(std::shared_ptr<const GeometryContext> ctx)
    : ctx_(std::move(ctx)), col_ptr_(ctx_->size() + 1, 0) {}

SparseOperator SparseOperator::from_triplets(std::shared_ptr<const GeometryContext> ctx, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  OperatorBuilder builder(ctx);
  const auto q = ctx->field();
  std::size_t t = 0;
  for (ElementId col = 0; col < ctx->size(); ++col) {
    SparseVector column;
    while (t < triplets.size() && triplets[t].col == col) {
      if (triplets[t].row >= ctx->size()) throw std::out_of_range("triplet row outside context");
      QSqrtScalar sum(q);
      const ElementId row = triplets[t].row;
      for (; t < triplets.size() && triplets[t].col == col && triplets[t].row == row; ++t) sum += triplets[t].value;
      if (!sum.is_zero()) column.emplace_back(row, std::move(sum));
    }
    builder.push_column(column);
  }
  if (t != triplets.size()) throw std::out_of_range("triplet column outside context");
  return std::move(builder).finish();
}

SparseOperator SparseOperator::diagonal(std::shared_ptr<const GeometryContext> ctx,
                                        const std::function<QSqrtScalar(ElementId)>& entry) {
  OperatorBuilder builder(ctx);
  for (ElementId id = 0; id < ctx->size(); ++id) {
    QSqrtScalar v = entry(id);
    if (v.is_zero()) {
      builder.push_column({});
    } else {
      builder.push_column({{id, std::move(v)}});
    }
  }
  return std::move(builder).finish();
}

SparseOperator SparseOperator::identity(std::shared_ptr<const GeometryContext> ctx) {
  const auto q = ctx->field();
  return diagonal(std::move(ctx), [q](ElementId) { return QSqrtScalar(q, 1); });
}

SparseOperator SparseOperator::from_columns(std::shared_ptr<const GeometryContext> ctx,
                                            const std::function<SparseVector(ElementId)>& column) {
  OperatorBuilder builder(ctx);
  for (ElementId col = 0; col < ctx->size(); ++col) builder.push_column(column(col));
  return std::move(builder).finish();
}

QSqrtScalar SparseOperator::entry(ElementId row, ElementId col) const {
  const auto view = column(col);
  const auto it = std::lower_bound(view.rows.begin(), view.rows.end(), row);
  if (it == view.rows.end() || *it != row) return QSqrtScalar(field());
  return values_[view.value_ids[static_cast<std::size_t>(it - view.rows.begin())]];
}

SparseOperator::ColumnView SparseOperator::column(ElementId col) const {
  const auto begin = col_ptr_[col];
  const auto len = col_ptr_[col + 1] - begin;
  return {{rows_.data() + begin, len}, {value_ids_.data() + begin, len}};
}

SparseOperator SparseOperator::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (ElementId col = 0; col < dimension(); ++col) {
    const auto view = column(col);
    for (std::size_t e = 0; e < view.rows.size(); ++e) t.push_back({col, view.rows[e], values_[view.value_ids[e]]});
  }
  return from_triplets(ctx_, std::move(t));
}

SparseOperator SparseOperator::restricted_to_dim(int l) const {
  const IdRange range = ctx_->dim_range(l);
  OperatorBuilder builder(ctx_);
  for (ElementId col = 0; col < dimension(); ++col) {
    SparseVector column_entries;
    if (col >= range.first && col < range.last) {
      const auto view = column(col);
      for (std::size_t e = 0; e < view.rows.size(); ++e) {
        if (view.rows[e] >= range.first && view.rows[e] < range.last) {
          column_entries.emplace_back(view.rows[e], values_[view.value_ids[e]]);
        }
      }
    }
    builder.push_column(column_entries);
  }
  return std::move(builder).finish();
}

std::vector<SparseOperator::Triplet> SparseOperator::entries_row_major() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (ElementId col = 0; col < dimension(); ++col) {
    const auto view = column(col);
    for (std::size_t e = 0; e < view.rows.size(); ++e) out.push_back({view.rows[e], col, values_[view.value_ids[e]]});
  }
  std::sort(out.begin(), out.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return out;
}

Accumulator::Accumulator(FieldModulus q, std::size_t size)
    : dense_(size, QSqrtScalar(q)), used_(size, 0), zero_(q) {}

void Accumulator::add(ElementId row, const QSqrtScalar& value) {
  if (!used_[row]) {
    used_[row] = 1;
    touched_.push_back(row);
    dense_[row] = value;
  } else {
    dense_[row] += value;
  }
}

void Accumulator::add_scaled(const SparseVector& v, const QSqrtScalar& coeff) {
  if (coeff.is_zero()) return;
  const bool unit = coeff.is_one();
  for (const auto& [row, value] : v) add(row, unit ? value : coeff * value);
}

void Accumulator::add_product(const SparseOperator& a, const SparseVector& v) {
  for (const auto& [col, x] : v) {
    const auto view = a.column(col);
    const bool x_unit = x.is_one();
    for (std::size_t e = 0; e < view.rows.size(); ++e) {
      const auto vid = view.value_ids[e];
      if (a.value_is_one(vid)) {
        add(view.rows[e], x);
      } else if (x_unit) {
        add(view.rows[e], a.value(vid));
      } else {
        add(view.rows[e], a.value(vid) * x);
      }
    }
  }
}

SparseVector Accumulator::drain() {
  std::sort(touched_.begin(), touched_.end());
  SparseVector out;
  out.reserve(touched_.size());
  for (ElementId row : touched_) {
    if (!dense_[row].is_zero()) out.emplace_back(row, std::move(dense_[row]));
    dense_[row] = zero_;
    used_[row] = 0;
  }
  touched_.clear();
  return out;
}

SparseOperator op_add(const SparseOperator& a, const SparseOperator& b) {
  require_same_context(a, b);
  OperatorBuilder builder(a.context_ptr());
  Accumulator acc(a.field(), a.dimension());
  for (ElementId col = 0; col < a.dimension(); ++col) {
    for (const SparseOperator* op : {&a, &b}) {
      const auto view = op->column(col);
      for (std::size_t e = 0; e < view.rows.size(); ++e) acc.add(view.rows[e], op->value(view.value_ids[e]));
    }
    builder.push_column(acc.drain());
  }
  return std::move(builder).finish();
}

SparseOperator op_scale(const QSqrtScalar& c, const SparseOperator& a) {
  OperatorBuilder builder(a.context_ptr());
  for (ElementId col = 0; col < a.dimension(); ++col) {
    SparseVector column;
    if (!c.is_zero()) {
      const auto view = a.column(col);
      for (std::size_t e = 0; e < view.rows.size(); ++e) column.emplace_back(view.rows[e], c * a.value(view.value_ids[e]));
    }
    builder.push_column(column);
  }
  return std::move(builder).finish();
}

SparseOperator op_compose(const SparseOperator& a, const SparseOperator& b) {
  require_same_context(a, b);
  OperatorBuilder builder(a.context_ptr());
  Accumulator acc(a.field(), a.dimension());
  SparseVector bcol;
  for (ElementId col = 0; col < b.dimension(); ++col) {
    const auto view = b.column(col);
    bcol.clear();
    for (std::size_t e = 0; e < view.rows.size(); ++e) bcol.emplace_back(view.rows[e], b.value(view.value_ids[e]));
    acc.add_product(a, bcol);
    builder.push_column(acc.drain());
  }
  return std::move(builder).finish();
}

SparseOperator op_add_identity(const SparseOperator& a, const QSqrtScalar& c) {
  OperatorBuilder builder(a.context_ptr());
  Accumulator acc(a.field(), a.dimension());
  for (ElementId col = 0; col < a.dimension(); ++col) {
    const auto view = a.column(col);
    for (std::size_t e = 0; e < view.rows.size(); ++e) acc.add(view.rows[e], a.value(view.value_ids[e]));
    acc.add(col, c);
    builder.push_column(acc.drain());
  }
  return std::move(builder).finish();
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  return op_add(a, op_scale(QSqrtScalar(b.field(), -1), b));
}

bool operator==(const SparseOperator& a, const SparseOperator& b) {
  if (a.context_ptr() != b.context_ptr() || a.nnz() != b.nnz()) return false;
  for (ElementId col = 0; col < a.dimension(); ++col) {
    const auto va = a.column(col);
    const auto vb = b.column(col);
    if (!std::equal(va.rows.begin(), va.rows.end(), vb.rows.begin(), vb.rows.end())) return false;
    for (std::size_t e = 0; e < va.rows.size(); ++e) {
      if (a.value(va.value_ids[e]) != b.value(vb.value_ids[e])) return false;
    }
  }
  return true;
}

SparseVector mat_vec(const SparseOperator& a, const SparseVector& v) {
  Accumulator acc(a.field(), a.dimension());
  acc.add_product(a, v);
  return acc.drain();
}

SparseVector basis_vector(FieldModulus q, ElementId id) { return {{id, QSqrtScalar(q, 1)}}; }

}  // namespace qgrass
