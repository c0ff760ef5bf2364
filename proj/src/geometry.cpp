#include "qgrass/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace qgrass {

namespace {

Subspace default_reference(FieldModulus q, int n, int k) { return coordinate_span(q, n, 0, k); }

void validate(FieldModulus q, int n, int k, int lo, int hi, const Subspace& y) {
  if (!(n > k && k >= 1)) {
    throw std::invalid_argument("need n > k >= 1, got n=" + std::to_string(n) + " k=" + std::to_string(k));
  }
  if (n > kMaxAmbientDim) throw std::invalid_argument("ambient dimension too large");
  if (lo < 0 || hi > n || lo > hi) throw std::invalid_argument("dimension band out of range");
  if (y.field().value() != q.value() || y.ambient_dim() != n || y.dim() != k) {
    throw std::invalid_argument("reference space y must be a k-dimensional subspace of F_q^n");
  }
}

}  // namespace

GeometryContext::GeometryContext(FieldModulus q, int n, int k, int lo, int hi, Subspace y)
    : q_(q), n_(n), k_(k), lo_(lo), hi_(hi), y_(std::move(y)) {}

std::shared_ptr<const GeometryContext> GeometryContext::full(FieldModulus q, int n, int k, std::optional<Subspace> y) {
  return banded(q, n, k, 0, n, std::move(y));
}

std::shared_ptr<const GeometryContext> GeometryContext::banded(FieldModulus q, int n, int k, int lo, int hi,
                                                               std::optional<Subspace> y) {
  Subspace ref = y ? *y : default_reference(q, n, k);
  validate(q, n, k, lo, hi, ref);
  auto ctx = std::shared_ptr<GeometryContext>(new GeometryContext(q, n, k, lo, hi, std::move(ref)));
  ctx->build();
  return ctx;
}

std::shared_ptr<const GeometryContext> GeometryContext::graph_band(FieldModulus q, int n, int k,
                                                                   std::optional<Subspace> y) {
  return banded(q, n, k, std::max(0, k - 1), std::min(n, k + 1), std::move(y));
}

void GeometryContext::build() {
  std::size_t total = 0;
  for (int l = lo_; l <= hi_; ++l) total += gaussian_binomial(n_, l, q_.value());
  elements_.reserve(total);
  strata_.reserve(total);
  index_.reserve(total);
  dim_offsets_.push_back(0);
  for (int l = lo_; l <= hi_; ++l) {
    for_each_subspace(n_, l, q_, [&](const Subspace& u) {
      index_.emplace(u, static_cast<ElementId>(elements_.size()));
      strata_.push_back(classify_stratum(u, y_));
      elements_.push_back(u);
      return true;
    });
    dim_offsets_.push_back(static_cast<ElementId>(elements_.size()));
  }

  // Cover pairs (lower, upper) from the hyperplanes of each upper element.
  std::vector<std::pair<ElementId, ElementId>> pairs;
  for (int l = lo_ + 1; l <= hi_; ++l) {
    const IdRange range = dim_range(l);
    for (ElementId v = range.first; v < range.last; ++v) {
      for (const Subspace& h : hyperplanes_of(elements_[v])) pairs.emplace_back(id_of(h), v);
    }
  }
  const auto kind_of = [&](ElementId lower, ElementId upper) {
    return strata_[upper].i == strata_[lower].i + 1 ? CoverKind::Slash : CoverKind::Backslash;
  };
  down_ptr_.assign(elements_.size() + 1, 0);
  up_ptr_.assign(elements_.size() + 1, 0);
  for (const auto& [lower, upper] : pairs) {
    ++down_ptr_[upper + 1];
    ++up_ptr_[lower + 1];
  }
  for (std::size_t t = 0; t < elements_.size(); ++t) {
    down_ptr_[t + 1] += down_ptr_[t];
    up_ptr_[t + 1] += up_ptr_[t];
  }
  down_edges_.resize(pairs.size());
  up_edges_.resize(pairs.size());
  std::vector<std::uint32_t> down_fill(down_ptr_.begin(), down_ptr_.end() - 1);
  std::vector<std::uint32_t> up_fill(up_ptr_.begin(), up_ptr_.end() - 1);
  // pairs are generated in increasing upper id, so up lists end up sorted by
  // upper id; down lists keep hyperplane order and get sorted below.
  for (const auto& [lower, upper] : pairs) {
    const CoverKind kind = kind_of(lower, upper);
    down_edges_[down_fill[upper]++] = {lower, kind};
    up_edges_[up_fill[lower]++] = {upper, kind};
  }
  for (std::size_t t = 0; t < elements_.size(); ++t) {
    std::sort(down_edges_.begin() + down_ptr_[t], down_edges_.begin() + down_ptr_[t + 1],
              [](const CoverEdge& a, const CoverEdge& b) { return a.id < b.id; });
  }
}

std::optional<ElementId> GeometryContext::find(const Subspace& u) const {
  const auto it = index_.find(u);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ElementId GeometryContext::id_of(const Subspace& u) const {
  const auto it = index_.find(u);
  if (it == index_.end()) throw std::out_of_range("subspace " + u.to_string() + " is not in the context");
  return it->second;
}

IdRange GeometryContext::dim_range(int l) const {
  if (!has_dim(l)) return {};
  return {dim_offsets_[l - lo_], dim_offsets_[l - lo_ + 1]};
}

std::span<const CoverEdge> GeometryContext::down_covers(ElementId id) const {
  return {down_edges_.data() + down_ptr_[id], down_ptr_[id + 1] - down_ptr_[id]};
}

std::span<const CoverEdge> GeometryContext::up_covers(ElementId id) const {
  return {up_edges_.data() + up_ptr_[id], up_ptr_[id + 1] - up_ptr_[id]};
}

std::string GeometryContext::label() const {
  return "(q=" + std::to_string(q_.value()) + ",n=" + std::to_string(n_) + ",k=" + std::to_string(k_) + ")";
}

Stratum classify_stratum(const Subspace& u, const Subspace& y) {
  const int i = intersection_dim(u, y);
  return {i, u.dim() - i};
}

Stratum classify_stratum(const Subspace& u, const GeometryContext& ctx) { return classify_stratum(u, ctx.y()); }

std::optional<CoverKind> cover_kind(const Subspace& u, const Subspace& v, const Subspace& y) {
  if (v.dim() != u.dim() + 1 || !v.contains(u)) return std::nullopt;
  const Stratum su = classify_stratum(u, y);
  const Stratum sv = classify_stratum(v, y);
  if (sv.i == su.i + 1 && sv.j == su.j) return CoverKind::Slash;
  if (sv.i == su.i && sv.j == su.j + 1) return CoverKind::Backslash;
  throw std::logic_error("cover relation outside the slash/backslash dichotomy");
}

std::optional<CoverKind> cover_kind(const Subspace& u, const Subspace& v, const GeometryContext& ctx) {
  return cover_kind(u, v, ctx.y());
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int e = 0; e < exp; ++e) r *= base;
  return r;
}

std::int64_t qint(int m, int q) {
  if (m < 0) throw std::invalid_argument("qint requires m >= 0");
  std::int64_t sum = 0;
  std::int64_t term = 1;
  for (int e = 0; e < m; ++e) {
    sum += term;
    term *= q;
  }
  return sum;
}

std::int64_t qint(int m, FieldModulus q) { return qint(m, q.value()); }

CoverCountReport verify_cover_counts(const GeometryContext& ctx) {
  if (!ctx.is_full()) throw std::invalid_argument("cover counts need a full context");
  const int q = ctx.field().value();
  const int n = ctx.n();
  const int k = ctx.k();
  CoverCountReport report;
  for (ElementId id = 0; id < ctx.size(); ++id) {
    const Stratum s = ctx.stratum(id);
    std::int64_t slash_down = 0, back_down = 0, slash_up = 0, back_up = 0;
    for (const auto& e : ctx.down_covers(id)) (e.kind == CoverKind::Slash ? slash_down : back_down)++;
    for (const auto& e : ctx.up_covers(id)) (e.kind == CoverKind::Slash ? slash_up : back_up)++;
    const std::int64_t expected[4] = {ipow(q, s.j) * qint(s.i, q), qint(s.j, q), qint(k - s.i, q),
                                      ipow(q, k - s.i) * qint(n - k - s.j, q)};
    const std::int64_t actual[4] = {slash_down, back_down, slash_up, back_up};
    static const char* const kNames[4] = {"slash-down", "backslash-down", "slash-up", "backslash-up"};
    for (int t = 0; t < 4; ++t) {
      if (expected[t] != actual[t]) {
        report.violations.push_back({id, ctx.element(id).hex_rows(), s, kNames[t], expected[t], actual[t]});
      }
    }
    ++report.elements_checked;
  }
  return report;
}

}  // namespace qgrass
