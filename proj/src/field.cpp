#include "qgrass/field.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>
#include <utility>

namespace qgrass {

namespace {

std::uint8_t mod_mul(int a, int b, int q) { return static_cast<std::uint8_t>((a * b) % q); }

void require_same_space(const Subspace& u, const Subspace& v) {
  if (u.field().value() != v.field().value() || u.ambient_dim() != v.ambient_dim()) {
    throw std::invalid_argument("subspaces live in different ambient spaces");
  }
}

// In-place full row reduction of a residue matrix; returns the rank.
int reduce_rows(ResidueMatrix& m, FieldModulus q) {
  const int p = q.value();
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < m.rows; ++r) {
      if (m.at(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(pivot, c), m.at(rank, c));
    }
    const std::uint8_t inv = q.inverse(m.at(rank, col));
    for (int c = col; c < m.cols; ++c) m.at(rank, c) = mod_mul(m.at(rank, c), inv, p);
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || m.at(r, col) == 0) continue;
      const int factor = m.at(r, col);
      for (int c = col; c < m.cols; ++c) {
        m.at(r, c) = static_cast<std::uint8_t>((m.at(r, c) + p * p - factor * m.at(rank, c)) % p);
      }
    }
    ++rank;
  }
  return rank;
}

// GF(2) full reduction of bitmask rows; reduced rows end up first.
int reduce_gf2(std::span<std::uint64_t> rows, int width) {
  int rank = 0;
  const int count = static_cast<int>(rows.size());
  for (int bit = width - 1; bit >= 0 && rank < count; --bit) {
    const std::uint64_t mask = std::uint64_t{1} << bit;
    int pivot = -1;
    for (int r = rank; r < count; ++r) {
      if (rows[r] & mask) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[pivot], rows[rank]);
    for (int r = 0; r < count; ++r) {
      if (r != rank && (rows[r] & mask)) rows[r] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

bool is_prime(int value) {
  if (value < 2) return false;
  for (int d = 2; d * d <= value; ++d) {
    if (value % d == 0) return false;
  }
  return true;
}

FieldModulus::FieldModulus(int q) : q_(q) {
  if (q < 2 || q > 251 || !is_prime(q)) {
    throw std::invalid_argument("field order must be a prime in [2, 251], got " + std::to_string(q));
  }
}

std::uint8_t FieldModulus::inverse(std::uint8_t a) const {
  if (a % q_ == 0) throw std::domain_error("zero has no inverse mod q");
  // Fermat: a^(q-2).
  int result = 1;
  int base = a % q_;
  for (int e = q_ - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % q_;
    base = base * base % q_;
  }
  return static_cast<std::uint8_t>(result);
}

ResidueMatrix::ResidueMatrix(std::initializer_list<std::initializer_list<int>> init) {
  rows = static_cast<int>(init.size());
  cols = rows == 0 ? 0 : static_cast<int>(init.begin()->size());
  cells.reserve(static_cast<std::size_t>(rows) * cols);
  for (const auto& r : init) {
    if (static_cast<int>(r.size()) != cols) throw std::invalid_argument("ragged matrix literal");
    for (int v : r) cells.push_back(static_cast<std::uint8_t>(v));
  }
}

Subspace::Subspace(FieldModulus q, int n) : q_(q.value()), n_(n) {
  if (n < 0 || n > kMaxAmbientDim) {
    throw std::invalid_argument("ambient dimension must be in [0, 32], got " + std::to_string(n));
  }
}

std::uint8_t Subspace::entry(int row, int col) const {
  if (q_ == 2) return static_cast<std::uint8_t>((words_[row] >> (n_ - 1 - col)) & 1U);
  const auto word = words_[static_cast<std::size_t>(row) * words_per_row() + col / 8];
  return static_cast<std::uint8_t>((word >> (8 * (col % 8))) & 0xffU);
}

std::vector<std::uint8_t> Subspace::row(int r) const {
  std::vector<std::uint8_t> out(n_);
  for (int c = 0; c < n_; ++c) out[c] = entry(r, c);
  return out;
}

ResidueMatrix Subspace::basis() const {
  ResidueMatrix m(dim_, n_);
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < n_; ++c) m.at(r, c) = entry(r, c);
  }
  return m;
}

std::vector<int> Subspace::pivots() const {
  std::vector<int> out;
  out.reserve(dim_);
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < n_; ++c) {
      if (entry(r, c) != 0) {
        out.push_back(c);
        break;
      }
    }
  }
  return out;
}

bool Subspace::contains(std::span<const std::uint8_t> vec) const {
  if (static_cast<int>(vec.size()) != n_) throw std::invalid_argument("vector length mismatch");
  // Reduce vec against the basis using pivots; it lies in the space iff the
  // remainder vanishes.
  std::vector<int> rem(vec.begin(), vec.end());
  const auto piv = pivots();
  for (int r = 0; r < dim_; ++r) {
    const int factor = rem[piv[r]] % q_;
    if (factor == 0) continue;
    for (int c = 0; c < n_; ++c) rem[c] = ((rem[c] - factor * entry(r, c)) % q_ + q_) % q_;
  }
  return std::all_of(rem.begin(), rem.end(), [](int v) { return v == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  require_same_space(*this, other);
  if (other.dim_ > dim_) return false;
  return subspace_sum(*this, other).dim() == dim_;
}

std::string Subspace::hex_rows() const {
  if (dim_ == 0) return "0";
  std::string out;
  char buf[24];
  for (int r = 0; r < dim_; ++r) {
    if (r) out += '.';
    if (q_ == 2) {
      std::snprintf(buf, sizeof buf, "%0*llx", std::max(1, (n_ + 3) / 4),
                    static_cast<unsigned long long>(words_[r]));
      out += buf;
    } else {
      for (int c = 0; c < n_; ++c) {
        std::snprintf(buf, sizeof buf, "%02x", entry(r, c));
        out += buf;
      }
    }
  }
  return out;
}

std::string Subspace::to_string() const {
  std::string out = "span{";
  for (int r = 0; r < dim_; ++r) {
    if (r) out += ", ";
    for (int c = 0; c < n_; ++c) out += std::to_string(entry(r, c));
  }
  return out + "}";
}

std::size_t Subspace::hash() const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(n_) << 32) ^
                    static_cast<std::uint64_t>(dim_) ^ (static_cast<std::uint64_t>(q_) << 48);
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

bool operator<(const Subspace& a, const Subspace& b) {
  if (a.dim_ != b.dim_) return a.dim_ < b.dim_;
  // Leftmost column is most significant, so numeric order on q=2 words is
  // lexicographic order on basis rows.
  if (a.q_ == 2) return std::lexicographical_compare(a.words_.begin(), a.words_.end(), b.words_.begin(), b.words_.end());
  for (int r = 0; r < a.dim_; ++r) {
    for (int c = 0; c < a.n_; ++c) {
      if (a.entry(r, c) != b.entry(r, c)) return a.entry(r, c) < b.entry(r, c);
    }
  }
  return false;
}

Subspace Subspace::from_gf2_rref(int n, std::span<const std::uint64_t> rows) {
  Subspace s(FieldModulus::trusted(2), n);
  s.dim_ = static_cast<int>(rows.size());
  s.words_.assign(rows.begin(), rows.end());
  return s;
}

Subspace rref_gf2(int n, std::span<const std::uint64_t> rows) {
  Subspace::Words work(rows.begin(), rows.end());
  const int rank = reduce_gf2({work.data(), work.size()}, n);
  work.resize(rank);
  Subspace s(FieldModulus::trusted(2), n);
  s.dim_ = rank;
  s.words_ = std::move(work);
  return s;
}

Subspace rref(const ResidueMatrix& m, FieldModulus q) {
  if (q.value() == 2) {
    Subspace::Words rows;
    rows.reserve(m.rows);
    for (int r = 0; r < m.rows; ++r) {
      std::uint64_t w = 0;
      for (int c = 0; c < m.cols; ++c) {
        if (m.at(r, c) % 2) w |= std::uint64_t{1} << (m.cols - 1 - c);
      }
      rows.push_back(w);
    }
    return rref_gf2(m.cols, {rows.data(), rows.size()});
  }
  ResidueMatrix work = m;
  for (auto& cell : work.cells) cell = static_cast<std::uint8_t>(cell % q.value());
  const int rank = reduce_rows(work, q);
  Subspace s(q, m.cols);
  s.dim_ = rank;
  const int wpr = s.words_per_row();
  s.words_.assign(static_cast<std::size_t>(rank) * wpr, 0);
  for (int r = 0; r < rank; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      s.words_[static_cast<std::size_t>(r) * wpr + c / 8] |= std::uint64_t{work.at(r, c)} << (8 * (c % 8));
    }
  }
  return s;
}

Subspace span_of(FieldModulus q, int n, const std::vector<std::vector<std::uint8_t>>& vectors) {
  ResidueMatrix m(static_cast<int>(vectors.size()), n);
  for (int r = 0; r < m.rows; ++r) {
    if (static_cast<int>(vectors[r].size()) != n) throw std::invalid_argument("vector length mismatch");
    for (int c = 0; c < n; ++c) m.at(r, c) = vectors[r][c];
  }
  return rref(m, q);
}

Subspace coordinate_span(FieldModulus q, int n, std::initializer_list<int> axes) {
  ResidueMatrix m(static_cast<int>(axes.size()), n);
  int r = 0;
  for (int axis : axes) m.at(r++, axis) = 1;
  return rref(m, q);
}

Subspace coordinate_span(FieldModulus q, int n, int first, int count) {
  ResidueMatrix m(count, n);
  for (int r = 0; r < count; ++r) m.at(r, first + r) = 1;
  return rref(m, q);
}

Subspace subspace_sum(const Subspace& u, const Subspace& v) {
  require_same_space(u, v);
  const int n = u.ambient_dim();
  if (u.field().value() == 2) {
    Subspace::Words rows(u.words().begin(), u.words().end());
    rows.insert(rows.end(), v.words().begin(), v.words().end());
    return rref_gf2(n, {rows.data(), rows.size()});
  }
  ResidueMatrix m(u.dim() + v.dim(), n);
  for (int r = 0; r < u.dim(); ++r)
    for (int c = 0; c < n; ++c) m.at(r, c) = u.entry(r, c);
  for (int r = 0; r < v.dim(); ++r)
    for (int c = 0; c < n; ++c) m.at(u.dim() + r, c) = v.entry(r, c);
  return rref(m, u.field());
}

// Zassenhaus: reduce [u | u ; v | 0]; rows whose left half vanishes span the
// intersection in their right half.
Subspace subspace_intersect(const Subspace& u, const Subspace& v) {
  require_same_space(u, v);
  const int n = u.ambient_dim();
  if (u.field().value() == 2) {
    Subspace::Words rows;
    for (auto w : u.words()) rows.push_back((w << n) | w);
    for (auto w : v.words()) rows.push_back(w << n);
    const int rank = reduce_gf2({rows.data(), rows.size()}, 2 * n);
    const std::uint64_t low = n == 0 ? 0 : (~std::uint64_t{0} >> (64 - n));
    Subspace::Words meet;
    for (int r = 0; r < rank; ++r) {
      if ((rows[r] >> n) == 0) meet.push_back(rows[r] & low);
    }
    return rref_gf2(n, {meet.data(), meet.size()});
  }
  ResidueMatrix m(u.dim() + v.dim(), 2 * n);
  for (int r = 0; r < u.dim(); ++r) {
    for (int c = 0; c < n; ++c) {
      m.at(r, c) = u.entry(r, c);
      m.at(r, n + c) = u.entry(r, c);
    }
  }
  for (int r = 0; r < v.dim(); ++r)
    for (int c = 0; c < n; ++c) m.at(u.dim() + r, c) = v.entry(r, c);
  const int rank = reduce_rows(m, u.field());
  ResidueMatrix meet(0, n);
  for (int r = 0; r < rank; ++r) {
    bool left_zero = true;
    for (int c = 0; c < n && left_zero; ++c) left_zero = m.at(r, c) == 0;
    if (!left_zero) continue;
    ++meet.rows;
    for (int c = 0; c < n; ++c) meet.cells.push_back(m.at(r, n + c));
  }
  return rref(meet, u.field());
}

int intersection_dim(const Subspace& u, const Subspace& v) {
  return u.dim() + v.dim() - subspace_sum(u, v).dim();
}

void for_each_subspace(int n, int l, FieldModulus q, const std::function<bool(const Subspace&)>& visit) {
  if (n < 0 || n > kMaxAmbientDim) throw std::invalid_argument("ambient dimension out of range");
  if (l < 0 || l > n) {
    throw std::invalid_argument("subspace dimension " + std::to_string(l) + " outside [0, " + std::to_string(n) + "]");
  }
  const int p = q.value();
  std::vector<int> piv(l);
  for (int r = 0; r < l; ++r) piv[r] = r;
  while (true) {
    // Free cells: (row r, column c) with c > piv[r] and c not a pivot.
    std::vector<std::pair<int, int>> free_cells;
    for (int r = 0; r < l; ++r) {
      for (int c = piv[r] + 1; c < n; ++c) {
        if (!std::binary_search(piv.begin(), piv.end(), c)) free_cells.emplace_back(r, c);
      }
    }
    std::vector<int> digits(free_cells.size(), 0);
    ResidueMatrix m(l, n);
    for (int r = 0; r < l; ++r) m.at(r, piv[r]) = 1;
    while (true) {
      Subspace s(q, n);
      if (p == 2) {
        Subspace::Words rows(l, 0);
        for (int r = 0; r < l; ++r) rows[r] = std::uint64_t{1} << (n - 1 - piv[r]);
        for (std::size_t f = 0; f < free_cells.size(); ++f) {
          if (digits[f]) rows[free_cells[f].first] |= std::uint64_t{1} << (n - 1 - free_cells[f].second);
        }
        s = Subspace::from_gf2_rref(n, {rows.data(), rows.size()});
      } else {
        for (std::size_t f = 0; f < free_cells.size(); ++f) {
          m.at(free_cells[f].first, free_cells[f].second) = static_cast<std::uint8_t>(digits[f]);
        }
        s = rref(m, q);
      }
      if (!visit(s)) return;
      // Odometer: the last free cell varies fastest.
      int f = static_cast<int>(digits.size()) - 1;
      while (f >= 0 && ++digits[f] == p) digits[f--] = 0;
      if (f < 0) break;
    }
    // Next pivot combination in lexicographic order.
    int r = l - 1;
    while (r >= 0 && piv[r] == n - l + r) --r;
    if (r < 0) break;
    ++piv[r];
    for (int t = r + 1; t < l; ++t) piv[t] = piv[t - 1] + 1;
  }
}

std::vector<Subspace> enumerate_subspaces(int n, int l, FieldModulus q) {
  std::vector<Subspace> out;
  out.reserve(static_cast<std::size_t>(gaussian_binomial(n, l, q.value())));
  for_each_subspace(n, l, q, [&](const Subspace& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

std::vector<Subspace> hyperplanes_of(const Subspace& u) {
  const int d = u.dim();
  const int n = u.ambient_dim();
  const int p = u.field().value();
  std::vector<Subspace> out;
  if (d == 0) return out;
  if (p == 2) {
    const auto rows = u.words();
    out.reserve((std::size_t{1} << d) - 1);
    Subspace::Words work;
    for (int t = 0; t < d; ++t) {
      const int tail = d - 1 - t;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << tail); ++mask) {
        work.clear();
        for (int s = 0; s < d; ++s) {
          if (s == t) continue;
          const bool coeff = s > t && ((mask >> (s - t - 1)) & 1U);
          work.push_back(coeff ? rows[s] ^ rows[t] : rows[s]);
        }
        out.push_back(rref_gf2(n, {work.data(), work.size()}));
      }
    }
    return out;
  }
  const ResidueMatrix b = u.basis();
  // Each hyperplane is the kernel of a functional f on coefficient space,
  // normalised so its first nonzero coordinate t is 1. The kernel is spanned
  // by e_s - f_s e_t for s != t.
  std::vector<int> f(d, 0);
  for (int t = 0; t < d; ++t) {
    // Coordinates before t are zero, f_t = 1, coordinates after t are free.
    const int tail = d - 1 - t;
    std::vector<int> digits(tail, 0);
    while (true) {
      std::fill(f.begin(), f.end(), 0);
      f[t] = 1;
      for (int s = 0; s < tail; ++s) f[t + 1 + s] = digits[s];
      ResidueMatrix m(d - 1, n);
      int row = 0;
      for (int s = 0; s < d; ++s) {
        if (s == t) continue;
        for (int c = 0; c < n; ++c) {
          m.at(row, c) = static_cast<std::uint8_t>(((b.at(s, c) - f[s] * b.at(t, c)) % p + p) % p);
        }
        ++row;
      }
      out.push_back(rref(m, u.field()));
      int k = tail - 1;
      while (k >= 0 && ++digits[k] == p) digits[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

std::vector<Subspace> covers_above(const Subspace& u) {
  // Vectors supported on the non-pivot columns of u form a complement; each
  // projective point of that complement gives a distinct cover.
  const int n = u.ambient_dim();
  const int p = u.field().value();
  const auto piv = u.pivots();
  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c) {
    if (!std::binary_search(piv.begin(), piv.end(), c)) free_cols.push_back(c);
  }
  std::vector<Subspace> out;
  const ResidueMatrix b = u.basis();
  const int m = static_cast<int>(free_cols.size());
  for (int t = 0; t < m; ++t) {
    const int tail = m - 1 - t;
    std::vector<int> digits(tail, 0);
    while (true) {
      ResidueMatrix stacked(u.dim() + 1, n);
      std::copy(b.cells.begin(), b.cells.end(), stacked.cells.begin());
      stacked.at(u.dim(), free_cols[t]) = 1;
      for (int s = 0; s < tail; ++s) stacked.at(u.dim(), free_cols[t + 1 + s]) = static_cast<std::uint8_t>(digits[s]);
      out.push_back(rref(stacked, u.field()));
      int k = tail - 1;
      while (k >= 0 && ++digits[k] == p) digits[k--] = 0;
      if (k < 0) break;
    }
  }
  return out;
}

std::uint64_t gaussian_binomial(int n, int l, int q) {
  if (l < 0 || l > n) return 0;
  // Pascal-style recurrence [n,l] = [n-1,l-1] + q^l [n-1,l].
  std::vector<std::uint64_t> row(static_cast<std::size_t>(l) + 1, 0);
  row[0] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int t = std::min(m, l); t >= 1; --t) {
      std::uint64_t qt = 1;
      for (int e = 0; e < t; ++e) qt *= static_cast<std::uint64_t>(q);
      row[t] = row[t - 1] + qt * row[t];
    }
  }
  return row[l];
}

}  // namespace qgrass
