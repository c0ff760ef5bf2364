#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace qgrass {

// Order of the prime field GF(q). Prime powers are not supported.
class FieldModulus {
 public:
  /// Throws std::invalid_argument unless q is a prime in [2, 251].
  explicit FieldModulus(int q);

  /// Skips validation; for values already known to be valid.
  static FieldModulus trusted(int q) { return FieldModulus(q, 0); }

  int value() const { return q_; }
  std::uint8_t inverse(std::uint8_t a) const;

  friend bool operator==(FieldModulus a, FieldModulus b) { return a.q_ == b.q_; }

 private:
  FieldModulus(int q, int) : q_(q) {}
  int q_;
};

bool is_prime(int value);

/// Dense row-major matrix of residues mod q.
struct ResidueMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> cells;

  ResidueMatrix() = default;
  ResidueMatrix(int r, int c) : rows(r), cols(c), cells(static_cast<std::size_t>(r) * c, 0) {}
  ResidueMatrix(std::initializer_list<std::initializer_list<int>> init);

  std::uint8_t& at(int r, int c) { return cells[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c]; }
};

/// Largest supported ambient dimension (Zassenhaus rows need 2n bits).
inline constexpr int kMaxAmbientDim = 32;

/// A subspace of F_q^n held as its reduced row-echelon basis.
///
/// For q = 2 each basis row is one word with column c at bit n-1-c, so the
/// leftmost column is the most significant bit. For odd q each row is packed
/// as one byte per column, eight columns per word. Either way two Subspace
/// values are equal iff they are the same subspace.
class Subspace {
 public:
  using Words = boost::container::small_vector<std::uint64_t, 6>;

  /// The zero subspace of F_q^n.
  Subspace(FieldModulus q, int n);

  FieldModulus field() const { return FieldModulus::trusted(q_); }
  int ambient_dim() const { return n_; }
  int dim() const { return dim_; }
  bool is_zero() const { return dim_ == 0; }

  std::uint8_t entry(int row, int col) const;
  std::vector<std::uint8_t> row(int r) const;
  ResidueMatrix basis() const;
  std::vector<int> pivots() const;

  bool contains(std::span<const std::uint8_t> vec) const;
  bool contains(const Subspace& other) const;

  /// Rows as hex, separated by '.'; "0" for the zero subspace.
  std::string hex_rows() const;
  /// Row vectors in (1,0,1)-style notation, comma separated.
  std::string to_string() const;

  std::span<const std::uint64_t> words() const { return {words_.data(), words_.size()}; }
  std::size_t hash() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.q_ == b.q_ && a.n_ == b.n_ && a.dim_ == b.dim_ && a.words_ == b.words_;
  }
  friend bool operator<(const Subspace& a, const Subspace& b);

  // GF(2) construction from already-reduced bitmask rows (pivot order).
  static Subspace from_gf2_rref(int n, std::span<const std::uint64_t> rows);

 private:
  friend Subspace rref(const ResidueMatrix& m, FieldModulus q);
  friend Subspace rref_gf2(int n, std::span<const std::uint64_t> rows);

  int words_per_row() const { return q_ == 2 ? 1 : (n_ + 7) / 8; }

  int q_;
  int n_;
  int dim_ = 0;
  Words words_;
};

/// Canonical subspace equal to the row space of m (entries in [0,q)).
Subspace rref(const ResidueMatrix& m, FieldModulus q);

/// GF(2) fast path: rows are bitmasks with column c at bit n-1-c.
Subspace rref_gf2(int n, std::span<const std::uint64_t> rows);

/// Span of explicit vectors.
Subspace span_of(FieldModulus q, int n, const std::vector<std::vector<std::uint8_t>>& vectors);

/// Coordinate span of the given standard basis vectors (0-based).
Subspace coordinate_span(FieldModulus q, int n, std::initializer_list<int> axes);
Subspace coordinate_span(FieldModulus q, int n, int first, int count);

Subspace subspace_sum(const Subspace& u, const Subspace& v);
Subspace subspace_intersect(const Subspace& u, const Subspace& v);

/// dim(u ∩ v) via the dimension formula; cheaper than building the meet.
int intersection_dim(const Subspace& u, const Subspace& v);

/// Every l-dimensional subspace of F_q^n, each once, in RREF-pattern order:
/// pivot sets in lexicographic order, then free entries as an odometer.
std::vector<Subspace> enumerate_subspaces(int n, int l, FieldModulus q);

/// Streaming form of enumerate_subspaces; stop early by returning false.
void for_each_subspace(int n, int l, FieldModulus q, const std::function<bool(const Subspace&)>& visit);

/// The (dim u - 1)-dimensional subspaces of u.
std::vector<Subspace> hyperplanes_of(const Subspace& u);

/// The (dim u + 1)-dimensional subspaces containing u.
std::vector<Subspace> covers_above(const Subspace& u);

/// Gaussian binomial [n choose l]_q.
std::uint64_t gaussian_binomial(int n, int l, int q);

}  // namespace qgrass

template <>
struct std::hash<qgrass::Subspace> {
  std::size_t operator()(const qgrass::Subspace& s) const noexcept { return s.hash(); }
};
