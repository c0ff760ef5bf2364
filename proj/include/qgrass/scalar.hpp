#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "qgrass/field.hpp"

namespace qgrass {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Exact rational number. Values that fit in int64 numerator/denominator stay
// inline; anything larger is promoted to an arbitrary-precision rational and
// demoted again when a result fits.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const BigRational& value);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_integer() const;
  bool is_small() const { return !big_; }
  int sign() const;

  BigInt numerator() const;
  BigInt denominator() const;
  BigRational to_big() const;

  std::string to_string() const;
  std::size_t hash() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

 private:
  static Rational normalized(__int128 num, __int128 den);
  static Rational from_big(BigRational value);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const BigRational> big_;
};

/// Exact element a + b*sqrt(q) of Q(sqrt q) for a prime q.
///
/// sqrt(q) is irrational for prime q, so (a, b) is a unique coordinate pair
/// and equality is field-wise. Binary operations on scalars with different q
/// throw std::invalid_argument.
class QSqrtScalar {
 public:
  QSqrtScalar(FieldModulus q, Rational a = 0, Rational b = 0)
      : a_(std::move(a)), b_(std::move(b)), q_(q.value()) {}

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt_part() const { return b_; }
  int q() const { return q_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_one() const { return b_.is_zero() && a_ == Rational(1); }

  QSqrtScalar operator-() const { return {FieldModulus::trusted(q_), -a_, -b_}; }
  friend QSqrtScalar operator+(const QSqrtScalar& x, const QSqrtScalar& y);
  friend QSqrtScalar operator-(const QSqrtScalar& x, const QSqrtScalar& y);
  friend QSqrtScalar operator*(const QSqrtScalar& x, const QSqrtScalar& y);
  QSqrtScalar& operator+=(const QSqrtScalar& o) { return *this = *this + o; }
  QSqrtScalar& operator-=(const QSqrtScalar& o) { return *this = *this - o; }
  QSqrtScalar& operator*=(const QSqrtScalar& o) { return *this = *this * o; }

  /// Multiplicative inverse via the conjugate; throws std::domain_error on 0.
  QSqrtScalar inverse() const;

  friend bool operator==(const QSqrtScalar& x, const QSqrtScalar& y) {
    return x.q_ == y.q_ && x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const QSqrtScalar& x, const QSqrtScalar& y) { return !(x == y); }

  /// Renders "a + b*sqrt(q)" with reduced fractions, e.g. "0 + 1/4*sqrt(2)".
  std::string to_string() const;
  std::size_t hash() const;

 private:
  Rational a_;
  Rational b_;
  int q_;
};

/// q^(m/2) for any integer m.
QSqrtScalar q_pow_half(int m, FieldModulus q);

/// Rational constant embedded in Q(sqrt q).
inline QSqrtScalar scalar(FieldModulus q, Rational value) { return {q, std::move(value)}; }

}  // namespace qgrass

template <>
struct std::hash<qgrass::QSqrtScalar> {
  std::size_t operator()(const qgrass::QSqrtScalar& s) const noexcept { return s.hash(); }
};
