#include "qgrass/scalar.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace qgrass {

namespace {

constexpr __int128 kMin = std::numeric_limits<std::int64_t>::min();
constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

BigInt to_big_int(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  BigInt out = static_cast<std::uint64_t>(mag >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(mag);
  return neg ? BigInt(-out) : out;
}

bool fits(__int128 v) { return v >= kMin && v <= kMax; }

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  *this = normalized(num, den);
}

Rational::Rational(const BigRational& value) { *this = from_big(value); }

Rational Rational::normalized(__int128 num, __int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (fits(num) && fits(den)) {
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }
  return from_big(BigRational(to_big_int(num), to_big_int(den)));
}

Rational Rational::from_big(BigRational value) {
  const BigInt& n = boost::multiprecision::numerator(value);
  const BigInt& d = boost::multiprecision::denominator(value);
  Rational r;
  if (n >= BigInt(std::numeric_limits<std::int64_t>::min()) && n <= BigInt(std::numeric_limits<std::int64_t>::max()) &&
      d <= BigInt(std::numeric_limits<std::int64_t>::max())) {
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }
  r.big_ = std::make_shared<const BigRational>(std::move(value));
  return r;
}

bool Rational::is_integer() const {
  return big_ ? boost::multiprecision::denominator(*big_) == 1 : den_ == 1;
}

int Rational::sign() const {
  if (big_) return big_->sign();
  return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
}

BigInt Rational::numerator() const { return big_ ? boost::multiprecision::numerator(*big_) : BigInt(num_); }
BigInt Rational::denominator() const { return big_ ? boost::multiprecision::denominator(*big_) : BigInt(den_); }

BigRational Rational::to_big() const { return big_ ? *big_ : BigRational(BigInt(num_), BigInt(den_)); }

std::string Rational::to_string() const {
  if (big_) {
    const BigInt d = boost::multiprecision::denominator(*big_);
    std::string s = boost::multiprecision::numerator(*big_).str();
    return d == 1 ? s : s + "/" + d.str();
  }
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

std::size_t Rational::hash() const {
  if (big_) return std::hash<std::string>{}(to_string());
  const auto h = static_cast<std::uint64_t>(num_) * 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(den_);
  return static_cast<std::size_t>(h ^ (h >> 29));
}

Rational Rational::operator-() const {
  if (big_ || num_ == std::numeric_limits<std::int64_t>::min()) return from_big(-to_big());
  Rational r = *this;
  r.num_ = -num_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t sum;
      if (!__builtin_add_overflow(a.num_, b.num_, &sum)) return Rational(sum);
    }
    return Rational::normalized(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                                static_cast<__int128>(a.den_) * b.den_);
  }
  return Rational::from_big(a.to_big() + b.to_big());
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) {
      std::int64_t prod;
      if (!__builtin_mul_overflow(a.num_, b.num_, &prod)) return Rational(prod);
    }
    return Rational::normalized(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  return Rational::from_big(a.to_big() * b.to_big());
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("division by zero rational");
  if (!a.big_ && !b.big_) {
    return Rational::normalized(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  return Rational::from_big(a.to_big() / b.to_big());
}

bool operator==(const Rational& a, const Rational& b) {
  // Both sides are canonical, so a small value never equals a big one.
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;
}

namespace {

void require_same_field(const QSqrtScalar& x, const QSqrtScalar& y) {
  if (x.q() != y.q()) throw std::invalid_argument("scalars over different fields");
}

}  // namespace

QSqrtScalar operator+(const QSqrtScalar& x, const QSqrtScalar& y) {
  require_same_field(x, y);
  return {FieldModulus::trusted(x.q_), x.a_ + y.a_, x.b_ + y.b_};
}

QSqrtScalar operator-(const QSqrtScalar& x, const QSqrtScalar& y) {
  require_same_field(x, y);
  return {FieldModulus::trusted(x.q_), x.a_ - y.a_, x.b_ - y.b_};
}

QSqrtScalar operator*(const QSqrtScalar& x, const QSqrtScalar& y) {
  require_same_field(x, y);
  const auto q = FieldModulus::trusted(x.q_);
  if (x.b_.is_zero() && y.b_.is_zero()) return {q, x.a_ * y.a_};
  // (a + b√q)(c + d√q) = (ac + bdq) + (ad + bc)√q
  return {q, x.a_ * y.a_ + x.b_ * y.b_ * Rational(x.q_), x.a_ * y.b_ + x.b_ * y.a_};
}

QSqrtScalar QSqrtScalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero in Q(sqrt q)");
  // a^2 - b^2 q is nonzero for (a,b) != 0 because sqrt(q) is irrational.
  const Rational norm = a_ * a_ - b_ * b_ * Rational(q_);
  return {FieldModulus::trusted(q_), a_ / norm, -b_ / norm};
}

std::string QSqrtScalar::to_string() const {
  return a_.to_string() + " + " + b_.to_string() + "*sqrt(" + std::to_string(q_) + ")";
}

std::size_t QSqrtScalar::hash() const { return a_.hash() * 31 + b_.hash() * 1000003 + static_cast<std::size_t>(q_); }

QSqrtScalar q_pow_half(int m, FieldModulus q) {
  const int half = m >= 0 ? m / 2 : -((-m + 1) / 2);  // floor(m / 2)
  Rational power = 1;
  const Rational base = half >= 0 ? Rational(q.value()) : Rational(1, q.value());
  for (int e = 0; e < std::abs(half); ++e) power *= base;
  if (m % 2 == 0) return {q, power};
  return {q, 0, power};
}

}  // namespace qgrass
