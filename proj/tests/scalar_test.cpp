#include <gtest/gtest.h>

#include <random>

#include "qgrass/scalar.hpp"

using namespace qgrass;

namespace {

const FieldModulus kTwo(2);
const FieldModulus kThree(3);

QSqrtScalar random_scalar(std::mt19937_64& rng, FieldModulus q) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 12);
  return {q, Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

}  // namespace

TEST(Rational, ReducesAndNormalisesSign) {
  EXPECT_EQ(Rational(6, -4), Rational(-3, 2));
  EXPECT_EQ(Rational(6, -4).to_string(), "-3/2");
  EXPECT_EQ(Rational(0, -5).to_string(), "0");
  EXPECT_THROW(Rational(1, 0), std::domain_error);
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
}

TEST(Rational, PromotesOnOverflowAndDemotesBack) {
  const Rational big = Rational(INT64_MAX) * Rational(INT64_MAX);
  EXPECT_FALSE(big.is_small());
  const Rational back = big / Rational(INT64_MAX);
  EXPECT_TRUE(back.is_small());
  EXPECT_EQ(back, Rational(INT64_MAX));
  Rational acc = 1;
  for (int t = 0; t < 40; ++t) acc *= Rational(1, 3);
  for (int t = 0; t < 40; ++t) acc *= 3;
  EXPECT_EQ(acc, Rational(1));
}

TEST(QPowHalf, Examples) {
  EXPECT_TRUE(q_pow_half(0, kTwo).is_one());
  EXPECT_EQ(q_pow_half(1, kTwo), QSqrtScalar(kTwo, 0, 1));
  EXPECT_EQ(q_pow_half(-3, kTwo), QSqrtScalar(kTwo, 0, Rational(1, 4)));
  EXPECT_EQ(q_pow_half(-3, kTwo) * q_pow_half(-3, kTwo), QSqrtScalar(kTwo, Rational(1, 8)));
  EXPECT_EQ(q_pow_half(-3, kTwo).to_string(), "0 + 1/4*sqrt(2)");
}

TEST(QPowHalf, PowersInvertAndSquare) {
  for (int q : {2, 3, 5}) {
    const FieldModulus f(q);
    for (int m = -10; m <= 10; ++m) {
      EXPECT_TRUE((q_pow_half(m, f) * q_pow_half(-m, f)).is_one());
      Rational expected = 1;
      for (int t = 0; t < std::abs(m); ++t) expected = m > 0 ? expected * q : expected / Rational(q);
      EXPECT_EQ(q_pow_half(m, f) * q_pow_half(m, f), QSqrtScalar(f, expected));
    }
  }
}

TEST(QSqrtScalar, RingExamples) {
  const QSqrtScalar a(kTwo, 1, 1);
  const QSqrtScalar b(kTwo, 1, -1);
  EXPECT_EQ(a * b, QSqrtScalar(kTwo, -1));
  EXPECT_EQ(QSqrtScalar(kTwo, 0, 1).inverse(), QSqrtScalar(kTwo, 0, Rational(1, 2)));
  EXPECT_EQ(scalar(kThree, Rational(1) / Rational(kThree.value() - 1)), QSqrtScalar(kThree, Rational(1, 2)));
  EXPECT_THROW(QSqrtScalar(kTwo).inverse(), std::domain_error);
  EXPECT_THROW(QSqrtScalar(kTwo, 1) + QSqrtScalar(kThree, 1), std::invalid_argument);
}

TEST(QSqrtScalar, FieldAxiomsOnRandomSamples) {
  std::mt19937_64 rng(5);
  for (int q : {2, 3, 7}) {
    const FieldModulus f(q);
    for (int trial = 0; trial < 300; ++trial) {
      const auto x = random_scalar(rng, f);
      const auto y = random_scalar(rng, f);
      const auto z = random_scalar(rng, f);
      EXPECT_EQ((x * y) * z, x * (y * z));
      EXPECT_EQ((x + y) + z, x + (y + z));
      EXPECT_EQ(x * (y + z), x * y + x * z);
      EXPECT_EQ(x * y, y * x);
      EXPECT_TRUE((x - x).is_zero());
      if (!x.is_zero()) EXPECT_TRUE((x * x.inverse()).is_one());
    }
  }
}

TEST(QSqrtScalar, Rendering) {
  EXPECT_EQ(QSqrtScalar(kThree, Rational(-2, 4), 3).to_string(), "-1/2 + 3*sqrt(3)");
  EXPECT_EQ(QSqrtScalar(kTwo).to_string(), "0 + 0*sqrt(2)");
}
