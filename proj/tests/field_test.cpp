#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracles.hpp"
#include "qgrass/field.hpp"

using namespace qgrass;

namespace {

const FieldModulus kGF2(2);
const FieldModulus kGF3(3);

ResidueMatrix permuted_rows(const ResidueMatrix& m, std::mt19937_64& rng) {
  std::vector<int> order(m.rows);
  for (int r = 0; r < m.rows; ++r) order[r] = r;
  std::shuffle(order.begin(), order.end(), rng);
  ResidueMatrix out(m.rows, m.cols);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) out.at(r, c) = m.at(order[r], c);
  }
  return out;
}

}  // namespace

TEST(FieldModulus, RejectsNonPrimes) {
  EXPECT_THROW(FieldModulus(4), std::invalid_argument);
  EXPECT_THROW(FieldModulus(1), std::invalid_argument);
  EXPECT_THROW(FieldModulus(0), std::invalid_argument);
  EXPECT_EQ(FieldModulus(7).value(), 7);
  EXPECT_EQ(FieldModulus(5).inverse(3), 2);
}

TEST(Rref, IdentityStaysIdentity) {
  const Subspace u = rref({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, kGF2);
  EXPECT_EQ(u.dim(), 3);
  const auto b = u.basis();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) EXPECT_EQ(b.at(r, c), r == c ? 1 : 0);
  }
}

TEST(Rref, HandReducedExample) {
  const Subspace u = rref({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}, kGF2);
  ASSERT_EQ(u.dim(), 2);
  EXPECT_EQ(u.row(0), (std::vector<std::uint8_t>{1, 0, 1}));
  EXPECT_EQ(u.row(1), (std::vector<std::uint8_t>{0, 1, 1}));
}

TEST(Rref, ZeroMatrix) {
  EXPECT_EQ(rref(ResidueMatrix(2, 4), kGF3).dim(), 0);
  EXPECT_EQ(rref(ResidueMatrix(2, 4), kGF3).hex_rows(), "0");
}

TEST(Rref, MatchesNaiveEliminationOnRandomMatrices) {
  std::mt19937_64 rng(7);
  for (int q : {2, 3, 5}) {
    for (int trial = 0; trial < 200; ++trial) {
      const int rows = 1 + static_cast<int>(rng() % 5);
      const int cols = 1 + static_cast<int>(rng() % 9);
      const auto m = oracle::random_matrix(rows, cols, q, rng);
      std::vector<std::vector<int>> plain(rows, std::vector<int>(cols));
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) plain[r][c] = m.at(r, c);
      }
      EXPECT_EQ(oracle::basis_rows(rref(m, FieldModulus(q))), oracle::naive_rref(plain, q));
    }
  }
}

TEST(Rref, CanonicalUnderRowOperations) {
  std::mt19937_64 rng(11);
  for (int q : {2, 3}) {
    const FieldModulus f(q);
    for (int trial = 0; trial < 300; ++trial) {
      const int rows = 2 + static_cast<int>(rng() % 4);
      const int cols = 2 + static_cast<int>(rng() % 7);
      const auto m = oracle::random_matrix(rows, cols, q, rng);
      const Subspace base = rref(m, f);
      EXPECT_EQ(rref(permuted_rows(m, rng), f), base);

      auto replaced = m;
      const int target = static_cast<int>(rng() % rows);
      std::vector<int> coeffs(rows);
      for (auto& c : coeffs) c = static_cast<int>(rng() % q);
      coeffs[target] = 1 + static_cast<int>(rng() % (q - 1));
      for (int c = 0; c < cols; ++c) {
        int s = 0;
        for (int r = 0; r < rows; ++r) s += coeffs[r] * m.at(r, c);
        replaced.at(target, c) = static_cast<std::uint8_t>(s % q);
      }
      EXPECT_EQ(rref(replaced, f), base);
    }
  }
}

TEST(Rref, Gf2FastPathAgreesWithGeneric) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const auto m = oracle::random_matrix(4, n, 2, rng);
    std::vector<std::uint64_t> rows(4, 0);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < n; ++c) {
        if (m.at(r, c)) rows[r] |= std::uint64_t{1} << (n - 1 - c);
      }
    }
    EXPECT_EQ(rref_gf2(n, rows), rref(m, kGF2));
  }
}

TEST(SubspaceSum, Examples) {
  const Subspace u = rref({{1, 1, 0, 0}, {0, 0, 1, 1}}, kGF2);
  EXPECT_EQ(subspace_sum(u, u), u);
  EXPECT_EQ(subspace_sum(coordinate_span(kGF2, 4, {0}), coordinate_span(kGF2, 4, {1})), coordinate_span(kGF2, 4, {0, 1}));
  EXPECT_EQ(subspace_sum(u, rref({{1, 1, 1, 1}}, kGF2)), u);
  EXPECT_THROW(subspace_sum(u, Subspace(kGF2, 5)), std::invalid_argument);
}

TEST(SubspaceIntersect, Examples) {
  const Subspace u = rref({{1, 1, 0, 0}, {0, 0, 1, 1}}, kGF2);
  const Subspace v = rref({{1, 1, 1, 1}, {1, 0, 0, 0}}, kGF2);
  EXPECT_EQ(subspace_intersect(u, u), u);
  EXPECT_TRUE(subspace_intersect(coordinate_span(kGF2, 4, {0}), coordinate_span(kGF2, 4, {1})).is_zero());
  EXPECT_EQ(subspace_intersect(u, v), rref({{1, 1, 1, 1}}, kGF2));
  EXPECT_EQ(oracle::basis_rows(subspace_intersect(u, v)), oracle::intersection_by_scan(u, v));
  EXPECT_THROW(subspace_intersect(u, Subspace(kGF2, 3)), std::invalid_argument);
}

TEST(SubspaceIntersect, MatchesExhaustiveScan) {
  for (const auto& [q, n] : std::vector<std::pair<int, int>>{{2, 4}, {3, 3}}) {
    const FieldModulus f(q);
    std::vector<Subspace> all;
    for (int l = 0; l <= n; ++l) {
      for (auto& s : enumerate_subspaces(n, l, f)) all.push_back(s);
    }
    for (const auto& u : all) {
      for (const auto& v : all) {
        const Subspace m = subspace_intersect(u, v);
        ASSERT_EQ(oracle::basis_rows(m), oracle::intersection_by_scan(u, v));
        ASSERT_EQ(intersection_dim(u, v), m.dim());
        // every member of u∩v lies in both
        const auto mu = oracle::members(u);
        const auto mv = oracle::members(v);
        const auto mm = oracle::members(m);
        ASSERT_TRUE(oracle::subset(mm, mu) && oracle::subset(mm, mv));
      }
    }
  }
}

TEST(DimensionFormula, HoldsForAllPairs) {
  for (int n = 1; n <= 5; ++n) {
    std::vector<Subspace> all;
    for (int l = 0; l <= n; ++l) {
      for (auto& s : enumerate_subspaces(n, l, kGF2)) all.push_back(s);
    }
    for (const auto& u : all) {
      for (const auto& v : all) {
        ASSERT_EQ(subspace_sum(u, v).dim() + subspace_intersect(u, v).dim(), u.dim() + v.dim());
      }
    }
  }
}

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_subspaces(4, 0, kGF2).size(), 1u);
  EXPECT_EQ(enumerate_subspaces(4, 2, kGF2).size(), oracle::count_subspaces_by_dedup(4, 2, 2));
  EXPECT_EQ(enumerate_subspaces(4, 2, kGF2).size(), 35u);
  EXPECT_THROW(enumerate_subspaces(4, 5, kGF2), std::invalid_argument);
  EXPECT_THROW(enumerate_subspaces(4, -1, kGF2), std::invalid_argument);
}

TEST(Enumerate, SevenThreeMatchesDedupOracle) {
  const auto all = enumerate_subspaces(7, 3, kGF2);
  EXPECT_EQ(all.size(), oracle::count_subspaces_by_dedup(7, 3, 2));
  EXPECT_EQ(all.size(), 11811u);
}

TEST(Enumerate, CountsMatchGaussianBinomial) {
  for (const auto& [q, nmax] : std::vector<std::pair<int, int>>{{2, 7}, {3, 4}}) {
    for (int n = 0; n <= nmax; ++n) {
      for (int l = 0; l <= n; ++l) {
        const auto all = enumerate_subspaces(n, l, FieldModulus(q));
        ASSERT_EQ(all.size(), gaussian_binomial(n, l, q)) << q << " " << n << " " << l;
        std::set<Subspace> distinct(all.begin(), all.end());
        ASSERT_EQ(distinct.size(), all.size());
        for (const auto& s : all) ASSERT_EQ(s.dim(), l);
      }
    }
  }
}

TEST(Enumerate, OrderIsDeterministicAndStreamingAgrees) {
  const auto a = enumerate_subspaces(5, 2, kGF3);
  std::vector<Subspace> b;
  for_each_subspace(5, 2, kGF3, [&](const Subspace& s) {
    b.push_back(s);
    return true;
  });
  EXPECT_EQ(a, b);
  int seen = 0;
  for_each_subspace(5, 2, kGF3, [&](const Subspace&) { return ++seen < 10; });
  EXPECT_EQ(seen, 10);
}

TEST(Covers, HyperplanesAndCoversAboveAreComplete) {
  for (int q : {2, 3}) {
    const FieldModulus f(q);
    const int n = 4;
    for (int l = 0; l <= n; ++l) {
      for (const auto& u : enumerate_subspaces(n, l, f)) {
        const auto below = hyperplanes_of(u);
        ASSERT_EQ(below.size(), l == 0 ? 0u : gaussian_binomial(l, l - 1, q));
        for (const auto& h : below) ASSERT_TRUE(u.contains(h) && h.dim() == l - 1);
        const auto above = covers_above(u);
        ASSERT_EQ(above.size(), l == n ? 0u : gaussian_binomial(n - l, 1, q));
        for (const auto& v : above) ASSERT_TRUE(v.contains(u) && v.dim() == l + 1);
        ASSERT_EQ(std::set<Subspace>(above.begin(), above.end()).size(), above.size());
      }
    }
  }
}

TEST(Subspace, HexRowsAndContainment) {
  const Subspace u = rref({{1, 0, 1, 0}, {0, 1, 1, 1}}, kGF2);
  EXPECT_EQ(u.hex_rows(), "a.7");
  EXPECT_TRUE(u.contains(std::vector<std::uint8_t>{1, 1, 0, 1}));
  EXPECT_FALSE(u.contains(std::vector<std::uint8_t>{1, 0, 0, 0}));
  EXPECT_TRUE(u.contains(Subspace(kGF2, 4)));
}
