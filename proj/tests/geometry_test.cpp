#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "qgrass/geometry.hpp"

using namespace qgrass;

namespace {

const FieldModulus kGF2(2);

}  // namespace

TEST(Qint, Examples) {
  EXPECT_EQ(qint(0, kGF2), 0);
  EXPECT_EQ(qint(1, kGF2), 1);
  EXPECT_EQ(qint(3, kGF2), 7);
  EXPECT_EQ(qint(4, 3), 40);
  EXPECT_THROW(qint(-1, 2), std::invalid_argument);
}

TEST(ClassifyStratum, Examples) {
  const auto ctx = GeometryContext::full(kGF2, 5, 2);
  EXPECT_EQ(classify_stratum(ctx->y(), *ctx), (Stratum{2, 0}));
  EXPECT_EQ(classify_stratum(Subspace(kGF2, 5), *ctx), (Stratum{0, 0}));
  EXPECT_EQ(classify_stratum(coordinate_span(kGF2, 5, {0, 2, 3}), *ctx), (Stratum{1, 2}));
}

TEST(CoverKind, Examples) {
  const auto ctx = GeometryContext::full(kGF2, 5, 2);
  const Subspace e3 = coordinate_span(kGF2, 5, {2});
  EXPECT_FALSE(cover_kind(e3, e3, *ctx).has_value());
  EXPECT_EQ(cover_kind(e3, coordinate_span(kGF2, 5, {2, 0}), *ctx), CoverKind::Slash);
  EXPECT_EQ(cover_kind(e3, coordinate_span(kGF2, 5, {2, 3}), *ctx), CoverKind::Backslash);
  EXPECT_FALSE(cover_kind(e3, coordinate_span(kGF2, 5, {0, 1, 2}), *ctx).has_value());
}

TEST(GeometryContext, RejectsBadParameters) {
  EXPECT_THROW(GeometryContext::full(kGF2, 4, 5), std::invalid_argument);
  EXPECT_THROW(GeometryContext::full(kGF2, 4, 0), std::invalid_argument);
  EXPECT_THROW(GeometryContext::full(kGF2, 4, 2, coordinate_span(kGF2, 4, {0})), std::invalid_argument);
  EXPECT_THROW(GeometryContext::banded(kGF2, 4, 2, 3, 2), std::invalid_argument);
}

TEST(GeometryContext, IndexIsABijectionAndStrataPartitionEachDimension) {
  for (const auto& [q, n, k] : std::vector<std::tuple<int, int, int>>{{2, 4, 2}, {3, 4, 2}, {2, 5, 2}, {2, 5, 3}}) {
    const FieldModulus f(q);
    const auto ctx = GeometryContext::full(f, n, k);
    std::size_t total = 0;
    for (int l = 0; l <= n; ++l) {
      const auto range = ctx->dim_range(l);
      ASSERT_EQ(range.size(), gaussian_binomial(n, l, q));
      total += range.size();
    }
    ASSERT_EQ(total, ctx->size());
    const auto ymembers = oracle::members(ctx->y());
    std::map<Stratum, std::size_t> sizes;
    for (ElementId id = 0; id < ctx->size(); ++id) {
      ASSERT_EQ(ctx->id_of(ctx->element(id)), id);
      const auto s = ctx->stratum(id);
      const auto um = oracle::members(ctx->element(id));
      ASSERT_EQ(s.i, oracle::dim(oracle::meet(um, ymembers), q));
      ASSERT_EQ(s.i + s.j, oracle::dim(um, q));
      ++sizes[s];
    }
    for (int l = 0; l <= n; ++l) {
      std::size_t by_strata = 0;
      for (const auto& [s, c] : sizes) {
        if (s.i + s.j == l) by_strata += c;
      }
      EXPECT_EQ(by_strata, gaussian_binomial(n, l, q));
    }
  }
}

TEST(GeometryContext, CoverListsMatchBruteForce) {
  const auto ctx = GeometryContext::full(kGF2, 5, 2);
  std::vector<oracle::MemberSet> sets;
  for (ElementId id = 0; id < ctx->size(); ++id) sets.push_back(oracle::members(ctx->element(id)));
  std::size_t pairs = 0;
  for (ElementId u = 0; u < ctx->size(); ++u) {
    std::size_t up = 0;
    for (ElementId v = 0; v < ctx->size(); ++v) {
      if (ctx->dim_of(v) != ctx->dim_of(u) + 1 || !oracle::subset(sets[u], sets[v])) continue;
      ++up;
      const bool slash = ctx->stratum(v).i == ctx->stratum(u).i + 1;
      const bool backslash = ctx->stratum(v).j == ctx->stratum(u).j + 1;
      ASSERT_NE(slash, backslash);  // dichotomy
      ASSERT_EQ(cover_kind(ctx->element(u), ctx->element(v), *ctx), slash ? CoverKind::Slash : CoverKind::Backslash);
      bool listed = false;
      for (const auto& e : ctx->up_covers(u)) {
        if (e.id == v) listed = e.kind == (slash ? CoverKind::Slash : CoverKind::Backslash);
      }
      ASSERT_TRUE(listed);
    }
    ASSERT_EQ(ctx->up_covers(u).size(), up);
    pairs += up;
  }
  EXPECT_EQ(ctx->cover_pair_count(), pairs);
}

TEST(CoverCounts, HoldEverywhere) {
  for (const auto& [q, n, k] : std::vector<std::tuple<int, int, int>>{{2, 5, 2}, {2, 4, 2}, {3, 4, 2}}) {
    const auto ctx = GeometryContext::full(FieldModulus(q), n, k);
    const auto report = verify_cover_counts(*ctx);
    EXPECT_TRUE(report.holds());
    EXPECT_EQ(report.elements_checked, ctx->size());
  }
}

TEST(CoverCounts, SpotValues) {
  const auto ctx = GeometryContext::full(kGF2, 5, 2);
  const ElementId zero = ctx->id_of(Subspace(kGF2, 5));
  EXPECT_TRUE(ctx->down_covers(zero).empty());
  for (ElementId id = 0; id < ctx->size(); ++id) {
    const auto s = ctx->stratum(id);
    std::size_t slash_up = 0, backslash_up = 0;
    for (const auto& e : ctx->up_covers(id)) (e.kind == CoverKind::Slash ? slash_up : backslash_up)++;
    if (s == Stratum{1, 2}) EXPECT_EQ(slash_up, 1u);
    if (s == Stratum{0, 1}) EXPECT_EQ(backslash_up, 12u);
  }
}

TEST(CoverCounts, RequiresFullContext) {
  EXPECT_THROW(verify_cover_counts(*GeometryContext::graph_band(kGF2, 5, 2)), std::invalid_argument);
}

TEST(GeometryContext, BandHoldsOnlyRequestedDimensions) {
  const auto band = GeometryContext::graph_band(kGF2, 6, 2);
  EXPECT_EQ(band->min_dim(), 1);
  EXPECT_EQ(band->max_dim(), 3);
  EXPECT_FALSE(band->has_dim(0));
  EXPECT_EQ(band->size(), gaussian_binomial(6, 1, 2) + gaussian_binomial(6, 2, 2) + gaussian_binomial(6, 3, 2));
  EXPECT_FALSE(band->find(Subspace(kGF2, 6)).has_value());
  EXPECT_THROW(band->id_of(Subspace(kGF2, 6)), std::out_of_range);
  for (ElementId id : {band->dim_range(1).first, band->dim_range(3).first}) {
    if (band->dim_of(id) == 1) EXPECT_TRUE(band->down_covers(id).empty());
    if (band->dim_of(id) == 3) EXPECT_TRUE(band->up_covers(id).empty());
  }
}
