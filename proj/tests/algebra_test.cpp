#include <gtest/gtest.h>

#include <tuple>

#include "qgrass/relations.hpp"

using namespace qgrass;

namespace {

using Instance = std::tuple<int, int, int>;
const std::vector<Instance> kInstances = {{2, 4, 2}, {3, 4, 2}, {2, 5, 2}, {2, 5, 3}};

std::shared_ptr<const GeometryContext> full(const Instance& in) {
  return GeometryContext::full(FieldModulus(std::get<0>(in)), std::get<1>(in), std::get<2>(in));
}

}  // namespace

TEST(Generators, K1EntryAtY) {
  const auto ctx = GeometryContext::full(FieldModulus(2), 5, 3);
  const auto k1 = build_generator(Op::K1, ctx);
  const ElementId y = ctx->id_of(ctx->y());
  EXPECT_EQ(k1.entry(y, y), QSqrtScalar(FieldModulus(2), 0, Rational(1, 4)));
}

TEST(Generators, InversesAndTransposes) {
  for (const auto& in : kInstances) {
    const auto ctx = full(in);
    const OperatorAlgebra alg(ctx);
    const auto id = SparseOperator::identity(ctx);
    EXPECT_EQ(alg.get(Op::K1) * alg.get(Op::K1inv), id);
    EXPECT_EQ(alg.get(Op::K2) * alg.get(Op::K2inv), id);
    EXPECT_EQ(alg.get(Op::L1).transpose(), alg.get(Op::R1));
    EXPECT_EQ(alg.get(Op::L2).transpose(), alg.get(Op::R2));
    EXPECT_EQ(alg.get(Op::L1).nnz() + alg.get(Op::L2).nnz(), ctx->cover_pair_count());
  }
}

TEST(Generators, L1RowSumsCountSlashCoversAbove) {
  const auto ctx = GeometryContext::full(FieldModulus(3), 4, 2);
  const auto l1 = build_generator(Op::L1, ctx);
  std::vector<std::int64_t> row_sums(ctx->size(), 0);
  for (const auto& e : l1.entries_row_major()) row_sums[e.row] += 1;
  for (ElementId u = 0; u < ctx->size(); ++u) {
    EXPECT_EQ(row_sums[u], qint(ctx->k() - ctx->stratum(u).i, 3));
  }
}

TEST(Generators, RejectsDerivedNames) {
  const auto ctx = GeometryContext::full(FieldModulus(2), 4, 2);
  EXPECT_THROW(build_generator(Op::F0, ctx), std::invalid_argument);
  EXPECT_THROW(build_derived(Op::K1, ctx), std::invalid_argument);
}

TEST(Derived, FFamilyShape) {
  for (const auto& in : kInstances) {
    const auto ctx = full(in);
    const OperatorAlgebra alg(ctx);
    for (ElementId u = 0; u < ctx->size(); ++u) EXPECT_TRUE(alg.get(Op::F0).entry(u, u).is_zero());
    for (Op f : {Op::F0, Op::Fplus, Op::Fminus}) EXPECT_EQ(alg.get(f).transpose(), alg.get(f));
    // the three conditions never overlap
    EXPECT_EQ(alg.get(Op::F).nnz(), alg.get(Op::F0).nnz() + alg.get(Op::Fplus).nnz() + alg.get(Op::Fminus).nnz());
    EXPECT_EQ(alg.get(Op::R), alg.get(Op::L).transpose());
    EXPECT_EQ(alg.get(Op::R), alg.get(Op::R2) * alg.get(Op::L1));
  }
}

TEST(Derived, BandedOperatorsAgreeWithFullOnDimensionK) {
  const FieldModulus f(2);
  const auto whole = GeometryContext::full(f, 5, 2);
  const auto band = GeometryContext::graph_band(f, 5, 2);
  const OperatorAlgebra a(whole), b(band);
  for (Op op : {Op::R, Op::L, Op::F0, Op::Fplus, Op::Fminus, Op::Omega0, Op::Omega1, Op::Omega2}) {
    const auto restricted = a.get(op).restricted_to_dim(2);
    std::size_t nnz = 0;
    for (const auto& e : restricted.entries_row_major()) {
      const ElementId r = band->id_of(whole->element(e.row));
      const ElementId c = band->id_of(whole->element(e.col));
      ASSERT_EQ(b.get(op).entry(r, c), e.value) << op_name(op);
      ++nnz;
    }
    EXPECT_EQ(b.get(op).nnz(), nnz) << op_name(op);
  }
}

TEST(Expr, AlgebraOfTerms) {
  const FieldModulus q(2);
  const Expr a = Expr::op(q, Op::K1) + Expr::op(q, Op::L1);
  EXPECT_TRUE((a - a).terms().empty());
  const Expr sq = a * a;
  EXPECT_EQ(sq.terms().size(), 4u);
  EXPECT_EQ((Expr::op(q, Op::I) * Expr::op(q, Op::K1)).terms().front().word, std::vector<Op>{Op::K1});
}

TEST(Relations, CatalogueGroups) {
  EXPECT_EQ(expand_relation_id("REL-CENT").size(), 18u);
  EXPECT_EQ(expand_relation_id("REL-A1").size(), 8u);
  EXPECT_EQ(expand_relation_id("REL-A2").size(), 4u);
  EXPECT_EQ(expand_relation_id("REL-A3").size(), 4u);
  EXPECT_EQ(expand_relation_id("REL-COMM").size(), 6u);
  EXPECT_EQ(expand_relation_id("REL-FC").size(), 3u);
  EXPECT_EQ(expand_relation_id("REL-F").size(), 4u);
  EXPECT_EQ(expand_relation_id("REL-8").size(), 2u);
  EXPECT_EQ(expand_relation_id("REL-RF").size(), 9u);
  EXPECT_EQ(expand_relation_id("REL-A4"), std::vector<std::string>{"REL-A4"});
  EXPECT_EQ(expand_relation_id("ALL").size(), relation_ids().size());
  EXPECT_THROW(expand_relation_id("REL-99"), std::invalid_argument);
  EXPECT_THROW(make_relation("nope", FieldModulus(2), 4, 2), std::invalid_argument);
}

TEST(Relations, SpotExamples) {
  const auto a = std::make_shared<OperatorAlgebra>(GeometryContext::full(FieldModulus(2), 4, 2));
  const auto rep = verify_relation("REL-A1(i)", *a, CheckMode::Full);
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(rep.violation_count, 0u);
  EXPECT_TRUE(verify_relation("REL-A2(i)", *a, CheckMode::Full).holds);
  const OperatorAlgebra b(GeometryContext::full(FieldModulus(3), 4, 2));
  EXPECT_TRUE(verify_relation("REL-1", b, CheckMode::Full).holds);
}

TEST(Relations, EveryCatalogueEntryHoldsInFullMode) {
  for (const auto& in : kInstances) {
    const OperatorAlgebra alg(full(in));
    for (const auto& id : relation_ids()) {
      if (id == "REL-8-printed") continue;
      const auto rep = verify_relation(id, alg, CheckMode::Full);
      EXPECT_TRUE(rep.holds) << id << " at " << alg.context().label() << " "
                             << to_json(rep).dump();
    }
  }
}

TEST(Relations, ExactlyTheK2ReadingOfQrlHolds) {
  for (const auto& in : kInstances) {
    const OperatorAlgebra alg(full(in));
    const auto res = resolve_rl_variant(alg, CheckMode::Full);
    EXPECT_FALSE(res.printed.holds);
    EXPECT_GT(res.printed.violation_count, 0u);
    EXPECT_FALSE(res.printed.violations.empty());
    EXPECT_TRUE(res.corrected.holds);
    EXPECT_EQ(res.holding_variant(), "REL-8-K2");
  }
}

TEST(Relations, BrokenIdentityIsReportedWithValues) {
  const OperatorAlgebra alg(GeometryContext::full(FieldModulus(2), 4, 2));
  const FieldModulus q(2);
  const Relation wrong{"wrong", Expr::op(q, Op::K1) * Expr::op(q, Op::L1), Expr::op(q, Op::L1) * Expr::op(q, Op::K1)};
  for (CheckMode mode : {CheckMode::Full, CheckMode::Columns}) {
    const auto rep = verify_relation(wrong, alg, mode);
    EXPECT_FALSE(rep.holds);
    EXPECT_EQ(rep.violation_count, alg.get(Op::L1).nnz());
    ASSERT_FALSE(rep.violations.empty());
    const auto& v = rep.violations.front();
    EXPECT_NE(v.lhs, v.rhs);
    EXPECT_EQ(to_json(rep)["violations"].size(), std::min(rep.violation_count, kMaxListedViolations));
  }
}

TEST(Relations, ColumnsModeAgreesWithFullAndIgnoresWorkerCount) {
  const OperatorAlgebra alg(GeometryContext::full(FieldModulus(2), 5, 2));
  for (const auto& id : expand_relation_id("REL-RF")) {
    const auto full_rep = verify_relation(id, alg, CheckMode::Full);
    const auto one = verify_relation(id, alg, CheckMode::Columns, {}, 1);
    const auto three = verify_relation(id, alg, CheckMode::Columns, {}, 3);
    EXPECT_EQ(full_rep.holds, one.holds) << id;
    EXPECT_EQ(full_rep.violation_count, one.violation_count) << id;
    EXPECT_EQ(to_json(one).dump(), to_json(three).dump()) << id;
  }
}

TEST(Relations, ModePreconditions) {
  const auto band = GeometryContext::graph_band(FieldModulus(2), 5, 2);
  const OperatorAlgebra alg(band);
  EXPECT_THROW(verify_relation("REL-1", alg, CheckMode::Full), std::invalid_argument);
  const std::vector<ElementId> bad = {static_cast<ElementId>(band->size())};
  EXPECT_THROW(verify_relation("REL-1", alg, CheckMode::Columns, bad), std::invalid_argument);
  // L1 R1 R1 climbs two dimensions above k and would need k+2
  const std::vector<ElementId> at_k = {band->dim_range(2).first};
  EXPECT_THROW(verify_relation("REL-A3(i)", alg, CheckMode::Columns, at_k), std::invalid_argument);
  EXPECT_TRUE(verify_relation("REL-7", alg, CheckMode::Columns, at_k).holds);
}

TEST(EntryOfProduct, MatchesMaterialisedProduct) {
  const auto ctx = GeometryContext::full(FieldModulus(2), 5, 2);
  const OperatorAlgebra alg(ctx);
  const auto prod = alg.get(Op::Fplus) * alg.get(Op::F0) * alg.get(Op::L1);
  const std::vector<Op> word = {Op::Fplus, Op::F0, Op::L1};
  const std::vector<const SparseOperator*> factors = {&alg.get(Op::Fplus), &alg.get(Op::F0), &alg.get(Op::L1)};
  for (ElementId col = 0; col < ctx->size(); col += 7) {
    for (ElementId row = 0; row < ctx->size(); row += 5) {
      ASSERT_EQ(entry_of_product(factors, row, col), prod.entry(row, col));
      ASSERT_EQ(entry_of_product(alg, word, row, col), prod.entry(row, col));
    }
  }
  const std::vector<Op> identity = {Op::I};
  EXPECT_TRUE(entry_of_product(alg, identity, 3, 3).is_one());
}
