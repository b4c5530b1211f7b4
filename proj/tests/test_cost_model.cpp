#include <gtest/gtest.h>

#include <random>

#include "conjorder/cost_model.hpp"
#include "conjorder/ordering_context.hpp"
#include "support.hpp"

using namespace conjorder;

TEST(CostModel, CnValues) {
  EXPECT_DOUBLE_EQ(cn_of({10, 0.8}), -0.02);
  EXPECT_DOUBLE_EQ(cn_of({7, 1}), 0.0);
  EXPECT_NEAR(cn_of({22, 0.2}), -0.0363636, 1e-7);
  EXPECT_THROW(cn_of({0, 2}), std::domain_error);
}

TEST(CostModel, Compose) {
  ControlValues ec = compose({20, 0.4}, {5, 0.5});
  EXPECT_DOUBLE_EQ(ec.cost, 22);
  EXPECT_DOUBLE_EQ(ec.nsols, 0.2);
  ControlValues v{3, 2.5};
  ControlValues w = compose(v, {1, 1});
  EXPECT_DOUBLE_EQ(w.cost, 5.5);
  EXPECT_DOUBLE_EQ(w.nsols, 2.5);
  ControlValues l = compose(compose({2, 2}, {3, 2}), {5, 1});
  ControlValues r = compose({2, 2}, compose({3, 2}, {5, 1}));
  EXPECT_EQ(l, (ControlValues{28, 4}));
  EXPECT_EQ(r, (ControlValues{28, 4}));
}

TEST(CostModel, SequenceCostThreeFacts) {
  const ControlValues p{10, 1}, q{20, 5}, r{5, 0.1};
  std::vector<ControlValues> rpq = {r, p, q}, pqr = {p, q, r};
  EXPECT_NEAR(sequence_cost(rpq), 8.0, 1e-12);
  EXPECT_NEAR(sequence_cost(pqr), 55.0, 1e-12);
  std::vector<ControlValues> one = {q};
  EXPECT_DOUBLE_EQ(sequence_cost(one), 20.0);
  EXPECT_DOUBLE_EQ(sequence_cost(std::span<const ControlValues>{}), 0.0);
}

TEST(CostModel, SequenceCostThroughOracle) {
  auto oracle = testsupport::three_facts_catalog();
  auto shape = ProblemShape::from_literals(testsupport::goal("p, q, r"));
  OrderingContext ctx(shape, oracle);
  std::vector<std::uint32_t> rpq = {2, 0, 1}, pqr = {0, 1, 2};
  EXPECT_NEAR(ctx.sequence_cost(rpq), 8.0, 1e-12);
  EXPECT_NEAR(ctx.sequence_cost(pqr), 55.0, 1e-12);
}

TEST(CostModel, ZeroSolutionsAnnihilateSuffix) {
  std::vector<ControlValues> seq = {{4, 0}, {1000, 3}, {7, 2}};
  EXPECT_DOUBLE_EQ(sequence_cost(seq), 4.0);
  EXPECT_DOUBLE_EQ(sequence_values(seq).nsols, 0.0);
}

TEST(CostModel, CnInversion) {
  EXPECT_TRUE(is_cn_inverted({5, 2}, {10, 0.1}));
  EXPECT_FALSE(is_cn_inverted({22, 0.2}, {5, 1}));
  EXPECT_FALSE(is_cn_inverted({10, 2}, {20, 3}));  // both 0.1
  EXPECT_FALSE(is_cn_inverted({3, 1}, {3, 1}));
}

TEST(CostModel, Tolerance) {
  EXPECT_TRUE(approx_equal(1.0, 1.0 + 1e-12));
  EXPECT_FALSE(approx_equal(1.0, 1.0 + 1e-6));
  EXPECT_TRUE(approx_equal(0.0, 1e-13));
  EXPECT_TRUE(definitely_less(1.0, 1.1));
  EXPECT_FALSE(definitely_less(1.0, 1.0 + 1e-12));
}

namespace {

ControlValues random_values(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cost(1.0, 100.0), nsols(0.0, 5.0);
  return {cost(rng), nsols(rng)};
}

bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST(CostModel, ComposeIsAssociative) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    ControlValues a = random_values(rng), b = random_values(rng), c = random_values(rng);
    ControlValues l = compose(compose(a, b), c), r = compose(a, compose(b, c));
    ASSERT_TRUE(rel_close(l.cost, r.cost, 1e-9));
    ASSERT_TRUE(rel_close(l.nsols, r.nsols, 1e-9));
  }
}

// The cn of a composition lies between the cn values of its parts.
TEST(CostModel, ComposedCnLiesBetweenParts) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10000; ++i) {
    ControlValues a = random_values(rng), b = random_values(rng);
    double lo = std::min(cn_of(a), cn_of(b)), hi = std::max(cn_of(a), cn_of(b));
    double c = cn_of(compose(a, b));
    ASSERT_GE(c, lo - 1e-12);
    ASSERT_LE(c, hi + 1e-12);
  }
}

// Cost(prefix ++ suffix) = Cost(prefix) + nsols(prefix) * Cost(suffix), and
// nsols is the product of positional nsols, for every split point.
TEST(CostModel, SequenceSplitsAtEveryPoint) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(1, 9);
  for (int i = 0; i < 2000; ++i) {
    std::vector<ControlValues> seq(len(rng));
    for (auto& v : seq) v = random_values(rng);
    const double total = sequence_cost(seq);
    double product = 1.0;
    for (const auto& v : seq) product *= v.nsols;
    ASSERT_TRUE(rel_close(sequence_values(seq).nsols, product, 1e-9));
    for (std::size_t k = 0; k <= seq.size(); ++k) {
      std::span<const ControlValues> pre(seq.data(), k), suf(seq.data() + k, seq.size() - k);
      const ControlValues pv = sequence_values(pre);
      ASSERT_TRUE(rel_close(total, pv.cost + pv.nsols * sequence_cost(suf), 1e-9));
      ASSERT_TRUE(rel_close(sequence_values(seq).nsols, pv.nsols * sequence_values(suf).nsols, 1e-9));
    }
  }
}
