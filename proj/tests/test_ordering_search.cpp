#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "conjorder/dac.hpp"
#include "conjorder/engine.hpp"
#include "conjorder/ordering_search.hpp"
#include "support.hpp"

using namespace conjorder;
using testsupport::goal;
using Order = std::vector<std::uint32_t>;

namespace {

struct Fixture {
  std::vector<Literal> lits;
  ProblemShape shape;
  OrderingContext ctx;
  Fixture(const char* text, const ControlOracle& oracle)
      : lits(goal(text)), shape(ProblemShape::from_literals(lits)), ctx(shape, oracle) {}
};

}  // namespace

TEST(OrderRandom, SeededAndUniform) {
  EXPECT_EQ(order_random(6, 42), order_random(6, 42));
  EXPECT_EQ(order_random(1, 9), (Order{0}));
  std::map<Order, int> counts;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) ++counts[order_random(3, static_cast<std::uint64_t>(s))];
  ASSERT_EQ(counts.size(), 6u);
  const double expected = draws / 6.0, sigma = std::sqrt(draws * (1.0 / 6) * (5.0 / 6));
  double chi2 = 0;
  for (const auto& [o, c] : counts) {
    EXPECT_LT(std::abs(c - expected), 3 * sigma);
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 20.5);  // 5 degrees of freedom, p = 0.001
}

TEST(OrderByCn, ThreeFacts) {
  auto oracle = testsupport::three_facts_catalog();
  Fixture f("p, q, r", oracle);
  Ordering o = order_by_cn(f.ctx);
  EXPECT_EQ(o.order, (Order{2, 0, 1}));
  EXPECT_NEAR(o.cost, 8.0, 1e-9);
  EXPECT_NEAR(cn_of(oracle.values(f.lits[2], {})), -0.18, 1e-12);
}

TEST(OrderByCn, LeafUnderBinding) {
  auto oracle = testsupport::five_subgoal_catalog();
  Fixture f("c(X), d(X), e(X)", oracle);
  VarBits bound = f.ctx.vars(0);
  std::vector<std::uint32_t> de = {1, 2};
  EXPECT_EQ(order_by_cn(f.ctx, de, bound), (Order{2, 1}));
  std::vector<std::uint32_t> all = {0, 1, 2};
  EXPECT_THROW(order_by_cn(f.ctx, all, f.ctx.empty_bits()), PreconditionError);
}

TEST(OrderByCn, StableOnTies) {
  testsupport::MapOracle oracle{{"x/0:", {3, 2}}, {"y/0:", {6, 3}}, {"z/0:", {1, 1.5}}};
  Fixture f("y, x, z", oracle);
  EXPECT_EQ(order_by_cn(f.ctx).order, (Order{0, 1, 2}));
}

TEST(Exhaustive, ThreeFactsCostTable) {
  auto oracle = testsupport::three_facts_catalog();
  Fixture f("p, q, r", oracle);
  auto all = all_permutation_costs(f.ctx);
  ASSERT_EQ(all.size(), 6u);
  // p,q,r  p,r,q  q,p,r  q,r,p  r,p,q  r,q,p
  const double expected[] = {55, 17, 95, 50, 8, 12};
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(all[i].cost, expected[i], 1e-9) << i;
  Ordering o = order_exhaustive(f.ctx);
  EXPECT_EQ(o.order, (Order{2, 0, 1}));
  EXPECT_NEAR(o.cost, 8.0, 1e-9);
}

TEST(Exhaustive, ExpensivePrefixFirst) {
  testsupport::MapOracle oracle{{"a/1:f", {10, 2}}, {"a/1:b", {10, 2}},
                                {"b/1:f", {2, 2}},  {"b/1:b", {2, 2}}};
  Fixture f("a(X), b(X)", oracle);
  Ordering o = order_exhaustive(f.ctx);
  EXPECT_EQ(o.order, (Order{0, 1}));
  EXPECT_NEAR(o.cost, 14.0, 1e-12);
  EXPECT_NEAR(f.ctx.sequence_cost(Order{1, 0}), 22.0, 1e-12);
}

TEST(Exhaustive, SingletonAndSizeBound) {
  auto oracle = testsupport::three_facts_catalog();
  Fixture one("q", oracle);
  EXPECT_EQ(order_exhaustive(one.ctx).order, (Order{0}));
  Fixture ten("p, p, p, p, p, p, p, p, p, p", oracle);
  EXPECT_THROW(order_exhaustive(ten.ctx), SizeBoundError);
  EXPECT_NO_THROW(order_exhaustive(ten.ctx, 10));
  std::string many = "p";
  for (int i = 0; i < 14; ++i) many += ", p";
  Fixture fifteen(many.c_str(), oracle);
  EXPECT_THROW(order_prefix(fifteen.ctx, PrefixVariant::Plain), SizeBoundError);
  EXPECT_THROW(order_combined(fifteen.ctx), SizeBoundError);
}

TEST(Adjacency, Examples) {
  auto oracle = testsupport::five_subgoal_catalog();
  Fixture f("c(X), e(X)", oracle);
  AdjacencyCosts ce = adjacency_costs(f.ctx, f.ctx.empty_bits(), 0, 1);
  EXPECT_NEAR(ce.forward, 25, 1e-12);
  EXPECT_NEAR(ce.backward, 22, 1e-12);
  EXPECT_FALSE(ce.passes());
  EXPECT_TRUE(adjacency_test(f.ctx, f.ctx.empty_bits(), 1, 0));
  Fixture same("d(X), d(X)", oracle);
  EXPECT_TRUE(adjacency_test(same.ctx, same.ctx.empty_bits(), 0, 1));
  EXPECT_TRUE(adjacency_test(same.ctx, same.ctx.empty_bits(), 1, 0));
}

TEST(PrefixSearch, ThreeFactsAllVariants) {
  auto oracle = testsupport::three_facts_catalog();
  Fixture f("p, q, r", oracle);
  for (auto v : {PrefixVariant::Plain, PrefixVariant::BestFirst, PrefixVariant::BestFirstAdjacency}) {
    Ordering o = order_prefix(f.ctx, v);
    EXPECT_NEAR(o.cost, 8.0, 1e-9);
    EXPECT_EQ(o.order, (Order{2, 0, 1}));
  }
  EXPECT_NEAR(order_combined(f.ctx).cost, 8.0, 1e-9);
}

TEST(Combined, IndependentInputMatchesSort) {
  auto oracle = testsupport::five_subgoal_catalog();
  Fixture f("a, b, e(X), d(Y), c(Z)", oracle);
  Ordering s = order_by_cn(f.ctx);
  SearchTrace trace;
  Ordering c = order_combined(f.ctx, kDefaultPrefixBound, &trace);
  EXPECT_EQ(c.order, s.order);
  EXPECT_NEAR(c.cost, s.cost, 1e-12);
  ASSERT_EQ(trace.expansions.size(), 2u);  // root, then the complete ordering
  ASSERT_EQ(trace.expansions[0].steps.size(), 1u);
  EXPECT_EQ(trace.expansions[0].steps[0].kind, SearchStep::Kind::Completion);
}

namespace {

std::string seq_name(const Order& o) {
  static const char* names[] = {"a", "b", "c", "d", "e"};
  std::string s;
  for (auto i : o) s += names[i];
  return s;
}

}  // namespace

// The full best-first trace on the five-subgoal set: popped prefixes and their
// extensions, completions and adjacency rejections.
TEST(Combined, FiveSubgoalTrace) {
  auto oracle = testsupport::five_subgoal_catalog();
  Fixture f("a, b, c(X), d(X), e(X)", oracle);
  SearchTrace trace;
  Ordering o = order_combined(f.ctx, kDefaultPrefixBound, &trace);
  EXPECT_EQ(seq_name(o.order), "ecadb");
  EXPECT_NEAR(o.cost, 25.6, 1e-9);

  using K = SearchStep::Kind;
  struct Row {
    std::string popped;
    std::vector<std::tuple<K, std::string, double>> steps;
  };
  const double fail = -1;
  const std::vector<Row> expected = {
      {"", {{K::Extension, "a", 10}, {K::Extension, "b", 5}, {K::Extension, "c", 5},
            {K::Extension, "d", 10}, {K::Extension, "e", 20}}},
      {"b", {{K::AdjacencyRejected, "ba", fail}, {K::Extension, "bc", 15},
             {K::Extension, "bd", 25}, {K::AdjacencyRejected, "be", fail}}},
      {"c", {{K::Completion, "ceadb", 28.6}}},
      {"a", {{K::Extension, "ab", 14}, {K::Extension, "ac", 14}, {K::Extension, "ad", 18},
             {K::AdjacencyRejected, "ae", fail}}},
      {"d", {{K::Completion, "dceab", 52.8}}},
      {"ab", {{K::Extension, "abc", 22}, {K::Extension, "abd", 30},
              {K::AdjacencyRejected, "abe", fail}}},
      {"ac", {{K::Completion, "acedb", 31.6}}},
      {"bc", {{K::Completion, "bcead", 60.6}}},
      {"ad", {{K::Completion, "adceb", 50.8}}},
      {"e", {{K::Completion, "ecadb", 25.6}}},
      {"abc", {{K::Completion, "abced", 55.6}}},
      {"bd", {{K::Completion, "bdcea", 109}}},
      {"ecadb", {}},
  };
  ASSERT_EQ(trace.expansions.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& got = trace.expansions[i];
    EXPECT_EQ(seq_name(got.popped), expected[i].popped) << "step " << i;
    std::vector<SearchStep> shown;
    for (const auto& s : got.steps)
      if (s.kind != K::PermutationRejected) shown.push_back(s);
    ASSERT_EQ(shown.size(), expected[i].steps.size()) << "step " << i;
    for (std::size_t k = 0; k < shown.size(); ++k) {
      const auto& [kind, seq, cost] = expected[i].steps[k];
      EXPECT_EQ(shown[k].kind, kind) << "step " << i << "." << k;
      EXPECT_EQ(seq_name(shown[k].sequence), seq) << "step " << i << "." << k;
      if (cost >= 0) EXPECT_NEAR(shown[k].cost, cost, 1e-9) << seq;
    }
  }
}

namespace {

// Measures control values of `lit` under the binding produced by `binder`
// (or under no binding) by running the engine and averaging per binding.
ControlValues measure(const Program& p, const char* lit, const char* binder) {
  Literal l = parse_literal(lit);
  if (!binder) {
    SolveResult r = solve_all(std::span<const Literal>(&l, 1), p);
    return {static_cast<double>(r.metrics.unifications), static_cast<double>(r.solution_count)};
  }
  std::vector<Literal> b = goal(binder);
  SolveResult r = solve_all(b, p);
  double cost = 0, nsols = 0;
  for (const Answer& a : r.answers) {
    Substitution s;
    for (std::size_t i = 0; i < a.size(); ++i) s.bind(r.variables[i], a[i]);
    Literal inst = apply(s, l);
    SolveResult q = solve_all(std::span<const Literal>(&inst, 1), p);
    cost += static_cast<double>(q.metrics.unifications);
    nsols += static_cast<double>(q.solution_count);
  }
  return {cost / r.answers.size(), nsols / r.answers.size()};
}

std::unique_ptr<testsupport::MapOracle> measured_catalog(const Program& p) {
  return std::make_unique<testsupport::MapOracle>(std::initializer_list<std::pair<const char*, ControlValues>>{
      {"a/1:f", measure(p, "a(X)", nullptr)},
      {"a/1:b", measure(p, "a(X)", "b(X)")},
      {"b/1:f", measure(p, "b(X)", nullptr)},
      {"b/1:b", measure(p, "b(X)", "a(X)")}});
}

}  // namespace

// Two orderings, both minimal, neither sorted by cn.
TEST(DependentSets, SortingUndefined) {
  Program p = parse_program("a(c1). a(c2). b(c1). b(c2).");
  auto oracle = measured_catalog(p);
  EXPECT_EQ(oracle->values(parse_pattern("a/1:f")), (ControlValues{2, 2}));
  EXPECT_EQ(oracle->values(parse_pattern("a/1:b")), (ControlValues{2, 1}));
  EXPECT_EQ(oracle->values(parse_pattern("b/1:f")), (ControlValues{2, 2}));
  EXPECT_EQ(oracle->values(parse_pattern("b/1:b")), (ControlValues{2, 1}));
  Fixture f("a(X), b(X)", *oracle);
  EXPECT_NEAR(f.ctx.sequence_cost(Order{0, 1}), 6, 1e-12);
  EXPECT_NEAR(f.ctx.sequence_cost(Order{1, 0}), 6, 1e-12);
  for (auto [x, y] : {std::pair<std::uint32_t, std::uint32_t>{0, 1}, {1, 0}}) {
    EXPECT_DOUBLE_EQ(cn_of(f.ctx.values(x, f.ctx.empty_bits())), 0.5);
    EXPECT_DOUBLE_EQ(cn_of(f.ctx.values(y, f.ctx.vars(x))), 0.0);
  }
  EXPECT_THROW(order_by_cn(f.ctx), PreconditionError);
  EXPECT_NEAR(order_exhaustive(f.ctx).cost, 6, 1e-12);
  EXPECT_NEAR(order_dac(f.ctx).cost, 6, 1e-12);
}

// The only cn-sorted ordering is strictly worse than the minimum.
TEST(DependentSets, SortedIsNotMinimal) {
  Program p = parse_program("a(c1). a(c1). b(c1). b(c2) :- a(c1), a(c2).");
  auto oracle = measured_catalog(p);
  EXPECT_EQ(oracle->values(parse_pattern("a/1:f")), (ControlValues{2, 2}));
  EXPECT_EQ(oracle->values(parse_pattern("a/1:b")), (ControlValues{2, 2}));
  EXPECT_EQ(oracle->values(parse_pattern("b/1:f")), (ControlValues{8, 1}));
  EXPECT_EQ(oracle->values(parse_pattern("b/1:b")), (ControlValues{2, 1}));
  Fixture f("a(X), b(X)", *oracle);
  // <b,a>: cn 0 then 0.5, sorted. <a,b>: cn 0.5 then 0, inverted.
  EXPECT_LE(cn_of(f.ctx.values(1, f.ctx.empty_bits())), cn_of(f.ctx.values(0, f.ctx.vars(1))));
  EXPECT_GT(cn_of(f.ctx.values(0, f.ctx.empty_bits())), cn_of(f.ctx.values(1, f.ctx.vars(0))));
  EXPECT_NEAR(f.ctx.sequence_cost(Order{1, 0}), 10, 1e-12);
  EXPECT_NEAR(f.ctx.sequence_cost(Order{0, 1}), 6, 1e-12);
  for (auto v : {PrefixVariant::Plain, PrefixVariant::BestFirst, PrefixVariant::BestFirstAdjacency})
    EXPECT_NEAR(order_prefix(f.ctx, v).cost, 6, 1e-12);
  EXPECT_NEAR(order_combined(f.ctx).cost, 6, 1e-12);
  EXPECT_NEAR(order_dac(f.ctx).cost, 6, 1e-12);
}

TEST(OracleAgreement, RandomInstances) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(2, 8);
  std::uniform_real_distribution<double> dens(0.0, 0.7);
  for (int iter = 0; iter < 250; ++iter) {
    auto inst = testsupport::random_instance(rng, size(rng), dens(rng), iter % 10 == 0);
    auto shape = ProblemShape::from_literals(inst.literals);
    OrderingContext ctx(shape, *inst.oracle);
    const double best = order_exhaustive(ctx).cost;
    auto check = [&](const Ordering& o, const char* who) {
      ASSERT_TRUE(testsupport::rel_close(o.cost, best, 1e-9)) << who << " iter " << iter;
      ASSERT_TRUE(testsupport::rel_close(ctx.sequence_cost(o.order), o.cost, 1e-9)) << who;
      Order sorted = o.order;
      std::sort(sorted.begin(), sorted.end());
      ASSERT_EQ(sorted, testsupport::iota_order(ctx.size())) << who;
    };
    check(order_prefix(ctx, PrefixVariant::Plain), "prefix");
    check(order_prefix(ctx, PrefixVariant::BestFirst), "bestfirst");
    check(order_prefix(ctx, PrefixVariant::BestFirstAdjacency), "adjacency");
    check(order_combined(ctx), "combined");
    check(order_dac(ctx), "dac");
    if (is_independent(ctx, testsupport::iota_order(ctx.size()), ctx.empty_bits()))
      check(order_by_cn(ctx), "sort");
  }
}

// Minimal orderings of independent sets are sorted by cn.
TEST(IndependentSets, MinimalOrderingsAreSorted) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> size(1, 7);
  for (int iter = 0; iter < 300; ++iter) {
    auto inst = testsupport::random_instance(rng, size(rng), 0.0, false);
    auto shape = ProblemShape::from_literals(inst.literals);
    OrderingContext ctx(shape, *inst.oracle);
    auto all = all_permutation_costs(ctx);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pc : all) best = std::min(best, pc.cost);
    for (const auto& pc : all) {
      if (!approx_equal(pc.cost, best)) continue;
      for (std::size_t k = 1; k < pc.order.size(); ++k)
        ASSERT_FALSE(definitely_less(cn_of(ctx.values(pc.order[k], ctx.empty_bits())),
                                     cn_of(ctx.values(pc.order[k - 1], ctx.empty_bits()))));
    }
    ASSERT_TRUE(approx_equal(order_by_cn(ctx).cost, best));
  }
}

// A prefix rejected by the adjacency test always has a strictly cheaper permutation.
TEST(Adjacency, RejectionsImplyCheaperPermutation) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> size(3, 7);
  std::size_t rejections = 0;
  for (int iter = 0; iter < 150; ++iter) {
    auto inst = testsupport::random_instance(rng, size(rng), 0.5, false);
    auto shape = ProblemShape::from_literals(inst.literals);
    OrderingContext ctx(shape, *inst.oracle);
    SearchTrace trace;
    order_prefix(ctx, PrefixVariant::BestFirstAdjacency, kDefaultPrefixBound, &trace);
    for (const auto& e : trace.expansions)
      for (const auto& s : e.steps) {
        if (s.kind != SearchStep::Kind::AdjacencyRejected) continue;
        ++rejections;
        const double cost = ctx.sequence_cost(s.sequence);
        ASSERT_TRUE(definitely_less(testsupport::brute_force_min(ctx, s.sequence, ctx.empty_bits()), cost));
      }
  }
  EXPECT_GT(rejections, 100u);
}
