#include "conjorder/orderer.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "conjorder/dependence.hpp"

namespace conjorder {

namespace {
constexpr std::array<std::pair<Method, std::string_view>, 8> kNames{{
    {Method::Random, "random"},
    {Method::Sort, "sort"},
    {Method::Exhaustive, "exhaustive"},
    {Method::Prefix, "prefix"},
    {Method::BestFirst, "bestfirst"},
    {Method::Adjacency, "adjacency"},
    {Method::Combined, "combined"},
    {Method::Dac, "dac"},
}};
}  // namespace

std::string_view to_string(Method m) {
  for (const auto& [k, v] : kNames)
    if (k == m) return v;
  return "?";
}

Method parse_method(std::string_view name) {
  for (const auto& [k, v] : kNames)
    if (v == name) return k;
  throw std::invalid_argument("unknown method: " + std::string(name));
}

std::vector<Method> all_methods() {
  std::vector<Method> out;
  for (const auto& kv : kNames) out.push_back(kv.first);
  return out;
}

Ordering order_with(Method m, const OrderingContext& ctx, const OrderOptions& options) {
  switch (m) {
    case Method::Random: {
      Ordering o{order_random(ctx.size(), options.seed), 0.0};
      o.cost = ctx.sequence_cost(o.order);
      return o;
    }
    case Method::Sort: {
      std::vector<std::uint32_t> all(ctx.size());
      std::iota(all.begin(), all.end(), 0u);
      if (options.lenient_sort && !is_independent(ctx, all, ctx.empty_bits())) {
        // Dependent input: plain cn order under the empty binding.
        std::stable_sort(all.begin(), all.end(), [&](std::uint32_t a, std::uint32_t b) {
          return cn_of(ctx.values(a, ctx.empty_bits())) < cn_of(ctx.values(b, ctx.empty_bits()));
        });
        return {all, ctx.sequence_cost(all)};
      }
      return order_by_cn(ctx);
    }
    case Method::Exhaustive: return order_exhaustive(ctx, options.exhaustive_bound);
    case Method::Prefix: return order_prefix(ctx, PrefixVariant::Plain, options.prefix_bound);
    case Method::BestFirst: return order_prefix(ctx, PrefixVariant::BestFirst, options.prefix_bound);
    case Method::Adjacency:
      return order_prefix(ctx, PrefixVariant::BestFirstAdjacency, options.prefix_bound);
    case Method::Combined: return order_combined(ctx, options.prefix_bound);
    case Method::Dac: return order_dac(ctx, options.dac);
  }
  throw std::logic_error("unhandled method");
}

LiteralOrdering order_literals(Method m, std::span<const Literal> goal, const ControlOracle& oracle,
                               const OrderOptions& options, const VarSet& bound) {
  const ProblemShape shape = ProblemShape::from_literals(goal, bound);
  OrderingContext ctx(shape, oracle);
  const Ordering o = order_with(m, ctx, options);
  LiteralOrdering out;
  out.cost = o.cost;
  for (std::uint32_t i : o.order) {
    out.literals.push_back(goal[i]);
    out.positions.push_back(i);
  }
  return out;
}

}  // namespace conjorder
