#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "conjorder/dac.hpp"
#include "conjorder/ordering_search.hpp"

namespace conjorder {

enum class Method { Random, Sort, Exhaustive, Prefix, BestFirst, Adjacency, Combined, Dac };

std::string_view to_string(Method m);
// Throws std::invalid_argument for unknown names.
Method parse_method(std::string_view name);
std::vector<Method> all_methods();

struct OrderOptions {
  std::uint64_t seed = 0;          // Random
  bool lenient_sort = false;       // Sort: fall back to cn order on dependent input
  std::size_t exhaustive_bound = kDefaultExhaustiveBound;
  std::size_t prefix_bound = kDefaultPrefixBound;
  DacConfig dac{};
};

Ordering order_with(Method m, const OrderingContext& ctx, const OrderOptions& options = {});

struct LiteralOrdering {
  std::vector<Literal> literals;
  std::vector<std::size_t> positions;  // into the input
  double cost = 0.0;
};

LiteralOrdering order_literals(Method m, std::span<const Literal> goal, const ControlOracle& oracle,
                               const OrderOptions& options = {}, const VarSet& bound = {});

}  // namespace conjorder
