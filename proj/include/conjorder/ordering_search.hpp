#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "conjorder/errors.hpp"
#include "conjorder/ordering_context.hpp"

namespace conjorder {

// An ordering of context positions and its expected cost.
struct Ordering {
  std::vector<std::uint32_t> order;
  double cost = 0.0;
};

inline constexpr std::size_t kDefaultExhaustiveBound = 9;
inline constexpr std::size_t kDefaultPrefixBound = 14;

std::vector<std::uint32_t> order_random(std::size_t n, std::uint64_t seed);

// Stable sort by cn. Throws PreconditionError if `subset` is dependent under `bound`.
std::vector<std::uint32_t> order_by_cn(const OrderingContext& ctx,
                                       std::span<const std::uint32_t> subset,
                                       const VarBits& bound);
Ordering order_by_cn(const OrderingContext& ctx);

struct PermutationCost {
  std::vector<std::uint32_t> order;
  double cost;
};
// Every permutation in lexicographic order of positions.
std::vector<PermutationCost> all_permutation_costs(const OrderingContext& ctx,
                                                   std::size_t bound = kDefaultExhaustiveBound);
// Minimum-cost permutation; the lexicographically first among equal-cost minima.
Ordering order_exhaustive(const OrderingContext& ctx, std::size_t bound = kDefaultExhaustiveBound);

struct AdjacencyCosts {
  double forward;   // cost of <a, b>
  double backward;  // cost of <b, a>
  bool passes() const;
};
AdjacencyCosts adjacency_costs(const OrderingContext& ctx, const VarBits& bound, std::uint32_t a,
                               std::uint32_t b);
bool adjacency_test(const OrderingContext& ctx, const VarBits& bound, std::uint32_t a,
                    std::uint32_t b);

enum class PrefixVariant { Plain, BestFirst, BestFirstAdjacency };

// Search events for the prefix-based orderers.
struct SearchStep {
  enum class Kind { Extension, Completion, AdjacencyRejected, PermutationRejected };
  Kind kind;
  std::vector<std::uint32_t> sequence;
  double cost;  // meaningful for Extension and Completion
};
struct SearchExpansion {
  std::vector<std::uint32_t> popped;
  std::vector<SearchStep> steps;
};
struct SearchTrace {
  std::vector<SearchExpansion> expansions;
  std::size_t prefixes_created = 0;
};

Ordering order_prefix(const OrderingContext& ctx, PrefixVariant variant,
                      std::size_t bound = kDefaultPrefixBound, SearchTrace* trace = nullptr);
Ordering order_combined(const OrderingContext& ctx, std::size_t bound = kDefaultPrefixBound,
                        SearchTrace* trace = nullptr);

}  // namespace conjorder
