#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "conjorder/ordering_context.hpp"
#include "conjorder/term.hpp"

namespace conjorder {

// Connected components of the direct-dependence graph. Lonely literals are
// collected into one special group, placed last. Other groups are ordered by
// their smallest member position; members keep input order.
template <class Index>
struct BasicPartition {
  std::vector<std::vector<Index>> groups;
  std::optional<std::size_t> special_index;

  std::size_t dependent_group_count() const { return groups.size() - (special_index ? 1 : 0); }
};

using Partition = BasicPartition<std::size_t>;
using LocalPartition = BasicPartition<std::uint32_t>;

enum class Divisibility { Independent, Indivisible, Divisible };

template <class Index>
Divisibility classify(const BasicPartition<Index>& p, std::size_t set_size) {
  const std::size_t dependent = p.dependent_group_count();
  if (dependent == 0) return Divisibility::Independent;
  if (dependent == 1 && p.groups[0].size() == set_size) return Divisibility::Indivisible;
  return Divisibility::Divisible;
}

const char* to_string(Divisibility d);

// Literal-level interface. A binding set is a list of already-proven literals;
// under the one-binding rule each of them binds all of its variables.
VarSet bound_vars(std::span<const Literal> binding);
bool directly_dependent(const Literal& a, const Literal& b, const VarSet& bound);
// Group members are indices into `s`.
Partition dpart(std::span<const Literal> s, std::span<const Literal> binding);
Divisibility classify(std::span<const Literal> s, std::span<const Literal> binding);

// Context-level interface over literal positions. `subset` must be ascending.
LocalPartition dpart(const OrderingContext& ctx, std::span<const std::uint32_t> subset,
                     const VarBits& bound);
// True iff no two literals of `subset` share a variable outside `bound`.
bool is_independent(const OrderingContext& ctx, std::span<const std::uint32_t> subset,
                    const VarBits& bound);

}  // namespace conjorder
