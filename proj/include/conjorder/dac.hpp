#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "conjorder/dependence.hpp"
#include "conjorder/ordering_context.hpp"
#include "conjorder/ordering_search.hpp"

namespace conjorder {

// A sequence of blocks stored flat: `literals` is the unfolded sequence and
// each block covers literals[begin, end).
struct FoldedOrdering {
  struct Block {
    std::uint32_t begin;
    std::uint32_t end;
    ControlValues values;  // composed, under the binding at the block's position
  };

  boost::container::small_vector<std::uint32_t, 8> literals;
  boost::container::small_vector<Block, 8> blocks;

  std::span<const std::uint32_t> members(std::size_t k) const {
    return {literals.data() + blocks[k].begin, blocks[k].end - blocks[k].begin};
  }
  std::vector<std::uint32_t> unfold() const { return {literals.begin(), literals.end()}; }

  // One block per literal, values taken under `bound` and the growing prefix.
  static FoldedOrdering singletons(const OrderingContext& ctx, std::span<const std::uint32_t> seq,
                                   const VarBits& bound);
};

// Divisibility tree node. Children are derived on demand.
struct DivNode {
  std::vector<std::uint32_t> subgoals;  // ascending positions
  VarBits binding;
  Divisibility kind;
  LocalPartition partition;

  DivNode and_child(std::size_t group, const OrderingContext& ctx) const;
  DivNode or_child(std::uint32_t binder, const OrderingContext& ctx) const;
};
DivNode build_divnode(const OrderingContext& ctx, std::vector<std::uint32_t> subgoals,
                      const VarBits& binding);

// Declared permitted modes. A mode is a pattern over {b, f}; an argument the
// mode marks `f` must not be bound on call.
class ModeTable {
 public:
  void add(PredicateKey key, std::string_view pattern);
  bool empty() const { return modes_.empty(); }
  // True iff `key` has declarations and every one of them has an `f`
  // argument that is bound in `bound_mask`.
  bool violates_all(const PredicateKey& key, std::uint64_t bound_mask) const;

  // Lines of the form `pred/arity: pattern`; % comments and blank lines allowed.
  static ModeTable parse(std::string_view text);

 private:
  std::unordered_map<PredicateKey, std::vector<std::uint64_t>> modes_;  // masks of required-free args
};

// False iff binding `bound` plus the binder makes some literal of `rest`
// violate all of its declared modes.
bool mode_prune(const OrderingContext& ctx, std::uint32_t binder,
                std::span<const std::uint32_t> rest, const VarBits& bound, const ModeTable& modes);
bool mode_prune(const Literal& binder, std::span<const Literal> rest,
                std::span<const Literal> binding, const ModeTable& modes);

struct DacTrace {
  struct FoldEvent {
    std::vector<std::uint32_t> input;  // unfolded sequence being folded
    bool rejected;
    AdjacencyCosts failed{};  // set when rejected
  };
  std::vector<FoldEvent> folds;
  std::size_t sortings = 0;
  std::size_t adjacency_tests = 0;
  std::size_t merges = 0;
  std::size_t safety_valve_uses = 0;
};

struct DacConfig {
  bool memo = false;
  const ModeTable* modes = nullptr;
  DacTrace* trace = nullptr;
};

struct FoldOptions {
  bool reject = true;  // false: join cn-inverted pairs regardless of adjacency
  DacTrace* trace = nullptr;
};

// Joins the leading blocks while they are cn-inverted. Returns nothing when a
// join point fails the adjacency test.
std::optional<FoldedOrdering> fold(const OrderingContext& ctx, FoldedOrdering seq,
                                   const VarBits& bound, FoldOptions options = {});

// Repeatedly emits the front block with minimal cn; ties go to the lowest index.
FoldedOrdering merge(const OrderingContext& ctx, std::span<const FoldedOrdering* const> parts,
                     const VarBits& bound);

using CandidateSet = boost::container::small_vector<FoldedOrdering, 1>;

CandidateSet candidate_set(const OrderingContext& ctx, std::span<const std::uint32_t> subgoals,
                           const VarBits& bound, const DacConfig& config = {});

// Cheapest root candidate, unfolded. Throws NoValidOrderingError if mode
// declarations exclude every ordering.
Ordering order_dac(const OrderingContext& ctx, const DacConfig& config = {});

}  // namespace conjorder
