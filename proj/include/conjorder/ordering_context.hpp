#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "conjorder/binding_pattern.hpp"
#include "conjorder/cost_model.hpp"
#include "conjorder/term.hpp"
#include "conjorder/var_bits.hpp"

namespace conjorder {

// Predicate and variable-occurrence structure of a conjunction. Variables are
// numbered locally; variables already bound before the conjunction runs are
// simply left out, so a local binding set starts empty.
struct ProblemShape {
  struct Occurrence {
    std::uint32_t arg;
    std::uint32_t var;
  };
  struct Entry {
    PredicateKey key;
    std::uint32_t first_occurrence;
  };

  std::vector<Entry> literals;
  std::vector<Occurrence> occurrences;
  std::uint32_t num_vars = 0;

  void clear() {
    literals.clear();
    occurrences.clear();
    num_vars = 0;
  }
  void add_literal(PredicateKey key) {
    literals.push_back({key, static_cast<std::uint32_t>(occurrences.size())});
  }
  // Records that local variable `var` occurs in argument `arg` of the last literal.
  void add_occurrence(std::uint32_t arg, std::uint32_t var) {
    occurrences.push_back({arg, var});
    if (var >= num_vars) num_vars = var + 1;
  }
  std::size_t size() const { return literals.size(); }

  static ProblemShape from_literals(std::span<const Literal> ls, const VarSet& bound = {});
};

// Per-call view used by every orderer: variable masks, binding patterns, and
// cached control values.
class OrderingContext {
 public:
  OrderingContext(const ProblemShape& shape, const ControlOracle& oracle);

  std::size_t size() const { return shape_.literals.size(); }
  const ProblemShape& shape() const { return shape_; }
  const ControlOracle& oracle() const { return oracle_; }
  VarBits empty_bits() const { return VarBits(shape_.num_vars); }
  const VarBits& vars(std::size_t i) const { return vars_[i]; }

  BindingPattern pattern(std::size_t i, const VarBits& bound) const;
  ControlValues values(std::size_t i, const VarBits& bound) const;

  // Values of each position of `order` under its prefix, starting from `bound`.
  void positional_values(std::span<const std::uint32_t> order, VarBits bound,
                         std::vector<ControlValues>& out) const;
  double sequence_cost(std::span<const std::uint32_t> order, const VarBits& bound) const;
  double sequence_cost(std::span<const std::uint32_t> order) const {
    return sequence_cost(order, empty_bits());
  }

  // Scratch storage for union-find style passes; sized to max(literals, vars).
  template <class T>
  using Scratch = boost::container::small_vector<T, 16>;
  Scratch<std::int32_t>& scratch_owner() const { return owner_; }
  Scratch<std::size_t>& scratch_rank() const { return rank_; }
  Scratch<std::size_t>& scratch_parent() const { return parent_; }

 private:
  struct CacheEntry {
    std::uint64_t mask;
    ControlValues values;
  };

  const ProblemShape& shape_;
  const ControlOracle& oracle_;
  boost::container::small_vector<VarBits, 8> vars_;
  mutable boost::container::small_vector<boost::container::small_vector<CacheEntry, 2>, 8> cache_;
  mutable Scratch<std::int32_t> owner_;
  mutable Scratch<std::size_t> rank_;
  mutable Scratch<std::size_t> parent_;
};

}  // namespace conjorder
