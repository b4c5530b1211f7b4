#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "conjorder/cost_model.hpp"
#include "conjorder/term.hpp"

namespace conjorder {

inline constexpr std::uint32_t kMaxPatternArity = 64;

// Per-argument bound/free signature of a literal. Bit i of bound_mask is set
// iff argument i is bound.
struct BindingPattern {
  Symbol predicate;
  std::uint32_t arity = 0;
  std::uint64_t bound_mask = 0;

  bool bound(std::uint32_t i) const { return (bound_mask >> i) & 1u; }
  PredicateKey key() const { return {predicate, arity}; }

  friend bool operator==(const BindingPattern&, const BindingPattern&) = default;
};

// "father/2:bf"; arity-0 patterns print as "a/0:".
std::string to_string(const BindingPattern& p);
// Throws std::invalid_argument on malformed text.
BindingPattern parse_pattern(std::string_view text);

// An argument is bound iff it has no variable outside `bound`.
BindingPattern pattern_of(const Literal& l, const VarSet& bound);
// An argument is bound iff it is ground.
BindingPattern pattern_of(const Literal& l);

// Source of control values for literal classes.
class ControlOracle {
 public:
  virtual ~ControlOracle() = default;
  virtual ControlValues values(const BindingPattern& p) const = 0;

  ControlValues values(const Literal& l, const VarSet& bound) const {
    return values(pattern_of(l, bound));
  }
};

}  // namespace conjorder

template <>
struct std::hash<conjorder::BindingPattern> {
  std::size_t operator()(const conjorder::BindingPattern& p) const noexcept {
    std::size_t h = p.predicate.id();
    h = h * 1000003u ^ p.arity;
    h = h * 1000003u ^ std::hash<std::uint64_t>{}(p.bound_mask);
    return h;
  }
};
