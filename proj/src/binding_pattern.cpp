#include "conjorder/binding_pattern.hpp"

#include <charconv>
#include <stdexcept>

namespace conjorder {

std::string to_string(const BindingPattern& p) {
  std::string out = p.predicate.str() + "/" + std::to_string(p.arity) + ":";
  for (std::uint32_t i = 0; i < p.arity; ++i) out += p.bound(i) ? 'b' : 'f';
  return out;
}

BindingPattern parse_pattern(std::string_view text) {
  const auto colon = text.rfind(':');
  const auto slash = text.rfind('/', colon);
  if (colon == std::string_view::npos || slash == std::string_view::npos || slash == 0)
    throw std::invalid_argument("malformed binding pattern: " + std::string(text));
  BindingPattern p;
  p.predicate = Symbol::intern(text.substr(0, slash));
  auto digits = text.substr(slash + 1, colon - slash - 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p.arity);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
    throw std::invalid_argument("malformed arity in pattern: " + std::string(text));
  auto flags = text.substr(colon + 1);
  if (flags.size() != p.arity || p.arity > kMaxPatternArity)
    throw std::invalid_argument("pattern length does not match arity: " + std::string(text));
  for (std::uint32_t i = 0; i < p.arity; ++i) {
    if (flags[i] == 'b')
      p.bound_mask |= std::uint64_t{1} << i;
    else if (flags[i] != 'f')
      throw std::invalid_argument("pattern flags must be b or f: " + std::string(text));
  }
  return p;
}

namespace {
bool all_bound(const Term& t, const VarSet& bound) {
  if (t.is_ground()) return true;
  if (t.is_variable()) return bound.contains(t.var_id());
  for (const Term& a : t.args())
    if (!all_bound(a, bound)) return false;
  return true;
}
}  // namespace

BindingPattern pattern_of(const Literal& l, const VarSet& bound) {
  if (l.args.size() > kMaxPatternArity) throw std::invalid_argument("arity above 64 unsupported");
  BindingPattern p{l.predicate, static_cast<std::uint32_t>(l.args.size()), 0};
  for (std::uint32_t i = 0; i < p.arity; ++i)
    if (all_bound(l.args[i], bound)) p.bound_mask |= std::uint64_t{1} << i;
  return p;
}

BindingPattern pattern_of(const Literal& l) { return pattern_of(l, VarSet{}); }

}  // namespace conjorder
