#include "conjorder/ordering_context.hpp"

#include <algorithm>
#include <stdexcept>

namespace conjorder {

namespace {
void shape_term(const Term& t, std::uint32_t arg, const VarSet& bound,
                std::unordered_map<VarId, std::uint32_t>& ids, ProblemShape& s) {
  if (t.is_ground()) return;
  if (t.is_variable()) {
    if (bound.contains(t.var_id())) return;
    auto [it, fresh] = ids.try_emplace(t.var_id(), static_cast<std::uint32_t>(ids.size()));
    s.add_occurrence(arg, it->second);
    return;
  }
  for (const Term& a : t.args()) shape_term(a, arg, bound, ids, s);
}
}  // namespace

ProblemShape ProblemShape::from_literals(std::span<const Literal> ls, const VarSet& bound) {
  ProblemShape s;
  std::unordered_map<VarId, std::uint32_t> ids;
  for (const Literal& l : ls) {
    if (l.args.size() > kMaxPatternArity) throw std::invalid_argument("arity above 64 unsupported");
    s.add_literal(l.key());
    for (std::uint32_t k = 0; k < l.args.size(); ++k) shape_term(l.args[k], k, bound, ids, s);
  }
  s.num_vars = static_cast<std::uint32_t>(ids.size());
  return s;
}

OrderingContext::OrderingContext(const ProblemShape& shape, const ControlOracle& oracle)
    : shape_(shape), oracle_(oracle), cache_(shape.literals.size()) {
  const std::size_t n = shape.literals.size();
  vars_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    VarBits b(shape.num_vars);
    const std::uint32_t end =
        i + 1 < n ? shape.literals[i + 1].first_occurrence
                  : static_cast<std::uint32_t>(shape.occurrences.size());
    for (std::uint32_t k = shape.literals[i].first_occurrence; k < end; ++k)
      b.set(shape.occurrences[k].var);
    vars_.push_back(std::move(b));
  }
  const std::size_t m = std::max<std::size_t>(n, shape.num_vars);
  owner_.assign(shape.num_vars, -1);
  rank_.resize(m);
  parent_.resize(m);
}

BindingPattern OrderingContext::pattern(std::size_t i, const VarBits& bound) const {
  const auto& e = shape_.literals[i];
  const std::uint32_t arity = e.key.arity;
  std::uint64_t mask = arity == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << arity) - 1;
  const std::size_t end = i + 1 < shape_.literals.size() ? shape_.literals[i + 1].first_occurrence
                                                         : shape_.occurrences.size();
  for (std::size_t k = e.first_occurrence; k < end; ++k) {
    const auto& o = shape_.occurrences[k];
    if (!bound.test(o.var)) mask &= ~(std::uint64_t{1} << o.arg);
  }
  return {e.key.name, arity, mask};
}

ControlValues OrderingContext::values(std::size_t i, const VarBits& bound) const {
  const BindingPattern p = pattern(i, bound);
  auto& c = cache_[i];
  for (const CacheEntry& e : c)
    if (e.mask == p.bound_mask) return e.values;
  const ControlValues v = oracle_.values(p);
  c.push_back({p.bound_mask, v});
  return v;
}

void OrderingContext::positional_values(std::span<const std::uint32_t> order, VarBits bound,
                                        std::vector<ControlValues>& out) const {
  out.clear();
  for (std::uint32_t i : order) {
    out.push_back(values(i, bound));
    bound |= vars_[i];
  }
}

double OrderingContext::sequence_cost(std::span<const std::uint32_t> order,
                                      const VarBits& bound) const {
  VarBits b = bound;
  double total = 0.0, prod = 1.0;
  for (std::uint32_t i : order) {
    const ControlValues v = values(i, b);
    total += prod * v.cost;
    prod *= v.nsols;
    b |= vars_[i];
  }
  return total;
}

}  // namespace conjorder
