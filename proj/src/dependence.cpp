#include "conjorder/dependence.hpp"

#include <numeric>

#include <boost/container/small_vector.hpp>
#include <boost/pending/disjoint_sets.hpp>

namespace conjorder {

const char* to_string(Divisibility d) {
  switch (d) {
    case Divisibility::Independent: return "independent";
    case Divisibility::Indivisible: return "indivisible";
    case Divisibility::Divisible: return "divisible";
  }
  return "?";
}

VarSet bound_vars(std::span<const Literal> binding) {
  VarSet out;
  for (const Literal& l : binding)
    for (const Term& a : l.args) collect_variables(a, out);
  return out;
}

bool directly_dependent(const Literal& a, const Literal& b, const VarSet& bound) {
  const VarSet va = variables_of(a);
  for (const Term& t : b.args) {
    for (const VarId& v : variables_of(t))
      if (va.contains(v) && !bound.contains(v)) return true;
  }
  return false;
}

LocalPartition dpart(const OrderingContext& ctx, std::span<const std::uint32_t> subset,
                     const VarBits& bound) {
  const std::size_t n = subset.size();
  auto& owner = ctx.scratch_owner();
  auto& rank = ctx.scratch_rank();
  auto& parent = ctx.scratch_parent();
  boost::disjoint_sets<std::size_t*, std::size_t*> ds(rank.data(), parent.data());
  for (std::size_t k = 0; k < n; ++k) ds.make_set(k);

  const auto& shape = ctx.shape();
  boost::container::small_vector<std::uint32_t, 32> touched;
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint32_t i = subset[k];
    const std::size_t end = i + 1 < shape.literals.size() ? shape.literals[i + 1].first_occurrence
                                                          : shape.occurrences.size();
    for (std::size_t o = shape.literals[i].first_occurrence; o < end; ++o) {
      const std::uint32_t v = shape.occurrences[o].var;
      if (bound.test(v)) continue;
      if (owner[v] < 0) {
        owner[v] = static_cast<std::int32_t>(k);
        touched.push_back(v);
      } else {
        ds.union_set(k, static_cast<std::size_t>(owner[v]));
      }
    }
  }
  for (std::uint32_t v : touched) owner[v] = -1;

  // Component sizes, then group ids in order of first member.
  boost::container::small_vector<std::uint32_t, 16> size(n, 0);
  boost::container::small_vector<std::size_t, 16> root(n);
  for (std::size_t k = 0; k < n; ++k) {
    root[k] = ds.find_set(k);
    ++size[root[k]];
  }
  LocalPartition p;
  boost::container::small_vector<std::int32_t, 16> group_of(n, -1);
  std::vector<std::uint32_t> lonely;
  for (std::size_t k = 0; k < n; ++k) {
    if (size[root[k]] == 1) {
      lonely.push_back(subset[k]);
      continue;
    }
    if (group_of[root[k]] < 0) {
      group_of[root[k]] = static_cast<std::int32_t>(p.groups.size());
      p.groups.emplace_back();
    }
    p.groups[group_of[root[k]]].push_back(subset[k]);
  }
  if (!lonely.empty()) {
    p.special_index = p.groups.size();
    p.groups.push_back(std::move(lonely));
  }
  return p;
}

bool is_independent(const OrderingContext& ctx, std::span<const std::uint32_t> subset,
                    const VarBits& bound) {
  VarBits seen = ctx.empty_bits();
  for (std::uint32_t i : subset) {
    if (ctx.vars(i).intersects_outside(seen, bound)) return false;
    seen |= ctx.vars(i);
  }
  return true;
}

namespace {
struct NullOracle final : ControlOracle {
  ControlValues values(const BindingPattern&) const override { return {}; }
};
}  // namespace

Partition dpart(std::span<const Literal> s, std::span<const Literal> binding) {
  const ProblemShape shape = ProblemShape::from_literals(s, bound_vars(binding));
  NullOracle oracle;
  OrderingContext ctx(shape, oracle);
  std::vector<std::uint32_t> all(s.size());
  std::iota(all.begin(), all.end(), 0u);
  LocalPartition local = dpart(ctx, all, ctx.empty_bits());
  Partition out;
  out.special_index = local.special_index;
  for (auto& g : local.groups) out.groups.emplace_back(g.begin(), g.end());
  return out;
}

Divisibility classify(std::span<const Literal> s, std::span<const Literal> binding) {
  return classify(dpart(s, binding), s.size());
}

}  // namespace conjorder
