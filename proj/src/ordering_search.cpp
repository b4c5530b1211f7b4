#include "conjorder/ordering_search.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <unordered_map>

#include <boost/random/uniform_int_distribution.hpp>

#include "conjorder/dependence.hpp"

namespace conjorder {

std::vector<std::uint32_t> order_random(std::size_t n, std::uint64_t seed) {
  std::vector<std::uint32_t> out(n);
  std::iota(out.begin(), out.end(), 0u);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    boost::random::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(out[i - 1], out[pick(rng)]);
  }
  return out;
}

std::vector<std::uint32_t> order_by_cn(const OrderingContext& ctx,
                                       std::span<const std::uint32_t> subset,
                                       const VarBits& bound) {
  if (!is_independent(ctx, subset, bound))
    throw PreconditionError("sort-by-cn requires an independent set");
  std::vector<std::pair<double, std::uint32_t>> keyed;
  keyed.reserve(subset.size());
  for (std::uint32_t i : subset) keyed.emplace_back(cn_of(ctx.values(i, bound)), i);
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& x, const auto& y) { return definitely_less(x.first, y.first); });
  std::vector<std::uint32_t> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

Ordering order_by_cn(const OrderingContext& ctx) {
  std::vector<std::uint32_t> all(ctx.size());
  std::iota(all.begin(), all.end(), 0u);
  Ordering o{order_by_cn(ctx, all, ctx.empty_bits()), 0.0};
  o.cost = ctx.sequence_cost(o.order);
  return o;
}

namespace {
void check_bound(const OrderingContext& ctx, std::size_t bound, const char* who) {
  if (ctx.size() > bound || ctx.size() > 63)
    throw SizeBoundError(std::string(who) + ": " + std::to_string(ctx.size()) +
                         " subgoals exceed the bound of " + std::to_string(std::min<std::size_t>(bound, 63)));
}
}  // namespace

std::vector<PermutationCost> all_permutation_costs(const OrderingContext& ctx, std::size_t bound) {
  check_bound(ctx, bound, "permutation enumeration");
  std::vector<std::uint32_t> perm(ctx.size());
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<PermutationCost> out;
  do {
    out.push_back({perm, ctx.sequence_cost(perm)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

// Depth-first enumeration in lexicographic order with incremental prefix cost.
struct Exhaustive {
  const OrderingContext& ctx;
  std::vector<std::uint32_t> current;
  std::vector<bool> used;
  Ordering best{{}, 0.0};
  bool have_best = false;

  void run(const VarBits& bound, double cost, double nsols) {
    const std::size_t n = ctx.size();
    if (current.size() == n) {
      if (!have_best || definitely_less(cost, best.cost)) {
        best.order = current;
        best.cost = cost;
        have_best = true;
      }
      return;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const ControlValues v = ctx.values(i, bound);
      used[i] = true;
      current.push_back(i);
      run(bound | ctx.vars(i), cost + nsols * v.cost, nsols * v.nsols);
      current.pop_back();
      used[i] = false;
    }
  }
};

}  // namespace

Ordering order_exhaustive(const OrderingContext& ctx, std::size_t bound) {
  check_bound(ctx, bound, "exhaustive ordering");
  Exhaustive ex{ctx, {}, std::vector<bool>(ctx.size(), false)};
  ex.run(ctx.empty_bits(), 0.0, 1.0);
  return ex.best;
}

bool AdjacencyCosts::passes() const { return !definitely_less(backward, forward); }

AdjacencyCosts adjacency_costs(const OrderingContext& ctx, const VarBits& bound, std::uint32_t a,
                               std::uint32_t b) {
  const ControlValues va = ctx.values(a, bound);
  const ControlValues vb = ctx.values(b, bound);
  const ControlValues vb_after = ctx.values(b, bound | ctx.vars(a));
  const ControlValues va_after = ctx.values(a, bound | ctx.vars(b));
  return {va.cost + va.nsols * vb_after.cost, vb.cost + vb.nsols * va_after.cost};
}

bool adjacency_test(const OrderingContext& ctx, const VarBits& bound, std::uint32_t a,
                    std::uint32_t b) {
  return adjacency_costs(ctx, bound, a, b).passes();
}

namespace {

struct PrefixNode {
  std::uint64_t mask;
  double cost;
  double nsols;
  VarBits bound;
  std::int32_t parent;
  std::uint32_t last;
  std::uint32_t len;
  std::int32_t completion = -1;  // index into completions when this is a completed sequence
};

class PrefixSearch {
 public:
  PrefixSearch(const OrderingContext& ctx, SearchTrace* trace) : ctx_(ctx), trace_(trace) {
    nodes_.push_back({0, 0.0, 1.0, ctx.empty_bits(), -1, 0, 0});
  }

  std::vector<std::uint32_t> sequence(std::int32_t id) const {
    const PrefixNode& node = nodes_[id];
    if (node.completion >= 0) return completions_[node.completion];
    std::vector<std::uint32_t> out(node.len);
    for (std::int32_t k = id; k > 0; k = nodes_[k].parent) out[nodes_[k].len - 1] = nodes_[k].last;
    return out;
  }

  // Extension of `id` by literal b; returns the new node id.
  std::int32_t extend(std::int32_t id, std::uint32_t b) {
    const PrefixNode& p = nodes_[id];
    const ControlValues v = ctx_.values(b, p.bound);
    PrefixNode n{p.mask | (std::uint64_t{1} << b), p.cost + p.nsols * v.cost, p.nsols * v.nsols,
                 p.bound | ctx_.vars(b), id, b, p.len + 1};
    nodes_.push_back(std::move(n));
    if (trace_) ++trace_->prefixes_created;
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  bool adjacency_ok(std::int32_t id, std::uint32_t b) const {
    const PrefixNode& p = nodes_[id];
    if (p.len == 0) return true;
    return adjacency_test(ctx_, nodes_[p.parent].bound, p.last, b);
  }

  std::int32_t complete(std::int32_t id, std::span<const std::uint32_t> rest) {
    const PrefixNode& p = nodes_[id];
    std::vector<std::uint32_t> tail = order_by_cn(ctx_, rest, p.bound);
    std::vector<std::uint32_t> full = sequence(id);
    full.insert(full.end(), tail.begin(), tail.end());
    const double cost = p.cost + p.nsols * ctx_.sequence_cost(tail, p.bound);
    completions_.push_back(std::move(full));
    PrefixNode n{~std::uint64_t{0}, cost, 0.0, ctx_.empty_bits(), id,
                 0, static_cast<std::uint32_t>(ctx_.size())};
    n.completion = static_cast<std::int32_t>(completions_.size() - 1);
    nodes_.push_back(std::move(n));
    if (trace_) ++trace_->prefixes_created;
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  PrefixNode& node(std::int32_t id) { return nodes_[id]; }
  const OrderingContext& ctx() const { return ctx_; }
  SearchTrace* trace() const { return trace_; }

  void record(SearchExpansion* exp, SearchStep::Kind kind, std::int32_t id, std::uint32_t b = 0) {
    if (!exp) return;
    std::vector<std::uint32_t> seq;
    double cost = 0.0;
    if (kind == SearchStep::Kind::Extension || kind == SearchStep::Kind::Completion) {
      seq = sequence(id);
      cost = nodes_[id].cost;
    } else {
      seq = sequence(id);
      seq.push_back(b);
    }
    exp->steps.push_back({kind, std::move(seq), cost});
  }

 private:
  const OrderingContext& ctx_;
  SearchTrace* trace_;
  std::vector<PrefixNode> nodes_;
  std::vector<std::vector<std::uint32_t>> completions_;
};

Ordering plain_prefix(const OrderingContext& ctx, SearchTrace* trace) {
  PrefixSearch s(ctx, trace);
  const std::size_t n = ctx.size();
  std::vector<std::int32_t> level{0};
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::int32_t> next;
    std::unordered_map<std::uint64_t, std::size_t> slot;
    for (std::int32_t id : level) {
      SearchExpansion exp;
      SearchExpansion* e = trace ? &exp : nullptr;
      if (e) e->popped = s.sequence(id);
      for (std::uint32_t b = 0; b < n; ++b) {
        if ((s.node(id).mask >> b) & 1u) continue;
        const std::int32_t ext = s.extend(id, b);
        auto [it, fresh] = slot.try_emplace(s.node(ext).mask, next.size());
        if (fresh) {
          next.push_back(ext);
          s.record(e, SearchStep::Kind::Extension, ext);
        } else if (definitely_less(s.node(ext).cost, s.node(next[it->second]).cost)) {
          next[it->second] = ext;
          s.record(e, SearchStep::Kind::Extension, ext);
        } else {
          s.record(e, SearchStep::Kind::PermutationRejected, id, b);
        }
      }
      if (e) trace->expansions.push_back(std::move(exp));
    }
    level = std::move(next);
  }
  return {s.sequence(level.front()), s.node(level.front()).cost};
}

Ordering best_first(const OrderingContext& ctx, bool adjacency, bool completion,
                    SearchTrace* trace) {
  PrefixSearch s(ctx, trace);
  const std::size_t n = ctx.size();
  struct Entry {
    double cost;
    std::uint64_t seq;
    std::int32_t id;
  };
  auto later = [](const Entry& x, const Entry& y) {
    return x.cost != y.cost ? x.cost > y.cost : x.seq > y.seq;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(later)> heap(later);
  std::unordered_map<std::uint64_t, std::int32_t> registry;
  std::uint64_t counter = 0;
  heap.push({0.0, counter++, 0});
  std::vector<std::uint32_t> rest;
  while (!heap.empty()) {
    const Entry top = heap.top();
    heap.pop();
    const PrefixNode p = s.node(top.id);  // copy: extensions grow the arena
    if (p.completion < 0 && p.len > 0 && registry.at(p.mask) != top.id) continue;  // superseded
    if (p.len == n) {
      if (trace) trace->expansions.push_back({s.sequence(top.id), {}});
      return {s.sequence(top.id), p.cost};
    }

    SearchExpansion exp;
    SearchExpansion* e = trace ? &exp : nullptr;
    if (e) e->popped = s.sequence(top.id);
    rest.clear();
    for (std::uint32_t b = 0; b < n; ++b)
      if (!((p.mask >> b) & 1u)) rest.push_back(b);

    if (completion && is_independent(ctx, rest, p.bound)) {
      const std::int32_t c = s.complete(top.id, rest);
      s.record(e, SearchStep::Kind::Completion, c);
      heap.push({s.node(c).cost, counter++, c});
    } else {
      for (std::uint32_t b : rest) {
        if (adjacency && !s.adjacency_ok(top.id, b)) {
          s.record(e, SearchStep::Kind::AdjacencyRejected, top.id, b);
          continue;
        }
        const std::int32_t ext = s.extend(top.id, b);
        const PrefixNode& x = s.node(ext);
        auto [it, fresh] = registry.try_emplace(x.mask, ext);
        if (!fresh) {
          if (!definitely_less(x.cost, s.node(it->second).cost)) {
            s.record(e, SearchStep::Kind::PermutationRejected, top.id, b);
            continue;
          }
          it->second = ext;
        }
        s.record(e, SearchStep::Kind::Extension, ext);
        heap.push({x.cost, counter++, ext});
      }
    }
    if (e) trace->expansions.push_back(std::move(exp));
  }
  throw std::logic_error("prefix search exhausted without a complete ordering");
}

}  // namespace

Ordering order_prefix(const OrderingContext& ctx, PrefixVariant variant, std::size_t bound,
                      SearchTrace* trace) {
  check_bound(ctx, bound, "prefix ordering");
  if (ctx.size() == 0) return {};
  switch (variant) {
    case PrefixVariant::Plain: return plain_prefix(ctx, trace);
    case PrefixVariant::BestFirst: return best_first(ctx, false, false, trace);
    case PrefixVariant::BestFirstAdjacency: return best_first(ctx, true, false, trace);
  }
  return {};
}

Ordering order_combined(const OrderingContext& ctx, std::size_t bound, SearchTrace* trace) {
  check_bound(ctx, bound, "combined ordering");
  if (ctx.size() == 0) return {};
  return best_first(ctx, true, true, trace);
}

}  // namespace conjorder
