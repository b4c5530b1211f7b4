#include "conjorder/dac.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <numeric>
#include <queue>
#include <sstream>

#include <boost/container/small_vector.hpp>

namespace conjorder {

FoldedOrdering FoldedOrdering::singletons(const OrderingContext& ctx,
                                          std::span<const std::uint32_t> seq,
                                          const VarBits& bound) {
  FoldedOrdering f;
  f.literals.assign(seq.begin(), seq.end());
  f.blocks.reserve(seq.size());
  VarBits b = bound;
  for (std::uint32_t k = 0; k < seq.size(); ++k) {
    f.blocks.push_back({k, k + 1, ctx.values(seq[k], b)});
    if (k + 1 < seq.size()) b |= ctx.vars(seq[k]);
  }
  return f;
}

DivNode build_divnode(const OrderingContext& ctx, std::vector<std::uint32_t> subgoals,
                      const VarBits& binding) {
  DivNode n{std::move(subgoals), binding, Divisibility::Independent, {}};
  n.partition = dpart(ctx, n.subgoals, binding);
  n.kind = classify(n.partition, n.subgoals.size());
  return n;
}

DivNode DivNode::and_child(std::size_t group, const OrderingContext& ctx) const {
  return build_divnode(ctx, partition.groups.at(group), binding);
}

DivNode DivNode::or_child(std::uint32_t binder, const OrderingContext& ctx) const {
  std::vector<std::uint32_t> rest;
  for (std::uint32_t i : subgoals)
    if (i != binder) rest.push_back(i);
  return build_divnode(ctx, std::move(rest), binding | ctx.vars(binder));
}

void ModeTable::add(PredicateKey key, std::string_view pattern) {
  if (pattern.size() != key.arity || key.arity > kMaxPatternArity)
    throw std::invalid_argument("mode pattern length does not match arity for " + to_string(key));
  std::uint64_t free_mask = 0;
  for (std::uint32_t i = 0; i < key.arity; ++i) {
    if (pattern[i] == 'f')
      free_mask |= std::uint64_t{1} << i;
    else if (pattern[i] != 'b')
      throw std::invalid_argument("mode flags must be b or f");
  }
  modes_[key].push_back(free_mask);
}

bool ModeTable::violates_all(const PredicateKey& key, std::uint64_t bound_mask) const {
  auto it = modes_.find(key);
  if (it == modes_.end()) return false;
  for (std::uint64_t free_mask : it->second)
    if ((free_mask & bound_mask) == 0) return false;
  return true;
}

ModeTable ModeTable::parse(std::string_view text) {
  ModeTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto trim = [](std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return std::string_view();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (auto pct = s.find('%'); pct != std::string_view::npos) s = s.substr(0, pct);
    s = trim(s);
    if (s.empty()) continue;
    const auto colon = s.find(':');
    const auto slash = s.rfind('/', colon);
    if (colon == std::string_view::npos || slash == std::string_view::npos || slash == 0)
      throw std::invalid_argument("mode line " + std::to_string(lineno) + ": expected pred/arity: pattern");
    PredicateKey key{Symbol::intern(trim(s.substr(0, slash))), 0};
    auto digits = trim(s.substr(slash + 1, colon - slash - 1));
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), key.arity);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      throw std::invalid_argument("mode line " + std::to_string(lineno) + ": bad arity");
    t.add(key, trim(s.substr(colon + 1)));
  }
  return t;
}

bool mode_prune(const OrderingContext& ctx, std::uint32_t binder,
                std::span<const std::uint32_t> rest, const VarBits& bound, const ModeTable& modes) {
  if (modes.empty()) return true;
  const VarBits after = bound | ctx.vars(binder);
  for (std::uint32_t i : rest) {
    const BindingPattern p = ctx.pattern(i, after);
    if (modes.violates_all(p.key(), p.bound_mask)) return false;
  }
  return true;
}

namespace {
struct NullOracle final : ControlOracle {
  ControlValues values(const BindingPattern&) const override { return {}; }
};
}  // namespace

bool mode_prune(const Literal& binder, std::span<const Literal> rest,
                std::span<const Literal> binding, const ModeTable& modes) {
  std::vector<Literal> all{binder};
  all.insert(all.end(), rest.begin(), rest.end());
  const ProblemShape shape = ProblemShape::from_literals(all, bound_vars(binding));
  NullOracle oracle;
  OrderingContext ctx(shape, oracle);
  std::vector<std::uint32_t> idx(rest.size());
  std::iota(idx.begin(), idx.end(), 1u);
  return mode_prune(ctx, 0, idx, ctx.empty_bits(), modes);
}

std::optional<FoldedOrdering> fold(const OrderingContext& ctx, FoldedOrdering seq,
                                   const VarBits& bound, FoldOptions options) {
  if (options.trace && options.reject) options.trace->folds.push_back({seq.unfold(), false, {}});
  auto& blocks = seq.blocks;
  if (blocks.size() < 2) return seq;
  FoldedOrdering::Block lead = blocks[0];
  std::size_t k = 1;
  while (k < blocks.size() && is_cn_inverted(lead.values, blocks[k].values)) {
    const FoldedOrdering::Block& next = blocks[k];
    if (options.reject) {
      VarBits before_last = bound;
      for (std::uint32_t j = lead.begin; j + 1 < lead.end; ++j) before_last |= ctx.vars(seq.literals[j]);
      const AdjacencyCosts costs = adjacency_costs(ctx, before_last, seq.literals[lead.end - 1],
                                                   seq.literals[next.begin]);
      if (options.trace) ++options.trace->adjacency_tests;
      if (!costs.passes()) {
        if (options.trace) {
          options.trace->folds.back().rejected = true;
          options.trace->folds.back().failed = costs;
        }
        return std::nullopt;
      }
    }
    lead.end = next.end;
    lead.values = compose(lead.values, next.values);
    ++k;
  }
  blocks[0] = lead;
  blocks.erase(blocks.begin() + 1, blocks.begin() + static_cast<std::ptrdiff_t>(k));
  return seq;
}

FoldedOrdering merge(const OrderingContext& ctx, std::span<const FoldedOrdering* const> parts,
                     const VarBits& bound) {
  FoldedOrdering out;
  std::size_t total = 0, nblocks = 0;
  for (const FoldedOrdering* p : parts) {
    total += p->literals.size();
    nblocks += p->blocks.size();
  }
  out.literals.reserve(total);
  out.blocks.reserve(nblocks);

  VarBits emitted = bound;
  auto block_values = [&](const FoldedOrdering& f, std::size_t k) {
    VarBits b = emitted;
    ControlValues acc{0.0, 1.0};
    for (std::uint32_t lit : f.members(k)) {
      acc = compose(acc, ctx.values(lit, b));
      b |= ctx.vars(lit);
    }
    return acc;
  };

  struct Front {
    double cn;
    std::size_t part;
    ControlValues values;
  };
  auto later = [](const Front& x, const Front& y) {
    return x.cn != y.cn ? x.cn > y.cn : x.part > y.part;
  };
  std::priority_queue<Front, std::vector<Front>, decltype(later)> heap(later);
  std::vector<std::size_t> pos(parts.size(), 0);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i]->blocks.empty()) continue;
    const ControlValues v = block_values(*parts[i], 0);
    heap.push({cn_of(v), i, v});
  }
  while (!heap.empty()) {
    const Front f = heap.top();
    heap.pop();
    const FoldedOrdering& src = *parts[f.part];
    const auto members = src.members(pos[f.part]);
    const auto begin = static_cast<std::uint32_t>(out.literals.size());
    out.literals.insert(out.literals.end(), members.begin(), members.end());
    out.blocks.push_back({begin, static_cast<std::uint32_t>(out.literals.size()), f.values});
    for (std::uint32_t lit : members) emitted |= ctx.vars(lit);
    if (++pos[f.part] < src.blocks.size()) {
      const ControlValues v = block_values(src, pos[f.part]);
      heap.push({cn_of(v), f.part, v});
    }
  }
  return out;
}

namespace {

struct MemoKey {
  std::vector<std::uint32_t> subgoals;
  VarBits bound;
  friend bool operator==(const MemoKey&, const MemoKey&) = default;
};
struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    std::size_t h = k.bound.hash();
    for (std::uint32_t i : k.subgoals) h = (h ^ i) * 0x100000001b3ull;
    return h;
  }
};

class Dac {
 public:
  Dac(const OrderingContext& ctx, const DacConfig& config) : ctx_(ctx), config_(config) {}

  const CandidateSet& run(const std::vector<std::uint32_t>& s, const VarBits& b) {
    if (!config_.memo) return sets_.emplace_back(compute(s, b));
    VarBits scope = ctx_.empty_bits();
    for (std::uint32_t i : s) scope |= ctx_.vars(i);
    MemoKey key{s, b.intersect(scope)};
    if (auto it = memo_.find(key); it != memo_.end()) return *it->second;
    const CandidateSet& result = sets_.emplace_back(compute(s, b));
    memo_.emplace(std::move(key), &result);
    return result;
  }

 private:
  static CandidateSet one(FoldedOrdering&& f) {
    CandidateSet c;
    c.push_back(std::move(f));
    return c;
  }

  CandidateSet compute(const std::vector<std::uint32_t>& s, const VarBits& b) {
    if (s.empty()) return one(FoldedOrdering{});
    if (s.size() == 1) return one(FoldedOrdering::singletons(ctx_, s, b));
    if (is_independent(ctx_, s, b)) return one(leaf(s, b));
    const LocalPartition part = dpart(ctx_, s, b);
    switch (classify(part, s.size())) {
      case Divisibility::Independent: return one(leaf(s, b));
      case Divisibility::Indivisible: return or_node(s, b);
      case Divisibility::Divisible: return and_node(part, b);
    }
    return {};
  }

  FoldedOrdering leaf(const std::vector<std::uint32_t>& s, const VarBits& b) {
    if (config_.trace) ++config_.trace->sortings;
    boost::container::small_vector<std::pair<double, std::uint32_t>, 16> keyed;
    for (std::uint32_t i : s) keyed.emplace_back(cn_of(ctx_.values(i, b)), i);
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    FoldedOrdering f;
    f.literals.reserve(s.size());
    f.blocks.reserve(s.size());
    for (const auto& [cn, i] : keyed) {
      const auto k = static_cast<std::uint32_t>(f.literals.size());
      f.literals.push_back(i);
      f.blocks.push_back({k, k + 1, ctx_.values(i, b)});
    }
    return f;
  }

  CandidateSet or_node(const std::vector<std::uint32_t>& s, const VarBits& b) {
    CandidateSet out;
    out.reserve(s.size());
    boost::container::small_vector<std::pair<std::uint32_t, const CandidateSet*>, 16> children;
    std::vector<std::uint32_t> rest;
    rest.reserve(s.size() - 1);
    for (std::uint32_t binder : s) {
      rest.clear();
      for (std::uint32_t i : s)
        if (i != binder) rest.push_back(i);
      if (config_.modes && !mode_prune(ctx_, binder, rest, b, *config_.modes)) continue;
      const CandidateSet& child = run(rest, b | ctx_.vars(binder));
      for (const FoldedOrdering& o : child)
        if (auto f = fold(ctx_, prepend(binder, o, b), b, {true, config_.trace}))
          out.push_back(std::move(*f));
      children.emplace_back(binder, &child);
    }
    if (!out.empty()) return out;
    // Every folding was rejected; keep the sequences, folded without rejection.
    for (const auto& [binder, child] : children)
      for (const FoldedOrdering& o : *child)
        out.push_back(*fold(ctx_, prepend(binder, o, b), b, {false, nullptr}));
    if (!out.empty() && config_.trace) ++config_.trace->safety_valve_uses;
    return out;
  }

  FoldedOrdering prepend(std::uint32_t binder, const FoldedOrdering& o, const VarBits& b) const {
    FoldedOrdering f;
    f.literals.reserve(o.literals.size() + 1);
    f.literals.push_back(binder);
    f.literals.insert(f.literals.end(), o.literals.begin(), o.literals.end());
    f.blocks.reserve(o.blocks.size() + 1);
    f.blocks.push_back({0, 1, ctx_.values(binder, b)});
    for (const auto& blk : o.blocks) f.blocks.push_back({blk.begin + 1, blk.end + 1, blk.values});
    return f;
  }

  CandidateSet and_node(const LocalPartition& part, const VarBits& b) {
    boost::container::small_vector<const CandidateSet*, 8> sets;
    for (const auto& g : part.groups) {
      sets.push_back(&run(g, b));
      if (sets.back()->empty()) return {};
    }
    CandidateSet out;
    boost::container::small_vector<std::size_t, 8> pick(sets.size(), 0);
    boost::container::small_vector<const FoldedOrdering*, 8> chosen(sets.size());
    for (;;) {
      for (std::size_t i = 0; i < sets.size(); ++i) chosen[i] = &(*sets[i])[pick[i]];
      if (config_.trace) ++config_.trace->merges;
      out.push_back(merge(ctx_, {chosen.data(), chosen.size()}, b));
      std::size_t i = sets.size();
      while (i-- > 0) {
        if (++pick[i] < sets[i]->size()) break;
        pick[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    return out;
  }

  const OrderingContext& ctx_;
  const DacConfig& config_;
  std::deque<CandidateSet> sets_;
  std::unordered_map<MemoKey, const CandidateSet*, MemoHash> memo_;
};

}  // namespace

CandidateSet candidate_set(const OrderingContext& ctx, std::span<const std::uint32_t> subgoals,
                           const VarBits& bound, const DacConfig& config) {
  Dac dac(ctx, config);
  return dac.run({subgoals.begin(), subgoals.end()}, bound);
}

Ordering order_dac(const OrderingContext& ctx, const DacConfig& config) {
  if (ctx.size() == 0) return {};
  std::vector<std::uint32_t> all(ctx.size());
  std::iota(all.begin(), all.end(), 0u);
  Dac dac(ctx, config);
  const CandidateSet& root = dac.run(all, ctx.empty_bits());
  if (root.empty()) throw NoValidOrderingError("no ordering satisfies the declared modes");
  const FoldedOrdering* best = nullptr;
  double best_cost = 0.0;
  for (const FoldedOrdering& c : root) {
    const double cost = ctx.sequence_cost({c.literals.data(), c.literals.size()});
    if (!best || definitely_less(cost, best_cost)) {
      best = &c;
      best_cost = cost;
    }
  }
  return {best->unfold(), best_cost};
}

}  // namespace conjorder
