#include "conjorder/engine.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include <boost/container_hash/hash.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace conjorder {

namespace {

// Clause templates: a term is a prefix-encoded run of cells.
enum class TK : std::uint8_t { Var, Con, Fun };
struct TCell {
  TK kind;
  std::uint32_t a;  // var index or symbol id
  std::uint32_t b;  // arity for Fun
};

struct CLit {
  std::int32_t pred;
  std::uint32_t arity;
  std::uint32_t code;  // first argument cell
};

struct CClause {
  std::uint32_t nvars = 0;
  std::uint32_t head_code = 0;
  std::uint32_t head_arity = 0;
  std::vector<CLit> body;
};

// Runtime heap cells.
enum class CT : std::uint8_t { Ref, Con, Str, Fun };
struct Cell {
  CT tag;
  std::uint32_t a;  // Ref: target, Con: symbol, Str: Fun index, Fun: symbol
  std::uint32_t b;  // Fun: arity
};

constexpr std::uint32_t kUnset = 0xffffffffu;

}  // namespace

struct Engine::Compiled {
  std::vector<TCell> code;
  std::vector<CClause> clauses;
  std::unordered_map<PredicateKey, std::int32_t> pred_index;
  std::vector<PredicateKey> preds;
  std::vector<std::vector<std::uint32_t>> pred_clauses;

  std::int32_t pred_of(const PredicateKey& k) {
    auto [it, fresh] = pred_index.try_emplace(k, static_cast<std::int32_t>(preds.size()));
    if (fresh) {
      preds.push_back(k);
      pred_clauses.emplace_back();
    }
    return it->second;
  }

  static void emit(const Term& t, std::unordered_map<VarId, std::uint32_t>& vars,
                   std::vector<TCell>& out) {
    switch (t.kind()) {
      case TermKind::Variable: {
        auto [it, fresh] = vars.try_emplace(t.var_id(), static_cast<std::uint32_t>(vars.size()));
        out.push_back({TK::Var, it->second, 0});
        return;
      }
      case TermKind::Constant: out.push_back({TK::Con, t.name().id(), 0}); return;
      case TermKind::Compound:
        out.push_back({TK::Fun, t.name().id(), static_cast<std::uint32_t>(t.args().size())});
        for (const Term& a : t.args()) emit(a, vars, out);
        return;
    }
  }

  CLit emit_literal(const Literal& l, std::unordered_map<VarId, std::uint32_t>& vars,
                    std::vector<TCell>& out) {
    CLit c{pred_of(l.key()), static_cast<std::uint32_t>(l.args.size()),
           static_cast<std::uint32_t>(out.size())};
    for (const Term& a : l.args) emit(a, vars, out);
    return c;
  }
};

Engine::Engine(const Program& program) : compiled_(std::make_unique<Compiled>()) {
  Compiled& c = *compiled_;
  for (const Clause& cl : program.clauses()) {
    std::unordered_map<VarId, std::uint32_t> vars;
    CClause cc;
    const CLit head = c.emit_literal(cl.head, vars, c.code);
    cc.head_code = head.code;
    cc.head_arity = head.arity;
    for (const Literal& l : cl.body) cc.body.push_back(c.emit_literal(l, vars, c.code));
    cc.nvars = static_cast<std::uint32_t>(vars.size());
    c.pred_clauses[head.pred].push_back(static_cast<std::uint32_t>(c.clauses.size()));
    c.clauses.push_back(std::move(cc));
  }
}

Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

namespace {

struct GoalNode {
  std::int32_t pred;
  std::uint32_t args;
  std::uint32_t arity;
  std::int32_t next;
  std::int32_t frame;  // literal: enclosing frame; marker: frame being exited
  bool marker;
};

struct ChoicePoint {
  std::int32_t node;
  std::uint32_t next_clause;
  std::size_t trail;
  std::size_t heap;
  std::size_t goals;
  std::int32_t frame;
};

struct Frame {
  std::int32_t parent;
  std::uint64_t own = 0;
  std::uint64_t nsols = 0;
  BindingPattern pattern;
  std::size_t call = 0;
};

struct BodyItem {
  std::int32_t pred;
  std::uint32_t args;
  std::uint32_t arity;
};

using Clock = std::chrono::steady_clock;

class Runner {
 public:
  Runner(const std::vector<TCell>& code, const std::vector<CClause>& clauses,
         const std::vector<PredicateKey>& preds,
         const std::vector<std::vector<std::uint32_t>>& pred_clauses, const SolveOptions& options)
      : code_(&code),
        clauses_(clauses),
        preds_(preds),
        pred_clauses_(pred_clauses),
        options_(options),
        learning_(options.samples != nullptr) {
    if (const auto* r = std::get_if<RandomOrder>(&options.strategy)) rng_.seed(r->seed);
    if (const auto* s = std::get_if<SemiDynamic>(&options.strategy)) {
      if (!s->oracle) throw std::invalid_argument("semi-dynamic strategy needs a control oracle");
      semi_ = s;
    }
  }

  void run(const std::vector<TCell>& query_code, std::span<const CLit> query, std::uint32_t nvars,
           std::size_t nqvars, SolveResult& result) {
    const auto start = Clock::now();
    vars_.assign(nvars, kUnset);
    code_ = &query_code;
    std::vector<BodyItem> items;
    for (const CLit& l : query) items.push_back(instantiate(l));
    code_ = &code_default();
    qslots_.assign(vars_.begin(), vars_.begin() + static_cast<std::ptrdiff_t>(nqvars));
    resolvent_ = link(items, -1, -1);

    for (;;) {
      if (exhausted_) break;
      if (resolvent_ < 0) {
        on_solution(result);
        if (!backtrack()) break;
        continue;
      }
      const GoalNode n = goals_[resolvent_];
      if (n.marker) {
        ++frames_[n.frame].nsols;
        resolvent_ = n.next;
        continue;
      }
      const std::int32_t frame = learning_ ? new_frame(n) : -1;
      if (!resume(resolvent_, 0, frame) && !backtrack()) break;
    }

    result.status = exhausted_ ? SolveStatus::ResourceExhausted : SolveStatus::Success;
    metrics_.inference_time =
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start) -
        metrics_.ordering_time;
    result.metrics = metrics_;
    if (learning_) emit_samples(*options_.samples);
  }

 private:
  const std::vector<TCell>& code_default() const { return *default_code_; }

 public:
  void set_default_code(const std::vector<TCell>& c) { default_code_ = &c; }

 private:
  std::uint32_t deref(std::uint32_t i) const {
    while (heap_[i].tag == CT::Ref && heap_[i].a != i) i = heap_[i].a;
    return i;
  }

  Cell value_of(std::uint32_t d) const {
    const Cell& c = heap_[d];
    if (c.tag == CT::Ref) return {CT::Ref, d, 0};
    return c;
  }

  void bind(std::uint32_t var, Cell value) {
    trail_.push_back(var);
    heap_[var] = value;
  }

  bool unify_heap(std::uint32_t x, std::uint32_t y) {
    pairs_.clear();
    pairs_.emplace_back(x, y);
    while (!pairs_.empty()) {
      auto [a, b] = pairs_.back();
      pairs_.pop_back();
      a = deref(a);
      b = deref(b);
      if (a == b) continue;
      const Cell ca = heap_[a], cb = heap_[b];
      if (ca.tag == CT::Ref && cb.tag == CT::Ref) {
        if (a < b) std::swap(a, b);
        bind(a, {CT::Ref, b, 0});
      } else if (ca.tag == CT::Ref) {
        bind(a, cb);
      } else if (cb.tag == CT::Ref) {
        bind(b, ca);
      } else if (ca.tag == CT::Con || cb.tag == CT::Con) {
        if (ca.tag != cb.tag || ca.a != cb.a) return false;
      } else {
        const Cell fa = heap_[ca.a], fb = heap_[cb.a];
        if (fa.a != fb.a || fa.b != fb.b) return false;
        if (ca.a == cb.a) continue;
        for (std::uint32_t i = 0; i < fa.b; ++i) pairs_.emplace_back(ca.a + 1 + i, cb.a + 1 + i);
      }
    }
    return true;
  }

  // Writes the template term at pc into heap slot `slot`.
  void build_into(std::uint32_t& pc, std::uint32_t slot) {
    const TCell t = (*code_)[pc++];
    switch (t.kind) {
      case TK::Var:
        if (vars_[t.a] == kUnset) {
          heap_[slot] = {CT::Ref, slot, 0};
          vars_[t.a] = slot;
        } else {
          heap_[slot] = value_of(deref(vars_[t.a]));
        }
        return;
      case TK::Con: heap_[slot] = {CT::Con, t.a, 0}; return;
      case TK::Fun: {
        const auto f = static_cast<std::uint32_t>(heap_.size());
        heap_.push_back({CT::Fun, t.a, t.b});
        const auto base = static_cast<std::uint32_t>(heap_.size());
        heap_.resize(base + t.b);
        for (std::uint32_t i = 0; i < t.b; ++i) build_into(pc, base + i);
        heap_[slot] = {CT::Str, f, 0};
        return;
      }
    }
  }

  bool unify_template(std::uint32_t& pc, std::uint32_t addr) {
    const TCell t = (*code_)[pc];
    switch (t.kind) {
      case TK::Var:
        ++pc;
        if (vars_[t.a] == kUnset) {
          vars_[t.a] = addr;
          return true;
        }
        return unify_heap(vars_[t.a], addr);
      case TK::Con: {
        ++pc;
        const std::uint32_t d = deref(addr);
        const Cell c = heap_[d];
        if (c.tag == CT::Ref) {
          bind(d, {CT::Con, t.a, 0});
          return true;
        }
        return c.tag == CT::Con && c.a == t.a;
      }
      case TK::Fun: {
        const std::uint32_t d = deref(addr);
        const Cell c = heap_[d];
        if (c.tag == CT::Ref) {
          const auto slot = static_cast<std::uint32_t>(heap_.size());
          heap_.push_back({CT::Ref, slot, 0});
          build_into(pc, slot);
          bind(d, heap_[slot]);
          return true;
        }
        ++pc;
        if (c.tag != CT::Str) return false;
        const Cell f = heap_[c.a];
        if (f.a != t.a || f.b != t.b) return false;
        for (std::uint32_t i = 0; i < t.b; ++i)
          if (!unify_template(pc, c.a + 1 + i)) return false;
        return true;
      }
    }
    return false;
  }

  BodyItem instantiate(const CLit& l) {
    const auto base = static_cast<std::uint32_t>(heap_.size());
    heap_.resize(base + l.arity);
    std::uint32_t pc = l.code;
    for (std::uint32_t i = 0; i < l.arity; ++i) build_into(pc, base + i);
    return {l.pred, base, l.arity};
  }

  void undo(std::size_t trail, std::size_t heap) {
    while (trail_.size() > trail) {
      const std::uint32_t v = trail_.back();
      trail_.pop_back();
      heap_[v] = {CT::Ref, v, 0};
    }
    heap_.resize(heap);
  }

  bool over_depth() const {
    const auto& d = options_.limits.max_depth;
    return d && (cps_.size() > *d || goals_.size() > *d);
  }

  bool resume(std::int32_t node, std::uint32_t k, std::int32_t frame) {
    current_frame_ = frame;
    const GoalNode n = goals_[node];
    const auto& cands = pred_clauses_[n.pred];
    for (; k < cands.size(); ++k) {
      if (options_.limits.max_unifications &&
          metrics_.unifications >= *options_.limits.max_unifications) {
        exhausted_ = true;
        return false;
      }
      ++metrics_.unifications;
      if (frame >= 0) ++frames_[frame].own;
      const CClause& c = clauses_[cands[k]];
      const std::size_t tmark = trail_.size(), hmark = heap_.size(), gmark = goals_.size();
      vars_.assign(c.nvars, kUnset);
      std::uint32_t pc = c.head_code;
      bool ok = true;
      for (std::uint32_t i = 0; ok && i < c.head_arity; ++i) ok = unify_template(pc, n.args + i);
      if (!ok) {
        undo(tmark, hmark);
        continue;
      }
      if (k + 1 < cands.size()) {
        cps_.push_back({node, k + 1, tmark, hmark, gmark, frame});
      }
      ++metrics_.reductions;
      std::int32_t tail = n.next;
      if (learning_) tail = push_goal({-1, 0, 0, n.next, frame, true});
      body_.clear();
      for (const CLit& l : c.body) body_.push_back(instantiate(l));
      resolvent_ = link(body_, tail, frame);
      if (over_depth()) {
        exhausted_ = depth_cut_ = true;
        return false;
      }
      return true;
    }
    return false;
  }

  bool backtrack() {
    while (!cps_.empty() && !exhausted_) {
      const ChoicePoint cp = cps_.back();
      cps_.pop_back();
      undo(cp.trail, cp.heap);
      goals_.resize(cp.goals);
      if (resume(cp.node, cp.next_clause, cp.frame)) return true;
    }
    return false;
  }

  std::int32_t push_goal(const GoalNode& g) {
    goals_.push_back(g);
    return static_cast<std::int32_t>(goals_.size() - 1);
  }

  // Orders the instantiated conjunction and prepends it to `tail`.
  std::int32_t link(std::vector<BodyItem>& items, std::int32_t tail, std::int32_t frame) {
    if (items.size() >= 2) reorder(items);
    for (std::size_t j = items.size(); j-- > 0;)
      tail = push_goal({items[j].pred, items[j].args, items[j].arity, tail, frame, false});
    return tail;
  }

  void reorder(std::vector<BodyItem>& items) {
    if (std::holds_alternative<RandomOrder>(options_.strategy)) {
      for (std::size_t i = items.size(); i > 1; --i) {
        boost::random::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(items[i - 1], items[pick(rng_)]);
      }
      return;
    }
    if (!semi_) return;
    shape_.clear();
    local_vars_.clear();
    for (const BodyItem& it : items) {
      shape_.add_literal(preds_[it.pred]);
      for (std::uint32_t i = 0; i < it.arity; ++i) collect_vars(it.args + i, i);
    }
    const auto t0 = Clock::now();
    OrderingContext ctx(shape_, *semi_->oracle);
    const Ordering o = order_with(semi_->method, ctx, semi_->options);
    metrics_.ordering_time += std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0);
    ++metrics_.orderings;
    reordered_.clear();
    for (std::uint32_t i : o.order) reordered_.push_back(items[i]);
    items.swap(reordered_);
  }

  void collect_vars(std::uint32_t addr, std::uint32_t arg) {
    const std::uint32_t d = deref(addr);
    const Cell c = heap_[d];
    if (c.tag == CT::Ref) {
      std::uint32_t id = 0;
      while (id < local_vars_.size() && local_vars_[id] != d) ++id;
      if (id == local_vars_.size()) local_vars_.push_back(d);
      shape_.add_occurrence(arg, id);
    } else if (c.tag == CT::Str) {
      const Cell f = heap_[c.a];
      for (std::uint32_t i = 0; i < f.b; ++i) collect_vars(c.a + 1 + i, arg);
    }
  }

  bool ground(std::uint32_t addr) const {
    const std::uint32_t d = deref(addr);
    const Cell c = heap_[d];
    if (c.tag == CT::Ref) return false;
    if (c.tag == CT::Con) return true;
    const Cell f = heap_[c.a];
    for (std::uint32_t i = 0; i < f.b; ++i)
      if (!ground(c.a + 1 + i)) return false;
    return true;
  }

  std::int32_t new_frame(const GoalNode& n) {
    const PredicateKey& key = preds_[n.pred];
    BindingPattern p{key.name, key.arity, 0};
    for (std::uint32_t i = 0; i < n.arity && i < kMaxPatternArity; ++i)
      if (ground(n.args + i)) p.bound_mask |= std::uint64_t{1} << i;
    std::size_t call = n.pred;
    call_vars_.clear();
    for (std::uint32_t i = 0; i < n.arity; ++i) fingerprint(n.args + i, call);
    frames_.push_back({n.frame, 0, 0, p, call});
    return static_cast<std::int32_t>(frames_.size() - 1);
  }

  // Hashes the instantiated call; variables hash by order of first occurrence.
  void fingerprint(std::uint32_t addr, std::size_t& h) {
    const std::uint32_t d = deref(addr);
    const Cell c = heap_[d];
    boost::hash_combine(h, static_cast<int>(c.tag));
    if (c.tag == CT::Ref) {
      const auto it = std::find(call_vars_.begin(), call_vars_.end(), d);
      boost::hash_combine(h, it - call_vars_.begin());
      if (it == call_vars_.end()) call_vars_.push_back(d);
    } else if (c.tag == CT::Con) {
      boost::hash_combine(h, c.a);
    } else {
      const Cell f = heap_[c.a];
      boost::hash_combine(h, f.a);
      boost::hash_combine(h, f.b);
      for (std::uint32_t i = 0; i < f.b; ++i) fingerprint(c.a + 1 + i, h);
    }
  }

  Term term_of(std::uint32_t addr, std::unordered_map<std::uint32_t, std::uint32_t>& names) const {
    const std::uint32_t d = deref(addr);
    const Cell c = heap_[d];
    switch (c.tag) {
      case CT::Ref: {
        auto [it, fresh] = names.try_emplace(d, static_cast<std::uint32_t>(names.size()));
        return Term::variable(Symbol::intern("_G" + std::to_string(it->second)));
      }
      case CT::Con: return Term::constant(Symbol::from_id(c.a));
      default: {
        const Cell f = heap_[c.a];
        std::vector<Term> args;
        args.reserve(f.b);
        for (std::uint32_t i = 0; i < f.b; ++i) args.push_back(term_of(c.a + 1 + i, names));
        return Term::compound(Symbol::from_id(f.a), std::move(args));
      }
    }
  }

  void on_solution(SolveResult& result) {
    ++result.solution_count;
    if (!options_.collect_answers) return;
    std::unordered_map<std::uint32_t, std::uint32_t> names;
    Answer a;
    a.reserve(qslots_.size());
    for (std::uint32_t s : qslots_) a.push_back(term_of(s, names));
    result.answers.push_back(std::move(a));
  }

  void emit_samples(std::vector<LiteralSample>& out) {
    std::vector<bool> open(frames_.size(), false);
    if (exhausted_) {
      auto mark = [&](std::int32_t f) {
        for (; f >= 0 && !open[f]; f = frames_[f].parent) open[f] = true;
      };
      for (const ChoicePoint& cp : cps_) mark(cp.frame);
      mark(current_frame_);
      for (std::int32_t g = resolvent_; g >= 0 && g < static_cast<std::int32_t>(goals_.size());
           g = goals_[g].next)
        mark(goals_[g].frame);
    }
    std::vector<std::uint64_t> total(frames_.size());
    for (std::size_t f = frames_.size(); f-- > 0;) {
      total[f] += frames_[f].own;
      if (frames_[f].parent >= 0) total[frames_[f].parent] += total[f];
    }
    // After a unification cutoff, an interrupted literal is charged with the
    // exhaustion only if its subtree used at least half of the unifications;
    // other interrupted literals yield no sample.
    auto responsible = [&](std::size_t f) { return depth_cut_ || 2 * total[f] >= metrics_.unifications; };
    for (std::size_t f = 0; f < frames_.size(); ++f) {
      if (open[f] && !responsible(f)) continue;
      LiteralSample s{frames_[f].pattern, 0.0, 0.0, open[f], frames_[f].call};
      if (open[f]) {
        s.cost = options_.penalty_cost;
      } else {
        s.cost = std::max<double>(1.0, static_cast<double>(total[f]));
        s.nsols = static_cast<double>(frames_[f].nsols);
      }
      out.push_back(s);
    }
  }

  const std::vector<TCell>* code_;
  const std::vector<TCell>* default_code_ = nullptr;
  const std::vector<CClause>& clauses_;
  const std::vector<PredicateKey>& preds_;
  const std::vector<std::vector<std::uint32_t>>& pred_clauses_;
  const SolveOptions& options_;
  const bool learning_;
  const SemiDynamic* semi_ = nullptr;
  std::mt19937_64 rng_;

  std::vector<Cell> heap_;
  std::vector<std::uint32_t> trail_;
  std::vector<GoalNode> goals_;
  std::vector<ChoicePoint> cps_;
  std::vector<Frame> frames_;
  std::vector<std::uint32_t> call_vars_;
  std::vector<std::uint32_t> vars_;
  std::vector<std::uint32_t> qslots_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
  std::vector<BodyItem> body_, reordered_;
  std::vector<std::uint32_t> local_vars_;
  ProblemShape shape_;
  std::int32_t resolvent_ = -1;
  std::int32_t current_frame_ = -1;
  bool exhausted_ = false;
  bool depth_cut_ = false;
  ProofMetrics metrics_;
};

}  // namespace

SolveResult Engine::solve(std::span<const Literal> query, const SolveOptions& options) const {
  // The query may mention predicates the program lacks; extend a private copy
  // of the predicate table for them.
  std::vector<PredicateKey> preds = compiled_->preds;
  std::vector<std::vector<std::uint32_t>> pred_clauses = compiled_->pred_clauses;
  std::unordered_map<VarId, std::uint32_t> vars;
  std::vector<TCell> qcode;
  std::vector<CLit> qlits;
  for (const Literal& l : query) {
    std::int32_t pred;
    auto it = compiled_->pred_index.find(l.key());
    if (it != compiled_->pred_index.end()) {
      pred = it->second;
    } else {
      pred = static_cast<std::int32_t>(preds.size());
      preds.push_back(l.key());
      pred_clauses.emplace_back();
    }
    CLit c{pred, static_cast<std::uint32_t>(l.args.size()), static_cast<std::uint32_t>(qcode.size())};
    for (const Term& a : l.args) Compiled::emit(a, vars, qcode);
    qlits.push_back(c);
  }
  SolveResult result;
  result.variables = ordered_variables(query);
  // emit() numbers variables in first-occurrence order, matching ordered_variables.
  Runner r(compiled_->code, compiled_->clauses, preds, pred_clauses, options);
  r.set_default_code(compiled_->code);
  r.run(qcode, qlits, static_cast<std::uint32_t>(vars.size()), result.variables.size(), result);
  return result;
}

SolveResult solve_all(std::span<const Literal> query, const Program& p, const Strategy& strategy,
                      const Limits& limits) {
  Engine e(p);
  SolveOptions o;
  o.strategy = strategy;
  o.limits = limits;
  return e.solve(query, o);
}

CountResult count_solutions(std::span<const Literal> query, const Program& p, const Limits& limits) {
  Engine e(p);
  SolveOptions o;
  o.limits = limits;
  o.collect_answers = false;
  const SolveResult r = e.solve(query, o);
  return {r.status, r.solution_count, r.metrics};
}

std::vector<Answer> canonical_multiset(std::vector<Answer> answers) {
  std::sort(answers.begin(), answers.end());
  return answers;
}

std::string to_string(const Answer& a, std::span<const VarId> vars) {
  std::string out;
  for (std::size_t i = 0; i < a.size() && i < vars.size(); ++i) {
    if (i) out += ", ";
    out += vars[i].name.str() + " = " + to_string(a[i]);
  }
  return out.empty() ? "true" : out;
}

}  // namespace conjorder
