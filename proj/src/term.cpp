#include "conjorder/term.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace conjorder {

Term Term::variable(Symbol name, std::uint32_t generation) {
  return Term(std::make_shared<const Node>(Node{TermKind::Variable, name, generation, false, {}}));
}

Term Term::constant(Symbol name) {
  return Term(std::make_shared<const Node>(Node{TermKind::Constant, name, 0, true, {}}));
}

Term Term::compound(Symbol functor, std::vector<Term> args) {
  if (args.empty()) throw std::invalid_argument("compound term needs at least one argument");
  bool ground = true;
  for (const Term& a : args) ground = ground && a.is_ground();
  return Term(std::make_shared<const Node>(
      Node{TermKind::Compound, functor, 0, ground, std::move(args)}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.generation() != b.generation()) return false;
  auto xs = a.args(), ys = b.args();
  if (xs.size() != ys.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] == ys[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (a.name() != b.name()) return a.name().str() <=> b.name().str();
  if (auto c = a.generation() <=> b.generation(); c != 0) return c;
  auto xs = a.args(), ys = b.args();
  if (auto c = xs.size() <=> ys.size(); c != 0) return c;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (auto c = xs[i] <=> ys[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Program::Program(std::vector<Clause> clauses) {
  for (Clause& c : clauses) add(std::move(c));
}

void Program::add(Clause c) {
  index_[c.head.key()].push_back(clauses_.size());
  clauses_.push_back(std::move(c));
}

std::span<const std::size_t> Program::positions(const PredicateKey& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return {};
  return it->second;
}

std::vector<PredicateKey> Program::predicates() const {
  std::vector<PredicateKey> out;
  std::unordered_set<PredicateKey> seen;
  for (const Clause& c : clauses_)
    if (seen.insert(c.head.key()).second) out.push_back(c.head.key());
  return out;
}

const Term* Substitution::lookup(const VarId& v) const {
  auto it = bindings_.find(v);
  return it == bindings_.end() ? nullptr : &it->second;
}

void Substitution::bind(const VarId& v, Term t) { bindings_.insert_or_assign(v, std::move(t)); }

Term walk(const Term& t, const Substitution& s) {
  Term cur = t;
  while (cur.is_variable()) {
    const Term* next = s.lookup(cur.var_id());
    if (!next) break;
    cur = *next;
  }
  return cur;
}

namespace {

constexpr std::size_t kMaxUnifySteps = std::size_t{1} << 22;

bool unify_into(const Term& a, const Term& b, Substitution& s) {
  std::vector<std::pair<Term, Term>> stack{{a, b}};
  for (std::size_t steps = 0; !stack.empty(); ++steps) {
    if (steps > kMaxUnifySteps) throw std::runtime_error("unification through a cyclic binding");
    auto [x, y] = std::move(stack.back());
    stack.pop_back();
    x = walk(x, s);
    y = walk(y, s);
    if (x.is_variable() && y.is_variable() && x.var_id() == y.var_id()) continue;
    if (x.is_variable()) {
      s.bind(x.var_id(), y);
      continue;
    }
    if (y.is_variable()) {
      s.bind(y.var_id(), x);
      continue;
    }
    if (x.kind() != y.kind() || x.name() != y.name()) return false;
    if (x.is_compound() && !(x == y)) {
      auto xs = x.args(), ys = y.args();
      if (xs.size() != ys.size()) return false;
      for (std::size_t i = xs.size(); i-- > 0;) stack.emplace_back(xs[i], ys[i]);
    }
  }
  return true;
}

constexpr int kMaxApplyDepth = 10000;

Term apply_rec(const Substitution& s, const Term& t, int depth) {
  if (depth > kMaxApplyDepth) throw std::runtime_error("cyclic substitution");
  if (t.is_ground()) return t;
  Term w = walk(t, s);
  if (w.is_variable() || w.is_constant()) return w;
  std::vector<Term> args;
  args.reserve(w.args().size());
  bool changed = false;
  for (const Term& a : w.args()) {
    args.push_back(apply_rec(s, a, depth + 1));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::compound(w.name(), std::move(args)) : w;
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s) {
  Substitution out = s;
  if (!unify_into(a, b, out)) return std::nullopt;
  return out;
}

std::optional<Substitution> unify(const Literal& a, const Literal& b, const Substitution& s) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  Substitution out = s;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!unify_into(a.args[i], b.args[i], out)) return std::nullopt;
  return out;
}

Term apply(const Substitution& s, const Term& t) { return apply_rec(s, t, 0); }

Literal apply(const Substitution& s, const Literal& l) {
  Literal out{l.predicate, {}};
  out.args.reserve(l.args.size());
  for (const Term& a : l.args) out.args.push_back(apply(s, a));
  return out;
}

void collect_variables(const Term& t, VarSet& out) {
  if (t.is_ground()) return;
  if (t.is_variable()) {
    out.insert(t.var_id());
    return;
  }
  for (const Term& a : t.args()) collect_variables(a, out);
}

VarSet variables_of(const Term& t) {
  VarSet out;
  collect_variables(t, out);
  return out;
}

VarSet variables_of(const Literal& l) {
  VarSet out;
  for (const Term& a : l.args) collect_variables(a, out);
  return out;
}

namespace {
void ordered_rec(const Term& t, VarSet& seen, std::vector<VarId>& out) {
  if (t.is_ground()) return;
  if (t.is_variable()) {
    if (seen.insert(t.var_id()).second) out.push_back(t.var_id());
    return;
  }
  for (const Term& a : t.args()) ordered_rec(a, seen, out);
}
}  // namespace

std::vector<VarId> ordered_variables(std::span<const Literal> ls) {
  VarSet seen;
  std::vector<VarId> out;
  for (const Literal& l : ls)
    for (const Term& a : l.args) ordered_rec(a, seen, out);
  return out;
}

Term rename(const Term& t, std::uint32_t generation) {
  if (t.is_ground()) return t;
  if (t.is_variable()) return Term::variable(t.name(), generation);
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(rename(a, generation));
  return Term::compound(t.name(), std::move(args));
}

Literal rename(const Literal& l, std::uint32_t generation) {
  Literal out{l.predicate, {}};
  out.args.reserve(l.args.size());
  for (const Term& a : l.args) out.args.push_back(rename(a, generation));
  return out;
}

Clause rename_apart(const Clause& c, std::uint32_t generation) {
  Clause out{rename(c.head, generation), {}};
  out.body.reserve(c.body.size());
  for (const Literal& l : c.body) out.body.push_back(rename(l, generation));
  return out;
}

namespace {

bool plain_atom(const std::string& s) {
  if (s.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(s[0]))) {
    for (char ch : s)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
  }
  if (!std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (char ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  return true;
}

void write_name(std::ostream& os, Symbol name) {
  const std::string& s = name.str();
  if (plain_atom(s)) {
    os << s;
    return;
  }
  os << '\'';
  for (char ch : s) {
    if (ch == '\'') os << '\'';
    os << ch;
  }
  os << '\'';
}

void write_term(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::Variable:
      os << t.name().str();
      if (t.generation() != 0) os << '#' << t.generation();
      return;
    case TermKind::Constant:
      write_name(os, t.name());
      return;
    case TermKind::Compound: {
      write_name(os, t.name());
      os << '(';
      bool first = true;
      for (const Term& a : t.args()) {
        if (!first) os << ',';
        first = false;
        write_term(os, a);
      }
      os << ')';
      return;
    }
  }
}

void write_literal(std::ostream& os, const Literal& l) {
  write_name(os, l.predicate);
  if (l.args.empty()) return;
  os << '(';
  for (std::size_t i = 0; i < l.args.size(); ++i) {
    if (i) os << ',';
    write_term(os, l.args[i]);
  }
  os << ')';
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  write_term(os, t);
  return os.str();
}

std::string to_string(const Literal& l) {
  std::ostringstream os;
  write_literal(os, l);
  return os.str();
}

std::string to_string(const Clause& c) {
  std::ostringstream os;
  write_literal(os, c.head);
  if (!c.body.empty()) {
    os << " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) os << ", ";
      write_literal(os, c.body[i]);
    }
  }
  os << '.';
  return os.str();
}

std::string to_string(const Program& p) {
  std::string out;
  for (const Clause& c : p.clauses()) {
    out += to_string(c);
    out += '\n';
  }
  return out;
}

std::string to_string(std::span<const Literal> goal, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < goal.size(); ++i) {
    if (i) out += sep;
    out += to_string(goal[i]);
  }
  return out;
}

std::string to_string(const PredicateKey& k) { return k.name.str() + "/" + std::to_string(k.arity); }

std::ostream& operator<<(std::ostream& os, const Term& t) {
  write_term(os, t);
  return os;
}

std::ostream& operator<<(std::ostream& os, const Literal& l) {
  write_literal(os, l);
  return os;
}

}  // namespace conjorder
