#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "conjorder/symbol.hpp"

namespace conjorder {

enum class TermKind : std::uint8_t { Variable, Constant, Compound };

// A variable is identified by its source name and the renaming generation
// that produced it. Parsed clauses use generation 0.
struct VarId {
  Symbol name;
  std::uint32_t generation = 0;

  friend bool operator==(const VarId&, const VarId&) = default;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

}  // namespace conjorder

template <>
struct std::hash<conjorder::VarId> {
  std::size_t operator()(const conjorder::VarId& v) const noexcept {
    return (static_cast<std::size_t>(v.generation) << 32) ^ v.name.id();
  }
};

namespace conjorder {

// Immutable, structurally shared term.
class Term {
 public:
  static Term variable(Symbol name, std::uint32_t generation = 0);
  static Term variable(VarId id) { return variable(id.name, id.generation); }
  static Term constant(Symbol name);
  static Term compound(Symbol functor, std::vector<Term> args);

  TermKind kind() const { return node_->kind; }
  bool is_variable() const { return node_->kind == TermKind::Variable; }
  bool is_constant() const { return node_->kind == TermKind::Constant; }
  bool is_compound() const { return node_->kind == TermKind::Compound; }
  Symbol name() const { return node_->name; }
  std::uint32_t generation() const { return node_->generation; }
  VarId var_id() const { return {node_->name, node_->generation}; }
  std::span<const Term> args() const { return node_->args; }
  bool is_ground() const { return node_->ground; }

  friend bool operator==(const Term& a, const Term& b);
  // Total order used for canonical sorting of answers.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    TermKind kind;
    Symbol name;
    std::uint32_t generation = 0;
    bool ground = true;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct PredicateKey {
  Symbol name;
  std::uint32_t arity = 0;

  friend bool operator==(const PredicateKey&, const PredicateKey&) = default;
  friend auto operator<=>(const PredicateKey&, const PredicateKey&) = default;
};

struct Literal {
  Symbol predicate;
  std::vector<Term> args;

  PredicateKey key() const { return {predicate, static_cast<std::uint32_t>(args.size())}; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Clause {
  Literal head;
  std::vector<Literal> body;

  bool is_fact() const { return body.empty(); }
  friend bool operator==(const Clause&, const Clause&) = default;
};

}  // namespace conjorder

template <>
struct std::hash<conjorder::PredicateKey> {
  std::size_t operator()(const conjorder::PredicateKey& k) const noexcept {
    return (static_cast<std::size_t>(k.arity) << 32) ^ k.name.id();
  }
};

namespace conjorder {

class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Clause> clauses);

  void add(Clause c);
  const std::vector<Clause>& clauses() const { return clauses_; }
  // Positions of the clauses defining `key`, in source order. Empty if undefined.
  std::span<const std::size_t> positions(const PredicateKey& key) const;
  std::vector<PredicateKey> predicates() const;  // in order of first definition

  friend bool operator==(const Program& a, const Program& b) { return a.clauses_ == b.clauses_; }

 private:
  std::vector<Clause> clauses_;
  std::unordered_map<PredicateKey, std::vector<std::size_t>> index_;
};

using VarSet = std::unordered_set<VarId>;

class Substitution {
 public:
  const Term* lookup(const VarId& v) const;
  // Precondition: v is unbound and t is not v itself.
  void bind(const VarId& v, Term t);
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const std::unordered_map<VarId, Term>& bindings() const { return bindings_; }

 private:
  std::unordered_map<VarId, Term> bindings_;
};

// Follows variable bindings until an unbound variable or non-variable.
Term walk(const Term& t, const Substitution& s);

// Most general unifier extending s, no occurs check. Throws std::runtime_error
// if it loops through a cyclic binding.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s);
std::optional<Substitution> unify(const Literal& a, const Literal& b, const Substitution& s);

// Throws std::runtime_error if the substitution is cyclic (possible without occurs check).
Term apply(const Substitution& s, const Term& t);
Literal apply(const Substitution& s, const Literal& l);

void collect_variables(const Term& t, VarSet& out);
VarSet variables_of(const Term& t);
VarSet variables_of(const Literal& l);
// Variables in order of first occurrence, without duplicates.
std::vector<VarId> ordered_variables(std::span<const Literal> ls);

Term rename(const Term& t, std::uint32_t generation);
Literal rename(const Literal& l, std::uint32_t generation);
Clause rename_apart(const Clause& c, std::uint32_t generation);

std::string to_string(const Term& t);
std::string to_string(const Literal& l);
std::string to_string(const Clause& c);
std::string to_string(const Program& p);
std::string to_string(std::span<const Literal> goal, std::string_view sep = ", ");
std::string to_string(const PredicateKey& k);

std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Literal& l);

}  // namespace conjorder
