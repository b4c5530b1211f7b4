#pragma once

// Test-only helpers: map-backed catalogs and random ordering instances whose
// control values are consistent (the number of solutions of a set of
// literals does not depend on their order).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "conjorder/binding_pattern.hpp"
#include "conjorder/ordering_context.hpp"
#include "conjorder/parser.hpp"

namespace testsupport {

using namespace conjorder;

// Catalog given as "pred/arity:pattern" -> (cost, nsols).
class MapOracle final : public ControlOracle {
 public:
  MapOracle(std::initializer_list<std::pair<const char*, ControlValues>> entries) {
    for (const auto& [k, v] : entries) map_[parse_pattern(k)] = v;
  }
  using ControlOracle::values;
  ControlValues values(const BindingPattern& p) const override {
    auto it = map_.find(p);
    if (it == map_.end()) throw std::out_of_range("no entry for " + to_string(p));
    return it->second;
  }

 private:
  std::unordered_map<BindingPattern, ControlValues> map_;
};

inline MapOracle three_facts_catalog() {
  return {{"p/0:", {10, 1}}, {"q/0:", {20, 5}}, {"r/0:", {5, 0.1}}};
}

inline MapOracle five_subgoal_catalog() {
  return {{"a/0:", {10, 0.8}}, {"b/0:", {5, 2}},    {"c/1:f", {5, 2}},    {"c/1:b", {5, 0.5}},
          {"d/1:f", {10, 4}},  {"d/1:b", {5, 1}},   {"e/1:f", {20, 0.4}}, {"e/1:b", {10, 0.1}}};
}

// Literal i is q<i>(V..) with one distinct variable per argument. nsols under a
// binding is R_i divided by D_v for every bound argument variable v; cost is an
// arbitrary value in [1,100] per pattern.
class ConsistentOracle final : public ControlOracle {
 public:
  struct Lit {
    std::vector<int> arg_vars;  // -1 for a constant argument
    double r;
    std::vector<double> cost_by_mask;
  };

  ConsistentOracle(std::vector<Lit> lits, std::vector<double> divisors)
      : lits_(std::move(lits)), d_(std::move(divisors)) {}

  using ControlOracle::values;
  ControlValues values(const BindingPattern& p) const override {
    const Lit& l = lits_.at(index_of(p.predicate));
    double nsols = l.r;
    for (std::size_t k = 0; k < l.arg_vars.size(); ++k)
      if (l.arg_vars[k] >= 0 && p.bound(static_cast<std::uint32_t>(k))) nsols /= d_[l.arg_vars[k]];
    return {l.cost_by_mask.at(p.bound_mask), nsols};
  }

  static std::size_t index_of(Symbol s) { return std::stoul(s.str().substr(1)); }

 private:
  std::vector<Lit> lits_;
  std::vector<double> d_;
};

struct Instance {
  std::vector<Literal> literals;
  std::unique_ptr<ConsistentOracle> oracle;
};

// Random dependence graph over n literals: each edge (probability `density`,
// or every edge when `clique`) gets its own shared variable; literals may also
// get a private variable or a constant argument.
inline Instance random_instance(std::mt19937_64& rng, std::size_t n, double density, bool clique) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto real = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  std::vector<std::vector<int>> vars(n);
  int nv = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (clique || unit(rng) < density) {
        vars[i].push_back(nv);
        vars[j].push_back(nv);
        ++nv;
      }
  std::vector<ConsistentOracle::Lit> lits(n);
  Instance inst;
  for (std::size_t i = 0; i < n; ++i) {
    if (unit(rng) < 0.3) vars[i].push_back(nv++);
    if (unit(rng) < 0.2) vars[i].push_back(-1);
    std::shuffle(vars[i].begin(), vars[i].end(), rng);
    Literal l{Symbol::intern("q" + std::to_string(i)), {}};
    for (int v : vars[i])
      l.args.push_back(v < 0 ? Term::constant(Symbol::intern("k"))
                             : Term::variable(Symbol::intern("V" + std::to_string(v))));
    lits[i].arg_vars = vars[i];
    lits[i].r = real(0.1, 5.0);
    lits[i].cost_by_mask.resize(std::size_t{1} << vars[i].size());
    for (double& c : lits[i].cost_by_mask) c = real(1.0, 100.0);
    inst.literals.push_back(std::move(l));
  }
  std::vector<double> d(nv);
  for (double& x : d) x = real(1.0, 4.0);
  inst.oracle = std::make_unique<ConsistentOracle>(std::move(lits), std::move(d));
  return inst;
}

inline std::vector<Literal> goal(const char* text) { return parse_goal(text); }

inline std::vector<std::uint32_t> iota_order(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::uint32_t>(i);
  return v;
}

// Brute-force minimum over all permutations of `subset`, starting from `bound`.
inline double brute_force_min(const OrderingContext& ctx, std::vector<std::uint32_t> subset,
                              const VarBits& bound) {
  std::sort(subset.begin(), subset.end());
  double best = std::numeric_limits<double>::infinity();
  do best = std::min(best, ctx.sequence_cost(subset, bound));
  while (std::next_permutation(subset.begin(), subset.end()));
  return best;
}

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testsupport
