#include <algorithm>
#include <map>
#include <set>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "conjorder/bench.hpp"
#include "json.hpp"

namespace conjorder {

std::string DomainSpec::to_json() const {
  nlohmann::json j{
      {"predicates", predicates},
      {"fact_predicates", fact_predicates},
      {"arity", {arity.min, arity.max}},
      {"facts", {facts.min, facts.max}},
      {"rules", {rules.min, rules.max}},
      {"body_length", {body_length.min, body_length.max}},
      {"constants", constants},
      {"sharing", sharing},
      {"constant_argument", constant_argument},
      {"query_bound", query_bound},
      {"training_queries", training_queries},
      {"testing_queries", testing_queries},
      {"seed", seed},
  };
  return j.dump(2) + "\n";
}

DomainSpec DomainSpec::from_json(std::string_view text) {
  DomainSpec s;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    auto range = [&](const char* key, Range& r) {
      if (!j.contains(key)) return;
      const auto& v = j[key];
      if (!v.is_array() || v.size() != 2) throw std::invalid_argument(std::string(key) + " must be [min, max]");
      r = {v[0].get<std::uint32_t>(), v[1].get<std::uint32_t>()};
    };
    auto get = [&](const char* key, auto& out) {
      if (j.contains(key)) out = j[key].get<std::remove_reference_t<decltype(out)>>();
    };
    get("predicates", s.predicates);
    get("fact_predicates", s.fact_predicates);
    range("arity", s.arity);
    range("facts", s.facts);
    range("rules", s.rules);
    range("body_length", s.body_length);
    get("constants", s.constants);
    get("sharing", s.sharing);
    get("constant_argument", s.constant_argument);
    get("query_bound", s.query_bound);
    get("training_queries", s.training_queries);
    get("testing_queries", s.testing_queries);
    get("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("domain spec: ") + e.what());
  }
  return s;
}

namespace {

void validate(const DomainSpec& s) {
  auto bad = [](const std::string& m) { throw std::invalid_argument("infeasible domain spec: " + m); };
  auto check = [&](const Range& r, const char* name) {
    if (r.min > r.max) bad(std::string(name) + " range is empty");
  };
  check(s.arity, "arity");
  check(s.facts, "facts");
  check(s.rules, "rules");
  check(s.body_length, "body_length");
  if (s.predicates == 0) bad("no predicates");
  if (s.fact_predicates == 0 || s.fact_predicates > s.predicates)
    bad("fact_predicates must be in [1, predicates]");
  if (s.arity.max > kMaxPatternArity) bad("arity above 64");
  if (s.constants == 0) bad("empty constant pool");
  if (s.facts.min == 0) bad("fact predicates need at least one fact");
  if (s.predicates > s.fact_predicates && (s.rules.min == 0 || s.body_length.min == 0))
    bad("rule predicates need at least one rule with a nonempty body");
  if (s.testing_queries == 0) bad("no testing queries");
  for (double p : {s.sharing, s.constant_argument, s.query_bound})
    if (!(p >= 0.0 && p <= 1.0)) bad("probabilities must lie in [0, 1]");
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::uint32_t uniform(std::uint32_t lo, std::uint32_t hi) {
    return boost::random::uniform_int_distribution<std::uint32_t>(lo, hi)(rng_);
  }
  std::uint32_t in(const Range& r) { return uniform(r.min, r.max); }
  bool chance(double p) { return boost::random::bernoulli_distribution<double>(p)(rng_); }

 private:
  std::mt19937_64 rng_;
};

// Replaces each body variable that occurs exactly once in the clause by
// another variable of the clause, so no body literal is a pure cross product.
void link_singletons(Clause& c, Gen& g) {
  std::map<Symbol, int> count;
  std::vector<Term> vars;
  auto visit = [&](const Literal& l) {
    for (const Term& t : l.args)
      if (t.is_variable() && count[t.name()]++ == 0) vars.push_back(t);
  };
  visit(c.head);
  for (const Literal& l : c.body) visit(l);
  for (Literal& l : c.body)
    for (Term& t : l.args) {
      if (!t.is_variable() || count[t.name()] != 1) continue;
      std::vector<Term> others;
      for (const Term& v : vars)
        if (v.name() != t.name() && count[v.name()] > 0) others.push_back(v);
      if (others.empty()) continue;
      --count[t.name()];
      t = others[g.uniform(0, static_cast<std::uint32_t>(others.size() - 1))];
      ++count[t.name()];
    }
}

}  // namespace

Domain generate_domain(const DomainSpec& spec) {
  validate(spec);
  Gen g(spec.seed);
  Domain d;
  d.spec = spec;

  std::vector<Symbol> consts;
  for (std::uint32_t k = 0; k < spec.constants; ++k) consts.push_back(Symbol::intern("c" + std::to_string(k)));
  std::vector<PredicateKey> preds;
  for (std::uint32_t i = 0; i < spec.predicates; ++i)
    preds.push_back({Symbol::intern("p" + std::to_string(i)), g.in(spec.arity)});
  auto constant = [&] { return Term::constant(consts[g.uniform(0, spec.constants - 1)]); };

  // Fact tables are sets: the drawn size is capped by the number of distinct tuples.
  for (std::uint32_t i = 0; i < spec.fact_predicates; ++i) {
    double tuples = 1.0;
    for (std::uint32_t a = 0; a < preds[i].arity; ++a) tuples *= spec.constants;
    const auto n = static_cast<std::uint32_t>(std::min<double>(g.in(spec.facts), tuples));
    std::set<std::vector<Term>> rows;
    while (rows.size() < n) {
      Literal head{preds[i].name, {}};
      for (std::uint32_t a = 0; a < preds[i].arity; ++a) head.args.push_back(constant());
      if (rows.insert(head.args).second) d.program.add({std::move(head), {}});
    }
  }

  for (std::uint32_t i = spec.fact_predicates; i < spec.predicates; ++i) {
    const std::uint32_t n = g.in(spec.rules);
    for (std::uint32_t r = 0; r < n; ++r) {
      std::vector<Term> pool;
      Literal head{preds[i].name, {}};
      for (std::uint32_t a = 0; a < preds[i].arity; ++a) {
        head.args.push_back(Term::variable(Symbol::intern("X" + std::to_string(a))));
        pool.push_back(head.args.back());
      }
      std::uint32_t fresh = 0;
      Clause c{std::move(head), {}};
      const std::uint32_t len = g.in(spec.body_length);
      for (std::uint32_t b = 0; b < len; ++b) {
        const PredicateKey& callee = preds[g.uniform(0, i - 1)];
        Literal l{callee.name, {}};
        for (std::uint32_t a = 0; a < callee.arity; ++a) {
          if (g.chance(spec.constant_argument)) {
            l.args.push_back(constant());
          } else if (!pool.empty() && g.chance(spec.sharing)) {
            l.args.push_back(pool[g.uniform(0, static_cast<std::uint32_t>(pool.size() - 1))]);
          } else {
            l.args.push_back(Term::variable(Symbol::intern("V" + std::to_string(fresh++))));
            pool.push_back(l.args.back());
          }
        }
        c.body.push_back(std::move(l));
      }
      link_singletons(c, g);
      d.program.add(std::move(c));
    }
  }

  // Testing queries call rule predicates when there are any; training
  // queries may call any predicate. The two sets never share a query.
  const bool has_rules = spec.predicates > spec.fact_predicates;
  auto make_query = [&](bool rules_only) {
    const std::uint32_t lo = rules_only && has_rules ? spec.fact_predicates : 0;
    const PredicateKey& k = preds[g.uniform(lo, spec.predicates - 1)];
    Literal l{k.name, {}};
    for (std::uint32_t a = 0; a < k.arity; ++a) {
      if (g.chance(spec.query_bound))
        l.args.push_back(constant());
      else
        l.args.push_back(Term::variable(Symbol::intern("Q" + std::to_string(a))));
    }
    return std::vector<Literal>{std::move(l)};
  };
  std::unordered_set<std::string> seen;
  auto fill = [&](std::vector<std::vector<Literal>>& out, std::uint32_t want, bool rules_only) {
    for (std::uint32_t attempt = 0; out.size() < want && attempt < want * 50u; ++attempt) {
      auto q = make_query(rules_only);
      if (seen.insert(to_string(q)).second) out.push_back(std::move(q));
    }
  };
  fill(d.testing, spec.testing_queries, true);
  fill(d.training, spec.training_queries, false);
  if (d.testing.empty()) throw std::invalid_argument("infeasible domain spec: no distinct testing query");
  return d;
}

}  // namespace conjorder
