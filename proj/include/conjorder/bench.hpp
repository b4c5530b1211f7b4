#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "conjorder/engine.hpp"
#include "conjorder/learning.hpp"
#include "conjorder/term.hpp"

namespace conjorder {

struct Range {
  std::uint32_t min = 0;
  std::uint32_t max = 0;
};

// Parameters of a random, acyclic domain. The first `fact_predicates`
// predicates are facts only; every other predicate is defined by rules whose
// bodies call lower-numbered predicates.
struct DomainSpec {
  std::uint32_t predicates = 8;
  std::uint32_t fact_predicates = 4;
  Range arity{1, 3};
  Range facts{3, 12};
  Range rules{1, 3};
  Range body_length{2, 6};
  std::uint32_t constants = 5;
  double sharing = 0.4;           // probability an argument reuses a clause variable
  double constant_argument = 0.1;  // probability a rule-body argument is a constant
  double query_bound = 0.5;        // probability a query argument is a constant
  std::uint32_t training_queries = 60;
  std::uint32_t testing_queries = 10;
  std::uint64_t seed = 1;

  std::string to_json() const;
  // Missing keys keep their defaults. Throws std::invalid_argument.
  static DomainSpec from_json(std::string_view text);
};

struct Domain {
  DomainSpec spec;
  Program program;
  std::vector<std::vector<Literal>> training;
  std::vector<std::vector<Literal>> testing;
};

// Throws std::invalid_argument for infeasible specs.
Domain generate_domain(const DomainSpec& spec);

struct ExperimentOptions {
  Limits limits{std::uint64_t{2'000'000}, kDefaultMaxDepth};
  std::size_t training_budget = 600;
  std::uint32_t random_repetitions = 20;
  std::uint64_t random_seed = 1;
};

// Mean per testing query.
struct MethodRow {
  std::string method;
  double unifications = 0.0;
  double reductions = 0.0;
  double ordering_us = 0.0;
  double inference_us = 0.0;
  double total_us = 0.0;
  std::size_t proofs = 0;
  std::size_t exhausted = 0;

  double ordering_us_per_reduction() const { return reductions > 0 ? ordering_us / reductions : 0.0; }
};

struct ExperimentResult {
  std::size_t domain = 0;
  std::vector<MethodRow> rows;
  std::size_t training_samples = 0;
};

// Method names: `aswritten`, `random` (random body order, averaged over
// repetitions) and every orderer name, run semi-dynamically.
std::vector<std::string> parse_method_list(std::string_view csv);
ExperimentResult run_experiment(const Domain& d, const std::vector<std::string>& methods,
                                const ExperimentOptions& options = {});

struct SuiteOptions {
  std::size_t domains = 20;
  std::uint64_t seed = 1;
  DomainSpec spec{};
  std::vector<std::string> methods{"random", "dac"};
  ExperimentOptions experiment{};
  unsigned jobs = 0;  // 0: hardware concurrency
};

// Domain i uses spec.seed derived from (seed, i). Results are in domain order.
std::vector<ExperimentResult> run_suite(const SuiteOptions& options);
std::uint64_t domain_seed(std::uint64_t suite_seed, std::size_t index);

// Per-method means over all domains, in first-appearance order.
std::vector<MethodRow> summarize(const std::vector<ExperimentResult>& results);

// Header `domain,method,unifications,reductions,ordering_us,inference_us,total_us`.
// With `deterministic`, the time columns are written as 0.
std::string to_csv(const std::vector<ExperimentResult>& results, bool deterministic = false);

}  // namespace conjorder
