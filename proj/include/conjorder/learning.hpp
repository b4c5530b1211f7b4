#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "conjorder/binding_pattern.hpp"
#include "conjorder/engine.hpp"

namespace conjorder {

// Per-pattern running means of cost and number of solutions. Misses fall back
// to the defaults.
class ControlCatalog final : public ControlOracle {
 public:
  struct Entry {
    std::uint64_t n = 0;
    double cost = 0.0;   // mean
    double nsols = 0.0;  // mean
    double cost_sum = 0.0;
    double nsols_sum = 0.0;
  };

  explicit ControlCatalog(ControlValues defaults = {1.0, 1.0}) : defaults_(defaults) {}

  ControlValues values(const BindingPattern& p) const override;
  using ControlOracle::values;

  void record(const BindingPattern& p, double cost, double nsols);
  // Sets an entry directly (hand-written catalogs).
  void set(const BindingPattern& p, ControlValues v, std::uint64_t n = 1);

  const ControlValues& defaults() const { return defaults_; }
  void set_defaults(ControlValues v) { defaults_ = v; }
  const Entry* find(const BindingPattern& p) const;
  const std::unordered_map<BindingPattern, Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Stable key order, two-space indentation.
  std::string to_json() const;
  // Throws std::invalid_argument on schema errors.
  static ControlCatalog from_json(std::string_view text);
  void save(const std::string& path) const;
  static ControlCatalog load(const std::string& path);

 private:
  ControlValues defaults_;
  std::unordered_map<BindingPattern, Entry> entries_;
};

ControlValues lookup(const ControlCatalog& c, const Literal& l, const VarSet& bound);

struct TrainOptions {
  Limits limits{};
  std::size_t budget = 600;
  double penalty = 1e9;
};

struct TrainReport {
  std::size_t samples = 0;   // distinct calls
  std::size_t recorded = 0;  // all samples folded into the catalog
  std::size_t queries_run = 0;
  std::size_t exhausted_queries = 0;
};

// Proves the queries as written and records one sample per selected literal
// until `budget` distinct calls are collected. Repeated calls still update
// the means but do not count against the budget.
ControlCatalog train(const Program& p, const std::vector<std::vector<Literal>>& queries,
                     const TrainOptions& options = {}, TrainReport* report = nullptr,
                     std::vector<LiteralSample>* log = nullptr);

}  // namespace conjorder
