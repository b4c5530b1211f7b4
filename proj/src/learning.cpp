#include "conjorder/learning.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace conjorder {

ControlValues ControlCatalog::values(const BindingPattern& p) const {
  auto it = entries_.find(p);
  if (it == entries_.end() || it->second.n == 0) return defaults_;
  return {it->second.cost, it->second.nsols};
}

void ControlCatalog::record(const BindingPattern& p, double cost, double nsols) {
  Entry& e = entries_[p];
  ++e.n;
  e.cost_sum += cost;
  e.nsols_sum += nsols;
  e.cost = e.cost_sum / static_cast<double>(e.n);
  e.nsols = e.nsols_sum / static_cast<double>(e.n);
}

void ControlCatalog::set(const BindingPattern& p, ControlValues v, std::uint64_t n) {
  const double dn = static_cast<double>(n);
  entries_[p] = {n, v.cost, v.nsols, v.cost * dn, v.nsols * dn};
}

const ControlCatalog::Entry* ControlCatalog::find(const BindingPattern& p) const {
  auto it = entries_.find(p);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string ControlCatalog::to_json() const {
  nlohmann::json j;
  j["defaults"] = {{"cost", defaults_.cost}, {"nsols", defaults_.nsols}};
  j["entries"] = nlohmann::json::object();
  for (const auto& [p, e] : entries_)
    j["entries"][to_string(p)] = {{"n", e.n}, {"cost", e.cost}, {"nsols", e.nsols}};
  return j.dump(2) + "\n";
}

ControlCatalog ControlCatalog::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("catalog is not valid JSON: ") + e.what());
  }
  auto number = [](const nlohmann::json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key) || !obj[key].is_number())
      throw std::invalid_argument("catalog: missing number '" + std::string(key) + "' in " + where);
    return obj[key].get<double>();
  };
  ControlCatalog c;
  if (j.contains("defaults"))
    c.defaults_ = {number(j["defaults"], "cost", "defaults"), number(j["defaults"], "nsols", "defaults")};
  if (j.contains("entries")) {
    if (!j["entries"].is_object()) throw std::invalid_argument("catalog: entries must be an object");
    for (const auto& [key, val] : j["entries"].items()) {
      const BindingPattern p = parse_pattern(key);
      std::uint64_t n = 1;
      if (val.contains("n")) {
        if (!val["n"].is_number_unsigned()) throw std::invalid_argument("catalog: bad n in " + key);
        n = val["n"].get<std::uint64_t>();
      }
      const double cost = number(val, "cost", key), nsols = number(val, "nsols", key);
      if (cost < 0 || nsols < 0) throw std::invalid_argument("catalog: negative value in " + key);
      c.set(p, {cost, nsols}, n);
    }
  }
  return c;
}

void ControlCatalog::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_json();
}

ControlCatalog ControlCatalog::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

ControlValues lookup(const ControlCatalog& c, const Literal& l, const VarSet& bound) {
  return c.values(pattern_of(l, bound));
}

ControlCatalog train(const Program& p, const std::vector<std::vector<Literal>>& queries,
                     const TrainOptions& options, TrainReport* report,
                     std::vector<LiteralSample>* log) {
  if (options.budget == 0) throw std::invalid_argument("training budget must be at least 1");
  ControlCatalog catalog;
  Engine engine(p);
  SolveOptions so;
  so.limits = options.limits;
  so.collect_answers = false;
  so.penalty_cost = options.penalty;
  std::vector<LiteralSample> samples;
  so.samples = &samples;
  TrainReport r;
  std::unordered_set<std::size_t> seen;
  for (const auto& q : queries) {
    if (r.samples >= options.budget) break;
    samples.clear();
    const SolveResult res = engine.solve(q, so);
    ++r.queries_run;
    if (res.status == SolveStatus::ResourceExhausted) ++r.exhausted_queries;
    for (const LiteralSample& s : samples) {
      catalog.record(s.pattern, s.cost, s.nsols);
      if (log) log->push_back(s);
      ++r.recorded;
      r.samples += seen.insert(s.call).second;
      if (r.samples >= options.budget) break;
    }
  }
  if (report) *report = r;
  return catalog;
}

}  // namespace conjorder
