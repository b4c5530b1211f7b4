#include <atomic>
#include <cstdio>
#include <exception>
#include <thread>

#include "conjorder/bench.hpp"

namespace conjorder {

std::vector<std::string> parse_method_list(std::string_view csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto end = comma == std::string_view::npos ? csv.size() : comma;
    std::string name(csv.substr(start, end - start));
    if (!name.empty()) {
      if (name != "aswritten") parse_method(name);  // validates
      out.push_back(std::move(name));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty method list");
  return out;
}

namespace {

void accumulate(MethodRow& row, const SolveResult& r) {
  row.unifications += static_cast<double>(r.metrics.unifications);
  row.reductions += static_cast<double>(r.metrics.reductions);
  row.ordering_us += std::chrono::duration<double, std::micro>(r.metrics.ordering_time).count();
  row.inference_us += std::chrono::duration<double, std::micro>(r.metrics.inference_time).count();
  ++row.proofs;
  if (r.status == SolveStatus::ResourceExhausted) ++row.exhausted;
}

void finish(MethodRow& row) {
  if (row.proofs == 0) return;
  const double n = static_cast<double>(row.proofs);
  row.unifications /= n;
  row.reductions /= n;
  row.ordering_us /= n;
  row.inference_us /= n;
  row.total_us = row.ordering_us + row.inference_us;
}

}  // namespace

ExperimentResult run_experiment(const Domain& d, const std::vector<std::string>& methods,
                                const ExperimentOptions& options) {
  if (d.testing.empty()) throw std::invalid_argument("domain has no testing queries");
  ExperimentResult out;
  TrainReport report;
  const ControlCatalog catalog =
      train(d.program, d.training, {options.limits, options.training_budget, 1e9}, &report);
  out.training_samples = report.samples;

  Engine engine(d.program);
  SolveOptions so;
  so.limits = options.limits;
  so.collect_answers = false;
  for (const std::string& name : methods) {
    MethodRow row;
    row.method = name;
    if (name == "random") {
      for (std::uint32_t rep = 0; rep < options.random_repetitions; ++rep) {
        for (std::size_t q = 0; q < d.testing.size(); ++q) {
          so.strategy = RandomOrder{options.random_seed * 1000003u + rep * 7919u + q};
          accumulate(row, engine.solve(d.testing[q], so));
        }
      }
    } else {
      if (name == "aswritten") {
        so.strategy = AsWritten{};
      } else {
        SemiDynamic sd;
        sd.method = parse_method(name);
        sd.oracle = &catalog;
        sd.options.seed = options.random_seed;
        so.strategy = sd;
      }
      for (const auto& q : d.testing) accumulate(row, engine.solve(q, so));
    }
    finish(row);
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::uint64_t domain_seed(std::uint64_t suite_seed, std::size_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = suite_seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<ExperimentResult> run_suite(const SuiteOptions& options) {
  std::vector<ExperimentResult> results(options.domains);
  std::vector<std::exception_ptr> errors(options.domains);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < options.domains;) {
      try {
        DomainSpec spec = options.spec;
        spec.seed = domain_seed(options.seed, i);
        results[i] = run_experiment(generate_domain(spec), options.methods, options.experiment);
        results[i].domain = i;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, options.domains)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::vector<MethodRow> summarize(const std::vector<ExperimentResult>& results) {
  std::vector<MethodRow> out;
  std::vector<std::size_t> counts;
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      std::size_t k = 0;
      while (k < out.size() && out[k].method != row.method) ++k;
      if (k == out.size()) {
        out.push_back(MethodRow{row.method});
        counts.push_back(0);
      }
      out[k].unifications += row.unifications;
      out[k].reductions += row.reductions;
      out[k].ordering_us += row.ordering_us;
      out[k].inference_us += row.inference_us;
      out[k].proofs += row.proofs;
      out[k].exhausted += row.exhausted;
      ++counts[k];
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double n = static_cast<double>(counts[k]);
    out[k].unifications /= n;
    out[k].reductions /= n;
    out[k].ordering_us /= n;
    out[k].inference_us /= n;
    out[k].total_us = out[k].ordering_us + out[k].inference_us;
  }
  return out;
}

std::string to_csv(const std::vector<ExperimentResult>& results, bool deterministic) {
  std::string out = "domain,method,unifications,reductions,ordering_us,inference_us,total_us\n";
  char buf[256];
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      const double o = deterministic ? 0.0 : row.ordering_us;
      const double inf = deterministic ? 0.0 : row.inference_us;
      std::snprintf(buf, sizeof buf, "%zu,%s,%.2f,%.2f,%.3f,%.3f,%.3f\n", r.domain,
                    row.method.c_str(), row.unifications, row.reductions, o, inf, o + inf);
      out += buf;
    }
  }
  return out;
}

}  // namespace conjorder
