#include "conjorder/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "conjorder/bench.hpp"
#include "conjorder/learning.hpp"
#include "conjorder/orderer.hpp"
#include "conjorder/parser.hpp"

namespace conjorder {

namespace {

std::string format_cost(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Limits make_limits(std::uint64_t max_depth, std::uint64_t max_unifications) {
  Limits l;
  l.max_depth = max_depth;
  if (max_unifications) l.max_unifications = max_unifications;
  return l;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Conjunctive subgoal ordering and inference"};
  app.require_subcommand(1);

  // order
  auto* order = app.add_subcommand("order", "Order a conjunctive goal");
  std::string o_program, o_catalog, o_goal, o_method = "dac", o_modes;
  std::uint64_t o_seed = 0;
  order->add_option("--program", o_program, "Program file (checked for undefined predicates)");
  order->add_option("--catalog", o_catalog, "Control-value catalog (JSON)");
  order->add_option("--goal", o_goal, "Comma-separated literals")->required();
  std::vector<std::string> method_names;
  for (Method m : all_methods()) method_names.emplace_back(to_string(m));
  order->add_option("--method", o_method, "random|sort|exhaustive|prefix|bestfirst|adjacency|combined|dac")
      ->check(CLI::IsMember(method_names));
  order->add_option("--seed", o_seed, "Seed for the random method");
  order->add_option("--modes", o_modes, "Mode declaration file (dac only)");

  // solve
  auto* solve = app.add_subcommand("solve", "Find all solutions of a goal");
  std::string s_program, s_goal, s_strategy = "aswritten", s_catalog;
  std::uint64_t s_seed = 0, s_depth = kDefaultMaxDepth, s_unif = 0;
  solve->add_option("--program", s_program, "Program file")->required();
  solve->add_option("--goal", s_goal, "Comma-separated literals")->required();
  std::vector<std::string> strategy_names{"aswritten", "random"};
  for (Method m : all_methods())
    if (m != Method::Random) strategy_names.emplace_back(to_string(m));
  solve->add_option("--strategy", s_strategy, "aswritten|random|<orderer method>")
      ->check(CLI::IsMember(strategy_names));
  solve->add_option("--catalog", s_catalog, "Catalog for semi-dynamic ordering");
  solve->add_option("--seed", s_seed, "Seed for the random strategy");
  solve->add_option("--max-depth", s_depth, "Choice point / resolvent limit");
  solve->add_option("--max-unifications", s_unif, "Unification limit (0: none)");

  // train
  auto* trainc = app.add_subcommand("train", "Learn a control-value catalog");
  std::string t_program, t_queries, t_out;
  std::size_t t_budget = 600;
  double t_penalty = 1e9;
  std::uint64_t t_depth = kDefaultMaxDepth, t_unif = 0;
  trainc->add_option("--program", t_program, "Program file")->required();
  trainc->add_option("--queries", t_queries, "Query file, one `?- goal.` per query")->required();
  trainc->add_option("--out", t_out, "Output catalog path (default stdout)");
  trainc->add_option("--budget", t_budget, "Number of distinct calls to sample");
  trainc->add_option("--penalty", t_penalty, "Cost recorded for literals cut short by a limit");
  trainc->add_option("--max-depth", t_depth, "Choice point / resolvent limit");
  trainc->add_option("--max-unifications", t_unif, "Unification limit per query (0: none)");

  // bench
  auto* bench = app.add_subcommand("bench", "Compare orderers on random domains");
  std::size_t b_domains = 20;
  std::uint64_t b_seed = 1;
  std::string b_methods = "random,dac", b_spec, b_out;
  unsigned b_jobs = 0;
  bool b_det = false;
  bench->add_option("--domains", b_domains, "Number of domains");
  bench->add_option("--seed", b_seed, "Suite seed");
  bench->add_option("--methods", b_methods, "Comma-separated methods (aswritten, random, orderers)");
  bench->add_option("--spec", b_spec, "Domain spec JSON");
  bench->add_option("--out", b_out, "CSV output path (default stdout)");
  bench->add_option("--jobs", b_jobs, "Worker threads (0: all cores)");
  bench->add_flag("--deterministic", b_det, "Write zeros in the time columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (order->parsed()) {
      const auto goal = parse_goal(o_goal);
      if (!o_program.empty()) {
        const Program p = parse_program(read_file(o_program));
        for (const Literal& l : goal)
          if (p.positions(l.key()).empty())
            std::cerr << "warning: " << to_string(l.key()) << " is not defined in the program\n";
      }
      const ControlCatalog catalog = o_catalog.empty() ? ControlCatalog{} : ControlCatalog::load(o_catalog);
      OrderOptions opts;
      opts.seed = o_seed;
      ModeTable modes;
      if (!o_modes.empty()) {
        modes = ModeTable::parse(read_file(o_modes));
        opts.dac.modes = &modes;
      }
      const LiteralOrdering r = order_literals(parse_method(o_method), goal, catalog, opts);
      std::cout << to_string(r.literals, ",") << "\ncost=" << format_cost(r.cost) << "\n";
      return 0;
    }
    if (solve->parsed()) {
      const Program p = parse_program(read_file(s_program));
      const auto goal = parse_goal(s_goal);
      ControlCatalog catalog = s_catalog.empty() ? ControlCatalog{} : ControlCatalog::load(s_catalog);
      Strategy strategy = AsWritten{};
      if (s_strategy == "random") {
        strategy = RandomOrder{s_seed};
      } else if (s_strategy != "aswritten") {
        SemiDynamic sd;
        sd.method = parse_method(s_strategy);
        sd.oracle = &catalog;
        sd.options.seed = s_seed;
        strategy = sd;
      }
      const SolveResult r = solve_all(goal, p, strategy, make_limits(s_depth, s_unif));
      for (const Answer& a : r.answers) std::cout << to_string(a, r.variables) << "\n";
      std::cout << "solutions=" << r.solution_count << " unifications=" << r.metrics.unifications
                << " reductions=" << r.metrics.reductions << " status="
                << (r.status == SolveStatus::Success ? "success" : "resource_exhausted") << "\n";
      return 0;
    }
    if (trainc->parsed()) {
      const Program p = parse_program(read_file(t_program));
      const auto queries = parse_queries(read_file(t_queries));
      TrainReport rep;
      const ControlCatalog c =
          train(p, queries, {make_limits(t_depth, t_unif), t_budget, t_penalty}, &rep);
      write_output(t_out, c.to_json());
      std::cerr << "samples=" << rep.samples << " recorded=" << rep.recorded << " queries=" << rep.queries_run
                << " exhausted=" << rep.exhausted_queries << "\n";
      return 0;
    }
    if (bench->parsed()) {
      SuiteOptions so;
      so.domains = b_domains;
      so.seed = b_seed;
      so.methods = parse_method_list(b_methods);
      so.jobs = b_jobs;
      if (!b_spec.empty()) so.spec = DomainSpec::from_json(read_file(b_spec));
      const auto results = run_suite(so);
      write_output(b_out, to_csv(results, b_det));
      for (const MethodRow& m : summarize(results)) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-11s unif=%.2f red=%.2f order_us/red=%.4f total_us=%.1f\n",
                      m.method.c_str(), m.unifications, m.reductions, m.ordering_us_per_reduction(),
                      m.total_us);
        std::cerr << buf;
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace conjorder
