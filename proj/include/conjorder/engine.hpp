#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "conjorder/binding_pattern.hpp"
#include "conjorder/orderer.hpp"
#include "conjorder/term.hpp"

namespace conjorder {

struct AsWritten {};
struct RandomOrder {
  std::uint64_t seed = 0;
};
// Orders every instantiated rule body (and the query) at reduction time.
struct SemiDynamic {
  Method method = Method::Dac;
  const ControlOracle* oracle = nullptr;
  OrderOptions options{.lenient_sort = true};
};
using Strategy = std::variant<AsWritten, RandomOrder, SemiDynamic>;

inline constexpr std::uint64_t kDefaultMaxDepth = 1'000'000;

struct Limits {
  std::optional<std::uint64_t> max_unifications;
  // Bounds live choice points and live resolvent cells.
  std::optional<std::uint64_t> max_depth = kDefaultMaxDepth;
};

struct ProofMetrics {
  std::uint64_t unifications = 0;  // attempted clause-head unifications
  std::uint64_t reductions = 0;    // successful ones
  std::uint64_t orderings = 0;     // orderer invocations
  std::chrono::nanoseconds ordering_time{0};
  std::chrono::nanoseconds inference_time{0};

  std::chrono::nanoseconds total_time() const { return ordering_time + inference_time; }
};

enum class SolveStatus { Success, ResourceExhausted };

// Values of the query variables, in order of first occurrence. Unbound
// variables are renamed _G0, _G1, ... by first occurrence within the answer.
using Answer = std::vector<Term>;

struct SolveResult {
  SolveStatus status = SolveStatus::Success;
  std::vector<VarId> variables;
  std::vector<Answer> answers;
  std::uint64_t solution_count = 0;
  ProofMetrics metrics;
};

// Per selected literal: its pattern at selection time, the unification
// attempts of its whole subtree, and its number of solutions.
struct LiteralSample {
  BindingPattern pattern;
  double cost = 0.0;
  double nsols = 0.0;
  bool exhausted = false;
  std::size_t call = 0;  // hash of the instantiated call, up to variable renaming
};

struct SolveOptions {
  Strategy strategy = AsWritten{};
  Limits limits{};
  bool collect_answers = true;
  std::vector<LiteralSample>* samples = nullptr;  // records samples when set
  double penalty_cost = 1e9;                      // for samples cut short by a limit
};

// Compiles a program once; each call to solve() is an independent proof.
class Engine {
 public:
  explicit Engine(const Program& program);
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  SolveResult solve(std::span<const Literal> query, const SolveOptions& options = {}) const;

 private:
  struct Compiled;
  std::unique_ptr<Compiled> compiled_;
};

SolveResult solve_all(std::span<const Literal> query, const Program& p,
                      const Strategy& strategy = AsWritten{}, const Limits& limits = {});

struct CountResult {
  SolveStatus status = SolveStatus::Success;
  std::uint64_t count = 0;
  ProofMetrics metrics;
};
CountResult count_solutions(std::span<const Literal> query, const Program& p,
                            const Limits& limits = {});

// Sorted copy for multiset comparison.
std::vector<Answer> canonical_multiset(std::vector<Answer> answers);
std::string to_string(const Answer& a, std::span<const VarId> vars);

}  // namespace conjorder
