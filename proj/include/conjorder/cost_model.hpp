#pragma once

#include <span>
#include <stdexcept>

namespace conjorder {

// Average cost (head unification attempts) and average number of solutions.
struct ControlValues {
  double cost = 1.0;
  double nsols = 1.0;

  friend bool operator==(const ControlValues&, const ControlValues&) = default;
};

inline constexpr double kRelativeEpsilon = 1e-9;
inline constexpr double kAbsoluteEpsilon = 1e-12;

double tolerance(double a, double b);
bool approx_equal(double a, double b);
// a < b by more than the tolerance.
bool definitely_less(double a, double b);

// (nsols - 1) / cost. Throws std::domain_error when cost is zero.
double cn_of(const ControlValues& v);

// Values of the sequence `first then second`, where `second` was evaluated
// under the binding produced by `first`.
constexpr ControlValues compose(const ControlValues& first, const ControlValues& second) {
  return {first.cost + first.nsols * second.cost, first.nsols * second.nsols};
}

// Cost of a sequence given each position's values under its preceding prefix.
double sequence_cost(std::span<const ControlValues> positional);
ControlValues sequence_values(std::span<const ControlValues> positional);

// cn(left) > cn(right) beyond tolerance; `right` is evaluated under `left`.
bool is_cn_inverted(const ControlValues& left, const ControlValues& right);

}  // namespace conjorder
