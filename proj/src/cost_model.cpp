#include "conjorder/cost_model.hpp"

#include <algorithm>
#include <cmath>

namespace conjorder {

double tolerance(double a, double b) {
  return std::max(kAbsoluteEpsilon, kRelativeEpsilon * std::max(std::abs(a), std::abs(b)));
}

bool approx_equal(double a, double b) { return std::abs(a - b) <= tolerance(a, b); }

bool definitely_less(double a, double b) { return a < b - tolerance(a, b); }

double cn_of(const ControlValues& v) {
  if (v.cost == 0.0) throw std::domain_error("cn of a zero-cost value");
  return (v.nsols - 1.0) / v.cost;
}

double sequence_cost(std::span<const ControlValues> positional) {
  double total = 0.0, prod = 1.0;
  for (const ControlValues& v : positional) {
    total += prod * v.cost;
    prod *= v.nsols;
  }
  return total;
}

ControlValues sequence_values(std::span<const ControlValues> positional) {
  ControlValues acc{0.0, 1.0};
  for (const ControlValues& v : positional) acc = compose(acc, v);
  return acc;
}

bool is_cn_inverted(const ControlValues& left, const ControlValues& right) {
  return definitely_less(cn_of(right), cn_of(left));
}

}  // namespace conjorder
