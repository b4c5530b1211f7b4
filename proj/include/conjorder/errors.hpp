#pragma once

#include <stdexcept>

namespace conjorder {

// Input larger than the configured bound of an exponential algorithm.
class SizeBoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (e.g. dependent input to sort-by-cn).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Every candidate ordering was excluded (mode declarations admit none).
class NoValidOrderingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace conjorder
