#pragma once

#include <stdexcept>
#include <string>

namespace mck {

// Parameter or index outside the supported desk-scale range.
struct BoundsError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Caller passed arguments that violate an operation's precondition.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed serialized input.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal consistency check failed: a bug, not a user error.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Input lies outside the implemented scope (non-sphere, too many fixed points).
struct UnsupportedScope : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mck
