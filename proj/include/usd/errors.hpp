#pragma once

#include <stdexcept>
#include <string>

namespace usd {

/// Bad caller input: out-of-range parameters, mismatched dimensions, unnormalized states.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation that needs a linearly independent set received a dependent one.
class LinearDependenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Born probabilities of a measurement do not form a distribution.
class InvalidPovmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A randomized construction ran out of retries.
class WitnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Something that must hold by construction did not.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace usd
