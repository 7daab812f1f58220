#pragma once

#include <stdexcept>
#include <string>

namespace swarmrl {

// Invalid experiment or environment parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A caller violated an operation's precondition (reward outside [0,1], empty batch, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A value-normalized update was asked to divide by a (near) zero value.
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegenerateBatchError : public NumericError {
 public:
  using NumericError::NumericError;
};

// An Euler step left the simplex.
class StepSizeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class AggregationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace swarmrl
