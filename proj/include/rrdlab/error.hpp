#pragma once

#include <stdexcept>
#include <string>

namespace rrdlab {

// Iterative numerical routine failed to converge. Never swallowed: the harness
// counts these per trial and reports them.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad experiment configuration, detected before any compute starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A rejection sampler ran out of attempts.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rrdlab
