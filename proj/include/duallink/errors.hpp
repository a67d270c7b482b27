// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace duallink {

/// Malformed input: inconsistent shapes, out-of-range parameters.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A kernel operation met a matrix outside its domain (singular, indefinite).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure inside an iterative solver, tagged with the iteration
/// at which it happened.
class SolverError : public NumericalError {
 public:
  SolverError(int iteration, const std::string& what)
      : NumericalError("iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace duallink
