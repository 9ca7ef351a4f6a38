#pragma once

#include <stdexcept>
#include <string>

namespace facmod {

// Bad user-supplied data: malformed files, inconsistent dimensions,
// invalid configuration.  The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure inside the solver or one of its subroutines
// (eigensolver stagnation, empty multiplier bracket, infeasible output).
// The CLI maps this to exit code 1.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace facmod
