#pragma once

#include <stdexcept>
#include <string>

namespace dea {

/// Malformed or out-of-contract input (bad dimensions, negative data, bad
/// direction). Maps to CLI exit status 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not complete: step selection exhausted its
/// halving budget, the simplex hit its iteration cap, or two models that
/// must agree did not. Maps to CLI exit status 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dea
