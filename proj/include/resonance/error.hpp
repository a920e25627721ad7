#pragma once

#include <stdexcept>
#include <string>

namespace resonance {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured size or work budget would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical method did not reach its tolerance.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace resonance
