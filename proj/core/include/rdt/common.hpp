#pragma once

#include <stdexcept>
#include <string>

namespace rdt {

// Raised when a documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical computation cannot produce a meaningful value
// (singular metric, divergent integral requested as a number, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace rdt
