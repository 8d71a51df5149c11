#pragma once

#include <stdexcept>
#include <string>

namespace nhlab {

/// A requested computation exceeds the enumeration or size guard.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed-precision arithmetic could not decide a valuation statement.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal mathematical consistency check failed.
class MathCheckFailed : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace nhlab
