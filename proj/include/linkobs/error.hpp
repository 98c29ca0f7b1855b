#pragma once

#include <stdexcept>
#include <string>

namespace linkobs {

/// Violated precondition or malformed input.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value or an unreliable estimate
/// (for example a degree residual of 0.5 or more).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace linkobs
