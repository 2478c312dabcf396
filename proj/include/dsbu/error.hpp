#pragma once

#include <stdexcept>
#include <string>

namespace dsbu {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input lies outside the mathematical domain of an operation
/// (non-real argument to a real multiplier, zero field, defocusing ground state, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller misuse: mismatched grids, malformed configuration, bad command line.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed, truncated, or corrupted snapshot file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace dsbu
