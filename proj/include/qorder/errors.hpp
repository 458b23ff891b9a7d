#pragma once

#include <stdexcept>
#include <string>

namespace qorder {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A value failed one of its type invariants (e.g. a non-PSD density operator).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// A finite order was queried outside of its carrier set.
class UnlistedSubspace : public Error {
 public:
  using Error::Error;
};

/// The solver exhausted its budget without certifying either outcome.
class Indeterminate : public Error {
 public:
  using Error::Error;
};

/// Malformed input document. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qorder
