#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relcalc {

/// Base class for everything this library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidStructure : public Error {
 public:
  using Error::Error;
};

class SignatureMismatch : public Error {
 public:
  using Error::Error;
};

class SizeBoundExceeded : public Error {
 public:
  using Error::Error;
};

/// Raised when a ternary relation has two triples (a,b,c), (a,b,c') with c != c'.
class NonFunctional : public Error {
 public:
  using Error::Error;
};

/// A computed object failed a check that the surrounding theory guarantees.
/// Seeing one of these means the preconditions did not hold.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Size guard shared by every operation that can blow up combinatorially.
struct Limits {
  std::size_t max_tuples = 5'000'000;
};

}  // namespace relcalc
