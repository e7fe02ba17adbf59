#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iqcc {

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands defined over different qubit counts.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A word with an odd number of y factors inside a real Hamiltonian.
class HermiticityError : public Error {
 public:
  using Error::Error;
};

/// Generator is not a purely imaginary Pauli word, or is not an X-string
/// where one is required.
class InvalidGeneratorError : public Error {
 public:
  using Error::Error;
};

/// Argument outside of an operation's documented domain.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

/// Size limit exceeded (qubit count, Ansatz length, term budget).
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value or a failed iterative solve.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// No eigenstate matches the requested spin sector.
class EmptySectorError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  /// 1-based line number, 0 when not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace iqcc
