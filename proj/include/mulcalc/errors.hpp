#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mulcalc {

// Root of every exception the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text. `offset` is a byte offset into the source.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::vector<std::string> expected = {});

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// Bad user input that is not a syntax problem: unbound parameters, malformed
// curve specs, invalid configuration values.
class InputError : public Error {
 public:
  using Error::Error;
};

// Raised by `differentiate` when a conj/abs/re/im node is present.
class NotHolomorphicError : public InputError {
 public:
  explicit NotHolomorphicError(const std::string& node);
  const std::string& node() const noexcept { return node_; }

 private:
  std::string node_;
};

// A value left the domain of the computation: division by zero, Log(0),
// a zero of f on a curve, a nonpositive field sample.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Refinement or quadrature budget exhausted.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace mulcalc
