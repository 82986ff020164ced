#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tfpack {

// Base for every error the library reports. The CLI maps subclasses onto
// exit codes, so keep the hierarchy flat.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument value (epsilon outside (0,1), unbalanced sides, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A part count that does not divide the vertex count.
class DivisibilityError : public Error {
 public:
  DivisibilityError(std::size_t divisor, std::size_t value)
      : Error(std::to_string(divisor) + " does not divide " + std::to_string(value)),
        divisor_(divisor),
        value_(value) {}

  std::size_t divisor() const { return divisor_; }
  std::size_t value() const { return value_; }

 private:
  std::size_t divisor_;
  std::size_t value_;
};

// Malformed input text. line() is 1-based; 0 means "whole file".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A packing that fails re-verification against its host graph.
class VerificationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tfpack
