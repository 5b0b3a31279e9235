#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirac {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed. `offset` is a byte offset into the
/// source; `expected` lists the tokens that would have been accepted there.
class ParseError : public Error {
 public:
  enum class Reason { syntax, unknown_identifier };

  ParseError(Reason reason, std::size_t offset, std::vector<std::string> expected,
             const std::string& what);

  Reason reason() const noexcept { return reason_; }
  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  Reason reason_;
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class LinearSolveError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

/// Configuration document violates the closed schema. `pointer` is an
/// RFC 6901 JSON pointer to the offending element.
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what)
      : Error(pointer + ": " + what), pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace dirac
