#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semilin {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inputs of incompatible dimensions or otherwise malformed arguments.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// An operation required a pointed (line-free) polyhedron or generating function.
class NotPointedError : public Error {
public:
  using Error::Error;
};

/// A configured resource cap (coset count, wall-clock budget) was exceeded.
class ResourceError : public Error {
public:
  using Error::Error;
};

/// Malformed formula text or JSON document; carries a 1-based source position.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(line == 0 ? what
                        : what + " at line " + std::to_string(line) + ", column " +
                              std::to_string(column)),
        line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace semilin
