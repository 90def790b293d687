#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adjprof {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid tree document.
class TreeError : public Error {
public:
  enum class Kind { Syntax, Schema, DuplicateCall, DuplicateLoop, NegativeValue };

  TreeError(Kind kind, const std::string& what, std::size_t line = 0, std::size_t column = 0);

  Kind kind() const noexcept { return kind_; }
  // 1-based; 0 when the position is unknown (semantic errors).
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

/// Malformed configuration document.
class ConfigError : public Error {
public:
  enum class Kind { UnknownDirective, MalformedSite, BadCapacity, Malformed };

  ConfigError(Kind kind, const std::string& what, std::size_t line);

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

private:
  Kind kind_;
  std::size_t line_;
};

/// A configuration that does not fit the tree it is applied to
/// (e.g. a binomial capacity for a loop that does not exist).
class ConfigMismatch : public Error {
public:
  using Error::Error;
};

/// Event stream violating the callback ordering protocol.
class StreamError : public Error {
public:
  StreamError(const std::string& what, std::size_t event_index);
  std::size_t event_index() const noexcept { return index_; }

private:
  std::size_t index_;
};

/// Exhaustive enumeration refused because the instance is too large.
class GuardError : public Error {
public:
  using Error::Error;
};

/// Broken internal invariant (non-LIFO pop, nonzero final stack).
class InternalError : public Error {
public:
  using Error::Error;
};

}  // namespace adjprof
