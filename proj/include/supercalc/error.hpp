#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace supercalc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A superfield component that is required to be even is not.
class OddComponentError : public Error {
 public:
  using Error::Error;
};

class ParityMismatch : public Error {
 public:
  using Error::Error;
};

/// An expression references a symbol or function that has no numeric value.
class MissingBinding : public Error {
 public:
  using Error::Error;
};

/// Generator or variable indices that do not fit the active (q, L) context.
class ContextError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error("parse error at " + std::to_string(position) + ": " + message),
        position_(position),
        detail_(message) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t position_;
  std::string detail_;
};

}  // namespace supercalc
