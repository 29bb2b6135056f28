#pragma once

#include <stdexcept>
#include <string>

namespace preciseum {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside its permitted range (bit counts, p < 1, ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Array shapes are incompatible for the requested operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Text could not be parsed as a decimal numeral.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A serialized stream is malformed (bad magic, truncation, bad header).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A serialized stream is well-formed but carries invalid content.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The requested operation has no counterpart in the chosen evaluator.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace preciseum
