#pragma once

#include <stdexcept>
#include <string>

namespace cubicsq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact value did not fit the fixed integer width.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The polynomial does not define a field the tool accepts.
class FieldError : public Error {
 public:
  using Error::Error;
};

/// A series or sweep failed to converge.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint or input file failed validation.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

class VersionMismatchError : public Error {
 public:
  using Error::Error;
};

/// Data generated for one field was used with another.
class MismatchError : public Error {
 public:
  using Error::Error;
};

/// Too few usable points for a regression.
class InsufficientPointsError : public Error {
 public:
  using Error::Error;
};

class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace cubicsq
