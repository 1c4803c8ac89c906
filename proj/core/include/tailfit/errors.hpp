#pragma once

#include <stdexcept>
#include <string>

namespace tailfit {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Model or configuration parameters violate their invariants.
class InvalidParamsError : public Error {
 public:
  using Error::Error;
};

/// A truncation tolerance outside (0, 1e-6].
class InvalidToleranceError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested below the minimum supported degree.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No probability mass survives a truncation.
class EmptySupportError : public Error {
 public:
  using Error::Error;
};

/// Malformed histogram text. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// Too few data points for the requested statistic or fit.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// A correlation input vector with no variance.
class ZeroVarianceError : public Error {
 public:
  using Error::Error;
};

/// The fit objective was non-finite everywhere that was searched.
class SearchFailureError : public Error {
 public:
  using Error::Error;
};

/// Filesystem read/write failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tailfit
