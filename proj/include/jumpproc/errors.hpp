#pragma once

#include <stdexcept>
#include <string>

namespace jumpproc {

/// Base class for all library errors. Each concrete error maps to a distinct
/// process exit code in the CLI (see exit_code()).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual int exit_code() const noexcept { return 1; }
};

/// A rate entry nu[x][y] is negative.
class NegativeRateError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

/// A diagonal rate entry nu[x][x] is nonzero.
class DiagonalRateError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 5; }
};

/// Time breakpoints are not strictly increasing, do not start at 0, do not
/// end at the horizon, or a solver grid is misaligned with them.
class BadGridError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 6; }
};

/// A time or state argument lies outside its admissible range.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 7; }
};

/// A solver produced a NaN or infinity (step too large or bad driver).
class NonFiniteValueError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 8; }
};

/// Controlled kernel data charges a transition the reference model forbids.
class NotAbsolutelyContinuousError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 9; }
};

/// A problem-spec file failed to parse.
class ParseError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

/// A problem-spec file parsed but its sections are inconsistent.
class ValidationError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// File output failed.
class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 10; }
};

}  // namespace jumpproc
