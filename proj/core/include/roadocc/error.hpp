#pragma once

#include <stdexcept>
#include <string>

namespace roadocc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A region or grid does not fit the data it is applied to.
class DimensionError : public Error {
 public:
  DimensionError(std::string axis, const std::string& what)
      : Error(what), axis_(std::move(axis)) {}
  const std::string& axis() const noexcept { return axis_; }

 private:
  std::string axis_;
};

/// Invalid parameters or an unsupported combination of them.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// The classifier cannot operate at the requested feature dimensionality
/// (PCA on a single channel). Benchmarks report such cells as absent.
class UnsupportedDimensionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// ROC rates are undefined because the ground truth holds a single class.
class UndefinedRateError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double violation)
      : Error(what), violation_(violation) {}
  double violation() const noexcept { return violation_; }

 private:
  double violation_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input document. line() is 0 when no position applies.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace roadocc
