#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nakm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (dimension mismatch, bad weights, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values (k > N, schedule outside [0,1), ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not produce a result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Raised when a barycenter coordinate is observed by no input and no damping
/// term pins it down.
class UnconstrainedCoordinate : public NumericalError {
 public:
  explicit UnconstrainedCoordinate(std::vector<std::size_t> coords);

  const std::vector<std::size_t>& coordinates() const { return coords_; }

 private:
  std::vector<std::size_t> coords_;
};

}  // namespace nakm
