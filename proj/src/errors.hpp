#pragma once

#include <stdexcept>
#include <string>

namespace cgl {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model or solver parameters violate a standing assumption (e.g. gamma <= 4*lambda).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Picard iteration for an implicit step exceeded its iteration budget.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, long step = -1) : Error(what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// Lattice states or clouds of incompatible shape were combined.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An improper integral could not be truncated to the required accuracy.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Run configuration is malformed or inconsistent.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cgl
