#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cyclefem {

/// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state or parameter left the region where the model is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid user configuration (mesh size, tolerances, config keys, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// LU elimination met a pivot that is zero to working precision.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(std::size_t pivot, const std::string& what)
      : Error(what), pivot_(pivot) {}
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// An iterative method ran out of iterations or diverged. Carries the
/// residual history so callers can report it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  std::vector<double> history_;
};

/// No complex eigenvalue pair close enough to the imaginary axis.
class NotHopfError : public Error {
 public:
  using Error::Error;
};

}  // namespace cyclefem
