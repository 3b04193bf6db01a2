#pragma once

#include <stdexcept>
#include <string>

namespace kantorovich {

/// Invalid selector, parameter combination or malformed input description.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quadrature or normalization routine failed to reach its tolerance.
/// The best estimate obtained so far is kept for diagnostics.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double partial)
      : std::runtime_error(what), partial_(partial) {}

  double partial() const noexcept { return partial_; }

 private:
  double partial_;
};

/// An iterative search (e.g. Luxemburg norm bracketing) did not terminate.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kantorovich
