#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lia2c {

/// Input vector length does not match the shape an operation expects.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A gradient, loss, or parameter is NaN or infinite.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, std::size_t index)
      : std::runtime_error(what + " (index " + std::to_string(index) + ")"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class InvalidDistributionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dirichlet density evaluated on the simplex boundary where some alpha < 1.
class InfiniteDensityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Noise rate too large for the misreport model to be inverted.
class RectificationUndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Every candidate model assigns zero probability to the observation.
class DegenerateEvidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lia2c
