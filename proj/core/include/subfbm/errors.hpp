#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace subfbm {

/// Input outside an operation's domain (bad H, negative time, n out of range, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The series for the variance limit does not converge (H >= 3/4).
class DivergentSeriesError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Cholesky factorization hit a non-positive pivot. The scaled increment
/// covariance is positive definite for every H, so this indicates a kernel
/// evaluation bug; no jitter is ever added.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  NotPositiveDefiniteError(std::size_t pivot_index, double pivot_value)
      : std::runtime_error("matrix not positive definite: pivot " +
                           std::to_string(pivot_index) + " is " +
                           std::to_string(pivot_value)),
        pivot_index_(pivot_index),
        pivot_value_(pivot_value) {}

  std::size_t pivot_index() const noexcept { return pivot_index_; }
  double pivot_value() const noexcept { return pivot_value_; }

 private:
  std::size_t pivot_index_;
  double pivot_value_;
};

}  // namespace subfbm
