#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lfa {

/// Raised when an iterative numerical kernel fails to produce a usable result.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Coarse-grid symbol is singular even after the zero-frequency guard.
class SingularCoarseError : public NumericalError {
 public:
  SingularCoarseError(const std::string& what, std::vector<double> theta)
      : NumericalError(what), theta_(std::move(theta)) {}
  const std::vector<double>& frequency() const noexcept { return theta_; }

 private:
  std::vector<double> theta_;
};

/// Left/right eigenvectors are (numerically) orthogonal; the eigenvalue
/// derivative formula does not apply.
class DegenerateEigenvectorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// |lambda| is below the representable threshold; d|lambda|/dp is undefined.
class ZeroEigenvalueError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnsupportedOperationError : public std::logic_error {
 public:
  explicit UnsupportedOperationError(const std::string& what) : std::logic_error(what) {}
};

/// An evaluation budget ran out mid-computation. Carries the best point seen.
class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(const std::string& what, std::vector<double> best_point,
                      double best_value, unsigned long long evals)
      : std::runtime_error(what),
        best_point_(std::move(best_point)),
        best_value_(best_value),
        evals_(evals) {}

  const std::vector<double>& best_point() const noexcept { return best_point_; }
  double best_value() const noexcept { return best_value_; }
  unsigned long long evals() const noexcept { return evals_; }

 private:
  std::vector<double> best_point_;
  double best_value_ = 0.0;
  unsigned long long evals_ = 0;
};

}  // namespace lfa
