#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thinlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two group elements (or an element and a vector) of different shape.
class IncompatibleElements : public Error {
 public:
  using Error::Error;
};

class NonInvertible : public Error {
 public:
  using Error::Error;
};

class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

/// An enumeration stopped after reaching its configured size limit.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::size_t partial_count, std::size_t budget)
      : Error(what + " (budget " + std::to_string(budget) + ", reached " +
              std::to_string(partial_count) + ")"),
        partial_count_(partial_count),
        budget_(budget) {}

  std::size_t partial_count() const noexcept { return partial_count_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t partial_count_;
  std::size_t budget_;
};

/// An iterative eigensolver ran out of iterations.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, double best_estimate, double residual)
      : Error(what), best_estimate_(best_estimate), residual_(residual) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double residual() const noexcept { return residual_; }

 private:
  double best_estimate_;
  double residual_;
};

}  // namespace thinlab
