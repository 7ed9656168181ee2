#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlse {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested quantity is infinite (e.g. K(1), zeros of sech).
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A time stepper or ODE integration produced non-finite or runaway values.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, std::size_t step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class StitchingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nlse
