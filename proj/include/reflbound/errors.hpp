#pragma once

#include <stdexcept>
#include <string>

namespace reflbound {

/// Argument outside the mathematical domain of an operation (e.g. l < 3).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A method whose hypotheses do not hold for the given data (R >= 1, a >= 4, ...).
class InapplicableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A comparison that stays undecided after escalating to high precision.
/// Callers must not guess a verdict; the CLI maps this to exit code 2.
class PrecisionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The feasibility search produced no admissible point.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reflbound
