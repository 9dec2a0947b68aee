#pragma once

#include <stdexcept>
#include <string>

namespace ljscat {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical function was called outside its domain (usually an upstream bug).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid caller-supplied argument (bad exponent, empty range, mixed root kinds...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A series did not reach its termination criterion within the allowed number of terms.
class TermBudgetExceeded : public Error {
 public:
  TermBudgetExceeded(const std::string& what, long terms) : Error(what), terms_(terms) {}
  long terms() const { return terms_; }

 private:
  long terms_;
};

/// Precision escalation ran out of budget. Carries the last attempted working precision.
class PrecisionExhausted : public Error {
 public:
  PrecisionExhausted(const std::string& what, int working_digits)
      : Error(what), working_digits_(working_digits) {}
  int working_digits() const { return working_digits_; }

 private:
  int working_digits_;
};

/// The asymptotic expansion at the origin is not accurate enough at the requested z.
class ZTooLarge : public Error {
 public:
  using Error::Error;
};

/// The scattering length is infinite to the working precision.
class AtPole : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration could not proceed (step size underflow or step budget).
class StiffnessError : public Error {
 public:
  using Error::Error;
};

/// Results of the direct integration disagree between matching radii.
class IntegrationAccuracyError : public Error {
 public:
  using Error::Error;
};

}  // namespace ljscat
