/// \file mpkernel.hpp
/// \brief Precision accounting and the special functions needed by the Wronskian formula.
///
/// Precision is stated in decimal digits. A PrecisionContext is an immutable value:
/// escalation returns a new context with doubled working precision.

#pragma once

#include <cstdlib>
#include <string>

#include "ljscat/errors.hpp"
#include "ljscat/real.hpp"

namespace ljscat {

using mp::Real;

/// Default guard digits added on top of twice the target precision.
inline constexpr int kDefaultGuardDigits = 30;

class PrecisionContext {
 public:
  /// Context for `target_digits` correct digits, working at 2*target + guard digits.
  static PrecisionContext for_target(int target_digits, int max_escalations = 3,
                                     int guard_digits = kDefaultGuardDigits) {
    if (target_digits < 1) throw ArgumentError("target_digits must be positive");
    if (guard_digits < 0) throw ArgumentError("guard_digits must be non-negative");
    if (max_escalations < 0) throw ArgumentError("max_escalations must be non-negative");
    return PrecisionContext(target_digits, 2 * target_digits + guard_digits, max_escalations, 0);
  }

  /// Explicit working precision; must still honour working >= 2*target + guard.
  static PrecisionContext with_working(int target_digits, int working_digits, int max_escalations = 3,
                                       int guard_digits = kDefaultGuardDigits) {
    if (target_digits < 1) throw ArgumentError("target_digits must be positive");
    if (working_digits < 2 * target_digits + guard_digits) {
      throw ArgumentError("working_digits must be at least 2*target_digits + " + std::to_string(guard_digits));
    }
    if (max_escalations < 0) throw ArgumentError("max_escalations must be non-negative");
    return PrecisionContext(target_digits, working_digits, max_escalations, 0);
  }

  int target_digits() const { return target_; }
  int working_digits() const { return working_; }
  int max_escalations() const { return max_escalations_; }
  int escalations() const { return escalations_; }
  bool can_escalate() const { return escalations_ < max_escalations_; }

  /// 10^-target_digits at working precision.
  Real target_eps() const {
    mp::PrecisionScope scope(working_);
    return Real::pow10(-target_);
  }

  /// 10^-working_digits at working precision.
  Real working_eps() const {
    mp::PrecisionScope scope(working_);
    return Real::pow10(-working_);
  }

  friend PrecisionContext escalate(const PrecisionContext& ctx);

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

 private:
  PrecisionContext(int target, int working, int max_escalations, int escalations)
      : target_(target), working_(working), max_escalations_(max_escalations), escalations_(escalations) {}

  int target_;
  int working_;
  int max_escalations_;
  int escalations_;
};

/// Doubles the working precision. Throws PrecisionExhausted once the budget is spent.
inline PrecisionContext escalate(const PrecisionContext& ctx) {
  if (!ctx.can_escalate()) {
    throw PrecisionExhausted("precision escalation budget exhausted after " + std::to_string(ctx.escalations_) +
                                 " escalations at " + std::to_string(ctx.working_) + " working digits",
                             ctx.working_);
  }
  return PrecisionContext(ctx.target_, 2 * ctx.working_, ctx.max_escalations_, ctx.escalations_ + 1);
}

/// Guard digits from SCATT_PRECISION_GUARD, or the default when unset.
/// Throws ArgumentError for a malformed value.
inline int guard_digits_from_env() {
  const char* raw = std::getenv("SCATT_PRECISION_GUARD");
  if (raw == nullptr || *raw == '\0') return kDefaultGuardDigits;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 0 || v > 10000) {
    throw ArgumentError(std::string("SCATT_PRECISION_GUARD must be a non-negative integer, got '") + raw + "'");
  }
  return static_cast<int>(v);
}

/// Gamma function on positive reals at the context's working precision.
inline Real gamma(const Real& x, const PrecisionContext& ctx) {
  if (!(x > 0)) throw DomainError("gamma: argument must be positive, got " + x.to_scientific(17));
  return tgamma(Real::with_digits(x, ctx.working_digits()));
}

/// x^y for x > 0 at the context's working precision.
inline Real pow_real(const Real& x, const Real& y, const PrecisionContext& ctx) {
  if (!(x > 0)) throw DomainError("pow_real: base must be positive, got " + x.to_scientific(17));
  const int d = ctx.working_digits();
  return pow(Real::with_digits(x, d), Real::with_digits(y, d));
}

}  // namespace ljscat
