#pragma once

#include <string>

#include "ljscat/errors.hpp"
#include "ljscat/real.hpp"

namespace ljscat {

using mp::Real;

/// One (12, s) Lennard-Jones potential: V(r) = (hbar^2 lambda / 2 m r0^2) ((r0/r)^12 - (r0/r)^s).
///
/// The mass prefactor is absorbed into the dimensionless intensity `lambda`; `r0` only
/// rescales the final scattering length.
struct PotentialSpec {
  int s = 6;
  Real lambda = Real(1);
  Real r0 = Real(1);

  /// Validating factory. Attractive exponents 4..7 are supported.
  static PotentialSpec make(int s, const Real& lambda, const Real& r0 = Real(1)) {
    if (s < 4 || s > 7) throw ArgumentError("attractive exponent s must be one of 4, 5, 6, 7; got " + std::to_string(s));
    if (!(lambda > 0) || !lambda.is_finite()) throw ArgumentError("intensity lambda must be positive and finite");
    if (!(r0 > 0) || !r0.is_finite()) throw ArgumentError("length scale r0 must be positive and finite");
    return PotentialSpec{s, lambda, r0};
  }

  /// Builds the spec from sqrt(lambda); lambda is formed without rounding.
  static PotentialSpec from_sqrt_lambda(int s, const Real& sqrt_lambda, const Real& r0 = Real(1)) {
    if (!(sqrt_lambda > 0)) throw ArgumentError("sqrt(lambda) must be positive");
    const Real wide = Real::with_bits(sqrt_lambda, 2 * sqrt_lambda.bits());
    return make(s, wide * wide, r0);
  }
};

}  // namespace ljscat
