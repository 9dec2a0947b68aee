/// \file oracle.hpp
/// \brief Independent scattering length by direct outward integration of
/// w'' = lambda (z^-12 - z^-s) w.
///
/// The integration starts deep in the classically forbidden region, where the
/// regular solution is fixed by its logarithmic derivative, and is matched to
/// A w_1 + B w_2 at a moderate radius. Then a / r0 = -B / A.

#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "ljscat/errors.hpp"
#include "ljscat/mpkernel.hpp"
#include "ljscat/potential.hpp"
#include "ljscat/rkf78.hpp"
#include "ljscat/series.hpp"

namespace ljscat {

struct IntegrationSetup {
  PotentialSpec spec;
  Real z_start;
  Real z_match;
  /// Relative local error bound per integration step.
  Real step_control;
};

struct OracleOptions {
  /// Initial sqrt(lambda) z_start^-5 / 5; the irregular admixture is suppressed by exp(-2 * this).
  /// Raised step by step (up to max_start_exponent) until the Thome start value is
  /// accurate to step_control.
  double start_exponent = 30.0;
  double max_start_exponent = 2000.0;
  double z_match = 2.0;
  double step_control = 1e-16;
  /// The result is re-matched this far beyond z_match as a consistency check.
  double check_offset = 0.5;
  double agreement = 1e-9;
};

inline Real start_radius(const Real& root, double exponent) {
  return pow(root / (5 * Real(exponent)), Real(1) / 5);
}

/// Chooses z_start: the largest radius on the exponent ladder 30, 37.5, ... at which the
/// truncated Thome expansion meets step_control.
inline IntegrationSetup make_integration_setup(const PotentialSpec& spec, const PrecisionContext& ctx,
                                               const OracleOptions& opt = {}) {
  if (!(opt.start_exponent >= 20.0)) throw ArgumentError("start exponent must be at least 20");
  if (!(opt.z_match >= 1.5)) throw ArgumentError("z_match must be at least 1.5");
  mp::PrecisionScope scope(ctx.working_digits());
  const Real root = sqrt(Real::with_digits(spec.lambda, ctx.working_digits()));
  const Real tol(opt.step_control);
  for (double exponent = opt.start_exponent; exponent <= opt.max_start_exponent; exponent *= 1.25) {
    const Real z_start = start_radius(root, exponent);
    if (!(z_start < 1)) continue;
    try {
      thome_logderiv(spec, z_start, ctx, &tol);
    } catch (const ZTooLarge&) {
      continue;
    }
    return {spec, z_start, Real(opt.z_match), tol};
  }
  throw ZTooLarge("no start radius with an accurate Thome expansion up to exponent " +
                  std::to_string(opt.max_start_exponent));
}

struct IntegrationState {
  Real z;
  Real w;
  Real dw;
  Rkf78Stats stats;
};

namespace detail {

struct ZeroEnergyRhs {
  int s;
  Real lambda;

  void operator()(const Real& z, const std::array<Real, 2>& y, std::array<Real, 2>& dy) const {
    const Real inv = 1 / z;
    const Real inv2 = inv * inv;
    const Real inv4 = inv2 * inv2;
    const Real inv6 = inv4 * inv2;
    Real attract;
    switch (s) {
      case 4: attract = inv4; break;
      case 5: attract = inv4 * inv; break;
      case 6: attract = inv6; break;
      default: attract = inv6 * inv; break;
    }
    dy[0] = y[1];
    dy[1] = lambda * (inv6 * inv6 - attract) * y[0];
  }
};

}  // namespace detail

/// Integrates the regular solution from z_start through each of `stops` (ascending).
/// The start values are w = initial_scale, w' = initial_scale * (Thome log-derivative).
inline std::vector<IntegrationState> integrate_zero_energy_to(const IntegrationSetup& setup,
                                                              const std::vector<Real>& stops,
                                                              const PrecisionContext& ctx,
                                                              const Real& initial_scale = Real(1)) {
  mp::PrecisionScope scope(ctx.working_digits());
  const Real tol = Real::with_digits(setup.step_control, ctx.working_digits());
  const ThomeLogDerivative start = thome_logderiv(setup.spec, setup.z_start, ctx, &tol);

  detail::ZeroEnergyRhs rhs{setup.spec.s, Real::with_digits(setup.spec.lambda, ctx.working_digits())};
  std::array<Real, 2> y{Real::with_digits(initial_scale, ctx.working_digits()), Real(0)};
  y[1] = y[0] * start.logderiv;
  Real z = Real::with_digits(setup.z_start, ctx.working_digits());
  Real h(0);
  std::vector<IntegrationState> out;
  Rkf78Stats total;
  for (const Real& stop : stops) {
    if (!(stop > z)) throw ArgumentError("integration stops must increase beyond z_start");
    const Real target = Real::with_digits(stop, ctx.working_digits());
    const Rkf78Stats leg = rkf78_integrate(rhs, z, y, target, tol, h);
    total.accepted += leg.accepted;
    total.rejected += leg.rejected;
    z = target;
    out.push_back({z, y[0], y[1], total});
  }
  return out;
}

/// (w, w') of the regular solution at z_match.
inline IntegrationState integrate_zero_energy(const IntegrationSetup& setup, const PrecisionContext& ctx,
                                              const Real& initial_scale = Real(1)) {
  return integrate_zero_energy_to(setup, {setup.z_match}, ctx, initial_scale).front();
}

struct MatchResult {
  Real A;
  Real B;
  /// -B / A; empty when |A| <= 10^-target |B| (a pole of the scattering length).
  std::optional<Real> a_over_r0;
  /// Infinity-norm condition number of [w1 w2; w1' w2'].
  Real condition_estimate;
};

/// Solves [w1 w2; w1' w2'] [A; B] = [w; w'] at z_match.
inline MatchResult match_coefficients(const PotentialSpec& spec, const Real& z_match, const Real& w, const Real& dw,
                                      const PrecisionContext& ctx) {
  mp::PrecisionScope scope(ctx.working_digits());
  const SolutionValue s1 = eval_w(spec, 1, z_match, ctx);
  const SolutionValue s2 = eval_w(spec, 2, z_match, ctx);
  const Real det = s1.value * s2.derivative - s2.value * s1.derivative;
  if (det.is_zero()) throw DomainError("match_coefficients: singular basis");
  Real A = (w * s2.derivative - s2.value * dw) / det;
  Real B = (s1.value * dw - s1.derivative * w) / det;
  const Real norm = max(abs(s1.value) + abs(s2.value), abs(s1.derivative) + abs(s2.derivative));
  const Real inv_norm = max(abs(s2.derivative) + abs(s2.value), abs(s1.derivative) + abs(s1.value)) / abs(det);
  std::optional<Real> a;
  if (abs(A) > ctx.target_eps() * abs(B)) a = -B / A;
  return {std::move(A), std::move(B), std::move(a), norm * inv_norm};
}

struct OracleResult {
  Real a_over_r0;
  /// The same quantity matched at z_match + check_offset.
  Real check_a_over_r0;
  MatchResult match;
  IntegrationSetup setup;
  Rkf78Stats stats;
};

/// Scattering length by integration and matching, verified at a second matching radius.
///
/// Throws AtPole at a pole and IntegrationAccuracyError when the two matching radii
/// disagree by more than opt.agreement * max(1, |a / r0|).
inline OracleResult oracle_scattering(const PotentialSpec& spec, const PrecisionContext& ctx,
                                      const OracleOptions& opt = {}) {
  const IntegrationSetup setup = make_integration_setup(spec, ctx, opt);
  mp::PrecisionScope scope(ctx.working_digits());
  const Real z_check = setup.z_match + Real(opt.check_offset);
  const auto states = integrate_zero_energy_to(setup, {setup.z_match, z_check}, ctx);
  MatchResult main = match_coefficients(spec, states[0].z, states[0].w, states[0].dw, ctx);
  const MatchResult check = match_coefficients(spec, states[1].z, states[1].w, states[1].dw, ctx);
  if (!main.a_over_r0 || !check.a_over_r0) {
    throw AtPole("oracle: scattering length diverges at sqrt(lambda) = " + sqrt(spec.lambda).to_scientific(12));
  }
  const Real a = *main.a_over_r0;
  const Real b = *check.a_over_r0;
  if (abs(a - b) > Real(opt.agreement) * max(Real(1), abs(a))) {
    throw IntegrationAccuracyError("oracle: matching at z = " + states[0].z.to_scientific(4) + " and " +
                                   states[1].z.to_scientific(4) + " disagree: " + a.to_scientific(16) + " vs " +
                                   b.to_scientific(16));
  }
  return {a, b, std::move(main), setup, states[1].stats};
}

inline Real oracle_scattering_length(const PotentialSpec& spec, const PrecisionContext& ctx) {
  return oracle_scattering(spec, ctx).a_over_r0;
}

}  // namespace ljscat
