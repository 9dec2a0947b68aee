/// \file connection.hpp
/// \brief Scattering length from the Wronskians W[w_j, w_reg] of the basic solutions
/// with the regular solution at the origin.
///
/// With v_j = exp(-beta z^-5/10) w_j and v_reg = exp(beta z^-5/10) sum b_m z^{m+mu},
/// the Wronskian W[v_j, v_reg] = exp(-beta z^-5/5) W[w_j, w_reg] expands formally as
/// sum_p gamma_{p,j} z^{p+nu_j+mu}, where
///
///   gamma_{p,j} = sum_m b_m ( -beta a_{m-p-6,j} + (2m - p - 1 + mu - nu_j) a_{m-p-1,j} ).
///
/// Matching against the Heaviside expansions of exp(sqrt(lambda) z^-5 / 5) with
/// exponent offsets delta_k = (k - nu_j - mu)/5 gives, for any integer n > sqrt(lambda),
///
///   W[w_j, w_reg] = sum_{k=0}^{4} Gamma(n + 1 + delta_k) / (sqrt(lambda)/5)^{n + delta_k} gamma_{-5n-k,j}.
///
/// Independence of the result from n is the built-in accuracy check.

#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "ljscat/errors.hpp"
#include "ljscat/mpkernel.hpp"
#include "ljscat/potential.hpp"
#include "ljscat/series.hpp"

namespace ljscat {

struct GammaCoefficient {
  long p = 0;
  int j = 1;
  Real value;
  long terms_used = 0;
  /// Geometric tail bound with ratio 2^{-1/5}.
  Real est_err;
  /// Largest term magnitude, counting cancellation inside each term; the scale of the sum.
  Real max_term;
};

struct WronskianResult {
  int j = 1;
  Real value;
  int n_used = 0;
  /// |value(n) - value(n+1)|
  Real consistency_err;
  /// sum_k |Gamma(..)/(..)^(..)| max_m |term|: the magnitude that cancels down to `value`.
  Real scale;
  int working_digits = 0;
  /// True when `value` sits at the rounding floor of `scale`: a root to working precision.
  bool at_floor = false;
};

struct ScatteringResult {
  PotentialSpec spec;
  Real a_over_r0;
  Real err_est;
  WronskianResult w1;
  WronskianResult w2;

  /// Scattering length in the units of r0.
  Real a() const { return a_over_r0 * spec.r0; }
};

/// Digits below the working precision at which a Wronskian counts as zero.
inline constexpr int kFloorGuardDigits = 10;

namespace detail {

inline long gamma_term_budget(const PrecisionContext& ctx) { return 40L * ctx.working_digits() + 1000; }

struct GammaTerm {
  Real value;
  /// |b_m| (|beta a_{m-p-6}| + |c a_{m-p-1}|): the size of what cancels inside the term.
  Real magnitude;
};

/// One term of the gamma_{p,j} sum.
inline GammaTerm gamma_term(const ThomeTabulation& b, const SeriesTabulation& a, long p, long m) {
  const Real& bm = b.coeffs[static_cast<std::size_t>(m)];
  if (bm.is_zero()) return {Real(0), Real(0)};
  const long i6 = m - p - 6;
  const long i1 = m - p - 1;
  Real inner(0), size(0);
  if (i6 >= 0 && !a.coeffs[static_cast<std::size_t>(i6)].is_zero()) {
    inner = -b.beta * a.coeffs[static_cast<std::size_t>(i6)];
    size = abs(inner);
  }
  if (i1 >= 0 && !a.coeffs[static_cast<std::size_t>(i1)].is_zero()) {
    Real t = (2 * m - p - 1 + b.mu - a.nu) * a.coeffs[static_cast<std::size_t>(i1)];
    size += abs(t);
    inner += t;
  }
  return {bm * inner, abs(bm) * size};
}

}  // namespace detail

/// gamma_{p,j}: summed until 25 consecutive terms are each <= 10^-working |partial sum|.
inline GammaCoefficient gamma_p(const PotentialSpec& spec, int j, long p, const PrecisionContext& ctx) {
  nu_of(j);
  mp::PrecisionScope scope(ctx.working_digits());
  const long budget = detail::gamma_term_budget(ctx);
  long have = std::min<long>(budget, 12L * ctx.working_digits() + 200);
  auto b = b_coeffs(spec, Branch::regular, have, ctx);
  auto a = a_coeffs(spec, j, have - p, ctx);
  const Real eps = ctx.working_eps();

  Real sum(0), max_term(0), run_max(0);
  int run = 0;
  for (long m = 0; m < budget; ++m) {
    if (m > have) {
      have = std::min(2 * have, budget);
      b = b_coeffs(spec, Branch::regular, have, ctx);
      a = a_coeffs(spec, j, have - p, ctx);
    }
    const detail::GammaTerm term = detail::gamma_term(*b, *a, p, m);
    sum += term.value;
    const Real mag = abs(term.value);
    if (term.magnitude > max_term) max_term = term.magnitude;
    if (mag <= eps * abs(sum)) {
      if (run == 0 || mag > run_max) run_max = mag;
      if (++run >= kNegligibleRun) {
        const Real ratio = pow(Real(2), Real(-1) / 5);
        return {p, j, sum, m + 1, run_max * ratio / (1 - ratio), max_term};
      }
    } else {
      run = 0;
    }
  }
  throw TermBudgetExceeded("gamma_p: sum for p = " + std::to_string(p) + ", j = " + std::to_string(j) +
                               " did not settle within " + std::to_string(budget) + " terms",
                           budget);
}

/// The n chosen for the Wronskian formula: ceil(sqrt(lambda)) + 2.
inline int default_heaviside_n(const PotentialSpec& spec) {
  mp::PrecisionScope scope(std::max(spec.lambda.digits(), 20));
  return static_cast<int>(ceil(sqrt(spec.lambda)).to_long()) + 2;
}

struct FixedNWronskian {
  Real value;
  Real scale;
};

/// W[w_j, w_reg] from the Heaviside formula at a fixed n (must exceed sqrt(lambda)).
inline FixedNWronskian wronskian_at(const PotentialSpec& spec, int j, int n, const PrecisionContext& ctx) {
  const int nu = nu_of(j);
  mp::PrecisionScope scope(ctx.working_digits());
  const Real lambda = Real::with_digits(spec.lambda, ctx.working_digits());
  const Real root = sqrt(lambda);
  if (!(Real(n) > root)) throw ArgumentError("wronskian_at: n must exceed sqrt(lambda)");
  const Real beta = -root;
  const Real mu = thome_mu(spec.s, beta);
  const Real base = root / 5;

  Real total(0), scale(0);
  for (int k = 0; k <= 4; ++k) {
    const GammaCoefficient g = gamma_p(spec, j, -5L * n - k, ctx);
    if (g.value.is_zero() && g.max_term.is_zero()) continue;
    const Real delta = (k - nu - mu) / 5;
    const Real factor = gamma(n + 1 + delta, ctx) / pow_real(base, n + delta, ctx);
    total += factor * g.value;
    scale += abs(factor) * g.max_term;
  }
  return {total, scale};
}

/// W[w_j, w_reg] with the n / n+1 consistency test and precision escalation.
///
/// Accepted when |W(n) - W(n+1)| <= 10^-target |W(n)|. A value that stays at the
/// rounding floor of its own cancellation scale after at least one escalation is
/// accepted as a root (at_floor = true).
inline WronskianResult wronskian(const PotentialSpec& spec, int j, const PrecisionContext& ctx) {
  nu_of(j);
  const int n = default_heaviside_n(spec);
  PrecisionContext current = ctx;
  std::string last_failure;
  for (;;) {
    try {
      const FixedNWronskian w0 = wronskian_at(spec, j, n, current);
      const FixedNWronskian w1 = wronskian_at(spec, j, n + 1, current);
      mp::PrecisionScope scope(current.working_digits());
      const Real mismatch = abs(w0.value - w1.value);
      const Real scale = max(w0.scale, w1.scale);
      const Real floor = Real::pow10(-(current.working_digits() - kFloorGuardDigits)) * scale;
      const bool relative_ok = mismatch <= current.target_eps() * abs(w0.value);
      const bool root_ok = current.escalations() > ctx.escalations() && abs(w0.value) <= floor && mismatch <= floor;
      if (relative_ok || root_ok) {
        return {j, w0.value, n, mismatch, scale, current.working_digits(), !relative_ok};
      }
      std::ostringstream os;
      os << "W[w_" << j << ", w_reg] at n = " << n << ": " << w0.value.to_scientific(20) << ", at n = " << n + 1
         << ": " << w1.value.to_scientific(20) << ", mismatch " << mismatch.to_scientific(3) << " at "
         << current.working_digits() << " working digits";
      last_failure = os.str();
    } catch (const TermBudgetExceeded& e) {
      last_failure = e.what();
    }
    if (!current.can_escalate()) {
      throw PrecisionExhausted("wronskian: precision exhausted; " + last_failure, current.working_digits());
    }
    current = escalate(current);
  }
}

/// a / r0 = W[w_1, w_reg] / W[w_2, w_reg].
///
/// Throws AtPole when W[w_2, w_reg] is zero to working precision or
/// |W[w_2, w_reg]| <= 10^-target |W[w_1, w_reg]| (i.e. |a / r0| >= 10^target).
inline ScatteringResult scattering_length(const PotentialSpec& spec, const PrecisionContext& ctx) {
  WronskianResult w1 = wronskian(spec, 1, ctx);
  WronskianResult w2 = wronskian(spec, 2, ctx);
  mp::PrecisionScope scope(std::max(w1.working_digits, w2.working_digits));
  if (w2.at_floor || abs(w2.value) <= ctx.target_eps() * abs(w1.value)) {
    throw AtPole("scattering length diverges at sqrt(lambda) = " +
                 sqrt(spec.lambda).to_scientific(ctx.target_digits() + 2) + " (s = " + std::to_string(spec.s) + ")");
  }
  Real a = w1.value / w2.value;
  Real rel2 = w2.consistency_err / abs(w2.value);
  Real err = w1.at_floor ? w1.consistency_err / abs(w2.value) : abs(a) * (w1.consistency_err / abs(w1.value) + rel2);
  return {spec, std::move(a), std::move(err), std::move(w1), std::move(w2)};
}

}  // namespace ljscat
