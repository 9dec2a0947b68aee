/// \file roots.hpp
/// \brief Zeros and poles of the scattering length on the sqrt(lambda) axis, and the
/// quasi-linear fits of their positions.
///
/// A zero is a sign change of W[w_1, w_reg], a pole a sign change of W[w_2, w_reg].
/// Roots are bracketed on a grid of step <= 0.25 and refined by bisection with
/// Illinois (modified regula falsi) steps inside the certified bracket.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ljscat/connection.hpp"
#include "ljscat/errors.hpp"
#include "ljscat/mpkernel.hpp"
#include "ljscat/parallel.hpp"
#include "ljscat/potential.hpp"

namespace ljscat {

enum class RootKind { zero, pole };

inline const char* to_string(RootKind kind) { return kind == RootKind::zero ? "zero" : "pole"; }

/// The Wronskian W[w_j, w_reg] whose roots are roots of this kind.
inline int wronskian_index(RootKind kind) { return kind == RootKind::zero ? 1 : 2; }

struct Bracket {
  Real lo;
  Real hi;
};

struct RootRecord {
  int s = 6;
  RootKind kind = RootKind::zero;
  int index = 0;
  Real sqrt_lambda;
  /// Half-width of the final bracket.
  Real certified_err;
};

struct QuasiLinearFit {
  int s = 6;
  RootKind kind = RootKind::zero;
  /// Least-squares slope of sqrt(lambda_n) against n.
  double slope_A = 0;
  /// sqrt(lambda_n) - slope_A n, one per record.
  std::vector<double> intercepts_B;
  /// Intercept of the fitted line.
  double line_intercept = 0;
  /// Largest |sqrt(lambda_n) - (line_intercept + slope_A n)|.
  double residual = 0;
  /// sqrt(lambda_n) - sqrt(lambda_{n-1}) for n >= 1.
  std::vector<double> spacings;
  /// Whether the spacings increase strictly with n. Reported, not required.
  bool spacings_increasing = false;
};

/// zeros_poles_table could not find the requested number of roots below its scan cap.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, std::vector<RootRecord> partial) : Error(what), partial_(std::move(partial)) {}
  const std::vector<RootRecord>& partial() const { return partial_; }

 private:
  std::vector<RootRecord> partial_;
};

inline constexpr double kRootGridStep = 0.25;
inline constexpr double kRootScanChunk = 15.0;
inline constexpr double kMaxSqrtLambda = 100.0;

struct WronskianSign {
  /// -1, 0 or +1; 0 means zero to working precision.
  int sign = 0;
  Real value;
};

/// Sign of W[w_j, w_reg], certified by |W(n)| > 2 |W(n) - W(n+1)|.
///
/// Escalates precision while the sign is uncertain. A value that sits at the rounding
/// floor after an escalation is reported as sign 0.
inline WronskianSign wronskian_sign(const PotentialSpec& spec, int j, const PrecisionContext& ctx) {
  const int n = default_heaviside_n(spec);
  PrecisionContext current = ctx;
  for (;;) {
    try {
      const FixedNWronskian w0 = wronskian_at(spec, j, n, current);
      const FixedNWronskian w1 = wronskian_at(spec, j, n + 1, current);
      mp::PrecisionScope scope(current.working_digits());
      const Real mismatch = abs(w0.value - w1.value);
      const Real floor = Real::pow10(-(current.working_digits() - kFloorGuardDigits)) * max(w0.scale, w1.scale);
      const Real size = abs(w0.value);
      if (w0.value.sign() == w1.value.sign() && size > 2 * mismatch && size > floor) {
        return {w0.value.sign(), w0.value};
      }
      if (current.escalations() > ctx.escalations() && size <= floor && mismatch <= floor) return {0, Real(0)};
    } catch (const TermBudgetExceeded&) {
    }
    if (!current.can_escalate()) {
      throw PrecisionExhausted("wronskian_sign: sign of W[w_" + std::to_string(j) + ", w_reg] undetermined at lambda = " +
                                   spec.lambda.to_scientific(20),
                               current.working_digits());
    }
    current = escalate(current);
  }
}

namespace detail {

/// Bracketing sign: zero counts as positive.
inline int bracket_sign(int sign) { return sign < 0 ? -1 : 1; }

/// Grid lo, lo + h, ..., hi with h = (hi - lo) / ceil((hi - lo) / step). sqrt(lambda) = 0
/// is left out.
inline std::vector<Real> root_grid(const Real& lo, const Real& hi, double step, const PrecisionContext& ctx) {
  mp::PrecisionScope scope(ctx.working_digits());
  const long cells = std::max(1L, ceil((hi - lo) / Real(step)).to_long());
  const Real h = (hi - lo) / cells;
  std::vector<Real> points;
  for (long i = 0; i <= cells; ++i) {
    Real x = i == cells ? Real::with_digits(hi, ctx.working_digits()) : lo + i * h;
    if (x > 0) points.push_back(std::move(x));
  }
  return points;
}

inline void check_range(const Real& lo, const Real& hi, double step) {
  if (!(lo >= 0) || !(hi > lo) || !(hi <= Real(kMaxSqrtLambda))) {
    throw ArgumentError("sqrt(lambda) range must satisfy 0 <= lo < hi <= 100");
  }
  if (!(step > 0.0) || step > kRootGridStep) throw ArgumentError("grid step must be in (0, 0.25]");
}

/// Bracketing signs of W[w_j, w_reg] at every grid point, for each j in `js`.
inline std::vector<std::vector<int>> grid_signs(int s, const std::vector<int>& js, const std::vector<Real>& points,
                                                const PrecisionContext& ctx, unsigned threads) {
  return parallel_map(
      points.size(),
      [&](std::size_t i) {
        const PotentialSpec spec = PotentialSpec::from_sqrt_lambda(s, points[i]);
        std::vector<int> out;
        for (int j : js) out.push_back(bracket_sign(wronskian_sign(spec, j, ctx).sign));
        return out;
      },
      threads);
}

}  // namespace detail

/// All sign-change cells of the Wronskian for `kind` on a grid over [lo, hi].
inline std::vector<Bracket> bracket_roots(int s, RootKind kind, const Real& lo, const Real& hi, double step,
                                          const PrecisionContext& ctx, unsigned threads = 0) {
  PotentialSpec::make(s, Real(1));
  detail::check_range(lo, hi, step);
  const std::vector<Real> points = detail::root_grid(lo, hi, step, ctx);
  const auto signs = detail::grid_signs(s, {wronskian_index(kind)}, points, ctx, threads);
  std::vector<Bracket> out;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (signs[i - 1][0] != signs[i][0]) out.push_back({points[i - 1], points[i]});
  }
  return out;
}

/// Shrinks a sign-change bracket until its half-width is below 10^-digits.
///
/// Each step tries an Illinois point; when a step fails to halve the bracket the
/// next one is a plain bisection.
inline RootRecord refine_root(int s, RootKind kind, const Bracket& bracket, int digits, const PrecisionContext& ctx) {
  if (digits < 1) throw ArgumentError("refine_root: digits must be positive");
  if (!(bracket.hi > bracket.lo) || !(bracket.lo > 0)) throw ArgumentError("refine_root: invalid bracket");
  const int j = wronskian_index(kind);
  mp::PrecisionScope scope(ctx.working_digits());
  auto eval = [&](const Real& x) { return wronskian_sign(PotentialSpec::from_sqrt_lambda(s, x), j, ctx); };

  Real lo = Real::with_digits(bracket.lo, ctx.working_digits());
  Real hi = Real::with_digits(bracket.hi, ctx.working_digits());
  WronskianSign f_lo = eval(lo);
  WronskianSign f_hi = eval(hi);
  int s_lo = detail::bracket_sign(f_lo.sign);
  const int s_hi = detail::bracket_sign(f_hi.sign);
  if (s_lo == s_hi) throw ArgumentError("refine_root: Wronskian has the same sign at both bracket ends");
  Real g_lo = f_lo.value;
  Real g_hi = f_hi.value;
  int kept = 0;  // +1: lo kept on the last step, -1: hi kept
  bool bisect = false;
  const Real tol = Real::pow10(-digits);

  while (!((hi - lo) / 2 < tol)) {
    const Real width = hi - lo;
    Real x = (lo + hi) / 2;
    if (!bisect && !g_lo.is_zero() && !g_hi.is_zero() && g_lo.sign() != g_hi.sign()) {
      Real secant = lo - g_lo * width / (g_hi - g_lo);
      const Real margin = width / 1024;
      if (secant > lo + margin && secant < hi - margin) x = std::move(secant);
    }
    const WronskianSign fx = eval(x);
    const int sx = detail::bracket_sign(fx.sign);
    if (sx == s_lo) {
      lo = x;
      g_lo = fx.value;
      if (kept == -1) g_hi /= 2;
      kept = -1;
    } else {
      hi = x;
      g_hi = fx.value;
      if (kept == 1) g_lo /= 2;
      kept = 1;
    }
    bisect = (hi - lo) > width / 2;
  }
  return {s, kind, 0, (lo + hi) / 2, (hi - lo) / 2};
}

/// The first `count` roots of each kind in `kinds`, in increasing sqrt(lambda), with
/// per-kind indices from 0. Scans in chunks of 15 up to 10 count + 20 (at most 100).
inline std::vector<RootRecord> zeros_poles_table(int s, const std::vector<RootKind>& kinds, int count, int digits,
                                                 const PrecisionContext& ctx, unsigned threads = 0) {
  PotentialSpec::make(s, Real(1));
  if (count < 1) throw ArgumentError("count must be at least 1");
  if (kinds.empty()) throw ArgumentError("no root kind requested");
  std::vector<int> js;
  for (RootKind k : kinds) js.push_back(wronskian_index(k));

  const double cap = std::min(kMaxSqrtLambda, 10.0 * count + 20.0);
  std::vector<std::vector<Bracket>> found(kinds.size());
  auto complete = [&] {
    return std::all_of(found.begin(), found.end(), [&](const auto& f) { return static_cast<int>(f.size()) >= count; });
  };
  double start = 0;
  while (!complete() && start < cap) {
    const double stop = std::min(start + kRootScanChunk, cap);
    const std::vector<Real> points = detail::root_grid(Real(start), Real(stop), kRootGridStep, ctx);
    const auto signs = detail::grid_signs(s, js, points, ctx, threads);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      for (std::size_t i = 1; i < points.size(); ++i) {
        if (signs[i - 1][k] != signs[i][k]) found[k].push_back({points[i - 1], points[i]});
      }
    }
    start = stop;
  }

  struct Task {
    std::size_t kind;
    int index;
    Bracket bracket;
  };
  std::vector<Task> tasks;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    const int n = std::min<int>(count, static_cast<int>(found[k].size()));
    for (int i = 0; i < n; ++i) tasks.push_back({k, i, found[k][static_cast<std::size_t>(i)]});
  }
  std::vector<RootRecord> records = parallel_map(
      tasks.size(),
      [&](std::size_t t) {
        RootRecord r = refine_root(s, kinds[tasks[t].kind], tasks[t].bracket, digits, ctx);
        r.index = tasks[t].index;
        return r;
      },
      threads);
  std::stable_sort(records.begin(), records.end(),
                   [](const RootRecord& a, const RootRecord& b) { return a.sqrt_lambda < b.sqrt_lambda; });
  if (!complete()) {
    throw RangeError("zeros_poles_table: fewer than " + std::to_string(count) + " roots of each kind below sqrt(lambda) = " +
                         std::to_string(static_cast<int>(cap)),
                     std::move(records));
  }
  return records;
}

inline std::vector<RootRecord> zeros_poles_table(int s, RootKind kind, int count, int digits,
                                                 const PrecisionContext& ctx, unsigned threads = 0) {
  return zeros_poles_table(s, std::vector<RootKind>{kind}, count, digits, ctx, threads);
}

/// Least-squares line through (n, sqrt(lambda_n)) for records of one s and one kind.
inline QuasiLinearFit fit_quasilinear(std::vector<RootRecord> records) {
  if (records.size() < 3) throw ArgumentError("fit_quasilinear: at least 3 records are required");
  for (const RootRecord& r : records) {
    if (r.kind != records.front().kind) throw ArgumentError("fit_quasilinear: records mix zeros and poles");
    if (r.s != records.front().s) throw ArgumentError("fit_quasilinear: records mix exponents s");
  }
  std::sort(records.begin(), records.end(), [](const RootRecord& a, const RootRecord& b) { return a.index < b.index; });
  const double m = static_cast<double>(records.size());
  double mean_x = 0, mean_y = 0;
  for (const RootRecord& r : records) {
    mean_x += r.index;
    mean_y += r.sqrt_lambda.to_double();
  }
  mean_x /= m;
  mean_y /= m;
  double sxy = 0, sxx = 0;
  for (const RootRecord& r : records) {
    const double dx = r.index - mean_x;
    sxy += dx * (r.sqrt_lambda.to_double() - mean_y);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw ArgumentError("fit_quasilinear: records share a single index");

  QuasiLinearFit fit;
  fit.s = records.front().s;
  fit.kind = records.front().kind;
  fit.slope_A = sxy / sxx;
  fit.line_intercept = mean_y - fit.slope_A * mean_x;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double y = records[i].sqrt_lambda.to_double();
    fit.intercepts_B.push_back(y - fit.slope_A * records[i].index);
    fit.residual = std::max(fit.residual, std::abs(y - (fit.line_intercept + fit.slope_A * records[i].index)));
    if (i > 0) fit.spacings.push_back(y - records[i - 1].sqrt_lambda.to_double());
  }
  fit.spacings_increasing = true;
  for (std::size_t i = 1; i < fit.spacings.size(); ++i) {
    if (!(fit.spacings[i] > fit.spacings[i - 1])) fit.spacings_increasing = false;
  }
  return fit;
}

}  // namespace ljscat
