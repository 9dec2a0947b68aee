/// \file series.hpp
/// \brief Solutions of the zero-energy radial equation  z^2 w'' = lambda (z^-10 - z^{2-s}) w.
///
/// Two convergent solutions at infinity,
///   w_j(z) = z^{nu_j} sum_n a_{n,j} z^{-n},   nu_1 = 1, nu_2 = 0,
/// with a_{n,j} (n - nu_j)(n + 1 - nu_j) = lambda (a_{n-10,j} - a_{n-s+2,j}),
/// and the two formal (Thome) solutions at the origin,
///   w(z) ~ exp(beta z^-5 / 5) z^mu sum_n b_n z^n,   beta = -+sqrt(lambda).
///
/// Coefficients with negative index are zero in both recurrences.

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "ljscat/errors.hpp"
#include "ljscat/mpkernel.hpp"
#include "ljscat/potential.hpp"

namespace ljscat {

enum class Branch { regular, irregular };

/// a_{0..N,j} for one potential.
struct SeriesTabulation {
  PotentialSpec spec;
  int j = 1;
  int nu = 1;
  std::vector<Real> coeffs;

  long size() const { return static_cast<long>(coeffs.size()); }
};

/// b_{0..N} of the regular or irregular Thome solution for one potential.
struct ThomeTabulation {
  PotentialSpec spec;
  Branch branch = Branch::regular;
  Real beta;
  Real mu;
  std::vector<Real> coeffs;

  long size() const { return static_cast<long>(coeffs.size()); }
};

inline int nu_of(int j) {
  if (j != 1 && j != 2) throw ArgumentError("solution index j must be 1 or 2");
  return j == 1 ? 1 : 0;
}

/// Exponent mu of z at the origin: 3, or 3 + beta/2 in the exactly solvable s = 7 case.
inline Real thome_mu(int s, const Real& beta) { return s == 7 ? 3 + beta / 2 : Real(3); }

namespace detail {

inline void extend_a(std::vector<Real>& c, const Real& lambda, int s, int nu, long last) {
  c.reserve(static_cast<std::size_t>(last + 1));
  for (long n = static_cast<long>(c.size()); n <= last; ++n) {
    if (n == 0) {
      c.emplace_back(1);
      continue;
    }
    const long denom = (n - nu) * (n + 1 - nu);
    if (denom == 0) {  // (n, j) = (1, 1): a_{1,1} = 0
      c.emplace_back(0);
      continue;
    }
    const long i_rep = n - 10;
    const long i_att = n - s + 2;
    Real num = i_rep >= 0 ? c[static_cast<std::size_t>(i_rep)] : Real(0);
    if (i_att >= 0) num -= c[static_cast<std::size_t>(i_att)];
    if (num.is_zero()) {
      c.push_back(std::move(num));
      continue;
    }
    num *= lambda;
    num /= denom;
    c.push_back(std::move(num));
  }
}

inline void extend_b(std::vector<Real>& c, const Real& lambda, const Real& beta, int s, long last) {
  c.reserve(static_cast<std::size_t>(last + 1));
  const Real half_beta = beta / 2;
  for (long n = static_cast<long>(c.size()); n <= last; ++n) {
    if (n == 0) {
      c.emplace_back(1);
      continue;
    }
    Real num(0);
    if (s == 7) {
      if (n >= 5 && !c[static_cast<std::size_t>(n - 5)].is_zero()) {
        num = (n - 2 + half_beta) * (n - 3 + half_beta) * c[static_cast<std::size_t>(n - 5)];
      }
    } else {
      const long i_att = n + s - 7;
      if (i_att >= 0) num = lambda * c[static_cast<std::size_t>(i_att)];
      if (n >= 5) num += static_cast<long>((n - 2) * (n - 3)) * c[static_cast<std::size_t>(n - 5)];
    }
    if (!num.is_zero()) {
      num /= beta;
      num /= 2 * n;
    }
    c.push_back(std::move(num));
  }
}

/// Tabulations keyed by (s, lambda, series kind, working digits), extended lazily.
///
/// Entries are immutable once published; an extension publishes a new, longer entry.
/// Concurrent builders of the same key may duplicate work but produce identical values.
class CoefficientCache {
 public:
  static constexpr std::size_t kMaxEntries = 512;

  std::shared_ptr<const SeriesTabulation> a(const PotentialSpec& spec, int j, long last, int digits) {
    const Key key{spec.s, spec.lambda.exact_key(), j, digits};
    std::shared_ptr<const SeriesTabulation> found = lookup(a_, key);
    if (found && found->size() > last) return found;
    mp::PrecisionScope scope(digits);
    auto tab = std::make_shared<SeriesTabulation>();
    tab->spec = spec;
    tab->j = j;
    tab->nu = nu_of(j);
    if (found) tab->coeffs = found->coeffs;
    extend_a(tab->coeffs, Real::with_digits(spec.lambda, digits), spec.s, tab->nu, grow(found ? found->size() : 0, last));
    std::shared_ptr<const SeriesTabulation> result = std::move(tab);
    publish(a_, key, result);
    return result;
  }

  std::shared_ptr<const ThomeTabulation> b(const PotentialSpec& spec, Branch branch, long last, int digits) {
    const Key key{spec.s, spec.lambda.exact_key(), branch == Branch::regular ? 0 : 1, digits};
    std::shared_ptr<const ThomeTabulation> found = lookup(b_, key);
    if (found && found->size() > last) return found;
    mp::PrecisionScope scope(digits);
    auto tab = std::make_shared<ThomeTabulation>();
    tab->spec = spec;
    tab->branch = branch;
    const Real lambda = Real::with_digits(spec.lambda, digits);
    const Real root = sqrt(lambda);
    tab->beta = branch == Branch::regular ? -root : root;
    tab->mu = thome_mu(spec.s, tab->beta);
    if (found) tab->coeffs = found->coeffs;
    extend_b(tab->coeffs, lambda, tab->beta, spec.s, grow(found ? found->size() : 0, last));
    std::shared_ptr<const ThomeTabulation> result = std::move(tab);
    publish(b_, key, result);
    return result;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    a_.clear();
    b_.clear();
  }

  std::size_t entries() const {
    std::shared_lock lock(mutex_);
    return a_.size() + b_.size();
  }

 private:
  using Key = std::tuple<int, std::string, int, int>;

  // Extensions at least double the length so repeated growth stays linear overall.
  static long grow(long have, long last) { return std::max(last, 2 * have - 1); }

  template <class T>
  std::shared_ptr<const T> lookup(const std::map<Key, std::shared_ptr<const T>>& m, const Key& key) const {
    std::shared_lock lock(mutex_);
    auto it = m.find(key);
    return it == m.end() ? nullptr : it->second;
  }

  template <class T>
  void publish(std::map<Key, std::shared_ptr<const T>>& m, const Key& key, const std::shared_ptr<const T>& value) {
    std::unique_lock lock(mutex_);
    if (a_.size() + b_.size() >= kMaxEntries) {
      a_.clear();
      b_.clear();
    }
    auto& slot = m[key];
    if (!slot || slot->size() < value->size()) slot = value;
  }

  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const SeriesTabulation>> a_;
  std::map<Key, std::shared_ptr<const ThomeTabulation>> b_;
};

inline CoefficientCache& coefficient_cache() {
  static CoefficientCache cache;
  return cache;
}

}  // namespace detail

/// a_{n,j}, n = 0..N, at the context's working precision.
inline std::shared_ptr<const SeriesTabulation> a_coeffs(const PotentialSpec& spec, int j, long N,
                                                        const PrecisionContext& ctx) {
  nu_of(j);
  if (N < 0) throw ArgumentError("coefficient count must be non-negative");
  return detail::coefficient_cache().a(spec, j, N, ctx.working_digits());
}

/// b_n, n = 0..N, of the requested Thome branch at the context's working precision.
inline std::shared_ptr<const ThomeTabulation> b_coeffs(const PotentialSpec& spec, Branch branch, long N,
                                                       const PrecisionContext& ctx) {
  if (N < 0) throw ArgumentError("coefficient count must be non-negative");
  return detail::coefficient_cache().b(spec, branch, N, ctx.working_digits());
}

/// Value and first two z-derivatives of a basic solution.
struct SolutionValue {
  Real value;
  Real derivative;
  Real second_derivative;
  long terms = 0;
};

inline constexpr long kDefaultSeriesTermBudget = 100000;
inline constexpr int kNegligibleRun = 25;

/// Evaluates w_j and its derivatives at z >= 1.
///
/// Summation stops after 25 consecutive terms that are each below
/// 10^-working_digits relative to the running sums.
inline SolutionValue eval_w(const PotentialSpec& spec, int j, const Real& z, const PrecisionContext& ctx,
                            long max_terms = kDefaultSeriesTermBudget) {
  const int nu = nu_of(j);
  if (!(z >= 1)) throw ArgumentError("eval_w requires z >= 1");
  mp::PrecisionScope scope(ctx.working_digits());
  const Real zz = Real::with_digits(z, ctx.working_digits());
  const Real inv = 1 / zz;
  const Real eps = ctx.working_eps();

  long available = 256;
  auto tab = a_coeffs(spec, j, available, ctx);
  Real power = nu == 1 ? zz : Real(1);  // z^{nu - n}
  Real sum(0), d1(0), d2(0);
  int run = 0;
  for (long n = 0; n < max_terms; ++n) {
    if (n > available) {
      available *= 2;
      tab = a_coeffs(spec, j, available, ctx);
    }
    const Real& a = tab->coeffs[static_cast<std::size_t>(n)];
    bool negligible = true;
    if (!a.is_zero()) {
      const long e = nu - n;
      Real t = a * power;
      Real dt = t * e * inv;
      Real d2t = dt * (e - 1) * inv;
      sum += t;
      d1 += dt;
      d2 += d2t;
      negligible = abs(t) <= eps * abs(sum) && abs(dt) <= eps * abs(d1) && abs(d2t) <= eps * abs(d2);
    }
    run = negligible ? run + 1 : 0;
    if (run >= kNegligibleRun) return {sum, d1, d2, n + 1};
    power *= inv;
  }
  throw TermBudgetExceeded("eval_w: series for w_" + std::to_string(j) + " did not converge within " +
                               std::to_string(max_terms) + " terms",
                           max_terms);
}

struct ThomeLogDerivative {
  Real logderiv;
  /// Smallest omitted term relative to the truncated sum.
  Real trunc_err;
  long terms = 0;
};

/// Logarithmic derivative of the regular Thome solution at 0 < z < 1:
///   -beta z^-6 + mu / z + (sum n b_n z^{n-1}) / (sum b_n z^n),
/// with the asymptotic sum cut just before its smallest term.
///
/// Throws ZTooLarge when the smallest term exceeds `tolerance` relative to the sum
/// (default 10^-target_digits).
inline ThomeLogDerivative thome_logderiv(const PotentialSpec& spec, const Real& z, const PrecisionContext& ctx,
                                         const Real* tolerance = nullptr) {
  if (!(z > 0) || !(z < 1)) throw ArgumentError("thome_logderiv requires 0 < z < 1");
  mp::PrecisionScope scope(ctx.working_digits());
  const Real zz = Real::with_digits(z, ctx.working_digits());
  const Real lambda = Real::with_digits(spec.lambda, ctx.working_digits());
  const Real exponent = sqrt(lambda) * pow(zz, -5L) / 5;

  // The terms shrink until n ~ 10 * exponent, then grow factorially.
  const double guess = std::min(10.0 * exponent.to_double() + 60.0, 20000.0);
  const long window = static_cast<long>(guess);
  auto tab = b_coeffs(spec, Branch::regular, window, ctx);

  std::vector<Real> terms;
  terms.reserve(static_cast<std::size_t>(window + 1));
  Real power(1);
  long smallest = -1;
  for (long n = 0; n <= window; ++n) {
    terms.push_back(tab->coeffs[static_cast<std::size_t>(n)] * power);
    if (n >= 1 && !terms.back().is_zero() &&
        (smallest < 0 || abs(terms.back()) < abs(terms[static_cast<std::size_t>(smallest)]))) {
      smallest = n;
    }
    power *= zz;
  }
  const long stop = smallest < 0 ? window + 1 : smallest;
  Real sum(0), deriv(0);
  for (long n = 0; n < stop; ++n) {
    const Real& t = terms[static_cast<std::size_t>(n)];
    if (t.is_zero()) continue;
    sum += t;
    deriv += t * n;
  }
  deriv /= zz;
  const Real err = smallest < 0 ? Real(0) : abs(terms[static_cast<std::size_t>(smallest)]) / abs(sum);
  const Real tol = tolerance ? *tolerance : ctx.target_eps();
  if (err > tol) {
    throw ZTooLarge("thome_logderiv: smallest term " + err.to_scientific(3) + " exceeds tolerance " +
                    tol.to_scientific(3) + " at z = " + zz.to_scientific(6));
  }
  const Real logderiv = -tab->beta * pow(zz, -6L) + tab->mu / zz + deriv / sum;
  return {logderiv, err, stop};
}

}  // namespace ljscat
