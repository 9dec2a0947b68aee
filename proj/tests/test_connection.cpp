#include <gtest/gtest.h>

#include "ljscat/connection.hpp"
#include "ljscat/oracle.hpp"
#include "test_util.hpp"

using namespace ljscat;
using testutil::rel_diff;

namespace {

const PrecisionContext kCtx = PrecisionContext::for_target(15);

PotentialSpec spec_of(int s, const char* lambda) { return PotentialSpec::make(s, Real(lambda, 80)); }
PotentialSpec at_root(int s, const char* sqrt_lambda) { return PotentialSpec::from_sqrt_lambda(s, Real(sqrt_lambda, 80)); }

}  // namespace

// As lambda -> 0 only b_{5q} ~ beta^-q and a_{10k,2} ~ lambda^k survive in products of
// order one, which leaves
//   sum_k (20k + 3) B_{2k} / A_k - sum_k B_{2k+1} / A_k  (k = 0 gives the bare 3),
// B_q = prod_{i<=q} (5i-2)(5i-3) / (10i), A_k = prod_{i<=k} 10i (10i+1).
Real free_limit_gamma_minus_one() {
  mp::PrecisionScope scope(60);
  auto f = [](long i) { return Real((5 * i - 2) * (5 * i - 3)) / (10 * i); };
  Real total(0), B(1), A(1);
  const Real eps = Real::pow10(-45);
  for (long k = 0; k < 200; ++k) {
    if (k > 0) {
      A *= 10 * k * (10 * k + 1);
      B *= f(2 * k - 1) * f(2 * k);
    }
    const Real even = (20 * k + 3) * B / A;
    const Real odd = B * f(2 * k + 1) / A;
    total += even - odd;
    if (abs(even) < eps && abs(odd) < eps) break;
  }
  return total;
}

TEST(GammaP, FreeLimitMatchesClosedSeries) {
  const Real limit = free_limit_gamma_minus_one();
  for (const char* lambda : {"1e-40", "1e-60"}) {
    const auto g = gamma_p(spec_of(6, lambda), 2, -1, kCtx);
    EXPECT_LT(abs(g.value - limit), Real("1e-25", 30)) << lambda << ": " << g.value;
    EXPECT_EQ(g.p, -1);
    EXPECT_EQ(g.j, 2);
    EXPECT_GE(g.terms_used, kNegligibleRun);
  }
  EXPECT_LT(abs(limit - Real("2.7315111163061689341", 30)), Real("1e-18", 30));
}

TEST(GammaP, StableUnderDoubledPrecision) {
  const auto spec = spec_of(6, "25");
  const auto lo = gamma_p(spec, 1, -20, kCtx);
  const auto hi = gamma_p(spec, 1, -20, escalate(kCtx));
  EXPECT_LT(rel_diff(lo.value, hi.value), kCtx.target_eps());
  EXPECT_LE(lo.est_err, lo.max_term);
}

TEST(GammaP, SevenOnlyMultiplesOfFiveContribute) {
  const auto spec = spec_of(7, "16");
  const long p = -15;
  const auto b = b_coeffs(spec, Branch::regular, 200, kCtx);
  const auto a = a_coeffs(spec, 2, 200 - p, kCtx);
  for (long m = 0; m < 200; ++m) {
    if (m % 5 != 0) ASSERT_TRUE(detail::gamma_term(*b, *a, p, m).value.is_zero()) << m;
  }
  EXPECT_NO_THROW(gamma_p(spec, 2, p, kCtx));
}

TEST(GammaP, RejectsBadSolutionIndex) { EXPECT_THROW(gamma_p(spec_of(6, "4"), 3, -10, kCtx), ArgumentError); }

TEST(Wronskian, SevenZeroOfW1AtSixteen) {
  const auto w = wronskian(spec_of(7, "16"), 1, kCtx);
  EXPECT_LT(abs(w.value), kCtx.target_eps());
  EXPECT_TRUE(w.at_floor);
}

TEST(Wronskian, SevenZeroOfW2AtThirtySix) {
  const auto w = wronskian(spec_of(7, "36"), 2, kCtx);
  EXPECT_LT(abs(w.value), kCtx.target_eps());
}

TEST(Wronskian, ExactRootNeedsAnEscalation) {
  EXPECT_THROW(wronskian(spec_of(7, "16"), 1, PrecisionContext::for_target(15, 0)), PrecisionExhausted);
}

TEST(Wronskian, IndependentOfHeavisideOrder) {
  const auto spec = spec_of(6, "100");
  const int n = default_heaviside_n(spec);
  EXPECT_EQ(n, 12);
  const auto w0 = wronskian_at(spec, 1, n, kCtx);
  const auto w2 = wronskian_at(spec, 1, n + 2, kCtx);
  EXPECT_LT(rel_diff(w0.value, w2.value), kCtx.target_eps());
  EXPECT_THROW(wronskian_at(spec, 1, 10, kCtx), ArgumentError);
}

TEST(Wronskian, ResultInvariants) {
  for (int s = 4; s <= 7; ++s) {
    for (const char* x : {"0.7", "3.3", "17.9", "48.2"}) {
      const auto spec = at_root(s, x);
      for (int j = 1; j <= 2; ++j) {
        const auto w = wronskian(spec, j, kCtx);
        mp::PrecisionScope scope(w.working_digits);
        EXPECT_GT(Real(w.n_used), sqrt(spec.lambda));
        EXPECT_LT(w.consistency_err, kCtx.target_eps() * max(Real(1), abs(w.value)));
        EXPECT_LE(w.consistency_err, kCtx.target_eps() * abs(w.value)) << "s=" << s << " x=" << x << " j=" << j;
        EXPECT_FALSE(w.at_floor);
      }
    }
  }
}

TEST(ScatteringLength, VanishesAtPublishedZeros) {
  EXPECT_LT(abs(scattering_length(at_root(6, "2.944907"), kCtx).a_over_r0), Real("1e-5", 30));
  EXPECT_LT(abs(scattering_length(at_root(4, "1.135708"), kCtx).a_over_r0), Real("1e-5", 30));
  EXPECT_LT(abs(scattering_length(at_root(7, "4"), kCtx).a_over_r0), kCtx.target_eps());
}

TEST(ScatteringLength, AtPoleIsReported) {
  EXPECT_THROW(scattering_length(at_root(7, "6"), kCtx), AtPole);
  EXPECT_THROW(scattering_length(at_root(6, "4.728696"), PrecisionContext::for_target(6)), AtPole);
}

TEST(ScatteringLength, QuotientOfWronskians) {
  const auto r = scattering_length(at_root(5, "12.5"), kCtx);
  mp::PrecisionScope scope(kCtx.working_digits());
  EXPECT_EQ(r.a_over_r0, r.w1.value / r.w2.value);
  EXPECT_LT(r.err_est, kCtx.target_eps() * abs(r.a_over_r0));
}

TEST(ScatteringLength, ScalesWithR0) {
  const auto spec = PotentialSpec::from_sqrt_lambda(6, Real(10), Real("3.5", 40));
  const auto r = scattering_length(spec, kCtx);
  mp::PrecisionScope scope(kCtx.working_digits());
  EXPECT_EQ(r.a(), r.a_over_r0 * Real("3.5", 40));
  EXPECT_LT(rel_diff(r.a_over_r0, scattering_length(at_root(6, "10"), kCtx).a_over_r0), kCtx.working_eps() * 10);
}

TEST(ScatteringLength, AgreesWithDirectIntegration) {
  for (auto [s, x] : {std::pair{6, "10"}, std::pair{7, "9"}, std::pair{4, "20.3"}, std::pair{5, "33.3"}}) {
    const auto spec = at_root(s, x);
    const Real c = scattering_length(spec, kCtx).a_over_r0;
    const Real o = oracle_scattering_length(spec, kCtx);
    EXPECT_LT(rel_diff(c, o), Real("1e-8", 30)) << "s=" << s << " x=" << x;
  }
}

TEST(ScatteringLength, WeakPotentialSanity) {
  for (int s = 4; s <= 7; ++s) {
    const auto spec = spec_of(s, "1e-4");
    const Real c = scattering_length(spec, kCtx).a_over_r0;
    const Real o = oracle_scattering_length(spec, kCtx);
    EXPECT_LT(abs(c), Real("0.5", 30));
    EXPECT_EQ(c.sign(), o.sign());
  }
}
