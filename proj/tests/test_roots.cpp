#include <gtest/gtest.h>

#include "ljscat/acceptance.hpp"
#include "ljscat/oracle.hpp"
#include "ljscat/roots.hpp"
#include "test_util.hpp"

using namespace ljscat;

namespace {

const PrecisionContext kCtx = PrecisionContext::for_target(15);

Real dec(const char* text) { return Real(text, 40); }

void expect_table(int s, RootKind kind, int count, int digits, const std::vector<std::string>& expected) {
  const auto got = zeros_poles_table(s, kind, count, digits, kCtx);
  ASSERT_EQ(got.size(), static_cast<std::size_t>(count));
  const Real tol = Real::pow10(-digits);
  for (int i = 0; i < count; ++i) {
    const RootRecord& r = got[static_cast<std::size_t>(i)];
    EXPECT_EQ(r.index, i);
    EXPECT_EQ(r.kind, kind);
    EXPECT_EQ(r.s, s);
    EXPECT_LE(r.certified_err, tol);
    EXPECT_LE(abs(r.sqrt_lambda - dec(expected[static_cast<std::size_t>(i)].c_str())), tol + r.certified_err)
        << "s=" << s << " " << to_string(kind) << " #" << i << ": " << r.sqrt_lambda.to_fixed(digits + 2);
  }
}

}  // namespace

TEST(BracketRoots, FirstSixZero) {
  const auto b = bracket_roots(6, RootKind::zero, Real(0), Real(5), 0.25, kCtx);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_LT(b[0].lo, dec("2.944907"));
  EXPECT_GT(b[0].hi, dec("2.944907"));
}

TEST(BracketRoots, FirstFourPole) {
  const auto b = bracket_roots(4, RootKind::pole, Real(0), Real(3), 0.25, kCtx);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_LT(b[0].lo, dec("2.650141"));
  EXPECT_GT(b[0].hi, dec("2.650141"));
}

TEST(BracketRoots, NoSevenZeroBelowOne) {
  EXPECT_TRUE(bracket_roots(7, RootKind::zero, Real(0), Real(1), 0.25, kCtx).empty());
}

TEST(BracketRoots, BracketsAreAtMostOneStepWide) {
  for (const auto& b : bracket_roots(5, RootKind::pole, Real(0), Real(20), 0.25, kCtx)) {
    EXPECT_LE(b.hi - b.lo, dec("0.2500001"));
    EXPECT_GT(b.hi, b.lo);
  }
}

TEST(BracketRoots, RejectsBadRanges) {
  EXPECT_THROW(bracket_roots(6, RootKind::zero, Real(-1), Real(5), 0.25, kCtx), ArgumentError);
  EXPECT_THROW(bracket_roots(6, RootKind::zero, Real(5), Real(5), 0.25, kCtx), ArgumentError);
  EXPECT_THROW(bracket_roots(6, RootKind::zero, Real(0), Real(101), 0.25, kCtx), ArgumentError);
  EXPECT_THROW(bracket_roots(6, RootKind::zero, Real(0), Real(5), 0.5, kCtx), ArgumentError);
  EXPECT_THROW(bracket_roots(6, RootKind::zero, Real(0), Real(5), 0.0, kCtx), ArgumentError);
  EXPECT_THROW(bracket_roots(3, RootKind::zero, Real(0), Real(5), 0.25, kCtx), ArgumentError);
}

TEST(RefineRoot, SevenZeroIsExact) {
  const auto r = refine_root(7, RootKind::zero, {dec("3.9"), dec("4.2")}, 9, kCtx);
  EXPECT_LE(abs(r.sqrt_lambda - 4), Real::pow10(-9));
  EXPECT_LE(r.certified_err, Real::pow10(-9));
}

TEST(RefineRoot, SixPole) {
  const auto r = refine_root(6, RootKind::pole, {dec("4.6"), dec("4.85")}, 6, kCtx);
  EXPECT_LE(abs(r.sqrt_lambda - dec("4.728696")), Real::pow10(-6) + r.certified_err);
}

TEST(RefineRoot, LargeFourZero) {
  const auto r = refine_root(4, RootKind::zero, {dec("31.1"), dec("31.3")}, 6, kCtx);
  EXPECT_LE(abs(r.sqrt_lambda - dec("31.225862")), Real::pow10(-6) + r.certified_err);
}

TEST(RefineRoot, RejectsBracketWithoutSignChange) {
  EXPECT_THROW(refine_root(6, RootKind::zero, {dec("5"), dec("6")}, 6, kCtx), ArgumentError);
  EXPECT_THROW(refine_root(6, RootKind::zero, {dec("3"), dec("2")}, 6, kCtx), ArgumentError);
  EXPECT_THROW(refine_root(6, RootKind::zero, {dec("2"), dec("3")}, 0, kCtx), ArgumentError);
}

TEST(RefineRoot, SignChangesAcrossTheCertifiedInterval) {
  for (auto [s, kind, lo, hi] : {std::tuple{6, RootKind::zero, "2.75", "3.0"}, std::tuple{5, RootKind::pole, "3.5", "4.5"},
                                  std::tuple{4, RootKind::pole, "12.5", "12.75"}}) {
    const auto brackets = bracket_roots(s, kind, dec(lo), dec(hi), 0.25, kCtx);
    ASSERT_EQ(brackets.size(), 1u) << s;
    const auto r = refine_root(s, kind, brackets[0], 8, kCtx);
    const int j = wronskian_index(kind);
    // Widen by a factor 2 so the endpoints sit clearly off the root.
    const Real left = r.sqrt_lambda - 2 * r.certified_err - Real::pow10(-9);
    const Real right = r.sqrt_lambda + 2 * r.certified_err + Real::pow10(-9);
    const int sl = wronskian_sign(PotentialSpec::from_sqrt_lambda(s, left), j, kCtx).sign;
    const int sr = wronskian_sign(PotentialSpec::from_sqrt_lambda(s, right), j, kCtx).sign;
    EXPECT_EQ(sl * sr, -1) << "s=" << s << " " << to_string(kind);
  }
}

TEST(ZerosPolesTable, SevenZerosAreExact) { expect_table(7, RootKind::zero, 3, 9, {"4", "14", "24"}); }

TEST(ZerosPolesTable, SixZerosMatchPublishedColumn) {
  expect_table(6, RootKind::zero, 10, 6, reference_roots(6, RootKind::zero));
}

TEST(ZerosPolesTable, FourPolesMatchPublishedColumn) {
  expect_table(4, RootKind::pole, 10, 6, reference_roots(4, RootKind::pole));
}

TEST(ZerosPolesTable, SecondSixZeroIsConfirmedByIntegration) {
  // The scattering length changes sign between these two points by direct integration.
  const Real below = oracle_scattering_length(PotentialSpec::from_sqrt_lambda(6, dec("10.3074120")), kCtx);
  const Real above = oracle_scattering_length(PotentialSpec::from_sqrt_lambda(6, dec("10.3074128")), kCtx);
  EXPECT_GT(below, Real(0));
  EXPECT_LT(above, Real(0));
  const auto r = refine_root(6, RootKind::zero, {dec("10.25"), dec("10.5")}, 8, kCtx);
  EXPECT_GT(r.sqrt_lambda, dec("10.3074120"));
  EXPECT_LT(r.sqrt_lambda, dec("10.3074128"));
}

TEST(ZerosPolesTable, RecordsAreOrderedAndIndexedPerKind) {
  const auto got = zeros_poles_table(5, std::vector<RootKind>{RootKind::zero, RootKind::pole}, 4, 6, kCtx);
  ASSERT_EQ(got.size(), 8u);
  int zeros = 0, poles = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (i > 0) EXPECT_LT(got[i - 1].sqrt_lambda, got[i].sqrt_lambda);
    EXPECT_EQ(got[i].index, got[i].kind == RootKind::zero ? zeros++ : poles++);
  }
}

TEST(ZerosPolesTable, RangeErrorKeepsPartialResults) {
  try {
    zeros_poles_table(7, RootKind::zero, 11, 3, kCtx);
    FAIL() << "expected RangeError";
  } catch (const RangeError& e) {
    ASSERT_EQ(e.partial().size(), 10u);
    EXPECT_LE(abs(e.partial().back().sqrt_lambda - 94), Real::pow10(-3));
  }
}

TEST(ZerosPolesTable, RejectsBadArguments) {
  EXPECT_THROW(zeros_poles_table(6, RootKind::zero, 0, 6, kCtx), ArgumentError);
  EXPECT_THROW(zeros_poles_table(6, std::vector<RootKind>{}, 3, 6, kCtx), ArgumentError);
  EXPECT_THROW(zeros_poles_table(8, RootKind::zero, 3, 6, kCtx), ArgumentError);
}

TEST(ZerosPolesTable, ZerosAndPolesInterlace) {
  for (int s : {4, 6, 7}) {
    const auto got = zeros_poles_table(s, std::vector<RootKind>{RootKind::zero, RootKind::pole}, 6, 6, kCtx);
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].kind, i % 2 == 0 ? RootKind::zero : RootKind::pole) << "s=" << s << " #" << i;
    }
  }
}

TEST(ZerosPolesTable, IndependentOfThreadCount) {
  const auto one = zeros_poles_table(5, RootKind::zero, 3, 8, kCtx, 1);
  const auto many = zeros_poles_table(5, RootKind::zero, 3, 8, kCtx, 4);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(one[i].sqrt_lambda.exact_key(), many[i].sqrt_lambda.exact_key());
}

TEST(ZerosPolesTable, ZerosAreZerosOfTheIntegratedSolution) {
  const auto got = zeros_poles_table(5, RootKind::zero, 3, 10, kCtx);
  for (const auto& r : got) {
    EXPECT_LT(abs(oracle_scattering_length(PotentialSpec::from_sqrt_lambda(5, r.sqrt_lambda), kCtx)), Real("1e-7", 30))
        << r.sqrt_lambda;
  }
}

TEST(FitQuasilinear, SevenIsExactlyLinear) {
  for (auto [kind, intercept] : {std::pair{RootKind::zero, 4.0}, std::pair{RootKind::pole, 6.0}}) {
    const auto fit = fit_quasilinear(zeros_poles_table(7, kind, 10, 10, kCtx));
    EXPECT_NEAR(fit.slope_A, 10.0, 1e-6);
    EXPECT_NEAR(fit.line_intercept, intercept, 1e-6);
    ASSERT_EQ(fit.intercepts_B.size(), 10u);
    for (double b : fit.intercepts_B) EXPECT_NEAR(b, intercept, 1e-6);
    EXPECT_LT(fit.residual, 1e-6);
    ASSERT_EQ(fit.spacings.size(), 9u);
  }
}

TEST(FitQuasilinear, SixZeroSpacingsSettle) {
  const auto fit = fit_quasilinear(zeros_poles_table(6, RootKind::zero, 10, 8, kCtx));
  ASSERT_EQ(fit.spacings.size(), 9u);
  EXPECT_LT(std::abs(fit.spacings[8] - fit.spacings[7]), 1e-3);
  EXPECT_GT(fit.slope_A, 7.3);
  EXPECT_LT(fit.slope_A, 7.6);
}

TEST(FitQuasilinear, InterceptsAreConsistentWithTheLine) {
  const auto records = zeros_poles_table(4, RootKind::pole, 5, 8, kCtx);
  const auto fit = fit_quasilinear(records);
  double mean = 0;
  for (double b : fit.intercepts_B) mean += b;
  EXPECT_NEAR(mean / fit.intercepts_B.size(), fit.line_intercept, 1e-12);
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_NEAR(fit.intercepts_B[i] + fit.slope_A * records[i].index, records[i].sqrt_lambda.to_double(), 1e-12);
  }
}

TEST(FitQuasilinear, RejectsBadInput) {
  auto records = zeros_poles_table(7, RootKind::zero, 3, 4, kCtx);
  EXPECT_THROW(fit_quasilinear({records[0], records[1]}), ArgumentError);
  auto mixed = records;
  mixed[1].kind = RootKind::pole;
  EXPECT_THROW(fit_quasilinear(mixed), ArgumentError);
  auto other = records;
  other[2].s = 6;
  EXPECT_THROW(fit_quasilinear(other), ArgumentError);
  auto same = records;
  for (auto& r : same) r.index = 1;
  EXPECT_THROW(fit_quasilinear(same), ArgumentError);
}
