#include <gtest/gtest.h>

#include "ljscat/acceptance.hpp"
#include "ljscat/scan.hpp"

using namespace ljscat;

namespace {

const PrecisionContext kCtx = PrecisionContext::for_target(15);

}  // namespace

TEST(Scan, SixHasSevenPolesAtPublishedPositions) {
  const auto rows = scan_scattering_length(6, Real("0.1", 40), Real(50), 499, kCtx);
  ASSERT_EQ(rows.size(), 500u);
  const Real step = (Real(50) - Real("0.1", 40)) / 499;
  const Real half_pi = Real::pi() / 2;
  std::vector<Real> poles;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) EXPECT_LT(rows[i - 1].sqrt_lambda, rows[i].sqrt_lambda);
    if (rows[i].pole) {
      EXPECT_FALSE(rows[i].a_over_r0.has_value());
      EXPECT_LT(abs(abs(rows[i].atan_a) - half_pi), Real("1e-25", 30));
      poles.push_back(rows[i].sqrt_lambda);
    } else {
      ASSERT_TRUE(rows[i].a_over_r0.has_value());
      EXPECT_LT(abs(rows[i].atan_a), half_pi);
      EXPECT_EQ(rows[i].atan_a, atan(*rows[i].a_over_r0));
    }
  }
  const auto& ref = reference_roots(6, RootKind::pole);
  ASSERT_EQ(poles.size(), 7u);
  for (std::size_t k = 0; k < poles.size(); ++k) {
    EXPECT_LE(abs(poles[k] - Real(ref[k], 40)), step) << k;
  }
}

TEST(Scan, SevenGridHitsExactZerosAndPoles) {
  const auto rows = scan_scattering_length(7, Real(1), Real(20), 19, kCtx);
  ASSERT_EQ(rows.size(), 20u);
  for (const auto& row : rows) {
    const long x = row.sqrt_lambda.to_long();
    if (x == 4 || x == 14) {
      ASSERT_TRUE(row.a_over_r0.has_value());
      EXPECT_LT(abs(*row.a_over_r0), Real("1e-6", 30));
    }
    EXPECT_EQ(row.pole, x == 6 || x == 16) << x;
  }
}

TEST(Scan, PoleSignIsTheBranchTheRowLiesOn) {
  const auto rows = scan_scattering_length(4, Real("0.5", 40), Real(20), 78, kCtx);
  int poles = 0;
  for (const auto& row : rows) {
    if (!row.pole) continue;
    ++poles;
    const Real a = scattering_length(PotentialSpec::from_sqrt_lambda(4, row.sqrt_lambda), kCtx).a_over_r0;
    EXPECT_EQ(row.atan_a.sign(), a.sign()) << row.sqrt_lambda;
  }
  EXPECT_EQ(poles, 6);
}

TEST(Scan, RejectsBadRanges) {
  EXPECT_THROW(scan_scattering_length(6, Real(0), Real(5), 10, kCtx), ArgumentError);
  EXPECT_THROW(scan_scattering_length(6, Real(5), Real(2), 10, kCtx), ArgumentError);
  EXPECT_THROW(scan_scattering_length(6, Real(1), Real(5), 0, kCtx), ArgumentError);
  EXPECT_THROW(scan_scattering_length(9, Real(1), Real(5), 10, kCtx), ArgumentError);
}

TEST(Scan, IndependentOfThreadCount) {
  const auto one = scan_scattering_length(5, Real("0.5", 40), Real(12), 23, kCtx, 1);
  const auto many = scan_scattering_length(5, Real("0.5", 40), Real(12), 23, kCtx, 3);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].pole, many[i].pole);
    EXPECT_EQ(one[i].atan_a.exact_key(), many[i].atan_a.exact_key());
  }
}
