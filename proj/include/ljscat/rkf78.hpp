/// \file rkf78.hpp
/// \brief Embedded Runge-Kutta-Fehlberg 7(8) stepper with adaptive step control,
/// generic over the scalar type.
///
/// The eighth-order solution is propagated; the difference to the seventh-order one,
/// 41/840 (k1 + k11 - k12 - k13) h, is the local error estimate. The error norm is
/// relative to |y| + |h y'|, so a linear problem scaled by a constant takes exactly
/// the same steps.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>

#include "ljscat/errors.hpp"

namespace ljscat {

template <class Scalar>
struct Rkf78Tableau {
  static constexpr int kStages = 13;
  std::array<Scalar, kStages> c;
  std::array<std::array<Scalar, kStages>, kStages> a;
  std::array<Scalar, kStages> b8;
  Scalar err_weight;  // 41/840

  Rkf78Tableau() {
    auto q = [](long num, long den) { return Scalar(num) / Scalar(den); };
    for (auto& row : a) row.fill(Scalar(0));
    c = {Scalar(0), q(2, 27), q(1, 9), q(1, 6), q(5, 12), q(1, 2), q(5, 6), q(1, 6), q(2, 3), q(1, 3), Scalar(1),
         Scalar(0), Scalar(1)};
    a[1][0] = q(2, 27);
    a[2][0] = q(1, 36);
    a[2][1] = q(1, 12);
    a[3][0] = q(1, 24);
    a[3][2] = q(1, 8);
    a[4][0] = q(5, 12);
    a[4][2] = q(-25, 16);
    a[4][3] = q(25, 16);
    a[5][0] = q(1, 20);
    a[5][3] = q(1, 4);
    a[5][4] = q(1, 5);
    a[6][0] = q(-25, 108);
    a[6][3] = q(125, 108);
    a[6][4] = q(-65, 27);
    a[6][5] = q(125, 54);
    a[7][0] = q(31, 300);
    a[7][4] = q(61, 225);
    a[7][5] = q(-2, 9);
    a[7][6] = q(13, 900);
    a[8][0] = Scalar(2);
    a[8][3] = q(-53, 6);
    a[8][4] = q(704, 45);
    a[8][5] = q(-107, 9);
    a[8][6] = q(67, 90);
    a[8][7] = Scalar(3);
    a[9][0] = q(-91, 108);
    a[9][3] = q(23, 108);
    a[9][4] = q(-976, 135);
    a[9][5] = q(311, 54);
    a[9][6] = q(-19, 60);
    a[9][7] = q(17, 6);
    a[9][8] = q(-1, 12);
    a[10][0] = q(2383, 4100);
    a[10][3] = q(-341, 164);
    a[10][4] = q(4496, 1025);
    a[10][5] = q(-301, 82);
    a[10][6] = q(2133, 4100);
    a[10][7] = q(45, 82);
    a[10][8] = q(45, 164);
    a[10][9] = q(18, 41);
    a[11][0] = q(3, 205);
    a[11][5] = q(-6, 41);
    a[11][6] = q(-3, 205);
    a[11][7] = q(-3, 41);
    a[11][8] = q(3, 41);
    a[11][9] = q(6, 41);
    a[12][0] = q(-1777, 4100);
    a[12][3] = q(-341, 164);
    a[12][4] = q(4496, 1025);
    a[12][5] = q(-289, 82);
    a[12][6] = q(2193, 4100);
    a[12][7] = q(51, 82);
    a[12][8] = q(33, 164);
    a[12][9] = q(12, 41);
    a[12][11] = Scalar(1);
    b8.fill(Scalar(0));
    b8[5] = q(34, 105);
    b8[6] = q(9, 35);
    b8[7] = q(9, 35);
    b8[8] = q(9, 280);
    b8[9] = q(9, 280);
    b8[11] = q(41, 840);
    b8[12] = q(41, 840);
    err_weight = q(41, 840);
  }
};

struct Rkf78Stats {
  long accepted = 0;
  long rejected = 0;
};

/// Integrates y' = rhs(t, y) from t0 to t1 (t1 > t0) in place.
///
/// `rhs(t, y, dydt)` fills dydt. `tol` bounds the local error per step relative to
/// |y| + |h y'|. `h` carries the step size in and out so consecutive legs continue smoothly.
template <class Scalar, std::size_t N, class Rhs>
Rkf78Stats rkf78_integrate(Rhs&& rhs, Scalar t0, std::array<Scalar, N>& y, const Scalar& t1, const Scalar& tol,
                           Scalar& h, long max_steps = 1000000) {
  using std::abs;
  using std::max;
  using std::min;
  using std::pow;
  const Rkf78Tableau<Scalar> tableau;  // coefficients at the current precision
  constexpr int S = Rkf78Tableau<Scalar>::kStages;

  Rkf78Stats stats;
  std::array<std::array<Scalar, N>, S> k;
  std::array<Scalar, N> stage, ynew;
  Scalar t = t0;
  if (!(h > 0)) h = (t1 - t0) / 100;
  const Scalar min_step = (t1 - t0) * tol * tol;

  while (t < t1) {
    if (stats.accepted + stats.rejected >= max_steps) {
      throw StiffnessError("rkf78: step budget of " + std::to_string(max_steps) + " exhausted");
    }
    const bool last = !(t + h < t1);
    const Scalar step = last ? Scalar(t1 - t) : h;
    rhs(t, y, k[0]);
    for (int i = 1; i < S; ++i) {
      for (std::size_t d = 0; d < N; ++d) {
        Scalar acc(0);
        for (int m = 0; m < i; ++m) {
          if (!(tableau.a[i][m] == 0)) acc += tableau.a[i][m] * k[m][d];
        }
        stage[d] = y[d] + step * acc;
      }
      rhs(t + tableau.c[i] * step, stage, k[i]);
    }
    Scalar err_ratio(0);
    for (std::size_t d = 0; d < N; ++d) {
      Scalar acc(0);
      for (int m = 0; m < S; ++m) {
        if (!(tableau.b8[m] == 0)) acc += tableau.b8[m] * k[m][d];
      }
      ynew[d] = y[d] + step * acc;
      const Scalar err = abs(tableau.err_weight * step * (k[0][d] + k[10][d] - k[11][d] - k[12][d]));
      const Scalar sc = max(abs(y[d]), abs(ynew[d])) + abs(step * k[0][d]);
      if (sc > 0) {
        const Scalar r = err / sc;
        if (r > err_ratio) err_ratio = r;
      }
    }
    // Step factor 0.9 (tol/err)^(1/8), limited to [0.2, 4].
    Scalar factor(4);
    if (err_ratio > 0) {
      factor = Scalar(9) / 10 * pow(tol / err_ratio, Scalar(1) / 8);
      factor = min(max(factor, Scalar(1) / 5), Scalar(4));
    }
    if (err_ratio <= tol) {
      t = last ? Scalar(t1) : Scalar(t + step);
      y = ynew;
      ++stats.accepted;
      if (!last || factor < 1) h = step * factor;
    } else {
      ++stats.rejected;
      h = step * factor;
      if (h < min_step) throw StiffnessError("rkf78: step size underflow");
    }
  }
  return stats;
}

}  // namespace ljscat
