/// \file scan.hpp
/// \brief Scattering length on a uniform sqrt(lambda) grid, with poles marked.
///
/// Each sign change of W[w_2, w_reg] between neighbouring rows marks the row nearer
/// to the (linearly interpolated) crossing as a pole row. Rows that sit on a pole to
/// working precision are pole rows as well.

#pragma once

#include <optional>
#include <vector>

#include "ljscat/connection.hpp"
#include "ljscat/errors.hpp"
#include "ljscat/mpkernel.hpp"
#include "ljscat/parallel.hpp"
#include "ljscat/potential.hpp"

namespace ljscat {

struct ScanRow {
  Real sqrt_lambda;
  /// Empty on pole rows.
  std::optional<Real> a_over_r0;
  /// atan(a / r0); +-pi/2 on pole rows, signed by the branch the row lies on.
  Real atan_a;
  bool pole = false;
};

namespace detail {

struct ScanPoint {
  Real x;
  std::optional<Real> a;
  std::optional<Real> w2;
};

}  // namespace detail

/// `steps + 1` rows at lo + i (hi - lo) / steps.
inline std::vector<ScanRow> scan_scattering_length(int s, const Real& lo, const Real& hi, int steps,
                                                   const PrecisionContext& ctx, unsigned threads = 0) {
  PotentialSpec::make(s, Real(1));
  if (!(lo > 0) || !(hi > lo) || !hi.is_finite()) throw ArgumentError("scan range must satisfy 0 < min < max");
  if (steps < 1) throw ArgumentError("scan needs at least one step");
  mp::PrecisionScope scope(ctx.working_digits());
  const Real width = hi - lo;

  std::vector<detail::ScanPoint> points = parallel_map(
      static_cast<std::size_t>(steps) + 1,
      [&](std::size_t i) {
        mp::PrecisionScope inner(ctx.working_digits());
        detail::ScanPoint p;
        p.x = i == static_cast<std::size_t>(steps) ? Real::with_digits(hi, ctx.working_digits())
                                                    : lo + width * static_cast<long>(i) / steps;
        try {
          ScatteringResult r = scattering_length(PotentialSpec::from_sqrt_lambda(s, p.x), ctx);
          p.a = std::move(r.a_over_r0);
          p.w2 = std::move(r.w2.value);
        } catch (const AtPole&) {
        }
        return p;
      },
      threads);

  std::vector<ScanRow> rows(points.size());
  const Real half_pi = Real::pi() / 2;
  for (std::size_t i = 0; i < points.size(); ++i) {
    rows[i].sqrt_lambda = points[i].x;
    if (points[i].a) {
      rows[i].a_over_r0 = points[i].a;
      rows[i].atan_a = atan(*points[i].a);
    } else {
      rows[i].pole = true;
      // Approached from below: the branch of the previous row.
      const int sign = i > 0 && points[i - 1].a && points[i - 1].a->sign() < 0 ? -1 : 1;
      rows[i].atan_a = sign * half_pi;
    }
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& left = points[i].w2;
    const auto& right = points[i + 1].w2;
    if (!left || !right || left->sign() == right->sign()) continue;
    const Real t = *left / (*left - *right);
    const std::size_t k = t < Real(1) / 2 ? i : i + 1;
    if (rows[k].pole) continue;
    rows[k].pole = true;
    rows[k].atan_a = rows[k].a_over_r0->sign() < 0 ? -half_pi : half_pi;
    rows[k].a_over_r0.reset();
  }
  return rows;
}

}  // namespace ljscat
