/// \file acceptance.hpp
/// \brief The self-validation suite: one pass/fail verdict per acceptance criterion.

#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ljscat/connection.hpp"
#include "ljscat/oracle.hpp"
#include "ljscat/roots.hpp"
#include "ljscat/scan.hpp"
#include "ljscat/series.hpp"

namespace ljscat {

/// Published sqrt(lambda) of the first ten zeros (or poles) for s = 4, 6, 7, to six decimals.
inline const std::vector<std::string>& reference_roots(int s, RootKind kind) {
  static const std::map<std::pair<int, RootKind>, std::vector<std::string>> table = {
      {{4, RootKind::zero},
       {"1.135708", "4.281230", "7.627058", "10.991652", "14.361060", "17.732554", "21.105133", "24.478348",
        "27.851968", "31.225862"}},
      {{6, RootKind::zero},
       {"2.944907", "10.307414", "17.758560", "25.220363", "32.685259", "40.151469", "47.618360", "55.085650",
        "62.553194", "70.020910"}},
      {{7, RootKind::zero}, {"4", "14", "24", "34", "44", "54", "64", "74", "84", "94"}},
      {{4, RootKind::pole},
       {"2.650141", "5.949138", "9.308435", "12.675992", "16.046629", "19.418744", "22.791679", "26.165118",
        "29.538887", "32.912885"}},
      {{6, RootKind::pole},
       {"4.728696", "12.165518", "19.622908", "27.086171", "34.551611", "42.018080", "49.485114", "56.952491",
        "64.420092", "71.887847"}},
      {{7, RootKind::pole}, {"6", "16", "26", "36", "46", "56", "66", "76", "86", "96"}},
  };
  const auto it = table.find({s, kind});
  if (it == table.end()) throw ArgumentError("no reference table for s = " + std::to_string(s));
  return it->second;
}

enum class AcceptanceLevel { quick, full };

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  AcceptanceLevel level = AcceptanceLevel::full;
  unsigned threads = 0;
};

/// "PASS [3] n-independence (1.2 s): ..." style line.
inline std::string format_criterion(const CriterionResult& r) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << r.seconds << " s): " << r.detail;
  return os.str();
}

namespace detail {

class AcceptanceRun {
 public:
  explicit AcceptanceRun(const AcceptanceOptions& opt) : opt_(opt) {}

  bool full() const { return opt_.level == AcceptanceLevel::full; }

  /// Roots of one kind, cached across criteria; certified to 10^-digits.
  const std::vector<RootRecord>& roots(int s, RootKind kind, int count, int digits) {
    auto& slot = roots_[{s, static_cast<int>(kind), digits}];
    if (static_cast<int>(slot.size()) < count) {
      slot = zeros_poles_table(s, kind, count, digits, PrecisionContext::for_target(15), opt_.threads);
    }
    return slot;
  }

  CriterionResult table_reproduction() {
    CriterionResult r{1, "table reproduction", true, "", 0};
    const int count = full() ? 10 : 1;
    int checked = 0;
    std::ostringstream bad;
    for (int s : {4, 6}) {
      for (RootKind kind : {RootKind::zero, RootKind::pole}) {
        const auto& got = roots(s, kind, count, 8);
        const auto& ref = reference_roots(s, kind);
        for (int i = 0; i < count; ++i) {
          const RootRecord& rec = got[static_cast<std::size_t>(i)];
          const Real diff = abs(rec.sqrt_lambda - Real(ref[static_cast<std::size_t>(i)], 30));
          ++checked;
          if (!(diff + rec.certified_err <= Real("1e-6", 30))) {
            r.pass = false;
            bad << " s=" << s << " " << to_string(kind) << " " << i << ": " << rec.sqrt_lambda.to_fixed(8) << " vs "
                << ref[static_cast<std::size_t>(i)] << " (off by " << diff.to_scientific(2) << ");";
          }
        }
      }
    }
    r.detail = std::to_string(checked) + " entries checked against the published tables to 1e-6" +
               (r.pass ? "" : "; mismatches:" + bad.str());
    return r;
  }

  CriterionResult s7_exactness() {
    CriterionResult r{2, "s=7 exactness", true, "", 0};
    const int count = full() ? 10 : 3;
    Real worst(0);
    for (RootKind kind : {RootKind::zero, RootKind::pole}) {
      const auto& got = roots(7, kind, count, 10);
      for (int i = 0; i < count; ++i) {
        const long exact = (kind == RootKind::zero ? 4 : 6) + 10L * i;
        const RootRecord& rec = got[static_cast<std::size_t>(i)];
        const Real dev = abs(rec.sqrt_lambda - exact) + rec.certified_err;
        if (dev > worst) worst = dev;
      }
    }
    r.pass = worst <= Real("1e-9", 30);
    r.detail = std::to_string(2 * count) + " roots, largest |sqrt(lambda) - exact| + err = " + worst.to_scientific(2) +
               " (limit 1e-9)";
    return r;
  }

  /// Random (s, sqrt(lambda)) with sqrt(lambda) in (0.5, 50) on a 1e-6 lattice.
  std::vector<std::pair<int, Real>> random_points(int count, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, Real>> out;
    for (int i = 0; i < count; ++i) {
      const int s = 4 + static_cast<int>(rng() % 4);
      const long micro = 500001 + static_cast<long>(rng() % 49499999);
      out.emplace_back(s, Real::with_digits(Real(micro), 40) / 1000000);
    }
    return out;
  }

  CriterionResult n_independence() {
    CriterionResult r{3, "n-independence", true, "", 0};
    const auto points = random_points(full() ? 20 : 5, 20240601);
    const auto ctx = PrecisionContext::for_target(15);
    const auto rel = parallel_map(
        points.size(),
        [&](std::size_t i) {
          const PotentialSpec spec = PotentialSpec::from_sqrt_lambda(points[i].first, points[i].second);
          Real worst(0);
          for (int j : {1, 2}) {
            const WronskianResult w = wronskian(spec, j, ctx);
            mp::PrecisionScope scope(w.working_digits);
            const Real e = w.value.is_zero() ? Real(1) : w.consistency_err / abs(w.value);
            if (w.at_floor || e > worst) worst = w.at_floor ? Real(1) : e;
          }
          return worst;
        },
        opt_.threads);
    Real worst(0);
    std::size_t at = 0;
    for (std::size_t i = 0; i < rel.size(); ++i) {
      if (rel[i] > worst) {
        worst = rel[i];
        at = i;
      }
    }
    r.pass = worst <= Real("1e-15", 30);
    r.detail = std::to_string(points.size()) + " random points, largest |W(n) - W(n+1)| / |W(n)| = " +
               worst.to_scientific(2) + " at s=" + std::to_string(points[at].first) +
               ", sqrt(lambda)=" + points[at].second.to_fixed(6) + " (limit 1e-15)";
    return r;
  }

  CriterionResult cross_method() {
    CriterionResult r{4, "cross-method agreement", true, "", 0};
    // At least 0.5 from every published zero and pole.
    std::vector<std::pair<int, std::string>> grid = {
        {4, "0.6"}, {4, "3.4"}, {4, "8.5"}, {4, "20.3"}, {6, "1.5"}, {6, "7.5"},
        {6, "14.9"}, {6, "45"}, {7, "2"}, {7, "9"}, {7, "20"}, {7, "39.5"},
    };
    if (!full()) grid = {{4, "3.4"}, {6, "7.5"}, {7, "9"}, {6, "45"}};
    const auto ctx = PrecisionContext::for_target(15);
    const auto rel = parallel_map(
        grid.size(),
        [&](std::size_t i) {
          const PotentialSpec spec = PotentialSpec::from_sqrt_lambda(grid[i].first, Real(grid[i].second, 40));
          const Real c = scattering_length(spec, ctx).a_over_r0;
          const Real o = oracle_scattering_length(spec, ctx);
          mp::PrecisionScope scope(ctx.working_digits());
          return Real(abs(c - o) / abs(o));
        },
        opt_.threads);
    Real worst(0);
    for (const Real& e : rel) worst = max(worst, e);
    r.pass = worst <= Real("1e-8", 30);
    r.detail = std::to_string(grid.size()) + " points, largest relative difference " + worst.to_scientific(2) +
               " (limit 1e-8)";
    return r;
  }

  CriterionResult wronskian_normalization() {
    CriterionResult r{5, "Wronskian normalization", true, "", 0};
    const auto points = random_points(full() ? 10 : 3, 7771);
    const auto ctx = PrecisionContext::for_target(15);
    const auto dev = parallel_map(
        points.size(),
        [&](std::size_t i) {
          const PotentialSpec spec = PotentialSpec::from_sqrt_lambda(points[i].first, points[i].second);
          mp::PrecisionScope scope(ctx.working_digits());
          Real worst(0);
          for (const char* z : {"1.2", "2", "4"}) {
            const Real zz(z, ctx.working_digits());
            const SolutionValue w1 = eval_w(spec, 1, zz, ctx);
            const SolutionValue w2 = eval_w(spec, 2, zz, ctx);
            worst = max(worst, abs(w1.value * w2.derivative - w2.value * w1.derivative + 1));
          }
          return worst;
        },
        opt_.threads);
    Real worst(0);
    for (const Real& e : dev) worst = max(worst, e);
    r.pass = worst < Real("1e-15", 30);
    r.detail = std::to_string(points.size()) + " specs at z = 1.2, 2, 4, largest |W + 1| = " + worst.to_scientific(2) +
               " (limit 1e-15)";
    return r;
  }

  CriterionResult quasilinear_fit() {
    CriterionResult r{6, "quasi-linear fit", true, "", 0};
    const int count7 = full() ? 10 : 4;
    std::ostringstream os;
    os.precision(10);
    for (RootKind kind : {RootKind::zero, RootKind::pole}) {
      const auto& got = roots(7, kind, count7, 10);
      const QuasiLinearFit fit = fit_quasilinear({got.begin(), got.begin() + count7});
      const double expect = kind == RootKind::zero ? 4.0 : 6.0;
      double worst = std::abs(fit.slope_A - 10.0);
      for (double b : fit.intercepts_B) worst = std::max(worst, std::abs(b - expect));
      if (!(worst <= 1e-6)) r.pass = false;
      os << "s=7 " << to_string(kind) << "s: slope " << fit.slope_A << ", max deviation " << worst << "; ";
    }
    const auto& z6 = roots(6, RootKind::zero, 10, 8);
    const QuasiLinearFit fit6 = fit_quasilinear({z6.begin(), z6.begin() + 10});
    const double d = std::abs(fit6.spacings[8] - fit6.spacings[7]);
    if (!(d < 1e-3)) r.pass = false;
    os << "s=6 |D9 - D8| = " << d << " (limit 1e-3)";
    r.detail = os.str();
    return r;
  }

  CriterionResult scan_sanity() {
    CriterionResult r{7, "scan sanity", true, "", 0};
    const int steps = full() ? 499 : 99;
    const auto ctx = PrecisionContext::for_target(15);
    const auto rows = scan_scattering_length(6, Real("0.1", 40), Real(50), steps, ctx, opt_.threads);
    mp::PrecisionScope scope(ctx.working_digits());
    const Real grid = (Real(50) - Real("0.1", 40)) / steps;
    const Real half_pi = Real::pi() / 2;
    const auto& ref = reference_roots(6, RootKind::pole);
    std::vector<Real> expected;
    for (const auto& v : ref) {
      const Real x(v, 30);
      if (x > Real("0.1", 30) && x < 50) expected.push_back(x);
    }
    std::vector<Real> tokens;
    int bad_atan = 0;
    for (const ScanRow& row : rows) {
      if (row.pole) {
        tokens.push_back(row.sqrt_lambda);
      } else if (!(abs(row.atan_a) < half_pi)) {
        ++bad_atan;
      }
    }
    bool placed = tokens.size() == expected.size();
    for (std::size_t i = 0; placed && i < tokens.size(); ++i) placed = abs(tokens[i] - expected[i]) <= grid;
    r.pass = placed && bad_atan == 0;
    std::ostringstream os;
    os << rows.size() << " rows, " << tokens.size() << " pole tokens (expected " << expected.size() << ")";
    for (const Real& t : tokens) os << " " << t.to_fixed(3);
    os << "; " << (placed ? "all" : "not all") << " within one grid step of the published poles; " << bad_atan
       << " finite atan values outside (-pi/2, pi/2)";
    r.detail = os.str();
    return r;
  }

 private:
  AcceptanceOptions opt_;
  std::map<std::array<int, 3>, std::vector<RootRecord>> roots_;
};

}  // namespace detail

/// Runs criteria 1..7 in order. `on_result` sees each verdict as soon as it is known.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                                   const std::function<void(const CriterionResult&)>& on_result = {}) {
  detail::AcceptanceRun run(opt);
  using Member = CriterionResult (detail::AcceptanceRun::*)();
  const std::vector<std::pair<const char*, Member>> criteria = {
      {"table reproduction", &detail::AcceptanceRun::table_reproduction},
      {"s=7 exactness", &detail::AcceptanceRun::s7_exactness},
      {"n-independence", &detail::AcceptanceRun::n_independence},
      {"cross-method agreement", &detail::AcceptanceRun::cross_method},
      {"Wronskian normalization", &detail::AcceptanceRun::wronskian_normalization},
      {"quasi-linear fit", &detail::AcceptanceRun::quasilinear_fit},
      {"scan sanity", &detail::AcceptanceRun::scan_sanity},
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = (run.*criteria[i].second)();
    } catch (const std::exception& e) {
      r = {static_cast<int>(i) + 1, criteria[i].first, false, std::string("error: ") + e.what(), 0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace ljscat
