/// \file cli.hpp
/// \brief The ljscat command line: compute, scan, roots, fit, validate.
///
/// Exit codes: 0 success, 1 failure (validation or computation), 2 at a pole, 64 usage.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ljscat/acceptance.hpp"
#include "ljscat/connection.hpp"
#include "ljscat/oracle.hpp"
#include "ljscat/roots.hpp"
#include "ljscat/scan.hpp"

namespace ljscat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitPole = 2;
inline constexpr int kExitUsage = 64;

using nlohmann::ordered_json;

/// Thrown for bad flag values that CLI11 cannot check by itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline PrecisionContext context_for(int digits) {
  if (digits < 1 || digits > 2000) throw UsageError("--digits must be in [1, 2000]");
  int guard = 0;
  try {
    guard = guard_digits_from_env();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  return PrecisionContext::for_target(digits, 3, guard);
}

inline Real parse_real(const std::string& text, const char* flag, int digits) {
  try {
    return Real(text, digits);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string(flag) + ": not a number: " + text);
  }
}

/// Double image of a value for JSON; the exact decimal goes in a separate string field.
inline double json_number(const Real& x) { return x.to_double(); }

struct ComputeArgs {
  int s = 0;
  std::string sqrt_lambda;
  std::string lambda;
  int digits = 15;
  std::string method = "connection";
  std::string r0 = "1";
};

inline int run_compute(const ComputeArgs& args, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const PrecisionContext ctx = context_for(args.digits);
  const int wd = ctx.working_digits();
  if (args.s < 4 || args.s > 7) throw UsageError("--s must be one of 4, 5, 6, 7");
  PotentialSpec spec;
  Real root;
  {
    mp::PrecisionScope scope(wd);
    const Real r0 = parse_real(args.r0, "--r0", wd);
    if (!args.sqrt_lambda.empty()) {
      root = parse_real(args.sqrt_lambda, "--sqrt-lambda", wd);
      if (!(root > 0)) throw UsageError("--sqrt-lambda must be positive");
      spec = PotentialSpec::from_sqrt_lambda(args.s, root, r0);
    } else {
      const Real lambda = parse_real(args.lambda, "--lambda", wd);
      if (!(lambda > 0)) throw UsageError("--lambda must be positive");
      spec = PotentialSpec::make(args.s, lambda, r0);
      root = sqrt(lambda);
    }
    if (!(r0 > 0)) throw UsageError("--r0 must be positive");
  }
  const int shown = args.digits + 2;

  ordered_json doc;
  doc["s"] = args.s;
  doc["sqrt_lambda"] = json_number(root);
  doc["method"] = args.method;
  doc["digits"] = args.digits;
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  auto put_value = [&](ordered_json& node, const Real& a, const Real& err) {
    mp::PrecisionScope scope(wd);
    node["a_over_r0"] = json_number(a);
    node["a_over_r0_decimal"] = a.to_scientific(shown);
    node["a"] = json_number(a * spec.r0);
    node["err_est"] = json_number(err);
  };

  try {
    std::optional<ScatteringResult> conn;
    std::optional<OracleResult> orc;
    if (args.method == "connection" || args.method == "both") conn = scattering_length(spec, ctx);
    if (args.method == "oracle" || args.method == "both") orc = oracle_scattering(spec, ctx);
    doc["pole"] = false;
    if (conn) {
      put_value(doc, conn->a_over_r0, conn->err_est);
      doc["n_used"] = conn->w1.n_used;
      doc["working_digits"] = std::max(conn->w1.working_digits, conn->w2.working_digits);
    } else {
      mp::PrecisionScope scope(wd);
      put_value(doc, orc->a_over_r0, abs(orc->a_over_r0 - orc->check_a_over_r0));
      doc["n_used"] = nullptr;
      doc["working_digits"] = wd;
    }
    if (conn && orc) {
      mp::PrecisionScope scope(wd);
      ordered_json c, o;
      put_value(c, conn->a_over_r0, conn->err_est);
      put_value(o, orc->a_over_r0, abs(orc->a_over_r0 - orc->check_a_over_r0));
      doc["connection"] = c;
      doc["oracle"] = o;
      doc["relative_difference"] = json_number(abs(conn->a_over_r0 - orc->a_over_r0) / abs(orc->a_over_r0));
    }
    doc["elapsed_ms"] = elapsed();
    out << doc.dump(2) << "\n";
    return kExitOk;
  } catch (const AtPole& e) {
    doc["pole"] = true;
    doc["message"] = e.what();
    doc["elapsed_ms"] = elapsed();
    out << doc.dump(2) << "\n";
    return kExitPole;
  }
}

struct ScanArgs {
  int s = 0;
  std::string min;
  std::string max;
  int steps = 100;
  int digits = 15;
  unsigned threads = 0;
};

inline int run_scan(const ScanArgs& args, std::ostream& out) {
  const PrecisionContext ctx = context_for(args.digits);
  if (args.s < 4 || args.s > 7) throw UsageError("--s must be one of 4, 5, 6, 7");
  if (args.steps < 1) throw UsageError("--steps must be at least 1");
  const Real lo = parse_real(args.min, "--sqrt-lambda-min", ctx.working_digits());
  const Real hi = parse_real(args.max, "--sqrt-lambda-max", ctx.working_digits());
  if (!(lo > 0) || !(hi > lo)) throw UsageError("scan range must satisfy 0 < --sqrt-lambda-min < --sqrt-lambda-max");
  const auto rows = scan_scattering_length(args.s, lo, hi, args.steps, ctx, args.threads);
  out << "sqrt_lambda,a_over_r0,atan_a\n";
  for (const ScanRow& row : rows) {
    out << row.sqrt_lambda.to_fixed(10) << ',';
    if (row.pole) {
      out << "pole," << (row.atan_a.sign() < 0 ? "-1.5707963" : "1.5707963");
    } else {
      out << row.a_over_r0->to_scientific(args.digits) << ',' << row.atan_a.to_fixed(12, true);
    }
    out << '\n';
  }
  return kExitOk;
}

struct RootsArgs {
  int s = 0;
  std::string kind = "both";
  int count = 10;
  int digits = 6;
  std::string format = "json";
  unsigned threads = 0;
};

inline std::vector<RootKind> kinds_of(const std::string& kind) {
  if (kind == "zeros") return {RootKind::zero};
  if (kind == "poles") return {RootKind::pole};
  return {RootKind::zero, RootKind::pole};
}

inline void write_roots(const RootsArgs& args, const std::vector<RootRecord>& records, bool complete,
                        std::ostream& out) {
  if (args.format == "csv") {
    out << "kind,index,sqrt_lambda,certified_err\n";
    for (const RootRecord& r : records) {
      out << to_string(r.kind) << ',' << r.index << ',' << r.sqrt_lambda.to_fixed(args.digits) << ','
          << r.certified_err.to_scientific(3) << '\n';
    }
    return;
  }
  ordered_json doc;
  doc["s"] = args.s;
  doc["kind"] = args.kind;
  doc["count"] = args.count;
  doc["digits"] = args.digits;
  doc["complete"] = complete;
  doc["roots"] = ordered_json::array();
  for (const RootRecord& r : records) {
    ordered_json row;
    row["kind"] = to_string(r.kind);
    row["index"] = r.index;
    row["sqrt_lambda"] = json_number(r.sqrt_lambda);
    row["sqrt_lambda_decimal"] = r.sqrt_lambda.to_fixed(args.digits);
    row["certified_err"] = json_number(r.certified_err);
    doc["roots"].push_back(row);
  }
  out << doc.dump(2) << "\n";
}

inline int run_roots(const RootsArgs& args, std::ostream& out, std::ostream& err) {
  if (args.s < 4 || args.s > 7) throw UsageError("--s must be one of 4, 5, 6, 7");
  if (args.count < 1) throw UsageError("--count must be at least 1");
  if (args.digits < 1 || args.digits > 30) throw UsageError("--digits must be in [1, 30]");
  // Two spare digits so that rounding to `digits` decimals is faithful.
  const PrecisionContext ctx = context_for(15);
  try {
    const auto records = zeros_poles_table(args.s, kinds_of(args.kind), args.count, args.digits + 2, ctx, args.threads);
    write_roots(args, records, true, out);
    return kExitOk;
  } catch (const RangeError& e) {
    write_roots(args, e.partial(), false, out);
    err << "ljscat roots: " << e.what() << "\n";
    return kExitFailure;
  }
}

struct FitArgs {
  int s = 0;
  int count = 10;
  unsigned threads = 0;
};

inline ordered_json fit_json(const QuasiLinearFit& fit) {
  ordered_json j;
  j["slope_A"] = fit.slope_A;
  j["line_intercept"] = fit.line_intercept;
  j["intercepts_B"] = fit.intercepts_B;
  j["residual"] = fit.residual;
  j["spacings"] = fit.spacings;
  j["spacings_increasing"] = fit.spacings_increasing;
  return j;
}

inline int run_fit(const FitArgs& args, std::ostream& out) {
  if (args.s < 4 || args.s > 7) throw UsageError("--s must be one of 4, 5, 6, 7");
  if (args.count < 3) throw UsageError("--count must be at least 3");
  const PrecisionContext ctx = context_for(15);
  const auto records = zeros_poles_table(args.s, kinds_of("both"), args.count, 10, ctx, args.threads);
  ordered_json doc;
  doc["s"] = args.s;
  doc["count"] = args.count;
  double max_residual = 0;
  for (RootKind kind : {RootKind::zero, RootKind::pole}) {
    std::vector<RootRecord> same;
    for (const RootRecord& r : records) {
      if (r.kind == kind) same.push_back(r);
    }
    const QuasiLinearFit fit = fit_quasilinear(same);
    ordered_json j = fit_json(fit);
    // The last five records alone: the large-n behaviour of the law.
    const std::size_t tail = std::min<std::size_t>(5, same.size());
    const QuasiLinearFit late = fit_quasilinear({same.end() - static_cast<std::ptrdiff_t>(tail), same.end()});
    j["tail"] = {{"first_index", same.size() - tail},
                 {"slope_A", late.slope_A},
                 {"intercepts_B", late.intercepts_B},
                 {"residual", late.residual}};
    max_residual = std::max(max_residual, fit.residual);
    doc[kind == RootKind::zero ? "zeros" : "poles"] = j;
  }
  doc["max_residual"] = max_residual;
  out << doc.dump(2) << "\n";
  return kExitOk;
}

struct ValidateArgs {
  std::string level = "quick";
  unsigned threads = 0;
};

inline int run_validate(const ValidateArgs& args, std::ostream& out) {
  AcceptanceOptions opt;
  opt.level = args.level == "full" ? AcceptanceLevel::full : AcceptanceLevel::quick;
  opt.threads = args.threads;
  const auto results = run_acceptance(opt, [&](const CriterionResult& r) { out << format_criterion(r) << std::endl; });
  for (const CriterionResult& r : results) {
    if (!r.pass) {
      out << "validation failed; first failing criterion: [" << r.id << "] " << r.name << "\n";
      return kExitFailure;
    }
  }
  out << "all " << results.size() << " criteria passed\n";
  return kExitOk;
}

/// Parses argv and runs one subcommand.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scattering lengths of (12, s) Lennard-Jones potentials", "ljscat"};
  app.require_subcommand(1);
  const std::vector<int> exponents{4, 5, 6, 7};

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Scattering length at one intensity (JSON)");
  c->add_option("--s", compute.s, "Attractive exponent")->required()->check(CLI::IsMember(exponents));
  auto* root_opt = c->add_option("--sqrt-lambda", compute.sqrt_lambda, "sqrt of the intensity");
  auto* lambda_opt = c->add_option("--lambda", compute.lambda, "Intensity");
  root_opt->excludes(lambda_opt);
  c->add_option("--digits", compute.digits, "Target digits")->capture_default_str();
  c->add_option("--method", compute.method, "connection, oracle or both")
      ->check(CLI::IsMember({"connection", "oracle", "both"}))
      ->capture_default_str();
  c->add_option("--r0", compute.r0, "Length scale")->capture_default_str();

  ScanArgs scan;
  auto* sc = app.add_subcommand("scan", "Scattering length on a sqrt(lambda) grid (CSV)");
  sc->add_option("--s", scan.s, "Attractive exponent")->required()->check(CLI::IsMember(exponents));
  sc->add_option("--sqrt-lambda-min", scan.min, "First grid point")->required();
  sc->add_option("--sqrt-lambda-max", scan.max, "Last grid point")->required();
  sc->add_option("--steps", scan.steps, "Number of grid intervals")->capture_default_str();
  sc->add_option("--digits", scan.digits, "Target digits")->capture_default_str();
  sc->add_option("--threads", scan.threads, "Worker threads (0: all cores)");

  RootsArgs roots;
  auto* ro = app.add_subcommand("roots", "Zeros and poles in sqrt(lambda) (JSON or CSV)");
  ro->add_option("--s", roots.s, "Attractive exponent")->required()->check(CLI::IsMember(exponents));
  ro->add_option("--kind", roots.kind, "zeros, poles or both")
      ->check(CLI::IsMember({"zeros", "poles", "both"}))
      ->capture_default_str();
  ro->add_option("--count", roots.count, "Roots of each kind")->capture_default_str();
  ro->add_option("--digits", roots.digits, "Decimals")->capture_default_str();
  ro->add_option("--format", roots.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  ro->add_option("--threads", roots.threads, "Worker threads (0: all cores)");

  FitArgs fit;
  auto* fi = app.add_subcommand("fit", "Quasi-linear fits of zero and pole positions (JSON)");
  fi->add_option("--s", fit.s, "Attractive exponent")->required()->check(CLI::IsMember(exponents));
  fi->add_option("--count", fit.count, "Roots of each kind")->capture_default_str();
  fi->add_option("--threads", fit.threads, "Worker threads (0: all cores)");

  ValidateArgs validate;
  auto* va = app.add_subcommand("validate", "Run the acceptance suite");
  va->add_option("--level", validate.level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}))
      ->capture_default_str();
  va->add_option("--threads", validate.threads, "Worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "ljscat: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (c->parsed()) {
      if (compute.sqrt_lambda.empty() && compute.lambda.empty()) throw UsageError("one of --sqrt-lambda, --lambda is required");
      return run_compute(compute, out);
    }
    if (sc->parsed()) return run_scan(scan, out);
    if (ro->parsed()) return run_roots(roots, out, err);
    if (fi->parsed()) return run_fit(fit, out);
    return run_validate(validate, out);
  } catch (const UsageError& e) {
    err << "ljscat: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "ljscat: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "ljscat: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace ljscat::cli
