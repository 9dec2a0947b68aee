// Scattering length of the (12, 6) potential at a few intensities, checked against
// direct integration, and the first zero and pole of the scattering length.

#include <iostream>

#include "ljscat/connection.hpp"
#include "ljscat/oracle.hpp"
#include "ljscat/roots.hpp"

int main() {
  using namespace ljscat;
  const auto ctx = PrecisionContext::for_target(20);

  for (const char* x : {"1", "10", "30"}) {
    const auto spec = PotentialSpec::from_sqrt_lambda(6, Real(x, ctx.working_digits()));
    const ScatteringResult r = scattering_length(spec, ctx);
    const Real check = oracle_scattering_length(spec, ctx);
    std::cout << "sqrt(lambda) = " << x << "  a/r0 = " << r.a_over_r0.to_scientific(20)
              << "  (integration: " << check.to_scientific(12) << ")\n";
  }

  const auto table = zeros_poles_table(6, {RootKind::zero, RootKind::pole}, 1, 10, ctx);
  for (const RootRecord& rec : table) {
    std::cout << "first " << to_string(rec.kind) << " at sqrt(lambda) = " << rec.sqrt_lambda.to_fixed(10)
              << " +- " << rec.certified_err.to_scientific(1) << "\n";
  }
}
