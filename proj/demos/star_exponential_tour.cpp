// Star exponential of 2uv in three orderings, compared with the ODE oracle,
// and the singular times of the Weyl-ordered family.

#include <cstdio>
#include <numbers>

#include "weylstar/star_exponential.hpp"

using namespace weylstar;

int main() {
  const Params p(1, 1.0);
  const CMatrix A{{0.0, 1.0}, {1.0, 0.0}};
  const std::pair<const char*, OrderingK> orderings[] = {
      {"weyl", OrderingK::weyl(1)}, {"standard", OrderingK::standard(1)}, {"antistandard", OrderingK::antistandard(1)}};

  std::printf("%-13s %6s %26s %12s\n", "ordering", "t", "g", "|closed-ode|");
  for (const auto& [name, ord] : orderings) {
    for (double t : {0.25, 0.75, 1.25}) {
      const GaussianElement F = star_exp_quadratic(A, ord, p, t).gaussian();
      const GaussianElement G = ode_oracle_integrate(A, ord, p, t, 400);
      std::printf("%-13s %6.2f %12.6f %+12.6fi %12.2e\n", name, t, F.g.real(), F.g.imag(), std::abs(F.g - G.g));
    }
  }

  std::printf("\nsingular t in [0, 10] for the Weyl ordering:\n");
  for (const cplx t : singular_scan(A, OrderingK::weyl(1), p, ScanRegion{0.0, 10.0, 0.0, 0.0, 400, 1}))
    std::printf("  %.12f  (%.6f pi)\n", t.real(), t.real() / std::numbers::pi);
  return 0;
}
