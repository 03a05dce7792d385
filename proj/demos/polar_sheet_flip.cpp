// Follows the amplitude of exp_*(t A(theta)) at t = pi/2 while A(theta) is
// rotated by half a turn, and prints where the continued sheet lands.

#include <cstdio>
#include <numbers>

#include "weylstar/two_valued.hpp"

using namespace weylstar;

int main() {
  const Params p(1, 1.0);
  const OrderingK ord = OrderingK::standard(1);
  const cplx t = std::numbers::pi / 2;

  std::vector<double> s;
  for (int i = 0; i <= 16; ++i) s.push_back(std::numbers::pi / 2 * i / 16);
  const SheetPath path = continue_sheet(rotated_uv_family(), ord, p, t, s);

  std::printf("%10s %26s\n", "theta", "continued amplitude");
  for (std::size_t i = 0; i < s.size(); ++i)
    std::printf("%10.5f %12.6f %+12.6fi\n", s[i], path.branch_values[i].real(), path.branch_values[i].imag());
  std::printf("direct amplitude at the end: %.6f %+.6fi\n", path.direct_end.real(), path.direct_end.imag());
  std::printf("net sign: %+d\n", path.net_sign);

  const PolarElement e = polar_element(std::vector<cplx>{1.0}, p);
  const TwoValued sq = star_gauss_gauss(e.value.rep, e.value.rep, ord, p);
  std::printf("\npolar element squared: g = %.6f %+.6fi, |Q| = %.2e\n", sq.rep.g.real(), sq.rep.g.imag(),
              sq.rep.Q.max_abs());
  return 0;
}
