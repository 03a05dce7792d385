#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "weylstar/gaussian_algebra.hpp"
#include "weylstar/star_exponential.hpp"

using namespace weylstar;

namespace {

const double kPi = std::numbers::pi;

CMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, double r) {
  std::uniform_real_distribution<double> U(-r, r);
  CMatrix M(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) M(i, j) = M(j, i) = cplx(U(rng), U(rng));
  return M;
}

double gauss_diff(const GaussianElement& a, const GaussianElement& b) {
  return std::max(rel_diff(a.Q, b.Q), std::abs(a.g - b.g) / std::max(1.0, std::abs(b.g)));
}

const CMatrix kTwoUV{{0.0, 1.0}, {1.0, 0.0}};

}  // namespace

TEST(StarExp, TimeZeroIsExactlyOne) {
  const Params p(2, 1.0);
  std::mt19937_64 rng(1);
  const StarExpResult r = star_exp_quadratic(random_symmetric(rng, 4, 1.0), OrderingK::standard(2), p, 0.0);
  EXPECT_EQ(r.gaussian().g, cplx(1.0));
  EXPECT_EQ(r.gaussian().Q.max_abs(), 0.0);
  ASSERT_TRUE(r.gaussian().provenance.has_value());
}

TEST(StarExp, WeylTwoUV) {
  const Params p(1, 0.8);
  for (double t : {0.1, 0.7, 1.5}) {
    const GaussianElement F = star_exp_quadratic(kTwoUV, OrderingK::weyl(1), p, t).gaussian();
    EXPECT_LT(std::abs(F.g - 1.0 / std::cos(p.hbar * t)), 1e-12);
    EXPECT_LT(std::abs(F.Q(0, 1) - std::tan(p.hbar * t) / p.hbar), 1e-12);
    EXPECT_EQ(F.Q(0, 0), cplx(0.0));
  }
}

TEST(StarExp, WeylSingularAtHalfPi) {
  const Params p(1, 2.0);
  try {
    star_exp_quadratic(kTwoUV, OrderingK::weyl(1), p, kPi / (2 * p.hbar));
    FAIL() << "expected SingularPoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularPoint);
  }
}

TEST(StarExp, StandardTwoUVHasNoRealSingularity) {
  const Params p(1, 1.0);
  for (double t : {kPi / 2, kPi, 2.5}) {
    // det W = exp(-2 i hbar t), so g = exp(i hbar t) along the continued branch.
    const GaussianElement F = star_exp_quadratic(kTwoUV, OrderingK::standard(1), p, t).gaussian();
    EXPECT_LT(std::abs(F.g - std::exp(cplx(0.0, p.hbar * t))), 1e-12) << t;
    EXPECT_LT(std::abs(evolution_det(kTwoUV, OrderingK::standard(1), p, t) - std::exp(cplx(0.0, -2.0 * t))), 1e-12);
  }
  const auto pts = singular_scan(kTwoUV, OrderingK::standard(1), p, ScanRegion{0.0, 5.0, 0.0, 0.0, 400, 1});
  EXPECT_TRUE(pts.empty());
}

TEST(StarExp, ClosedFormMatchesOde) {
  std::mt19937_64 rng(2);
  for (int m = 1; m <= 3; ++m) {
    const Params p(m, 1.0);
    const OrderingK ords[] = {OrderingK::weyl(static_cast<std::size_t>(m)), OrderingK::standard(static_cast<std::size_t>(m)),
                              OrderingK::antistandard(static_cast<std::size_t>(m))};
    const CMatrix A = random_symmetric(rng, p.nvars(), 0.4);
    for (const auto& ord : ords) {
      const GaussianElement closed = star_exp_quadratic(A, ord, p, 0.6).gaussian();
      const GaussianElement ode = ode_oracle_integrate(A, ord, p, 0.6, 400);
      EXPECT_LT(gauss_diff(closed, ode), 1e-9) << ord.name << " m=" << m;
      const GaussianElement adaptive = ode_oracle_adaptive(A, ord, p, 0.6);
      EXPECT_LT(gauss_diff(closed, adaptive), 1e-8) << ord.name << " m=" << m;
    }
  }
}

TEST(StarExp, ComplexTime) {
  std::mt19937_64 rng(3);
  const Params p(1, 1.0);
  const CMatrix A = random_symmetric(rng, 2, 0.5);
  const cplx t(0.4, 0.3);
  const GaussianElement closed = star_exp_quadratic(A, OrderingK::standard(1), p, t).gaussian();
  EXPECT_LT(gauss_diff(closed, ode_oracle_integrate(A, OrderingK::standard(1), p, t, 400)), 1e-9);
}

TEST(StarExp, RungeKuttaFourthOrderConvergence) {
  std::mt19937_64 rng(4);
  const Params p(1, 1.0);
  const CMatrix A = random_symmetric(rng, 2, 1.0);
  const auto ord = OrderingK::standard(1);
  const GaussianElement exact = star_exp_quadratic(A, ord, p, 1.0).gaussian();
  const double e1 = gauss_diff(ode_oracle_integrate(A, ord, p, 1.0, 20), exact);
  const double e2 = gauss_diff(ode_oracle_integrate(A, ord, p, 1.0, 40), exact);
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(StarExp, EvolutionEquationResidual) {
  std::mt19937_64 rng(5);
  const Params p(2, 1.0);
  const auto ord = OrderingK::antistandard(2);
  const CMatrix A = random_symmetric(rng, 4, 0.5);
  const double t = 0.5, h = 1e-5;
  const GaussianElement F = star_exp_quadratic(A, ord, p, t).gaussian();
  const GaussianElement Fp = star_exp_quadratic(A, ord, p, t + h).gaussian();
  const GaussianElement Fm = star_exp_quadratic(A, ord, p, t - h).gaussian();
  const PolyC predicted = quad_form(((Fp.Q - Fm.Q) * (1.0 / (2 * h))).symmetrized(), p) +
                          PolyC::constant(4, (Fp.g - Fm.g) / (2 * h) / F.g);
  const GaussPoly AF = star_gauss_poly(F, quad_star_K(A, ord, p), ord, p, Side::left);
  EXPECT_LT(rel_diff(AF.prefactor, predicted), 1e-7);
}

TEST(StarExp, OneParameterGroup) {
  std::mt19937_64 rng(6);
  const Params p(1, 1.0);
  const auto ord = OrderingK::standard(1);
  const CMatrix A = random_symmetric(rng, 2, 0.5);
  const GaussianElement F1 = star_exp_quadratic(A, ord, p, 0.3).gaussian();
  const GaussianElement F2 = star_exp_quadratic(A, ord, p, 0.5).gaussian();
  const GaussianElement F12 = star_exp_quadratic(A, ord, p, 0.8).gaussian();
  EXPECT_EQ(star_gauss_gauss(F1, F2, ord, p).sign_relative_to(TwoValued(F12), 1e-10), 1);
}

TEST(StarExp, WeylHelperMatchesGeneralPath) {
  std::mt19937_64 rng(7);
  const Params p(2, 1.0);
  const CMatrix A = random_symmetric(rng, 4, 0.5);
  const GaussianElement a = star_exp_weyl(A, p, 0.4).gaussian();
  const GaussianElement b = star_exp_quadratic(A, OrderingK::weyl(2), p, 0.4).gaussian();
  EXPECT_LT(gauss_diff(a, b), 1e-13);
}

TEST(StarExp, RankOneFormulas) {
  const Params p(2, 1.0);
  const std::vector<cplx> a{cplx(0.8, 0.3), cplx(0.0, 0.0)};
  std::vector<cplx> s = a;
  const cplx nrm = std::sqrt(bilinear(s, s));
  for (auto& x : s) x /= nrm;
  const cplx alpha = 0.5, gamma = 1.2, beta = (gamma * gamma - 1.0) / alpha;
  const auto form = rank_one_B(s, alpha, beta, gamma, p);
  const double t = 0.35;
  const GaussianElement fm = rank_one_FM(t, alpha, beta, gamma, s, p);
  EXPECT_LT(gauss_diff(fm, star_exp_quadratic(form.A, OrderingK::weyl(2), p, t).gaussian()), 1e-12);
  const GaussianElement fn = rank_one_FN(t, alpha, beta, gamma, s, p);
  const GaussianElement general = star_exp_quadratic(form.A, OrderingK::standard(2), p, t).gaussian();
  EXPECT_LT(rel_diff(fn.Q, general.Q), 1e-12);
  // The printed amplitude differs from the solution by exp(-i hbar t gamma).
  EXPECT_LT(std::abs(fn.g / general.g - std::exp(-I_unit * p.hbar * t * gamma)), 1e-12);
  EXPECT_THROW(rank_one_FM(t, 1.0, 1.0, 1.0, s, p), Error);
}

TEST(StarExp, SingularScanFindsWeylPoles) {
  const Params p(1, 1.0);
  const auto pts = singular_scan(kTwoUV, OrderingK::weyl(1), p, ScanRegion{0.0, 5.0, 0.0, 0.0, 200, 1});
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_LT(std::abs(pts[0] - kPi / 2), 1e-9);
  EXPECT_LT(std::abs(pts[1] - 3 * kPi / 2), 1e-9);
}

TEST(StarExp, SingularScanInComplexRectangle) {
  const Params p(1, 1.0);
  // (i/2)(u^2 - v^2) in the Weyl ordering: cos X is singular where cosh(t/2) = 0, i.e. t = i pi.
  const CMatrix A{{cplx(0.0, 0.5), 0.0}, {0.0, cplx(0.0, -0.5)}};
  const auto pts = singular_scan(A, OrderingK::weyl(1), p, ScanRegion{-0.5, 0.5, 2.0, 4.0, 21, 41});
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_LT(std::abs(pts[0] - cplx(0.0, kPi)), 1e-8);
}

TEST(StarExp, OdeBlowUpNearSingularity) {
  const Params p(1, 1.0);
  EXPECT_THROW(ode_oracle_adaptive(kTwoUV, OrderingK::weyl(1), p, kPi / 2), Error);
  EXPECT_THROW(ode_oracle_integrate(kTwoUV, OrderingK::weyl(1), p, 1.0, 0), Error);
}
