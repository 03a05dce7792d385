#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "weylstar/gaussian_algebra.hpp"
#include "weylstar/star_exponential.hpp"

using namespace weylstar;

namespace {

CMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, double r) {
  std::uniform_real_distribution<double> U(-r, r);
  CMatrix M(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) M(i, j) = M(j, i) = cplx(U(rng), U(rng));
  return M;
}

GaussianElement random_gaussian(std::mt19937_64& rng, std::size_t n, double r) {
  std::uniform_real_distribution<double> U(-1, 1);
  return {cplx(1.5 + U(rng), U(rng)), random_symmetric(rng, n, r)};
}

PolyC random_poly(std::mt19937_64& rng, std::size_t n, int max_degree, int nterms) {
  std::uniform_real_distribution<double> U(-1, 1);
  std::uniform_int_distribution<int> deg(0, max_degree), var(0, static_cast<int>(n) - 1);
  PolyC f(n);
  for (int k = 0; k < nterms; ++k) {
    Exponent e(n, 0);
    for (int r = deg(rng); r > 0; --r) e[static_cast<std::size_t>(var(rng))] += 1;
    f.add_term(e, cplx(U(rng), U(rng)));
  }
  return f.prune();
}

// Value of prefactor * core at a point, for comparing GaussPoly results.
cplx at(const GaussPoly& x, std::span<const cplx> z) { return x.evaluate(z); }

}  // namespace

TEST(GaussianAlgebra, ConstantGaussianActsAsScalar) {
  std::mt19937_64 rng(21);
  const Params p(2, 1.0);
  const OrderingK ord(random_symmetric(rng, 4, 1.0));
  const PolyC f = random_poly(rng, 4, 3, 5);
  const GaussPoly r = star_gauss_poly(GaussianElement::constant(4, 2.0), f, ord, p, Side::right);
  EXPECT_LT(rel_diff(r.prefactor * r.core.g, f * 2.0), 1e-14);
}

TEST(GaussianAlgebra, WeylProductMatchesIntegralFormula) {
  std::mt19937_64 rng(22);
  const auto weyl1 = OrderingK::weyl(1), weyl2 = OrderingK::weyl(2);
  for (int k = 0; k < 10; ++k) {
    const int m = 1 + k % 2;
    const Params p(m, 0.9);
    const GaussianElement F1 = random_gaussian(rng, p.nvars(), 0.4), F2 = random_gaussian(rng, p.nvars(), 0.4);
    const TwoValued prod = star_gauss_gauss(F1, F2, m == 1 ? weyl1 : weyl2, p);
    const WeylIntegralProduct oracle = weyl_gaussian_integral(F1, F2, p);
    EXPECT_LT(rel_diff(prod.rep.Q, oracle.Q), 1e-12) << k;
    EXPECT_LT(std::abs(prod.rep.g * prod.rep.g - oracle.g_squared) / std::abs(oracle.g_squared), 1e-12) << k;
  }
}

TEST(GaussianAlgebra, ProductAgreesWithPolynomialLimit) {
  // For small Q, F ~ g (1 + Q[z]); compare first-order terms of F1 * F2 with the polynomial product.
  const Params p(1, 1.0);
  const auto ord = OrderingK::standard(1);
  const double eps = 1e-6;
  const CMatrix Q1{{0.3, 0.1}, {0.1, -0.2}}, Q2{{-0.1, 0.4}, {0.4, 0.2}};
  const TwoValued prod = star_gauss_gauss(GaussianElement(1.0, Q1 * eps), GaussianElement(1.0, Q2 * eps), ord, p);
  const PolyC lin = star_poly(PolyC::constant(2, 1.0) + quad_form(Q1 * eps, p),
                              PolyC::constant(2, 1.0) + quad_form(Q2 * eps, p), ord, p);
  // Constant term of the product is 1 + O(eps^2) from the quadratic contraction.
  EXPECT_LT(std::abs(prod.rep.g - lin.constant_term()), 1e-10);
  EXPECT_LT(rel_diff(prod.rep.Q * (1 / eps), (Q1 + Q2)), 1e-5);
}

TEST(GaussianAlgebra, GaussPolyProductsAreAssociative) {
  std::mt19937_64 rng(23);
  const Params p(1, 1.0);
  const OrderingK ord(random_symmetric(rng, 2, 0.5));
  const GaussianElement F = random_gaussian(rng, 2, 0.3);
  const PolyC f = random_poly(rng, 2, 2, 3), g = random_poly(rng, 2, 2, 3);
  const GaussPoly left = star_gausspoly_poly(star_gauss_poly(F, f, ord, p, Side::left), g, ord, p);
  const GaussPoly right = star_poly_gausspoly(f, star_gauss_poly(F, g, ord, p, Side::right), ord, p);
  for (const auto& z : {std::vector<cplx>{0.1, 0.2}, std::vector<cplx>{cplx(-0.3, 0.1), 0.5}}) {
    EXPECT_LT(std::abs(at(left, z) - at(right, z)), 1e-12 * std::max(1.0, std::abs(at(left, z))));
  }
}

TEST(GaussianAlgebra, FactorThroughInvertsStarGaussPoly) {
  std::mt19937_64 rng(24);
  const Params p(2, 1.0);
  const auto ord = OrderingK::standard(2);
  const GaussianElement F = random_gaussian(rng, 4, 0.3);
  const PolyC r = random_poly(rng, 4, 3, 5);
  for (Side side : {Side::left, Side::right}) {
    const PolyC q = star_gauss_poly(F, r, ord, p, side).prefactor;
    EXPECT_LT(rel_diff(factor_through(F, q, ord, p, side), r), 1e-12);
  }
}

TEST(GaussianAlgebra, InverseWithAndWithoutProvenance) {
  std::mt19937_64 rng(25);
  const Params p(1, 1.0);
  const auto ord = OrderingK::standard(1);
  const GaussianElement F = star_exp_quadratic(random_symmetric(rng, 2, 0.5), ord, p, 0.7).gaussian();
  const TwoValued Fi = inverse(F, ord, p);
  const TwoValued one = star_gauss_gauss(F, Fi.rep, ord, p);
  EXPECT_LT(std::abs(one.rep.g - 1.0), 1e-12);
  EXPECT_LT(one.rep.Q.max_abs(), 1e-12);

  GaussianElement bare = F;
  bare.provenance.reset();
  const TwoValued Bi = inverse(bare, ord, p);
  EXPECT_TRUE(Bi.equals(Fi, 1e-10));
  const TwoValued left_one = star_gauss_gauss(Bi.rep, bare, ord, p);
  EXPECT_LT(std::abs(left_one.rep.g - 1.0), 1e-12);
}

TEST(GaussianAlgebra, AdjointPreservesCommutators) {
  std::mt19937_64 rng(26);
  const Params p(2, 1.0);
  const auto ord = OrderingK::standard(2);
  const GaussianElement F = star_exp_quadratic(random_symmetric(rng, 4, 0.4), ord, p, 0.5).gaussian();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const PolyC zi = adjoint(F, PolyC::generator(4, i), ord, p);
      const PolyC zj = adjoint(F, PolyC::generator(4, j), ord, p);
      EXPECT_LE(zi.degree(), 1);
      const PolyC c0 = commutator(PolyC::generator(4, i), PolyC::generator(4, j), ord, p);
      EXPECT_LT(rel_diff(commutator(zi, zj, ord, p), c0), 1e-11);
    }
}

TEST(GaussianAlgebra, AdjointOnGaussianIsConjugation) {
  std::mt19937_64 rng(27);
  const Params p(1, 1.0);
  const auto ord = OrderingK::weyl(1);
  const GaussianElement F = star_exp_quadratic(random_symmetric(rng, 2, 0.4), ord, p, 0.5).gaussian();
  const GaussianElement x = star_exp_quadratic(random_symmetric(rng, 2, 0.4), ord, p, 0.3).gaussian();
  // Ad(F) commutes with taking star exponentials: Ad(F) exp_*(tA) is again of that form; check F x F^{-1} F = F x.
  const TwoValued ad = adjoint(F, x, ord, p);
  const TwoValued lhs = star_gauss_gauss(ad.rep, F, ord, p);
  const TwoValued rhs = star_gauss_gauss(F, x, ord, p);
  EXPECT_TRUE(lhs.equals(rhs, 1e-10));
}

TEST(GaussianAlgebra, ProductSingular) {
  const Params p(1, 1.0);
  const auto ord = OrderingK::weyl(1);
  // tan-form Gaussians at t and pi/2 - t compose to the pole of exp_*(2uv) at pi/2.
  const CMatrix A{{0.0, 1.0}, {1.0, 0.0}};
  const GaussianElement F1 = star_exp_quadratic(A, ord, p, 0.6).gaussian();
  const GaussianElement F2 = star_exp_quadratic(A, ord, p, std::numbers::pi / 2 - 0.6).gaussian();
  try {
    star_gauss_gauss(F1, F2, ord, p);
    FAIL() << "expected ProductSingular";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ProductSingular);
  }
}

TEST(GaussianAlgebra, TwoValuedEquality) {
  const GaussianElement F(cplx(0.3, 0.4), CMatrix{{1.0, 0.0}, {0.0, 2.0}});
  const TwoValued a(F), b(F.scaled(-1.0));
  EXPECT_EQ(a.sign_relative_to(b), -1);
  EXPECT_TRUE(a.equals(b));
  EXPECT_EQ(a.sign_relative_to(TwoValued(F.scaled(I_unit))), 0);
  EXPECT_EQ(b.canonical().g, F.g);
  EXPECT_THROW(GaussianElement(0.0, CMatrix::zero(2)), Error);
  EXPECT_THROW(GaussianElement(1.0, CMatrix{{0.0, 1.0}, {0.0, 0.0}}), Error);
}
