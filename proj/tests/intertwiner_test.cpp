#include <gtest/gtest.h>

#include <random>

#include "weylstar/intertwiner.hpp"
#include "weylstar/star_exponential.hpp"

using namespace weylstar;

namespace {

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

CMatrix random_symmetric(std::mt19937_64& rng, std::size_t n, double r = 1.0) {
  std::uniform_real_distribution<double> U(-r, r);
  CMatrix M(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) M(i, j) = M(j, i) = cplx(U(rng), U(rng));
  return M;
}

}  // namespace

TEST(Intertwiner, StandardToWeylOnUV) {
  const Params p(1, 1.0);
  const PolyC uv = PolyC::generator(2, 0).pointwise(PolyC::generator(2, 1));
  const PolyC r = intertwine_poly(uv, OrderingK::standard(1), OrderingK::weyl(1), p);
  EXPECT_LT(rel_diff(r, uv - PolyC::constant(2, 0.5 * I_unit)), 1e-15);
  // The ordered product u * v in the standard ordering maps to u * v in the Weyl ordering.
  const PolyC u = PolyC::generator(2, 0), v = PolyC::generator(2, 1);
  EXPECT_LT(rel_diff(r, star_poly(u, v, OrderingK::weyl(1), p)), 1e-15);
}

TEST(Intertwiner, TrivialCases) {
  std::mt19937_64 rng(11);
  const Params p(2, 1.0);
  const OrderingK K(random_symmetric(rng, 4)), K1(random_symmetric(rng, 4));
  const PolyC f = random_poly(rng, 4, 4, 6);
  EXPECT_LT(rel_diff(intertwine_poly(f, K, K, p), f), 1e-15);
  const PolyC lin = PolyC::generator(4, 1, cplx(0.5, 1)) + PolyC::generator(4, 3, 2.0) + PolyC::constant(4, 3.0);
  EXPECT_LT(rel_diff(intertwine_poly(lin, K, K1, p), lin), 1e-15);
}

TEST(Intertwiner, HomomorphismInverseComposition) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 8; ++trial) {
    const int m = 1 + trial % 2;
    const Params p(m, 0.8);
    const std::size_t n = p.nvars();
    const OrderingK K(random_symmetric(rng, n)), K1(random_symmetric(rng, n)), K2(random_symmetric(rng, n));
    const PolyC f = random_poly(rng, n, 4, 5), g = random_poly(rng, n, 4, 5);
    EXPECT_LT(rel_diff(intertwine_poly(star_poly(f, g, K, p), K, K1, p),
                       star_poly(intertwine_poly(f, K, K1, p), intertwine_poly(g, K, K1, p), K1, p)),
              1e-9);
    EXPECT_LT(rel_diff(intertwine_poly(intertwine_poly(f, K, K1, p), K1, K, p), f), 1e-10);
    EXPECT_LT(rel_diff(intertwine_poly(intertwine_poly(f, K, K1, p), K1, K2, p), intertwine_poly(f, K, K2, p)),
              1e-10);
  }
}

TEST(Intertwiner, GaussianMatchesStarExponentialsInBothOrderings) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 2;
    const Params p(m, 1.0);
    const std::size_t sm = static_cast<std::size_t>(m);
    const OrderingK from = trial % 3 == 0 ? OrderingK::weyl(sm) : OrderingK::antistandard(sm);
    const OrderingK to = OrderingK::standard(sm);
    const CMatrix A = random_symmetric(rng, p.nvars(), 0.5);
    int compared = 0;
    for (int k = 1; k <= 20; ++k) {
      const double t = 0.04 * k;
      try {
        const GaussianElement Ff = star_exp_quadratic(A, from, p, t).gaussian();
        const GaussianElement Ft = star_exp_quadratic(A, to, p, t).gaussian();
        const TwoValued image = intertwine_gauss(Ff, from, to, p);
        EXPECT_TRUE(image.equals(TwoValued(Ft), 1e-9)) << "trial " << trial << " t " << t;
        ++compared;
      } catch (const Error&) {
      }
    }
    EXPECT_GT(compared, 10);
  }
}

TEST(Intertwiner, GaussianTrivialCases) {
  const Params p(1, 1.0);
  const GaussianElement F(cplx(0.5, 0.2), CMatrix{{0.1, 0.3}, {0.3, -0.2}});
  const TwoValued same = intertwine_gauss(F, OrderingK::standard(1), OrderingK::standard(1), p);
  EXPECT_EQ(same.sign_relative_to(TwoValued(F)), 1);
  const GaussianElement C(cplx(2.0, -1.0), CMatrix::zero(2));
  const TwoValued cimg = intertwine_gauss(C, OrderingK::standard(1), OrderingK::weyl(1), p);
  EXPECT_EQ(cimg.rep.g, C.g);
  EXPECT_EQ(cimg.rep.Q.max_abs(), 0.0);
}

TEST(Intertwiner, GaussianRoundTripUpToSign) {
  const Params p(1, 1.0);
  const GaussianElement F(1.0, CMatrix{{0.2, cplx(0.1, 0.4)}, {cplx(0.1, 0.4), -0.3}});
  const auto K = OrderingK::weyl(1), K1 = OrderingK::standard(1);
  const TwoValued there = intertwine_gauss(F, K, K1, p);
  const TwoValued back = intertwine_gauss(there.rep, K1, K, p);
  EXPECT_TRUE(back.equals(TwoValued(F), 1e-12));
}

TEST(Intertwiner, GaussianLeavingTheClass) {
  const Params p(1, 1.0);
  // With K - K' = [[0,1],[1,0]] and this Q, I + i hbar (K - K') Q is the zero matrix.
  const CMatrix Q{{0.0, cplx(0.0, 1.0)}, {cplx(0.0, 1.0), 0.0}};
  try {
    intertwine_gauss(GaussianElement(1.0, Q), OrderingK::standard(1), OrderingK::weyl(1), p);
    FAIL() << "expected NonInvertibleTransform";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonInvertibleTransform);
  }
}
