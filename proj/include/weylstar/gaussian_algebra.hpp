#ifndef WEYLSTAR_GAUSSIAN_ALGEBRA_HPP
#define WEYLSTAR_GAUSSIAN_ALGEBRA_HPP

// Star-algebra operations on the Gaussian class:
//   * Gaussian x polynomial, exact and terminating;
//   * Gaussian x Gaussian in closed form with a determinant^{-1/2} amplitude;
//   * inverses and adjoint actions.
//
// Gaussian x Gaussian: writing f(x) g(y) with w = (x, y), the product is the
// operator exp((i hbar/2) d_x^T Gamma d_y) restricted to x = y = z. On the
// Gaussian exp(w^T Qt w), Qt = diag(Q1, Q2), that operator acts as
//   det(N)^{-1/2} exp(w^T Qt N^{-1} w),   N = I - i hbar [[0, Gamma Q2], [Gamma^T Q1, 0]].
// The root is continued along det(I - s (I - N)) from s = 0, which picks the
// representative of the two-valued result.

#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <vector>

#include "weylstar/errors.hpp"
#include "weylstar/gaussian.hpp"
#include "weylstar/linalg.hpp"
#include "weylstar/poly.hpp"
#include "weylstar/star_exponential.hpp"

namespace weylstar {

// Side of the polynomial factor: left is f * F, right is F * f.
enum class Side { left, right };

namespace detail {

// Linear polynomials (G Q z)_i.
inline std::vector<PolyC> linear_rows(const CMatrix& GQ) {
  const std::size_t n = GQ.dim();
  std::vector<PolyC> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    PolyC r(n);
    for (std::size_t k = 0; k < n; ++k)
      if (GQ(i, k) != cplx{}) r += PolyC::generator(n, k, GQ(i, k));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace detail

// Exact product of a Gaussian with a polynomial. The shift operators act on
// the prefactor q of q F as D_i q = c (G grad q)_i + 2 c (G Q z)_i q with
// c = i hbar / 2 and G = Gamma (left) or Gamma^T (right).
inline GaussPoly star_gauss_poly(const GaussianElement& F, const PolyC& f, const OrderingK& ord, const Params& p,
                                 Side side) {
  require_compatible(p, F);
  require_compatible(p, f);
  require_compatible(p, ord);
  const cplx c = 0.5 * I_unit * p.hbar;
  const CMatrix G = (side == Side::left ? ord.Gamma : ord.Gamma.transpose()) * c;
  const auto rows = detail::linear_rows(G * F.Q * 2.0);
  auto D = [&](std::size_t i, const PolyC& q) {
    return detail::contracted_gradient(G, i, q) + rows[i].pointwise(q);
  };
  PolyC pre = detail::shifted_expand(f, PolyC::constant(p.nvars(), 1.0), D);
  GaussianElement core = F;
  core.provenance.reset();
  return {std::move(pre), std::move(core)};
}

// Solves for r with  r * F = q F  (Side::left) or  F * r = q F  (Side::right).
// The top-degree part of the map r -> prefactor is r(M z) with
// M = I + i hbar Gamma Q (left) or I + i hbar Gamma^T Q (right), so the
// solution peels off one degree at a time.
inline PolyC factor_through(const GaussianElement& F, const PolyC& q, const OrderingK& ord, const Params& p,
                            Side side) {
  require_compatible(p, F);
  require_compatible(p, q);
  const std::size_t n = p.nvars();
  const CMatrix G = side == Side::left ? ord.Gamma : ord.Gamma.transpose();
  const CMatrix M = CMatrix::identity(n) + (G * F.Q) * (I_unit * p.hbar);
  CMatrix Minv;
  try {
    Minv = inverse(M);
  } catch (const Error&) {
    throw Error(ErrorKind::NoInverseInClass, "factor_through: multiplication by F is not invertible on polynomials");
  }
  PolyC r(n);
  PolyC rem = q;
  const double scale = std::max(q.norm(), 1e-300);
  for (int guard = 0; guard <= q.degree() + 1 && !rem.is_zero(); ++guard) {
    const int d = rem.degree();
    const PolyC top = rem.homogeneous_part(d);
    if (top.norm() <= 1e-15 * scale) break;
    const PolyC rd = top.linear_substitute(Minv);
    r += rd;
    rem -= star_gauss_poly(F, rd, ord, p, side).prefactor;
    PolyC lower(n);
    for (const auto& [e, c] : rem.terms())
      if (std::accumulate(e.begin(), e.end(), 0) < d) lower.add_term(e, c);
    rem = std::move(lower);
  }
  return r.prune();
}

// ---------------------------------------------------------------------------
// Gaussian x Gaussian.

namespace detail {

inline CMatrix product_offdiag(const GaussianElement& F1, const GaussianElement& F2, const OrderingK& ord,
                               double hbar) {
  const std::size_t n = F1.nvars();
  const CMatrix GQ2 = ord.Gamma * F2.Q;
  const CMatrix GtQ1 = ord.Gamma.transpose() * F1.Q;
  CMatrix P(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      P(i, n + j) = I_unit * hbar * GQ2(i, j);
      P(n + i, j) = I_unit * hbar * GtQ1(i, j);
    }
  return P;
}

}  // namespace detail

inline TwoValued star_gauss_gauss(const GaussianElement& F1, const GaussianElement& F2, const OrderingK& ord,
                                  const Params& p) {
  require_compatible(p, F1);
  require_compatible(p, F2);
  require_compatible(p, ord);
  const std::size_t n = p.nvars();
  const CMatrix P = detail::product_offdiag(F1, F2, ord, p.hbar);
  const CMatrix I2 = CMatrix::identity(2 * n);
  const CMatrix N = I2 - P;

  LU lu(N);
  const cplx d1 = lu.det();
  if (lu.exactly_singular || det_is_singular(d1, N))
    throw Error(ErrorKind::ProductSingular, "star_gauss_gauss: composition determinant vanishes");

  // Continue sqrt det(I - s P) from s = 0; bend the path into the complex
  // s-plane if the straight one meets a zero.
  cplx root{};
  bool ok = false;
  for (double bend : {0.0, 0.5, -0.5, 1.5, -1.5}) {
    auto along = [&](double tau) {
      const cplx s = tau + I_unit * bend * tau * (1.0 - tau);
      return det(I2 - P * s);
    };
    try {
      root = continue_sqrt(along, 1.0, ErrorKind::ProductSingular).root;
      ok = true;
      break;
    } catch (const Error&) {
    }
  }
  if (!ok) root = std::sqrt(d1);

  // [I I] Qt N^{-1} [I; I]
  CMatrix Qt(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Qt(i, j) = F1.Q(i, j);
      Qt(n + i, n + j) = F2.Q(i, j);
    }
  const CMatrix R = Qt * lu.solve(I2);
  CMatrix Q(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) Q(i, j) = R(i, j) + R(i, n + j) + R(n + i, j) + R(n + i, n + j);
  return TwoValued(GaussianElement(F1.g * F2.g / root, Q.symmetrized()));
}

// ---------------------------------------------------------------------------
// Inverses.

// Inverse within the class. With provenance (A, t) in the same ordering this is
// the element of provenance (A, -t). Otherwise Q is mapped to Weyl ordering,
// negated there and mapped back; the amplitude is fixed by F * G = 1. In both
// cases the representative is chosen so that star_gauss_gauss(F, G) is +1.
inline TwoValued inverse(const GaussianElement& F, const OrderingK& ord, const Params& p) {
  require_compatible(p, F);
  require_compatible(p, ord);
  const std::size_t n = p.nvars();
  GaussianElement G;
  if (F.provenance && F.provenance->ord.K == ord.K) {
    const auto& pv = *F.provenance;
    G = star_exp_quadratic(pv.A, ord, p, -pv.t).element.rep;
  } else {
    try {
      const CMatrix Id = CMatrix::identity(n);
      const CMatrix KQ = ord.K * F.Q;
      const CMatrix Q0 = (F.Q * inverse(Id + KQ * (I_unit * p.hbar))).symmetrized();
      const CMatrix Qinv = (-1.0 * Q0 * inverse(Id + ord.K * Q0 * (I_unit * p.hbar))).symmetrized();
      G = GaussianElement(1.0, Qinv);
    } catch (const Error&) {
      throw Error(ErrorKind::NoInverseInClass, "inverse: ordering transform is singular");
    }
  }
  TwoValued prod;
  try {
    prod = star_gauss_gauss(F, G, ord, p);
  } catch (const Error&) {
    throw Error(ErrorKind::NoInverseInClass, "inverse: F * G leaves the class");
  }
  if (rel_diff(prod.rep.Q, CMatrix::zero(n)) > 1e-8)
    throw Error(ErrorKind::NoInverseInClass, "inverse: F * G is not constant");
  if (!F.provenance || F.provenance->ord.K != ord.K) {
    G.g = 1.0 / prod.rep.g;
  } else if (std::real(prod.rep.g) < 0) {
    G.g = -G.g;
  }
  return TwoValued(std::move(G));
}

// ---------------------------------------------------------------------------
// Adjoint action Ad(F) x = F * x * F^{-1}.

// On polynomials the result is the r with r * F = F * x; the sign ambiguity
// of F cancels.
inline PolyC adjoint(const GaussianElement& F, const PolyC& x, const OrderingK& ord, const Params& p) {
  const PolyC q = star_gauss_poly(F, x, ord, p, Side::right).prefactor;
  return factor_through(F, q, ord, p, Side::left);
}

inline TwoValued adjoint(const GaussianElement& F, const GaussianElement& x, const OrderingK& ord,
                         const Params& p) {
  const TwoValued fx = star_gauss_gauss(F, x, ord, p);
  const TwoValued finv = inverse(F, ord, p);
  return star_gauss_gauss(fx.rep, finv.rep, ord, p);
}

// ---------------------------------------------------------------------------
// Mixed products of polynomial-prefactor Gaussians, used by the expression
// evaluator. Both factors are rewritten as r1 * F1 and F2 * r2 first.

inline GaussPoly star_poly_gausspoly(const PolyC& f, const GaussPoly& x, const OrderingK& ord, const Params& p) {
  const PolyC r = factor_through(x.core, x.prefactor, ord, p, Side::left);
  return star_gauss_poly(x.core, star_poly(f, r, ord, p), ord, p, Side::left);
}

inline GaussPoly star_gausspoly_poly(const GaussPoly& x, const PolyC& f, const OrderingK& ord, const Params& p) {
  const PolyC r = factor_through(x.core, x.prefactor, ord, p, Side::right);
  return star_gauss_poly(x.core, star_poly(r, f, ord, p), ord, p, Side::right);
}

inline GaussPoly star_gausspoly_gausspoly(const GaussPoly& x, const GaussPoly& y, const OrderingK& ord,
                                          const Params& p) {
  const PolyC r1 = factor_through(x.core, x.prefactor, ord, p, Side::left);
  const PolyC r2 = factor_through(y.core, y.prefactor, ord, p, Side::right);
  const GaussianElement G = star_gauss_gauss(x.core, y.core, ord, p).rep;
  const GaussPoly gr2 = star_gauss_poly(G, r2, ord, p, Side::right);
  const PolyC w = factor_through(G, gr2.prefactor, ord, p, Side::left);
  return star_gauss_poly(G, star_poly(r1, w, ord, p), ord, p, Side::left);
}

// ---------------------------------------------------------------------------
// Independent check for the Weyl ordering: the integral form
//   (f * g)(z) = (pi hbar)^{-2m} int int f(z+x) g(z+y) exp((2i/hbar) x^T J y) dx dy
// evaluated on Gaussians by the standard determinant formula
//   int exp(w^T B w + b^T w) dw = pi^{n/2} det(-B)^{-1/2} exp(-b^T B^{-1} b / 4).
// Returns the squared amplitude (sign-free) and Q.
struct WeylIntegralProduct {
  cplx g_squared;
  CMatrix Q;
};

inline WeylIntegralProduct weyl_gaussian_integral(const GaussianElement& F1, const GaussianElement& F2,
                                                  const Params& p) {
  const std::size_t n = p.nvars();
  const CMatrix J = symplectic_J(static_cast<std::size_t>(p.m));
  CMatrix B(2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      B(i, j) = F1.Q(i, j);
      B(n + i, n + j) = F2.Q(i, j);
      B(i, n + j) = (I_unit / p.hbar) * J(i, j);
      B(n + i, j) = (I_unit / p.hbar) * J(j, i);
    }
  const auto [dB, Binv] = det_inv(B * (-p.hbar));
  // Binv is (-hbar B)^{-1}; the linear coefficient b = (2 Q1 z, 2 Q2 z).
  // Exponent: z^T (Q1 + Q2) z - (1/4) b^T B^{-1} b = z^T (Q1 + Q2 + hbar [Q1 Q2] Binv [Q1; Q2]) z.
  CMatrix Q = F1.Q + F2.Q;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          acc += F1.Q(i, k) * Binv(k, l) * F1.Q(l, j);
          acc += F1.Q(i, k) * Binv(k, n + l) * F2.Q(l, j);
          acc += F2.Q(i, k) * Binv(n + k, l) * F1.Q(l, j);
          acc += F2.Q(i, k) * Binv(n + k, n + l) * F2.Q(l, j);
        }
      Q(i, j) += p.hbar * acc;
    }
  const cplx g2 = F1.g * F1.g * F2.g * F2.g / dB;
  return {g2, Q.symmetrized()};
}

}  // namespace weylstar

#endif  // WEYLSTAR_GAUSSIAN_ALGEBRA_HPP
