#ifndef WEYLSTAR_STAR_EXPONENTIAL_HPP
#define WEYLSTAR_STAR_EXPONENTIAL_HPP

// Star exponentials F_K(t) = exp_*(t A_*) of quadratic forms, i.e. the
// solution of  dF/dt = A_{*K} *_K F,  F(0) = 1,  inside the Gaussian class.
//
// Closed form. With X = hbar t J A and the evolution matrix
//     W(t) = cos X + i K J sin X,
// the solution is
//     Q_K(t) = (-J/hbar) sin X W^{-1},      g_K(t) = det(W)^{-1/2},
// which is the image of the Weyl-ordered solution (-J/hbar) tan X under the
// Gaussian action of the ordering intertwiner. The square root is continued
// from g = 1 at t = 0 along the segment [0, t].
//
// Oracle. Inserting g exp(Q[z]) into the evolution equation gives, with
// M = I + i hbar Gamma Q,
//     Q' = M^T A M,         g'/g = (i hbar / 2) Tr(A Gamma M^T),
// which is integrated by classical RK4.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "weylstar/errors.hpp"
#include "weylstar/gaussian.hpp"
#include "weylstar/linalg.hpp"
#include "weylstar/poly.hpp"

namespace weylstar {

struct StarExpResult {
  TwoValued element;  // representative carries provenance (A, t, ord)
  int sheet = 1;      // continued amplitude relative to the principal root
  int continuation_steps = 0;

  const GaussianElement& gaussian() const { return element.rep; }
};

namespace detail {

struct EvolutionPoint {
  CMatrix W;    // cos X + i K J sin X
  CMatrix sin;  // sin X
};

inline EvolutionPoint evolution_point(const CMatrix& JA, const CMatrix& KJ, double hbar, cplx t) {
  auto cs = mat_cos_sin(JA * (hbar * t));
  CMatrix W = cs.cos + (KJ * cs.sin) * I_unit;
  return {std::move(W), std::move(cs.sin)};
}

}  // namespace detail

// det(cos X + i K J sin X); vanishes exactly on the singular set.
inline cplx evolution_det(const CMatrix& A, const OrderingK& ord, const Params& p, cplx t) {
  const std::size_t m = ord.m();
  const CMatrix J = symplectic_J(m);
  return det(detail::evolution_point(J * A, ord.K * J, p.hbar, t).W);
}

inline StarExpResult star_exp_quadratic(const CMatrix& A, const OrderingK& ord, const Params& p, cplx t) {
  require_symmetric(A, p);
  require_compatible(p, ord);
  const std::size_t n = p.nvars();
  Provenance prov{A, t, ord};
  if (t == cplx{}) return {TwoValued(GaussianElement(1.0, CMatrix::zero(n), prov)), 1, 0};

  const CMatrix J = symplectic_J(static_cast<std::size_t>(p.m));
  const CMatrix JA = J * A;
  const CMatrix KJ = ord.K * J;

  auto det_along = [&](double s) { return det(detail::evolution_point(JA, KJ, p.hbar, s * t).W); };
  const SqrtTrack track = continue_sqrt(det_along, 1.0, ErrorKind::SingularPoint);

  const auto end = detail::evolution_point(JA, KJ, p.hbar, t);
  LU lu(end.W);
  const cplx d = lu.det();
  if (lu.exactly_singular || det_is_singular(d, end.W))
    throw Error(ErrorKind::SingularPoint, "star_exp_quadratic: evolution determinant vanishes at t");

  // Q = (-J/hbar) S W^{-1}; solve W^T Y = S^T (S W^{-1})^T = W^{-T} S^T.
  const CMatrix SWinv = LU(end.W.transpose()).solve(end.sin.transpose()).transpose();
  CMatrix Q = ((-1.0 / p.hbar) * J * SWinv).symmetrized();

  const cplx g = 1.0 / track.root;
  const cplx principal = 1.0 / std::sqrt(d);
  const int sheet = std::real(g / principal) >= 0 ? 1 : -1;
  return {TwoValued(GaussianElement(g, std::move(Q), std::move(prov))), sheet, track.steps};
}

// The K = 0 specialization.
inline StarExpResult star_exp_weyl(const CMatrix& A, const Params& p, cplx t) {
  return star_exp_quadratic(A, OrderingK::weyl(static_cast<std::size_t>(p.m)), p, t);
}

// ---------------------------------------------------------------------------
// Rank-one forms with discriminant gamma^2 - alpha beta = 1, evaluated from
// the printed Weyl (F_M) and standard-ordering (F_N) formulas.

struct RankOneCoefficients {
  cplx X, Y, Z;
};

inline void require_unit_discriminant(cplx alpha, cplx beta, cplx gamma) {
  if (std::abs(gamma * gamma - alpha * beta - 1.0) > 1e-12)
    throw Error(ErrorKind::NumericalFailure, "rank-one formulas need gamma^2 - alpha beta = 1");
}

inline CMatrix rank_one_matrix(std::span<const cplx> a, cplx xx, cplx yy, cplx xy) {
  const std::size_t m = a.size();
  CMatrix aa(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) aa(i, j) = a[i] * a[j];
  return block2(aa * xx, aa * xy, aa * xy, aa * yy);
}

inline GaussianElement rank_one_FM(cplx t, cplx alpha, cplx beta, cplx gamma, std::span<const cplx> a,
                                   const Params& p) {
  require_on_sphere(a);
  require_unit_discriminant(alpha, beta, gamma);
  const cplx c = std::cos(p.hbar * t);
  if (std::abs(c) < 1e-12) throw Error(ErrorKind::SingularPoint, "F_M: cos(hbar t) = 0");
  const cplx tn = std::tan(p.hbar * t) / p.hbar;
  return {1.0 / c, rank_one_matrix(a, tn * alpha, tn * beta, tn * gamma)};
}

inline RankOneCoefficients rank_one_N_coefficients(cplx t, cplx alpha, cplx beta, cplx gamma, double hbar) {
  const cplx s2 = std::sin(2.0 * hbar * t);
  const cplx den = std::cos(2.0 * hbar * t) - I_unit * gamma * s2;
  if (std::abs(den) < 1e-12) throw Error(ErrorKind::SingularPoint, "F_N: cos 2ht - i gamma sin 2ht = 0");
  return {0.5 * alpha * s2 / den, 0.5 * beta * s2 / den, 0.5 * I_unit * (1.0 - 1.0 / den)};
}

// Amplitude exactly as printed: e^{-i hbar t gamma} (cos 2ht - i gamma sin 2ht)^{-1/2},
// root continued from 1 at t = 0.
inline cplx rank_one_gN_printed(cplx t, cplx gamma, double hbar) {
  auto den = [&](double s) {
    return std::cos(2.0 * hbar * s * t) - I_unit * gamma * std::sin(2.0 * hbar * s * t);
  };
  const SqrtTrack tr = continue_sqrt(den, 1.0, ErrorKind::SingularPoint);
  return std::exp(-I_unit * hbar * t * gamma) / tr.root;
}

inline GaussianElement rank_one_FN(cplx t, cplx alpha, cplx beta, cplx gamma, std::span<const cplx> a,
                                   const Params& p) {
  require_on_sphere(a);
  require_unit_discriminant(alpha, beta, gamma);
  const auto [X, Y, Z] = rank_one_N_coefficients(t, alpha, beta, gamma, p.hbar);
  const cplx g = rank_one_gN_printed(t, gamma, p.hbar);
  return {g, rank_one_matrix(a, X / p.hbar, Y / p.hbar, Z / p.hbar)};
}

// ---------------------------------------------------------------------------
// ODE oracle.

namespace detail {

struct OdeState {
  cplx g;
  CMatrix Q;
};

struct OdeSystem {
  CMatrix A;
  CMatrix Gamma;
  double hbar;
  cplx t;  // the path parameter s in [0,1] maps to time s t

  OdeState rhs(const OdeState& y) const {
    const std::size_t n = A.dim();
    const CMatrix M = CMatrix::identity(n) + (Gamma * y.Q) * (I_unit * hbar);
    const CMatrix Mt = M.transpose();
    CMatrix dQ = (Mt * A * M) * t;
    const cplx dg = y.g * (0.5 * I_unit * hbar) * (A * Gamma * Mt).trace() * t;
    return {dg, dQ.symmetrized()};
  }
};

inline OdeState axpy(const OdeState& y, const OdeState& k, double h) {
  return {y.g + h * k.g, y.Q + k.Q * h};
}

inline bool healthy(const OdeState& y) {
  return std::isfinite(y.g.real()) && std::isfinite(y.g.imag()) && y.Q.is_finite() && y.Q.max_abs() < 1e12 &&
         std::abs(y.g) < 1e12 && std::abs(y.g) > 1e-12;
}

inline OdeState rk4_step(const OdeSystem& sys, const OdeState& y, double h) {
  const OdeState k1 = sys.rhs(y);
  const OdeState k2 = sys.rhs(axpy(y, k1, h / 2));
  const OdeState k3 = sys.rhs(axpy(y, k2, h / 2));
  const OdeState k4 = sys.rhs(axpy(y, k3, h));
  return {y.g + (h / 6) * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g),
          (y.Q + (k1.Q + k2.Q * 2.0 + k3.Q * 2.0 + k4.Q) * (h / 6)).symmetrized()};
}

}  // namespace detail

// Classical RK4 with `steps` equal steps along [0, t].
inline GaussianElement ode_oracle_integrate(const CMatrix& A, const OrderingK& ord, const Params& p, cplx t,
                                            int steps) {
  require_symmetric(A, p);
  require_compatible(p, ord);
  if (steps < 1) throw Error(ErrorKind::StepUnderflow, "ode_oracle_integrate: need at least one step");
  detail::OdeSystem sys{A, ord.Gamma, p.hbar, t};
  detail::OdeState y{1.0, CMatrix::zero(p.nvars())};
  if (t == cplx{}) return {y.g, y.Q, Provenance{A, t, ord}};
  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    y = detail::rk4_step(sys, y, h);
    if (!detail::healthy(y)) throw Error(ErrorKind::SingularEncountered, "ode oracle: solution left the class");
  }
  return {y.g, y.Q, Provenance{A, t, ord}};
}

// Dense-output variant: values at s_k = k / steps, k = 0..steps.
inline std::vector<GaussianElement> ode_oracle_trajectory(const CMatrix& A, const OrderingK& ord, const Params& p,
                                                          cplx t, int steps) {
  require_symmetric(A, p);
  require_compatible(p, ord);
  if (steps < 1) throw Error(ErrorKind::StepUnderflow, "ode_oracle_trajectory: need at least one step");
  detail::OdeSystem sys{A, ord.Gamma, p.hbar, t};
  detail::OdeState y{1.0, CMatrix::zero(p.nvars())};
  std::vector<GaussianElement> out;
  out.emplace_back(y.g, y.Q);
  const double h = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    y = detail::rk4_step(sys, y, h);
    if (!detail::healthy(y)) throw Error(ErrorKind::SingularEncountered, "ode oracle: solution left the class");
    out.emplace_back(y.g, y.Q);
  }
  return out;
}

// Step-doubling RK4 with local error control. Raises StepUnderflow when the
// step needed near a singular point drops below 1e-12 of the path.
inline GaussianElement ode_oracle_adaptive(const CMatrix& A, const OrderingK& ord, const Params& p, cplx t,
                                           double tol = 1e-11) {
  require_symmetric(A, p);
  require_compatible(p, ord);
  detail::OdeSystem sys{A, ord.Gamma, p.hbar, t};
  detail::OdeState y{1.0, CMatrix::zero(p.nvars())};
  double s = 0, h = 1.0 / 64;
  while (s < 1.0) {
    h = std::min(h, 1.0 - s);
    const auto full = detail::rk4_step(sys, y, h);
    const auto half = detail::rk4_step(sys, detail::rk4_step(sys, y, h / 2), h / 2);
    const double scale = 1.0 + half.Q.frobenius() + std::abs(half.g);
    const double err = ((full.Q - half.Q).frobenius() + std::abs(full.g - half.g)) / scale;
    if (!detail::healthy(half) || err > tol) {
      h *= 0.5;
      if (h < 1e-12) throw Error(ErrorKind::StepUnderflow, "ode oracle: step underflow near a singular point");
      continue;
    }
    y = half;
    s += h;
    if (err < tol / 64) h *= 2;
  }
  return {y.g, y.Q, Provenance{A, t, ord}};
}

// ---------------------------------------------------------------------------
// Singular set scanning.

struct ScanRegion {
  double re_min = 0, re_max = 1;
  double im_min = 0, im_max = 0;
  int nx = 64, ny = 1;
};

namespace detail {

// Distance-to-singularity proxy: 1 / ||W^{-1}||_F, linear near a singular point
// even where det W has a multiple zero.
inline double inverse_gap(const CMatrix& JA, const CMatrix& KJ, double hbar, cplx t) {
  const CMatrix W = evolution_point(JA, KJ, hbar, t).W;
  LU lu(W);
  if (lu.exactly_singular) return 0.0;
  const CMatrix inv = lu.solve(CMatrix::identity(W.dim()));
  if (!inv.is_finite()) return 0.0;
  return 1.0 / inv.frobenius();
}

}  // namespace detail

// Approximate singular t inside the region. Candidates are local minima of the
// gap function on the grid, refined to 1e-10 (golden section on a segment,
// compass search in a rectangle) and kept when the gap vanishes there.
inline std::vector<cplx> singular_scan(const CMatrix& A, const OrderingK& ord, const Params& p,
                                       const ScanRegion& region) {
  require_symmetric(A, p);
  require_compatible(p, ord);
  const CMatrix J = symplectic_J(static_cast<std::size_t>(p.m));
  const CMatrix JA = J * A;
  const CMatrix KJ = ord.K * J;
  auto gap = [&](cplx t) { return detail::inverse_gap(JA, KJ, p.hbar, t); };

  const bool line = region.im_max <= region.im_min || region.ny <= 1;
  const int nx = std::max(region.nx, 2);
  const int ny = line ? 1 : std::max(region.ny, 2);
  const double dx = (region.re_max - region.re_min) / (nx - 1);
  const double dy = line ? 0.0 : (region.im_max - region.im_min) / (ny - 1);
  auto node = [&](int i, int j) { return cplx(region.re_min + i * dx, line ? region.im_min : region.im_min + j * dy); };

  std::vector<double> val(static_cast<std::size_t>(nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) val[static_cast<std::size_t>(j * nx + i)] = gap(node(i, j));
  auto at = [&](int i, int j) { return val[static_cast<std::size_t>(j * nx + i)]; };

  const double accept = 1e-7;
  std::vector<cplx> found;
  auto add_unique = [&](cplx t) {
    for (const auto& f : found)
      if (std::abs(f - t) < 1e-8) return;
    found.push_back(t);
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double v = at(i, j);
      bool is_min = true;
      for (int dj = -1; dj <= 1 && is_min; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (!di && !dj) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
          // Ties resolve toward the lower index so plateaus yield one candidate.
          const bool earlier = (jj < j) || (jj == j && ii < i);
          if (at(ii, jj) < v || (earlier && at(ii, jj) == v)) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;

      cplx best = node(i, j);
      double fbest = v;
      if (line) {
        double a = region.re_min + std::max(i - 1, 0) * dx;
        double b = region.re_min + std::min(i + 1, nx - 1) * dx;
        const double gr = (std::sqrt(5.0) - 1) / 2;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = gap({c, region.im_min}), fd = gap({d, region.im_min});
        while (b - a > 1e-12) {
          if (fc < fd) {
            b = d, d = c, fd = fc;
            c = b - gr * (b - a);
            fc = gap({c, region.im_min});
          } else {
            a = c, c = d, fc = fd;
            d = a + gr * (b - a);
            fd = gap({d, region.im_min});
          }
        }
        best = {0.5 * (a + b), region.im_min};
        fbest = gap(best);
      } else {
        double step = std::max(dx, dy);
        const cplx dirs[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        while (step > 1e-12) {
          bool moved = false;
          for (const auto& dir : dirs) {
            const cplx c = best + step * dir;
            const double fc = gap(c);
            if (fc < fbest) {
              best = c, fbest = fc, moved = true;
              break;
            }
          }
          if (!moved) step *= 0.5;
        }
      }
      const double scale = std::max(1.0, detail::evolution_point(JA, KJ, p.hbar, best).W.frobenius());
      if (fbest <= accept * scale) add_unique(best);
    }
  std::sort(found.begin(), found.end(), [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return found;
}

}  // namespace weylstar

#endif  // WEYLSTAR_STAR_EXPONENTIAL_HPP
