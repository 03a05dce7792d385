#ifndef WEYLSTAR_TWO_VALUED_HPP
#define WEYLSTAR_TWO_VALUED_HPP

// Polar elements, sheet continuation along families of quadratic forms,
// reflections and the blurred double cover of SO(m, C).

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "weylstar/errors.hpp"
#include "weylstar/gaussian.hpp"
#include "weylstar/gaussian_algebra.hpp"
#include "weylstar/linalg.hpp"
#include "weylstar/poly.hpp"
#include "weylstar/star_exponential.hpp"

namespace weylstar {

struct PolarElement {
  std::vector<cplx> a;
  TwoValued value;
};

// exp_*((pi / 2 hbar) B_*(0,0,1)) in the standard ordering, where it is finite.
// The representative is +i exp((2i/hbar) <a,u><a,v>) on the sheet continued from t = 0.
inline PolarElement polar_element(std::span<const cplx> a, const Params& p) {
  const auto form = rank_one_B(a, 0.0, 0.0, 1.0, p);
  const auto ord = OrderingK::standard(static_cast<std::size_t>(p.m));
  auto res = star_exp_quadratic(form.A, ord, p, std::numbers::pi / (2.0 * p.hbar));
  return {std::vector<cplx>(a.begin(), a.end()), std::move(res.element)};
}

// exp_*(t B_*(alpha, beta, gamma)) in the standard ordering.
inline TwoValued rank_one_exp(std::span<const cplx> a, cplx alpha, cplx beta, cplx gamma, const Params& p, cplx t) {
  const auto form = rank_one_B(a, alpha, beta, gamma, p);
  return star_exp_quadratic(form.A, OrderingK::standard(static_cast<std::size_t>(p.m)), p, t).element;
}

// ---------------------------------------------------------------------------
// Sheet continuation.

// A(s) = sum_k f_k(freq_k s + phase_k) A_k with f_k in {const, cos, sin}.
struct QuadraticFamily {
  struct Term {
    std::string fn = "const";
    double freq = 1.0;
    double phase = 0.0;
    CMatrix A;
  };
  std::vector<Term> terms;

  CMatrix operator()(double s) const {
    if (terms.empty()) throw Error(ErrorKind::DimensionMismatch, "QuadraticFamily: no terms");
    CMatrix r = CMatrix::zero(terms.front().A.dim());
    for (const auto& t : terms) {
      const double x = t.freq * s + t.phase;
      double w = 1.0;
      if (t.fn == "cos") w = std::cos(x);
      else if (t.fn == "sin") w = std::sin(x);
      else if (t.fn != "const") throw Error(ErrorKind::ParseError, "QuadraticFamily: unknown fn '" + t.fn + "'");
      r += t.A * w;
    }
    return r;
  }
};

struct SheetPath {
  std::vector<double> samples;
  std::vector<cplx> branch_values;  // continued amplitude at each sample
  int net_sign = 1;
  cplx direct_end{};  // amplitude at the end on the sheet continued from t = 0
};

// Continues the amplitude of exp_*(t_end A(s)) along the samples of s, starting
// from the sheet obtained by continuing in t at the first sample. net_sign
// compares the continued end amplitude with the end amplitude continued in t,
// i.e. it is the monodromy of the loop
//   (s0, 0) -> (s0, t_end) -> (s1, t_end) -> (s1, 0) -> (s0, 0),
// where the last leg is trivial because F = 1 at t = 0.
inline SheetPath continue_sheet(const std::function<CMatrix(double)>& family, const OrderingK& ord, const Params& p,
                                cplx t_end, const std::vector<double>& path) {
  if (path.empty()) throw Error(ErrorKind::DimensionMismatch, "continue_sheet: empty path");
  require_compatible(p, ord);
  const CMatrix J = symplectic_J(static_cast<std::size_t>(p.m));
  const CMatrix KJ = ord.K * J;
  auto det_at = [&](double s) {
    return det(detail::evolution_point(J * family(s), KJ, p.hbar, t_end).W);
  };

  SheetPath out;
  StarExpResult start;
  try {
    start = star_exp_quadratic(family(path.front()), ord, p, t_end);
  } catch (const Error& e) {
    throw Error(ErrorKind::PathThroughSingularity, std::string("continue_sheet: start point: ") + e.what());
  }
  cplx root = 1.0 / start.gaussian().g;
  out.samples.push_back(path.front());
  out.branch_values.push_back(start.gaussian().g);

  for (std::size_t k = 1; k < path.size(); ++k) {
    const double s0 = path[k - 1], s1 = path[k];
    auto seg = [&](double tau) { return det_at(s0 + tau * (s1 - s0)); };
    root = continue_sqrt(seg, root, ErrorKind::PathThroughSingularity, 1.0 / 8).root;
    out.samples.push_back(s1);
    out.branch_values.push_back(1.0 / root);
  }

  const cplx g_end = out.branch_values.back();
  cplx reference;
  try {
    reference = star_exp_quadratic(family(path.back()), ord, p, t_end).gaussian().g;
  } catch (const Error&) {
    // End point not reachable along t; fall back to the start when the end
    // value is +- the start value.
    reference = start.gaussian().g;
  }
  out.direct_end = reference;
  const cplx ratio = g_end / reference;
  if (std::abs(std::abs(ratio) - 1.0) > 1e-6 || std::abs(ratio.imag()) > 1e-6)
    throw Error(ErrorKind::NumericalFailure, "continue_sheet: end amplitudes are not sign-related");
  out.net_sign = ratio.real() > 0 ? 1 : -1;
  return out;
}

inline SheetPath continue_sheet(const QuadraticFamily& family, const OrderingK& ord, const Params& p, cplx t_end,
                                const std::vector<double>& path) {
  return continue_sheet(std::function<CMatrix(double)>(family), ord, p, t_end, path);
}

// The m = 1 family  Ad(e_*^{(i theta / 2 hbar)(u^2+v^2)}) e_*^{2tuv}
//                   = e_*^{t (sin 2theta (u^2 - v^2) + cos 2theta 2uv)}.
inline QuadraticFamily rotated_uv_family() {
  QuadraticFamily f;
  f.terms.push_back({"sin", 2.0, 0.0, CMatrix{{1.0, 0.0}, {0.0, -1.0}}});
  f.terms.push_back({"cos", 2.0, 0.0, CMatrix{{0.0, 1.0}, {1.0, 0.0}}});
  return f;
}

// ---------------------------------------------------------------------------
// Reflections and the double cover.

// Action of Ad(eps00(a)) on <b,u>: b - 2 <a,b> a.
inline std::vector<cplx> reflect(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "reflect: sizes differ");
  require_on_sphere(a);
  const cplx ab = bilinear(a, b);
  std::vector<cplx> r(b.begin(), b.end());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= 2.0 * ab * a[i];
  return r;
}

inline CMatrix reflection_matrix(std::span<const cplx> a) {
  require_on_sphere(a);
  const std::size_t m = a.size();
  CMatrix R = CMatrix::identity(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) R(i, j) -= 2.0 * a[i] * a[j];
  return R;
}

// Matrix of Ad(eps00(a) * eps00(b)) on the u-linear forms: Ad(eps00(a) eps00(b)) <c,u> = <R c, u>.
inline CMatrix double_cover_rotation(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "double_cover_rotation: sizes differ");
  return reflection_matrix(a) * reflection_matrix(b);
}

// The generating pair's two-valued product eps00(a) * eps00(b).
inline TwoValued double_cover_element(std::span<const cplx> a, std::span<const cplx> b, const Params& p) {
  const auto ord = OrderingK::standard(static_cast<std::size_t>(p.m));
  const auto ea = polar_element(a, p);
  const auto eb = polar_element(b, p);
  return star_gauss_gauss(ea.value.rep, eb.value.rep, ord, p);
}

// Matrix of Ad(F) on the u-linear forms computed through the star algebra.
inline CMatrix adjoint_on_u_forms(const GaussianElement& F, const OrderingK& ord, const Params& p) {
  const std::size_t m = static_cast<std::size_t>(p.m);
  CMatrix R(m);
  for (std::size_t j = 0; j < m; ++j) {
    const PolyC image = adjoint(F, PolyC::generator(p.nvars(), j), ord, p);
    for (std::size_t i = 0; i < m; ++i) {
      Exponent e(p.nvars(), 0);
      e[i] = 1;
      R(i, j) = image.coeff(e);
    }
  }
  return R;
}

}  // namespace weylstar

#endif  // WEYLSTAR_TWO_VALUED_HPP
