#ifndef WEYLSTAR_INTERTWINER_HPP
#define WEYLSTAR_INTERTWINER_HPP

// Intertwiners between K-orderings,
//   T(f) = exp( (hbar/4i) sum_ij (K - K')^{ij} d_i d_j ) f,
// satisfying T(f *_K g) = T(f) *_K' T(g).
//
// On polynomials the exponential series terminates. On a Gaussian the
// second-order operator acts in closed form,
//   exp(tau d^T D d) e^{Q[z]} = det(I - 4 tau D Q)^{-1/2} e^{(Q (I - 4 tau D Q)^{-1})[z]},
// so the image is only defined up to the sign of the square root.

#include <cmath>

#include "weylstar/errors.hpp"
#include "weylstar/gaussian.hpp"
#include "weylstar/linalg.hpp"
#include "weylstar/poly.hpp"

namespace weylstar {

namespace detail {

// sum_ij D_ij d_i d_j f
inline PolyC second_order(const CMatrix& D, const PolyC& f) {
  const std::size_t n = f.nvars();
  PolyC r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PolyC di = f.derivative(i);
    if (di.is_zero()) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (D(i, j) != cplx{}) r += di.derivative(j) * D(i, j);
  }
  return r;
}

}  // namespace detail

inline PolyC intertwine_poly(const PolyC& f, const OrderingK& from, const OrderingK& to, const Params& p) {
  require_compatible(p, f);
  require_compatible(p, from);
  require_compatible(p, to);
  const CMatrix D = from.K - to.K;
  const cplx tau = p.hbar / (4.0 * I_unit);
  PolyC result = f;
  PolyC term = f;
  for (int k = 1; !term.is_zero(); ++k) {
    term = detail::second_order(D, term) * (tau / static_cast<double>(k));
    result += term;
  }
  return result.prune();
}

// Gaussian image with the square root continued along K(s) = K + s (K' - K).
inline TwoValued intertwine_gauss(const GaussianElement& F, const OrderingK& from, const OrderingK& to,
                                  const Params& p) {
  require_compatible(p, F);
  require_compatible(p, from);
  require_compatible(p, to);
  const std::size_t n = p.nvars();
  const CMatrix DQ = (from.K - to.K) * F.Q * (I_unit * p.hbar);
  const CMatrix Id = CMatrix::identity(n);
  const CMatrix B = Id + DQ;

  LU lu(B);
  const cplx d1 = lu.det();
  if (lu.exactly_singular || det_is_singular(d1, B))
    throw Error(ErrorKind::NonInvertibleTransform, "intertwine_gauss: image leaves the Gaussian class");

  auto along = [&](double s) { return det(Id + DQ * s); };
  const SqrtTrack track = continue_sqrt(along, 1.0, ErrorKind::NonInvertibleTransform);

  // Q B^{-1} = (B^{-T} Q)^T
  const CMatrix Qn = LU(B.transpose()).solve(F.Q).transpose().symmetrized();
  GaussianElement out(F.g / track.root, Qn);
  if (F.provenance) out.provenance = Provenance{F.provenance->A, F.provenance->t, to};
  return TwoValued(std::move(out));
}

}  // namespace weylstar

#endif  // WEYLSTAR_INTERTWINER_HPP
