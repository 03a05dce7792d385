#ifndef WEYLSTAR_GAUSSIAN_HPP
#define WEYLSTAR_GAUSSIAN_HPP

// Value types for the Gaussian class  F = g exp(Q[z]),  g != 0, Q symmetric,
// its polynomial-prefactor closure, and sign-ambiguous ("two-valued") elements.

#include <cmath>
#include <numbers>
#include <optional>

#include "weylstar/errors.hpp"
#include "weylstar/linalg.hpp"
#include "weylstar/poly.hpp"

namespace weylstar {

// Records that an element was produced as exp_*(t A_*) in a given ordering.
struct Provenance {
  CMatrix A;
  cplx t;
  OrderingK ord;
};

struct GaussianElement {
  cplx g{1.0};
  CMatrix Q;
  std::optional<Provenance> provenance;

  GaussianElement() = default;
  GaussianElement(cplx amp, CMatrix q, std::optional<Provenance> prov = std::nullopt)
      : g(amp), Q(std::move(q)), provenance(std::move(prov)) {
    if (g == cplx{} || !std::isfinite(g.real()) || !std::isfinite(g.imag()))
      throw Error(ErrorKind::NonFinite, "GaussianElement: amplitude must be finite and nonzero");
    if (!Q.is_finite()) throw Error(ErrorKind::NonFinite, "GaussianElement: non-finite Q");
    if (!Q.is_symmetric(1e-9)) throw Error(ErrorKind::NotSymmetric, "GaussianElement: Q must be symmetric");
  }

  static GaussianElement constant(std::size_t nvars, cplx c) { return {c, CMatrix::zero(nvars)}; }

  std::size_t nvars() const { return Q.dim(); }

  GaussianElement scaled(cplx s) const {
    GaussianElement r = *this;
    r.g *= s;
    return r;
  }

  // Pointwise value g exp(z^T Q z).
  cplx evaluate(std::span<const cplx> z) const {
    const auto qz = Q * z;
    return g * std::exp(bilinear(z, qz));
  }
};

inline void require_compatible(const Params& p, const GaussianElement& F) {
  if (F.nvars() != p.nvars()) throw Error(ErrorKind::DimensionMismatch, "Gaussian does not match Params");
}

// prefactor(z) * core(z).
struct GaussPoly {
  PolyC prefactor;
  GaussianElement core;

  cplx evaluate(std::span<const cplx> z) const { return prefactor.evaluate(z) * core.evaluate(z); }
};

// The unordered pair {+rep, -rep}.
struct TwoValued {
  GaussianElement rep;

  TwoValued() = default;
  explicit TwoValued(GaussianElement r) : rep(std::move(r)) {}

  // +1 or -1 when other == +-this within tol, 0 otherwise.
  int sign_relative_to(const TwoValued& other, double tol = 1e-9) const {
    if (rep.nvars() != other.rep.nvars()) return 0;
    const double qscale = std::max(1.0, std::max(rep.Q.frobenius(), other.rep.Q.frobenius()));
    if ((rep.Q - other.rep.Q).frobenius() > tol * qscale) return 0;
    const double gscale = std::max(std::abs(rep.g), std::abs(other.rep.g));
    if (std::abs(rep.g - other.rep.g) <= tol * gscale) return 1;
    if (std::abs(rep.g + other.rep.g) <= tol * gscale) return -1;
    return 0;
  }

  bool equals(const TwoValued& other, double tol = 1e-9) const { return sign_relative_to(other, tol) != 0; }

  // Representative with amplitude argument in (-pi/2, pi/2].
  GaussianElement canonical() const {
    const double a = std::arg(rep.g);
    const bool keep = a > -std::numbers::pi / 2 && a <= std::numbers::pi / 2;
    return keep ? rep : rep.scaled(-1.0);
  }

  TwoValued negated() const { return TwoValued(rep.scaled(-1.0)); }
};

}  // namespace weylstar

#endif  // WEYLSTAR_GAUSSIAN_HPP
