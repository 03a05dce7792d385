#ifndef WEYLSTAR_POLY_HPP
#define WEYLSTAR_POLY_HPP

// Sparse polynomials over C in the 2m generators z = (u_1..u_m, v_1..v_m) and
// the K-ordered star product
//
//   f *_K g = f exp( (i hbar / 2) sum_ij  <-d_i Gamma^{ij} ->d_j ) g,
//   Gamma = K + J.
//
// The bidifferential series is evaluated through the shift form
// f *_K g = f(x + (i hbar/2) Gamma d_y) g(y) |_{x=y=z}, whose components
// commute, so it expands as sum_a (d^a f)/a! * D^a g with D_i = (i hbar/2)(Gamma grad)_i.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "weylstar/errors.hpp"
#include "weylstar/linalg.hpp"

namespace weylstar {

struct Params {
  int m = 1;
  double hbar = 1.0;

  Params() = default;
  Params(int m_, double hbar_) : m(m_), hbar(hbar_) {
    if (m < 1) throw Error(ErrorKind::DimensionMismatch, "Params: m must be positive");
    if (!(hbar > 0) || !std::isfinite(hbar)) throw Error(ErrorKind::NumericalFailure, "Params: hbar must be a positive real");
  }
  std::size_t nvars() const { return static_cast<std::size_t>(2 * m); }
};

using Exponent = std::vector<int>;

class PolyC {
 public:
  using TermMap = std::map<Exponent, cplx>;

  PolyC() = default;
  explicit PolyC(std::size_t nvars) : nvars_(nvars) {}

  static PolyC constant(std::size_t nvars, cplx c) {
    PolyC p(nvars);
    if (c != cplx{}) p.terms_[Exponent(nvars, 0)] = c;
    return p;
  }
  static PolyC generator(std::size_t nvars, std::size_t i, cplx c = 1.0) {
    if (i >= nvars) throw Error(ErrorKind::IndexOutOfRange, "PolyC::generator index");
    PolyC p(nvars);
    Exponent e(nvars, 0);
    e[i] = 1;
    if (c != cplx{}) p.terms_[e] = c;
    return p;
  }
  static PolyC monomial(Exponent e, cplx c) {
    PolyC p(e.size());
    if (c != cplx{}) p.terms_[std::move(e)] = c;
    return p;
  }

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
  }

  cplx coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? cplx{} : it->second;
  }

  cplx constant_term() const { return coeff(Exponent(nvars_, 0)); }

  // Adds c z^e, dropping exact zeros.
  void add_term(const Exponent& e, cplx c) {
    if (e.size() != nvars_) throw Error(ErrorKind::DimensionMismatch, "PolyC: exponent length");
    if (c == cplx{}) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == cplx{}) terms_.erase(it);
    }
  }

  // Drops |c| <= rel * max |c|.
  PolyC& prune(double rel = 1e-15) {
    double big = 0;
    for (const auto& [e, c] : terms_) big = std::max(big, std::abs(c));
    const double cut = rel * big;
    std::erase_if(terms_, [cut](const auto& kv) { return std::abs(kv.second) <= cut; });
    return *this;
  }

  double norm() const {
    double s = 0;
    for (const auto& [e, c] : terms_) s += std::norm(c);
    return std::sqrt(s);
  }

  PolyC& operator+=(const PolyC& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  PolyC& operator-=(const PolyC& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  PolyC& operator*=(cplx s) {
    if (s == cplx{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend PolyC operator+(PolyC a, const PolyC& b) { return std::move(a += b).prune(); }
  friend PolyC operator-(PolyC a, const PolyC& b) { return std::move(a -= b).prune(); }
  friend PolyC operator-(PolyC a) { return std::move(a *= -1.0); }
  friend PolyC operator*(PolyC a, cplx s) { return std::move(a *= s); }
  friend PolyC operator*(cplx s, PolyC a) { return std::move(a *= s); }

  // Pointwise (commutative) product. Not exposed as the algebra product.
  PolyC pointwise(const PolyC& o) const {
    check(o);
    PolyC r(nvars_);
    Exponent e(nvars_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) {
        for (std::size_t k = 0; k < nvars_; ++k) e[k] = e1[k] + e2[k];
        r.add_term(e, c1 * c2);
      }
    return r;
  }

  PolyC derivative(std::size_t i) const {
    if (i >= nvars_) throw Error(ErrorKind::IndexOutOfRange, "PolyC::derivative index");
    PolyC r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[i] == 0) continue;
      Exponent f = e;
      f[i] -= 1;
      r.add_term(f, c * static_cast<double>(e[i]));
    }
    return r;
  }

  PolyC homogeneous_part(int d) const {
    PolyC r(nvars_);
    for (const auto& [e, c] : terms_)
      if (std::accumulate(e.begin(), e.end(), 0) == d) r.terms_.emplace(e, c);
    return r;
  }

  // Substitutes z -> L z, i.e. z_k -> sum_l L(k,l) z_l.
  PolyC linear_substitute(const CMatrix& L) const {
    if (L.dim() != nvars_) throw Error(ErrorKind::DimensionMismatch, "linear_substitute");
    std::vector<PolyC> image;
    image.reserve(nvars_);
    for (std::size_t k = 0; k < nvars_; ++k) {
      PolyC row(nvars_);
      for (std::size_t l = 0; l < nvars_; ++l) row += generator(nvars_, l, L(k, l));
      image.push_back(std::move(row));
    }
    PolyC r(nvars_);
    for (const auto& [e, c] : terms_) {
      PolyC t = constant(nvars_, c);
      for (std::size_t k = 0; k < nvars_; ++k)
        for (int p = 0; p < e[k]; ++p) t = t.pointwise(image[k]);
      r += t;
    }
    return r.prune();
  }

  cplx evaluate(std::span<const cplx> z) const {
    if (z.size() != nvars_) throw Error(ErrorKind::DimensionMismatch, "PolyC::evaluate");
    cplx s{};
    for (const auto& [e, c] : terms_) {
      cplx t = c;
      for (std::size_t k = 0; k < nvars_; ++k)
        for (int p = 0; p < e[k]; ++p) t *= z[k];
      s += t;
    }
    return s;
  }

  friend bool operator==(const PolyC&, const PolyC&) = default;

 private:
  void check(const PolyC& o) const {
    if (o.nvars_ != nvars_) throw Error(ErrorKind::DimensionMismatch, "PolyC: generator counts differ");
  }

  std::size_t nvars_ = 0;
  TermMap terms_;
};

// Relative coefficient distance with denominator floored at 1.
inline double rel_diff(const PolyC& a, const PolyC& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

// ---------------------------------------------------------------------------
// Orderings.

struct OrderingK {
  CMatrix K;
  CMatrix Gamma;  // K + J
  std::string name = "custom";

  OrderingK() = default;
  OrderingK(CMatrix k, std::string label = "custom") : K(std::move(k)), name(std::move(label)) {
    if (K.dim() % 2 != 0 || K.dim() == 0) throw Error(ErrorKind::DimensionMismatch, "OrderingK: K must be 2m x 2m");
    if (!K.is_symmetric()) throw Error(ErrorKind::NotSymmetric, "OrderingK: K must be symmetric");
    Gamma = K + symplectic_J(K.dim() / 2);
  }

  std::size_t m() const { return K.dim() / 2; }

  static OrderingK weyl(std::size_t m) { return {CMatrix::zero(2 * m), "weyl"}; }
  static OrderingK standard(std::size_t m) {
    const auto id = CMatrix::identity(m);
    const auto z = CMatrix::zero(m);
    return {block2(z, id, id, z), "standard"};
  }
  static OrderingK antistandard(std::size_t m) {
    const auto id = CMatrix::identity(m);
    const auto z = CMatrix::zero(m);
    return {block2(z, -id, -id, z), "antistandard"};
  }
};

inline void require_compatible(const Params& p, const OrderingK& ord) {
  if (ord.K.dim() != p.nvars()) throw Error(ErrorKind::DimensionMismatch, "ordering does not match Params");
}
inline void require_compatible(const Params& p, const PolyC& f) {
  if (f.nvars() != p.nvars()) throw Error(ErrorKind::DimensionMismatch, "polynomial does not match Params");
}

// ---------------------------------------------------------------------------
// Shift-form expansion shared by polynomial-polynomial and Gaussian-polynomial
// products:  sum_beta c_beta sum_{alpha <= beta} C(beta, alpha) z^{beta-alpha} D^alpha seed,
// where the D_i commute. D^alpha seed is memoized by alpha.

namespace detail {

inline double binomial(int n, int k) {
  double r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

using ShiftOp = std::function<PolyC(std::size_t, const PolyC&)>;

inline PolyC shifted_expand(const PolyC& f, const PolyC& seed, const ShiftOp& D) {
  const std::size_t n = f.nvars();
  std::map<Exponent, PolyC> memo;
  memo.emplace(Exponent(n, 0), seed);

  std::function<const PolyC&(const Exponent&)> power = [&](const Exponent& a) -> const PolyC& {
    if (auto it = memo.find(a); it != memo.end()) return it->second;
    std::size_t i = 0;
    while (a[i] == 0) ++i;
    Exponent b = a;
    b[i] -= 1;
    PolyC v = D(i, power(b));
    return memo.emplace(a, std::move(v)).first->second;
  };

  PolyC result(n);
  Exponent alpha(n), rest(n);
  for (const auto& [beta, cb] : f.terms()) {
    // Enumerate alpha <= beta componentwise.
    std::fill(alpha.begin(), alpha.end(), 0);
    while (true) {
      double binom = 1;
      for (std::size_t k = 0; k < n; ++k) {
        binom *= binomial(beta[k], alpha[k]);
        rest[k] = beta[k] - alpha[k];
      }
      const PolyC& da = power(alpha);
      for (const auto& [e, c] : da.terms()) {
        Exponent s(n);
        for (std::size_t k = 0; k < n; ++k) s[k] = e[k] + rest[k];
        result.add_term(s, cb * binom * c);
      }
      std::size_t k = 0;
      while (k < n && alpha[k] == beta[k]) alpha[k++] = 0;
      if (k == n) break;
      ++alpha[k];
    }
  }
  return result.prune();
}

// (G grad q)_i: the first-order operator sum_j G(i,j) d_j q.
inline PolyC contracted_gradient(const CMatrix& G, std::size_t i, const PolyC& q) {
  PolyC r(q.nvars());
  for (std::size_t j = 0; j < q.nvars(); ++j)
    if (G(i, j) != cplx{}) r += q.derivative(j) * G(i, j);
  return r;
}

}  // namespace detail

// f *_K g.
inline PolyC star_poly(const PolyC& f, const PolyC& g, const OrderingK& ord, const Params& p) {
  require_compatible(p, f);
  require_compatible(p, g);
  require_compatible(p, ord);
  const cplx c = 0.5 * I_unit * p.hbar;
  const CMatrix G = ord.Gamma * c;
  return detail::shifted_expand(
      f, g, [&G](std::size_t i, const PolyC& q) { return detail::contracted_gradient(G, i, q); });
}

inline PolyC commutator(const PolyC& f, const PolyC& g, const OrderingK& ord, const Params& p) {
  return star_poly(f, g, ord, p) - star_poly(g, f, ord, p);
}

inline PolyC star_power(const PolyC& f, unsigned k, const OrderingK& ord, const Params& p) {
  PolyC r = PolyC::constant(f.nvars(), 1.0);
  for (unsigned j = 0; j < k; ++j) r = star_poly(r, f, ord, p);
  return r;
}

// ---------------------------------------------------------------------------
// Quadratic forms.

inline void require_symmetric(const CMatrix& A, const Params& p) {
  if (A.dim() != p.nvars()) throw Error(ErrorKind::DimensionMismatch, "quadratic form dimension");
  if (!A.is_symmetric()) throw Error(ErrorKind::NotSymmetric, "quadratic form matrix must be symmetric");
}

// A[z] = sum_ij A_ij z_i z_j.
inline PolyC quad_form(const CMatrix& A, const Params& p) {
  require_symmetric(A, p);
  const std::size_t n = p.nvars();
  PolyC r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Exponent e(n, 0);
      e[i] += 1;
      e[j] += 1;
      r.add_term(e, i == j ? A(i, i) : A(i, j) + A(j, i));
    }
  return r.prune();
}

// The symmetrized star quadratic sum_ij A_ij (z_i*z_j + z_j*z_i)/2 written in
// the K-ordering: A[z] + (i hbar/2) Tr(KA).
inline PolyC quad_star_K(const CMatrix& A, const OrderingK& ord, const Params& p) {
  require_symmetric(A, p);
  require_compatible(p, ord);
  const cplx shift = 0.5 * I_unit * p.hbar * (ord.K * A).trace();
  return quad_form(A, p) + PolyC::constant(p.nvars(), shift);
}

// ---------------------------------------------------------------------------
// Rank-one forms on the complex sphere.

inline cplx bilinear(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "bilinear pairing sizes");
  cplx s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline void require_on_sphere(std::span<const cplx> a, double tol = 1e-12) {
  if (std::abs(bilinear(a, a) - 1.0) > tol)
    throw Error(ErrorKind::NotOnSphere, "vector does not satisfy <a,a> = 1");
}

// <b,u> and <b,v> as linear polynomials.
inline PolyC linear_u(std::span<const cplx> b, const Params& p) {
  if (b.size() != static_cast<std::size_t>(p.m)) throw Error(ErrorKind::DimensionMismatch, "linear_u size");
  PolyC r(p.nvars());
  for (std::size_t i = 0; i < b.size(); ++i) r += PolyC::generator(p.nvars(), i, b[i]);
  return r;
}
inline PolyC linear_v(std::span<const cplx> b, const Params& p) {
  if (b.size() != static_cast<std::size_t>(p.m)) throw Error(ErrorKind::DimensionMismatch, "linear_v size");
  PolyC r(p.nvars());
  for (std::size_t i = 0; i < b.size(); ++i) r += PolyC::generator(p.nvars(), p.m + i, b[i]);
  return r;
}

struct RankOneForm {
  CMatrix A;
  PolyC poly;
  cplx discriminant;  // gamma^2 - alpha beta
};

// A with A[z] = alpha <a,u>^2 + beta <a,v>^2 + 2 gamma <a,u><a,v>.
inline RankOneForm rank_one_B(std::span<const cplx> a, cplx alpha, cplx beta, cplx gamma, const Params& p) {
  if (a.size() != static_cast<std::size_t>(p.m)) throw Error(ErrorKind::DimensionMismatch, "rank_one_B: a has wrong length");
  require_on_sphere(a);
  const std::size_t m = a.size();
  CMatrix aa(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) aa(i, j) = a[i] * a[j];
  CMatrix A = block2(aa * alpha, aa * gamma, aa * gamma, aa * beta);
  PolyC poly = quad_form(A, p);
  return {std::move(A), std::move(poly), gamma * gamma - alpha * beta};
}

}  // namespace weylstar

#endif  // WEYLSTAR_POLY_HPP
