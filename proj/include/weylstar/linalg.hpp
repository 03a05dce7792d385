#ifndef WEYLSTAR_LINALG_HPP
#define WEYLSTAR_LINALG_HPP

// Small dense complex linear algebra: matrix exponential, cos/sin/tan of a
// matrix, determinants and inverses through LU, and branch-controlled square
// roots. Dimensions are desk scale (2m <= ~20), so everything is dense.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <numbers>
#include <span>
#include <vector>

#include "weylstar/errors.hpp"

namespace weylstar {

using cplx = std::complex<double>;
inline constexpr cplx I_unit{0.0, 1.0};

class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n, cplx{}) {}
  CMatrix(std::size_t n, std::vector<cplx> row_major) : n_(n), a_(std::move(row_major)) {
    if (a_.size() != n * n) throw Error(ErrorKind::DimensionMismatch, "CMatrix: entry count is not dim^2");
  }
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : n_(rows.size()) {
    a_.reserve(n_ * n_);
    for (const auto& r : rows) {
      if (r.size() != n_) throw Error(ErrorKind::DimensionMismatch, "CMatrix: ragged initializer");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMatrix zero(std::size_t n) { return CMatrix(n); }
  static CMatrix diag(std::span<const cplx> d) {
    CMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static CMatrix diag(std::initializer_list<cplx> d) {
    return diag(std::span<const cplx>(d.begin(), d.size()));
  }

  std::size_t dim() const noexcept { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  std::span<const cplx> data() const noexcept { return a_; }

  CMatrix transpose() const {
    CMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  CMatrix symmetrized() const {
    CMatrix s(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
    return s;
  }

  cplx trace() const {
    cplx t{};
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius() const {
    double s = 0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0;
    for (const auto& x : a_) s = std::max(s, std::abs(x));
    return s;
  }

  // Induced 1-norm (max column sum).
  double norm1() const {
    double best = 0;
    for (std::size_t j = 0; j < n_; ++j) {
      double s = 0;
      for (std::size_t i = 0; i < n_; ++i) s += std::abs((*this)(i, j));
      best = std::max(best, s);
    }
    return best;
  }

  bool is_finite() const {
    return std::all_of(a_.begin(), a_.end(),
                       [](const cplx& x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); });
  }

  bool is_symmetric(double tol = 1e-12) const {
    const double scale = std::max(1.0, max_abs());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (std::abs((*this)(i, j) - (*this)(j, i)) > tol * scale) return false;
    return true;
  }

  CMatrix& operator+=(const CMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  CMatrix& operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator-(CMatrix a) { return a *= -1.0; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, double s) { return a *= cplx(s); }
  friend CMatrix operator*(double s, CMatrix a) { return a *= cplx(s); }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    a.check_same(b);
    const std::size_t n = a.n_;
    CMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend std::vector<cplx> operator*(const CMatrix& a, std::span<const cplx> x) {
    if (x.size() != a.n_) throw Error(ErrorKind::DimensionMismatch, "matrix-vector size");
    std::vector<cplx> y(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = 0; j < a.n_; ++j) y[i] += a(i, j) * x[j];
    return y;
  }

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  void check_same(const CMatrix& o) const {
    if (o.n_ != n_) throw Error(ErrorKind::DimensionMismatch, "matrix dimensions differ");
  }

  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

// Relative Frobenius distance, with the denominator floored at 1.
inline double rel_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).frobenius() / std::max(1.0, std::max(a.frobenius(), b.frobenius()));
}

// The symplectic unit J = [[0, -I_m], [I_m, 0]].
inline CMatrix symplectic_J(std::size_t m) {
  CMatrix j(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    j(i, m + i) = -1.0;
    j(m + i, i) = 1.0;
  }
  return j;
}

// Embeds four m x m blocks into a 2m x 2m matrix.
inline CMatrix block2(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d) {
  const std::size_t m = a.dim();
  CMatrix r(2 * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      r(i, j) = a(i, j);
      r(i, m + j) = b(i, j);
      r(m + i, j) = c(i, j);
      r(m + i, m + j) = d(i, j);
    }
  return r;
}

// ---------------------------------------------------------------------------
// LU factorization with partial pivoting.

struct LU {
  CMatrix lu;
  std::vector<std::size_t> perm;
  int sign = 1;
  bool exactly_singular = false;

  explicit LU(CMatrix m) : lu(std::move(m)), perm(lu.dim()) {
    const std::size_t n = lu.dim();
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(lu(k, k));
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu(i, k)) > best) best = std::abs(lu(i, k)), p = i;
      if (best == 0.0) {
        exactly_singular = true;
        continue;
      }
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
        std::swap(perm[k], perm[p]);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        const cplx f = lu(i, k) / lu(k, k);
        lu(i, k) = f;
        for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      }
    }
  }

  cplx det() const {
    if (exactly_singular) return cplx{};
    cplx d = static_cast<double>(sign);
    for (std::size_t i = 0; i < lu.dim(); ++i) d *= lu(i, i);
    return d;
  }

  // Solves A X = B column by column.
  CMatrix solve(const CMatrix& b) const {
    const std::size_t n = lu.dim();
    CMatrix x(n);
    std::vector<cplx> col(n);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < n; ++i) col[i] = b(perm[i], c);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) col[i] -= lu(i, k) * col[k];
      for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) col[i] -= lu(i, k) * col[k];
        col[i] /= lu(i, i);
      }
      for (std::size_t i = 0; i < n; ++i) x(i, c) = col[i];
    }
    return x;
  }
};

inline cplx det(const CMatrix& m) { return LU(m).det(); }

// |det M| <= 1e-12 * max(||M||, 1)^dim counts as singular. The norm floor at
// one keeps uniformly tiny matrices such as cos(pi/2 I) singular.
inline bool det_is_singular(cplx d, const CMatrix& m) {
  const double scale = std::pow(std::max(1.0, m.frobenius()), static_cast<double>(m.dim()));
  return !(std::abs(d) > 1e-12 * scale);
}

struct DetInv {
  cplx det;
  CMatrix inverse;
};

inline DetInv det_inv(const CMatrix& m) {
  if (!m.is_finite()) throw Error(ErrorKind::NonFinite, "det_inv: non-finite entries");
  LU lu(m);
  const cplx d = lu.det();
  if (lu.exactly_singular || det_is_singular(d, m))
    throw Error(ErrorKind::Singular, "det_inv: |det| below tolerance");
  return {d, lu.solve(CMatrix::identity(m.dim()))};
}

inline CMatrix inverse(const CMatrix& m) { return det_inv(m).inverse; }

// ---------------------------------------------------------------------------
// Matrix functions.

// Scaling and squaring around a truncated Taylor series. The scaled matrix has
// 1-norm <= 1/2, where 20 terms reach double precision.
inline CMatrix mat_exp(const CMatrix& m) {
  if (!m.is_finite()) throw Error(ErrorKind::NonFinite, "mat_exp: non-finite entries");
  const std::size_t n = m.dim();
  const double nrm = m.norm1();
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const CMatrix x = m * std::ldexp(1.0, -squarings);

  CMatrix sum = CMatrix::identity(n);
  CMatrix term = CMatrix::identity(n);
  for (int k = 1; k <= 30; ++k) {
    term = term * x * (1.0 / k);
    sum += term;
    if (term.max_abs() <= 1e-18 * sum.max_abs()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  if (!sum.is_finite()) throw Error(ErrorKind::NonFinite, "mat_exp: overflow");
  return sum;
}

struct CosSin {
  CMatrix cos;
  CMatrix sin;
};

inline CosSin mat_cos_sin(const CMatrix& m) {
  const CMatrix ep = mat_exp(I_unit * m);
  const CMatrix em = mat_exp(-I_unit * m);
  return {(ep + em) * 0.5, (ep - em) * (1.0 / (2.0 * I_unit))};
}

struct Trig {
  CMatrix cos;
  CMatrix sin;
  CMatrix tan;
};

// cos, sin and tan = sin * cos^{-1}. Throws SingularCos where cos M is not
// invertible.
inline Trig mat_trig(const CMatrix& m) {
  auto [c, s] = mat_cos_sin(m);
  LU lu(c);
  const cplx d = lu.det();
  if (lu.exactly_singular || det_is_singular(d, c))
    throw Error(ErrorKind::SingularCos, "mat_trig: cos M is singular");
  // sin and cos commute, so sin * cos^{-1} = cos^{-1} * sin.
  CMatrix t = lu.solve(s);
  return {std::move(c), std::move(s), std::move(t)};
}

// ---------------------------------------------------------------------------
// Branch-controlled square roots.

// Root of w closest in argument to ref. Throws AmbiguousBranch when both
// roots sit at a right angle to ref.
inline cplx sqrt_branch(cplx w, cplx ref) {
  if (w == cplx{} || ref == cplx{}) throw Error(ErrorKind::NumericalFailure, "sqrt_branch: zero argument");
  const cplx s = std::sqrt(w);
  const double a = std::abs(std::arg(s / ref));
  if (std::abs(a - std::numbers::pi / 2) < 1e-12)
    throw Error(ErrorKind::AmbiguousBranch, "sqrt_branch: both roots equidistant from reference");
  return a < std::numbers::pi / 2 ? s : -s;
}

struct SqrtTrack {
  cplx root;   // continued square root at s = 1
  cplx value;  // f(1)
  int steps = 0;
};

// Continues sqrt(f(s)) from root0 at s = 0 to s = 1. Steps are halved until
// consecutive values satisfy |f(s+h)/f(s) - 1| <= 1/2, so the square root
// moves by less than pi/6 in argument per step. A step below 1e-13 means the
// path runs into a zero of f and raises `on_zero`.
template <class F>
SqrtTrack continue_sqrt(F&& f, cplx root0, ErrorKind on_zero, double max_step = 1.0 / 32) {
  double s = 0;
  cplx d = f(0.0);
  if (d == cplx{}) throw Error(on_zero, "continue_sqrt: path starts at a zero");
  cplx r = root0;
  double h = max_step;
  int steps = 0;
  while (s < 1.0) {
    h = std::min(h, 1.0 - s);
    const double s_next = (1.0 - s - h < 1e-15) ? 1.0 : s + h;
    const cplx dn = f(s_next);
    const bool finite = std::isfinite(dn.real()) && std::isfinite(dn.imag());
    if (!finite || dn == cplx{} || std::abs(dn / d - 1.0) > 0.5) {
      h *= 0.5;
      if (h < 1e-13) throw Error(on_zero, "continue_sqrt: path meets a zero of the determinant");
      continue;
    }
    r = sqrt_branch(dn, r);
    d = dn;
    s = s_next;
    ++steps;
    h = std::min(2 * h, max_step);
  }
  return {r, d, steps};
}

}  // namespace weylstar

#endif  // WEYLSTAR_LINALG_HPP
