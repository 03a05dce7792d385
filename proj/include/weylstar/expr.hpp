#ifndef WEYLSTAR_EXPR_HPP
#define WEYLSTAR_EXPR_HPP

// Expression front end for Weyl-algebra inputs.
//
//   expr   := ["-"] term {("+" | "-") term}
//   term   := factor {"*" factor}
//   factor := base ["^" uint]
//   base   := complex-literal | "u"uint | "v"uint | "hbar" | "(" expr ")" | "exp_*(" expr ")"
//
// "*" is the star product of the active ordering. Complex literals are a,
// bi, a+bi and a-bi (written without spaces); a bare "i" is the imaginary unit.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weylstar/errors.hpp"
#include "weylstar/gaussian_algebra.hpp"
#include "weylstar/poly.hpp"
#include "weylstar/star_exponential.hpp"

namespace weylstar {

struct ExprAST {
  enum class Kind { Scalar, Generator, Hbar, Neg, Add, Sub, Mul, Pow, StarExp };

  Kind kind = Kind::Scalar;
  cplx value{};        // Scalar
  std::size_t index{};  // Generator: position in z = (u_1..u_m, v_1..v_m)
  unsigned power{};     // Pow
  std::vector<ExprAST> kids;

  friend bool operator==(const ExprAST&, const ExprAST&) = default;
};

namespace detail {

class ExprParser {
 public:
  ExprParser(std::string_view text, const Params& p) : s_(text), p_(p) {}

  ExprAST parse() {
    ExprAST e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(pos_, "unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_with(std::string_view w) const { return s_.substr(pos_, w.size()) == w; }

  ExprAST expr() {
    skip_ws();
    ExprAST lhs;
    if (eat('-')) {
      lhs.kind = ExprAST::Kind::Neg;
      lhs.kids.push_back(term());
    } else {
      lhs = term();
    }
    while (true) {
      skip_ws();
      ExprAST::Kind k;
      if (eat('+')) k = ExprAST::Kind::Add;
      else if (eat('-')) k = ExprAST::Kind::Sub;
      else break;
      ExprAST node;
      node.kind = k;
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(term());
      lhs = std::move(node);
    }
    return lhs;
  }

  ExprAST term() {
    ExprAST lhs = factor();
    while (eat('*')) {
      ExprAST node;
      node.kind = ExprAST::Kind::Mul;
      node.kids.push_back(std::move(lhs));
      node.kids.push_back(factor());
      lhs = std::move(node);
    }
    return lhs;
  }

  ExprAST factor() {
    ExprAST b = base();
    if (eat('^')) {
      skip_ws();
      const std::size_t at = pos_;
      const auto n = read_uint();
      if (!n) throw ParseError(at, "expected unsigned exponent");
      ExprAST node;
      node.kind = ExprAST::Kind::Pow;
      node.power = static_cast<unsigned>(*n);
      node.kids.push_back(std::move(b));
      return node;
    }
    return b;
  }

  std::optional<unsigned long> read_uint() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) return std::nullopt;
    unsigned long v = 0;
    auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (r.ec != std::errc{}) throw ParseError(start, "integer out of range");
    return v;
  }

  // Unsigned real number with optional fraction and exponent.
  std::optional<double> read_real() {
    const std::size_t start = pos_;
    std::size_t q = pos_;
    auto digits = [&] {
      const std::size_t b = q;
      while (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) ++q;
      return q > b;
    };
    bool any = digits();
    if (q < s_.size() && s_[q] == '.') {
      ++q;
      any = digits() || any;
    }
    if (!any) return std::nullopt;
    if (q < s_.size() && (s_[q] == 'e' || s_[q] == 'E')) {
      std::size_t save = q++;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (!digits()) q = save;
    }
    const std::string tok(s_.substr(start, q - start));
    pos_ = q;
    return std::strtod(tok.c_str(), nullptr);
  }

  bool at_imag_unit() const {
    if (pos_ >= s_.size() || s_[pos_] != 'i') return false;
    const std::size_t nx = pos_ + 1;
    return nx >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[nx]));
  }

  ExprAST literal() {
    ExprAST node;
    node.kind = ExprAST::Kind::Scalar;
    if (at_imag_unit()) {
      ++pos_;
      node.value = I_unit;
      return node;
    }
    const auto re = read_real();
    if (at_imag_unit()) {
      ++pos_;
      node.value = cplx(0.0, *re);
      return node;
    }
    node.value = *re;
    // a+bi / a-bi written without spaces
    if (pos_ + 1 < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
      const std::size_t save = pos_;
      const double sign = s_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
      if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
        const auto im = read_real();
        if (im && at_imag_unit()) {
          ++pos_;
          node.value = cplx(*re, sign * *im);
          return node;
        }
      }
      pos_ = save;
    }
    return node;
  }

  ExprAST base() {
    skip_ws();
    if (pos_ >= s_.size()) throw ParseError(pos_, "unexpected end of input");
    const char c = s_[pos_];
    if (starts_with("exp_*(")) {
      pos_ += 6;
      ExprAST node;
      node.kind = ExprAST::Kind::StarExp;
      node.kids.push_back(expr());
      if (!eat(')')) throw ParseError(pos_, "expected ')'");
      return node;
    }
    if (starts_with("hbar")) {
      pos_ += 4;
      ExprAST node;
      node.kind = ExprAST::Kind::Hbar;
      return node;
    }
    if (c == '(') {
      ++pos_;
      ExprAST e = expr();
      if (!eat(')')) throw ParseError(pos_, "expected ')'");
      return e;
    }
    if ((c == 'u' || c == 'v') && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      const std::size_t at = pos_;
      ++pos_;
      const auto k = read_uint();
      if (*k < 1 || *k > static_cast<unsigned long>(p_.m))
        throw Error(ErrorKind::IndexOutOfRange,
                    "generator " + std::string(s_.substr(at, pos_ - at)) + " outside 1.." + std::to_string(p_.m) +
                        " at offset " + std::to_string(at));
      ExprAST node;
      node.kind = ExprAST::Kind::Generator;
      node.index = (c == 'u' ? 0 : static_cast<std::size_t>(p_.m)) + (*k - 1);
      return node;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || at_imag_unit()) return literal();
    throw ParseError(pos_, "unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  const Params& p_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Evaluated expression: a polynomial, or a polynomial times a Gaussian.
struct ExprValue {
  bool is_gaussian = false;
  PolyC poly;
  GaussPoly gauss;
  bool two_valued = false;

  static ExprValue of(PolyC p) {
    ExprValue v;
    v.poly = std::move(p);
    return v;
  }
  static ExprValue of(GaussPoly g, bool tv) {
    ExprValue v;
    v.is_gaussian = true;
    v.gauss = std::move(g);
    v.two_valued = tv;
    return v;
  }
};

namespace detail {

inline void require_star_exp_argument(const PolyC& f) {
  for (const auto& [e, c] : f.terms()) {
    const int d = std::accumulate(e.begin(), e.end(), 0);
    if (d == 1 || d > 2)
      throw Error(ErrorKind::NonQuadraticExponent, "exp_* needs a quadratic-plus-constant argument");
  }
}

inline ExprValue eval(const ExprAST& e, const OrderingK& ord, const Params& p);

inline ExprValue as_gaussian(const ExprValue& v, const Params& p) {
  if (v.is_gaussian) return v;
  return ExprValue::of(GaussPoly{v.poly, GaussianElement::constant(p.nvars(), 1.0)}, false);
}

inline ExprValue add(const ExprValue& a, const ExprValue& b, double sign, const Params& p) {
  if (!a.is_gaussian && !b.is_gaussian) return ExprValue::of(a.poly + b.poly * cplx(sign));
  const ExprValue x = as_gaussian(a, p), y = as_gaussian(b, p);
  if (rel_diff(x.gauss.core.Q, y.gauss.core.Q) > 1e-12)
    throw Error(ErrorKind::DimensionMismatch, "sum of Gaussians with different quadratic parts is not representable");
  GaussPoly r = x.gauss;
  r.prefactor = x.gauss.prefactor + y.gauss.prefactor * (sign * y.gauss.core.g / x.gauss.core.g);
  return ExprValue::of(std::move(r), x.two_valued || y.two_valued);
}

inline ExprValue mul(const ExprValue& a, const ExprValue& b, const OrderingK& ord, const Params& p) {
  if (!a.is_gaussian && !b.is_gaussian) return ExprValue::of(star_poly(a.poly, b.poly, ord, p));
  if (!a.is_gaussian) return ExprValue::of(star_poly_gausspoly(a.poly, b.gauss, ord, p), b.two_valued);
  if (!b.is_gaussian) return ExprValue::of(star_gausspoly_poly(a.gauss, b.poly, ord, p), a.two_valued);
  // A product of two Gaussians is only defined up to sign.
  return ExprValue::of(star_gausspoly_gausspoly(a.gauss, b.gauss, ord, p), true);
}

inline ExprValue eval(const ExprAST& e, const OrderingK& ord, const Params& p) {
  const std::size_t n = p.nvars();
  using K = ExprAST::Kind;
  switch (e.kind) {
    case K::Scalar: return ExprValue::of(PolyC::constant(n, e.value));
    case K::Generator: return ExprValue::of(PolyC::generator(n, e.index));
    case K::Hbar: return ExprValue::of(PolyC::constant(n, p.hbar));
    case K::Neg: {
      ExprValue v = eval(e.kids[0], ord, p);
      if (v.is_gaussian) v.gauss.prefactor = -v.gauss.prefactor;
      else v.poly = -v.poly;
      return v;
    }
    case K::Add: return add(eval(e.kids[0], ord, p), eval(e.kids[1], ord, p), 1.0, p);
    case K::Sub: return add(eval(e.kids[0], ord, p), eval(e.kids[1], ord, p), -1.0, p);
    case K::Mul: return mul(eval(e.kids[0], ord, p), eval(e.kids[1], ord, p), ord, p);
    case K::Pow: {
      const ExprValue b = eval(e.kids[0], ord, p);
      ExprValue r = ExprValue::of(PolyC::constant(n, 1.0));
      for (unsigned k = 0; k < e.power; ++k) r = mul(r, b, ord, p);
      return r;
    }
    case K::StarExp: {
      const ExprValue arg = eval(e.kids[0], ord, p);
      if (arg.is_gaussian) throw Error(ErrorKind::NonQuadraticExponent, "exp_* of a Gaussian");
      require_star_exp_argument(arg.poly);
      CMatrix A(n);
      for (const auto& [ex, c] : arg.poly.terms()) {
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < n; ++k)
          for (int r = 0; r < ex[k]; ++r) idx.push_back(k);
        if (idx.size() != 2) continue;
        if (idx[0] == idx[1]) A(idx[0], idx[0]) = c;
        else A(idx[0], idx[1]) = A(idx[1], idx[0]) = 0.5 * c;
      }
      // The polynomial A[z] + c0 equals A_{*K} - (i hbar/2) Tr(KA) + c0 as an element.
      const cplx scalar = std::exp(arg.poly.constant_term() - 0.5 * I_unit * p.hbar * (ord.K * A).trace());
      const StarExpResult r = star_exp_quadratic(A, ord, p, 1.0);
      const bool tv = A.max_abs() != 0.0;
      return ExprValue::of(GaussPoly{PolyC::constant(n, 1.0), r.gaussian().scaled(scalar)}, tv);
    }
  }
  throw Error(ErrorKind::ParseError, "unknown node");
}

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);
  return buf;
}

}  // namespace detail

inline ExprAST parse_expr(std::string_view text, const Params& p) {
  ExprAST ast = detail::ExprParser(text, p).parse();
  // Reject non-quadratic exponents up front; degree does not depend on the ordering.
  std::function<void(const ExprAST&)> check = [&](const ExprAST& e) {
    for (const auto& k : e.kids) check(k);
    if (e.kind == ExprAST::Kind::StarExp) {
      const ExprValue v = detail::eval(e.kids[0], OrderingK::weyl(static_cast<std::size_t>(p.m)), p);
      if (v.is_gaussian) throw Error(ErrorKind::NonQuadraticExponent, "exp_* of a Gaussian");
      detail::require_star_exp_argument(v.poly);
    }
  };
  check(ast);
  return ast;
}

inline ExprValue evaluate(const ExprAST& e, const OrderingK& ord, const Params& p) {
  require_compatible(p, ord);
  return detail::eval(e, ord, p);
}

inline std::string serialize(const ExprAST& e, const Params& p) {
  using K = ExprAST::Kind;
  switch (e.kind) {
    case K::Scalar: {
      const double re = e.value.real() + 0.0, im = e.value.imag() + 0.0;
      if (re < 0) {
        // Parsed literals have non-negative real part; others go through 0-(...).
        ExprAST neg;
        neg.kind = K::Scalar;
        neg.value = -e.value;
        return "(0-" + serialize(neg, p) + ")";
      }
      if (im == 0.0) return detail::format_real(re);
      const std::string ims = detail::format_real(std::abs(im));
      return "(" + detail::format_real(re) + (im < 0 ? "-" : "+") + ims + "i)";
    }
    case K::Generator: {
      const bool is_u = e.index < static_cast<std::size_t>(p.m);
      return std::string(is_u ? "u" : "v") + std::to_string((is_u ? e.index : e.index - p.m) + 1);
    }
    case K::Hbar: return "hbar";
    case K::Neg: return "(-" + serialize(e.kids[0], p) + ")";
    case K::Add: return "(" + serialize(e.kids[0], p) + " + " + serialize(e.kids[1], p) + ")";
    case K::Sub: return "(" + serialize(e.kids[0], p) + " - " + serialize(e.kids[1], p) + ")";
    case K::Mul: return "(" + serialize(e.kids[0], p) + " * " + serialize(e.kids[1], p) + ")";
    case K::Pow: return "(" + serialize(e.kids[0], p) + ")^" + std::to_string(e.power);
    case K::StarExp: return "exp_*(" + serialize(e.kids[0], p) + ")";
  }
  return {};
}

}  // namespace weylstar

#endif  // WEYLSTAR_EXPR_HPP
