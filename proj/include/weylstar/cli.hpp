#ifndef WEYLSTAR_CLI_HPP
#define WEYLSTAR_CLI_HPP

// Command dispatch for the `weylstar` executable. run_command writes one JSON
// document to `out` and returns the exit status:
//   0 success, 2 parse or validation error, 3 singular point, 4 numerical failure.

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "weylstar/acceptance.hpp"
#include "weylstar/errors.hpp"
#include "weylstar/expr.hpp"
#include "weylstar/gaussian_algebra.hpp"
#include "weylstar/intertwiner.hpp"
#include "weylstar/json_io.hpp"
#include "weylstar/star_exponential.hpp"
#include "weylstar/two_valued.hpp"

namespace weylstar::cli {

using json = json_io::json;

inline int exit_status(ErrorKind k) {
  switch (classify(k)) {
    case ErrorClass::Validation: return 2;
    case ErrorClass::Singular: return 3;
    case ErrorClass::Numerical: return 4;
  }
  return 4;
}

// Comparison tolerance for CLI-side checks; WEYLSTAR_TOL overrides 1e-9.
inline double comparison_tolerance() {
  const char* env = std::getenv("WEYLSTAR_TOL");
  if (!env || !*env) return 1e-9;
  char* end = nullptr;
  const double v = std::strtod(env, &end);
  if (end == env || *end != '\0' || !(v > 0) || !std::isfinite(v))
    throw Error(ErrorKind::ParseError, "WEYLSTAR_TOL must be a positive number");
  return v;
}

inline OrderingK parse_ordering(const std::string& spec, std::size_t m) {
  if (spec == "weyl") return OrderingK::weyl(m);
  if (spec == "standard") return OrderingK::standard(m);
  if (spec == "antistandard") return OrderingK::antistandard(m);
  if (spec.rfind("file:", 0) == 0) {
    OrderingK ord(json_io::matrix_from(json_io::load(spec.substr(5))), "file");
    if (ord.m() != m) throw Error(ErrorKind::DimensionMismatch, "ordering K is not 2m x 2m");
    return ord;
  }
  throw Error(ErrorKind::ParseError, "unknown ordering '" + spec + "'");
}

// "RE" or "RE,IM".
inline cplx parse_time(const std::string& text, bool allow_complex) {
  const auto comma = text.find(',');
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParseError(0, "time '" + text + "' is not a number");
    }
    if (used != s.size()) throw ParseError(used, "time '" + text + "' is not a number");
    return v;
  };
  if (comma == std::string::npos) return number(text);
  const cplx t(number(text.substr(0, comma)), number(text.substr(comma + 1)));
  if (t.imag() != 0.0 && !allow_complex)
    throw Error(ErrorKind::ParseError, "complex time needs --complex");
  return t;
}

inline void require_m(int given, std::size_t actual) {
  if (given > 0 && static_cast<std::size_t>(given) != actual)
    throw Error(ErrorKind::DimensionMismatch, "--m does not match the input size");
}

inline json gaussian_json(const GaussianElement& F, bool two_valued) {
  json j = json_io::to_json(F);
  j["two_valued"] = two_valued;
  return j;
}

inline json value_json(const ExprValue& v) {
  if (!v.is_gaussian) return {{"poly", json_io::to_json(v.poly)}, {"two_valued", false}};
  return {{"prefactor", json_io::to_json(v.gauss.prefactor)},
          {"g", json_io::to_json(v.gauss.core.g)},
          {"Q", json_io::to_json(v.gauss.core.Q)},
          {"two_valued", v.two_valued}};
}

inline json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}, {"two_valued", false}};
}

// Path JSON: a list of samples, or {"start": a, "end": b, "samples": n}.
inline std::vector<double> path_from(const json& j) {
  std::vector<double> s;
  if (j.is_array()) {
    for (const auto& x : j) {
      if (!x.is_number()) json_io::bad("path samples must be numbers");
      s.push_back(x.get<double>());
    }
  } else if (j.is_object() && j.contains("start") && j.contains("end") && j.contains("samples")) {
    const double a = j.at("start").get<double>(), b = j.at("end").get<double>();
    const int n = j.at("samples").get<int>();
    if (n < 2) json_io::bad("path needs at least two samples");
    for (int i = 0; i < n; ++i) s.push_back(a + (b - a) * i / (n - 1));
  } else {
    json_io::bad("path must be a list or {start, end, samples}");
  }
  if (s.empty()) json_io::bad("empty path");
  return s;
}

struct FamilySpec {
  QuadraticFamily family;
  Params params;
  OrderingK ordering;
  cplx t;
};

// {"m", "hbar", "ordering", "t", "terms": [{"fn", "freq", "phase", "A"}]}
inline FamilySpec family_from(const json& j) {
  if (!j.is_object() || !j.contains("terms") || !j.contains("t")) json_io::bad("family needs \"terms\" and \"t\"");
  QuadraticFamily fam;
  for (const auto& t : j.at("terms")) {
    QuadraticFamily::Term term;
    term.fn = t.value("fn", std::string("const"));
    term.freq = t.value("freq", 1.0);
    term.phase = t.value("phase", 0.0);
    term.A = json_io::matrix_from(t.at("A"));
    fam.terms.push_back(std::move(term));
  }
  if (fam.terms.empty()) json_io::bad("family has no terms");
  const std::size_t n = fam.terms.front().A.dim();
  if (n % 2) throw Error(ErrorKind::DimensionMismatch, "family matrices must be 2m x 2m");
  const int m = j.value("m", static_cast<int>(n / 2));
  const Params p(m, j.value("hbar", 1.0));
  for (const auto& t : fam.terms)
    if (t.A.dim() != p.nvars()) throw Error(ErrorKind::DimensionMismatch, "family matrices differ in size");
  const OrderingK ord = parse_ordering(j.value("ordering", std::string("standard")), static_cast<std::size_t>(m));
  return {std::move(fam), p, ord, json_io::complex_from(j.at("t"))};
}

// {"re": [a, b], "im": [c, d], "grid": [nx, ny]}
inline ScanRegion region_from(const json& j) {
  if (!j.is_object() || !j.contains("re")) json_io::bad("region needs \"re\"");
  ScanRegion r;
  r.re_min = j.at("re").at(0).get<double>();
  r.re_max = j.at("re").at(1).get<double>();
  if (j.contains("im")) {
    r.im_min = j.at("im").at(0).get<double>();
    r.im_max = j.at("im").at(1).get<double>();
  }
  if (j.contains("grid")) {
    r.nx = j.at("grid").at(0).get<int>();
    r.ny = j.at("grid").size() > 1 ? j.at("grid").at(1).get<int>() : 1;
  }
  if (!(r.re_max > r.re_min) || r.nx < 2 || r.ny < 1 || r.nx * r.ny > 4'000'000)
    json_io::bad("region bounds or grid are invalid");
  return r;
}

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err = std::cerr) {
  CLI::App app{"Weyl-algebra star products, star exponentials and two-valued elements", "weylstar"};
  app.require_subcommand(1);

  int m = 0;
  double hbar = 1.0;
  std::string ordering = "weyl", from, to, A_arg, t_arg = "0", a_arg, b_arg, poly_arg, gauss_arg, family_arg,
              path_arg, region_arg, witness_arg;
  std::vector<std::string> exprs;
  bool complex_time = false;

  auto add_common = [&](CLI::App* sub, bool need_m) {
    auto* opt = sub->add_option("--m", m, "number of generator pairs")->check(CLI::PositiveNumber);
    if (need_m) opt->required();
    sub->add_option("--hbar", hbar, "Planck constant (positive real)");
  };

  auto* starprod = app.add_subcommand("starprod", "star product of two expressions");
  add_common(starprod, true);
  starprod->add_option("--ordering", ordering, "weyl|standard|antistandard|file:K.json")->required();
  starprod->add_option("exprs", exprs, "two expressions")->expected(2)->required();

  auto* starexp = app.add_subcommand("starexp", "star exponential exp_*(t A_*)");
  add_common(starexp, false);
  starexp->add_option("--ordering", ordering)->required();
  starexp->add_option("--A", A_arg, "symmetric 2m x 2m matrix (JSON or file)")->required();
  starexp->add_option("--t", t_arg, "RE[,IM]")->required();
  starexp->add_flag("--complex", complex_time, "allow complex t");

  auto* intertwine = app.add_subcommand("intertwine", "map between orderings");
  add_common(intertwine, false);
  intertwine->add_option("--from", from)->required();
  intertwine->add_option("--to", to)->required();
  auto* poly_opt = intertwine->add_option("--poly", poly_arg, "polynomial JSON");
  auto* gauss_opt = intertwine->add_option("--gauss", gauss_arg, "Gaussian JSON {g, Q}");
  poly_opt->excludes(gauss_opt);
  gauss_opt->excludes(poly_opt);

  auto* polar = app.add_subcommand("polar", "polar element eps00(a)");
  add_common(polar, true);
  polar->add_option("--a", a_arg, "vector on the complex sphere")->required();

  auto* reflect_cmd = app.add_subcommand("reflect", "Ad(eps00(a)) on <b,u>");
  reflect_cmd->add_option("--a", a_arg)->required();
  reflect_cmd->add_option("--b", b_arg)->required();

  auto* cover = app.add_subcommand("double-cover", "eps00(a) * eps00(b) and its rotation");
  cover->add_option("--hbar", hbar);
  cover->add_option("--a", a_arg)->required();
  cover->add_option("--b", b_arg)->required();

  auto* cont = app.add_subcommand("continue-path", "sheet continuation along a family");
  cont->add_option("--family", family_arg)->required();
  cont->add_option("--path", path_arg)->required();

  auto* scan = app.add_subcommand("scan-singular", "singular t in a region");
  add_common(scan, false);
  scan->add_option("--A", A_arg)->required();
  scan->add_option("--ordering", ordering)->required();
  scan->add_option("--region", region_arg)->required();

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--witness", witness_arg, "file receiving the associativity sign witness");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    out << error_json("ParseError", e.what()).dump() << "\n";
    return 2;
  }

  try {
    json result;
    int status = 0;
    if (*starprod) {
      const Params p(m, hbar);
      const OrderingK ord = parse_ordering(ordering, static_cast<std::size_t>(m));
      const ExprValue x = evaluate(parse_expr(exprs[0], p), ord, p);
      const ExprValue y = evaluate(parse_expr(exprs[1], p), ord, p);
      result = value_json(detail::mul(x, y, ord, p));
    } else if (*starexp) {
      const CMatrix A = json_io::matrix_from(json_io::load(A_arg));
      if (A.dim() % 2) throw Error(ErrorKind::DimensionMismatch, "A must be 2m x 2m");
      require_m(m, A.dim() / 2);
      const Params p(static_cast<int>(A.dim() / 2), hbar);
      const OrderingK ord = parse_ordering(ordering, static_cast<std::size_t>(p.m));
      const cplx t = parse_time(t_arg, complex_time);
      const StarExpResult r = star_exp_quadratic(A, ord, p, t);
      result = gaussian_json(r.gaussian(), t != cplx{});
      result["sheet"] = r.sheet;
    } else if (*intertwine) {
      if (poly_arg.empty() == gauss_arg.empty())
        throw Error(ErrorKind::ParseError, "intertwine needs exactly one of --poly, --gauss");
      if (!poly_arg.empty()) {
        const json j = json_io::load(poly_arg);
        const std::size_t n = json_io::poly_nvars(j);
        if (n % 2) throw Error(ErrorKind::DimensionMismatch, "exponent length must be 2m");
        require_m(m, n / 2);
        const Params p(static_cast<int>(n / 2), hbar);
        const PolyC f = json_io::poly_from(j, n);
        const PolyC r = intertwine_poly(f, parse_ordering(from, n / 2), parse_ordering(to, n / 2), p);
        result = {{"poly", json_io::to_json(r)}, {"two_valued", false}};
      } else {
        const GaussianElement F = json_io::gaussian_from(json_io::load(gauss_arg));
        const std::size_t n = F.nvars();
        if (n % 2) throw Error(ErrorKind::DimensionMismatch, "Q must be 2m x 2m");
        require_m(m, n / 2);
        const Params p(static_cast<int>(n / 2), hbar);
        const TwoValued r = intertwine_gauss(F, parse_ordering(from, n / 2), parse_ordering(to, n / 2), p);
        result = gaussian_json(r.rep, true);
      }
    } else if (*polar) {
      const auto a = json_io::vector_from(json_io::load(a_arg));
      require_m(m, a.size());
      const Params p(m, hbar);
      const PolarElement e = polar_element(a, p);
      result = {{"a", json_io::to_json(std::span<const cplx>(e.a))},
                {"g", json_io::to_json(e.value.rep.g)},
                {"Q", json_io::to_json(e.value.rep.Q)},
                {"two_valued", true}};
    } else if (*reflect_cmd) {
      const auto a = json_io::vector_from(json_io::load(a_arg));
      const auto b = json_io::vector_from(json_io::load(b_arg));
      const auto r = reflect(a, b);
      result = {{"reflected", json_io::to_json(std::span<const cplx>(r))}, {"two_valued", false}};
    } else if (*cover) {
      const auto a = json_io::vector_from(json_io::load(a_arg));
      const auto b = json_io::vector_from(json_io::load(b_arg));
      const CMatrix R = double_cover_rotation(a, b);
      const Params p(static_cast<int>(a.size()), hbar);
      const TwoValued e = double_cover_element(a, b, p);
      result = {{"R", json_io::to_json(R)},
                {"det_R", json_io::to_json(det(R))},
                {"g", json_io::to_json(e.rep.g)},
                {"Q", json_io::to_json(e.rep.Q)},
                {"two_valued", true}};
    } else if (*cont) {
      const FamilySpec f = family_from(json_io::load(family_arg));
      const auto path = path_from(json_io::load(path_arg));
      const SheetPath sp = continue_sheet(f.family, f.ordering, f.params, f.t, path);
      result = {{"samples", sp.samples},
                {"branch_values", json_io::to_json(std::span<const cplx>(sp.branch_values))},
                {"direct_end", json_io::to_json(sp.direct_end)},
                {"net_sign", sp.net_sign},
                {"two_valued", true}};
    } else if (*scan) {
      const CMatrix A = json_io::matrix_from(json_io::load(A_arg));
      if (A.dim() % 2) throw Error(ErrorKind::DimensionMismatch, "A must be 2m x 2m");
      require_m(m, A.dim() / 2);
      const Params p(static_cast<int>(A.dim() / 2), hbar);
      const OrderingK ord = parse_ordering(ordering, static_cast<std::size_t>(p.m));
      const auto pts = singular_scan(A, ord, p, region_from(json_io::load(region_arg)));
      result = {{"singular", json_io::to_json(std::span<const cplx>(pts))},
                {"count", pts.size()},
                {"two_valued", false}};
    } else if (*verify) {
      acceptance::Options opt;
      opt.tol = comparison_tolerance();
      opt.witness_path = witness_arg;
      opt.cli = [&err](const std::vector<std::string>& a, std::ostream& o) { return run_command(a, o, err); };
      result = acceptance::report(acceptance::run_all(opt));
      status = result.at("all_pass").get<bool>() ? 0 : 4;
    }
    out << result.dump() << "\n";
    return status;
  } catch (const Error& e) {
    out << error_json(to_string(e.kind()), e.what()).dump() << "\n";
    return exit_status(e.kind());
  } catch (const json::exception& e) {
    out << error_json("ParseError", e.what()).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    out << error_json("NumericalFailure", e.what()).dump() << "\n";
    return 4;
  }
}

}  // namespace weylstar::cli

#endif  // WEYLSTAR_CLI_HPP
