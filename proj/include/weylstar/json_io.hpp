#ifndef WEYLSTAR_JSON_IO_HPP
#define WEYLSTAR_JSON_IO_HPP

// JSON forms: complex numbers are [re, im], matrices are row-major nested
// arrays, polynomials are lists of {"exp": [...], "c": [re, im]}.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "weylstar/errors.hpp"
#include "weylstar/gaussian.hpp"
#include "weylstar/linalg.hpp"
#include "weylstar/poly.hpp"

namespace weylstar::json_io {

using json = nlohmann::ordered_json;

// Adding 0.0 turns -0.0 into +0.0 so output is sign-of-zero stable.
inline json to_json(cplx c) { return json::array({c.real() + 0.0, c.imag() + 0.0}); }

inline json to_json(const CMatrix& M) {
  json rows = json::array();
  for (std::size_t i = 0; i < M.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < M.dim(); ++j) row.push_back(to_json(M(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(std::span<const cplx> v) {
  json arr = json::array();
  for (const cplx& c : v) arr.push_back(to_json(c));
  return arr;
}

inline json to_json(const PolyC& f) {
  json arr = json::array();
  for (const auto& [e, c] : f.terms()) arr.push_back(json{{"exp", e}, {"c", to_json(c)}});
  return arr;
}

inline json to_json(const GaussianElement& F) { return json{{"g", to_json(F.g)}, {"Q", to_json(F.Q)}}; }

inline json to_json(const TwoValued& F) {
  json j = to_json(F.rep);
  j["two_valued"] = true;
  return j;
}

[[noreturn]] inline void bad(const std::string& what) { throw Error(ErrorKind::ParseError, "JSON: " + what); }

inline cplx complex_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad("expected a number or [re, im], got " + j.dump());
}

inline CMatrix matrix_from(const json& j) {
  if (!j.is_array() || j.empty()) bad("expected a non-empty square matrix");
  const std::size_t n = j.size();
  CMatrix M(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) bad("matrix is not square");
    for (std::size_t k = 0; k < n; ++k) M(i, k) = complex_from(j[i][k]);
  }
  return M;
}

inline std::vector<cplx> vector_from(const json& j) {
  if (!j.is_array() || j.empty()) bad("expected a non-empty vector");
  std::vector<cplx> v;
  for (const auto& x : j) v.push_back(complex_from(x));
  return v;
}

inline PolyC poly_from(const json& j, std::size_t nvars) {
  if (!j.is_array()) bad("polynomial must be a list of terms");
  PolyC f(nvars);
  for (const auto& t : j) {
    if (!t.is_object() || !t.contains("exp") || !t.contains("c")) bad("polynomial term needs \"exp\" and \"c\"");
    const auto e = t.at("exp").get<Exponent>();
    if (e.size() != nvars) throw Error(ErrorKind::DimensionMismatch, "polynomial exponent length differs from 2m");
    for (int k : e)
      if (k < 0) bad("negative exponent");
    f.add_term(e, complex_from(t.at("c")));
  }
  return f;
}

// Number of variables of a polynomial JSON, taken from its first term.
inline std::size_t poly_nvars(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_object() || !j[0].contains("exp")) bad("cannot infer polynomial size");
  return j[0].at("exp").size();
}

inline GaussianElement gaussian_from(const json& j) {
  if (!j.is_object() || !j.contains("g") || !j.contains("Q")) bad("Gaussian needs \"g\" and \"Q\"");
  return GaussianElement(complex_from(j.at("g")), matrix_from(j.at("Q")));
}

// Reads inline JSON when the argument looks like JSON, otherwise a file path.
inline json load(const std::string& arg) {
  std::string text = arg;
  const auto first = arg.find_first_not_of(" \t\r\n");
  const bool inline_json =
      first != std::string::npos && (arg[first] == '[' || arg[first] == '{' || arg[first] == '-' ||
                                     std::isdigit(static_cast<unsigned char>(arg[first])));
  if (!inline_json) {
    std::ifstream in(arg);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + arg + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte == 0 ? 0 : e.byte - 1, std::string("JSON: ") + e.what());
  }
}

}  // namespace weylstar::json_io

#endif  // WEYLSTAR_JSON_IO_HPP
