#pragma once

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "weyl3/boundary.hpp"
#include "weyl3/coeffs.hpp"
#include "weyl3/errors.hpp"
#include "weyl3/problem.hpp"

namespace weyl3 {

using json = nlohmann::json;

/// Fixed formatting: 17 significant digits, '.' separator, no locale.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

namespace detail {

class FieldError : public ValidationError {
 public:
  FieldError(const std::string& field, const std::string& why) : ValidationError(field + ": " + why) {}
};

inline std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

inline const json& require(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.is_object()) throw FieldError(path.empty() ? "document" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw FieldError(join(path, key), "missing required field");
  return *it;
}

inline const json* optional_field(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

inline double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw FieldError(field, "expected a number");
  return v.get<double>();
}

inline int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw FieldError(field, "expected an integer");
  return v.get<int>();
}

/// A complex value: number, [re, im] or {"re": .., "im": ..}.
inline cplx as_complex(const json& v, const std::string& field) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  if (v.is_object() && v.contains("re")) {
    const double re = as_number(v.at("re"), field + ".re");
    const double im = v.contains("im") ? as_number(v.at("im"), field + ".im") : 0.0;
    return {re, im};
  }
  throw FieldError(field, "expected a number, [re, im] or {re, im}");
}

inline std::vector<cplx> complex_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw FieldError(field, "expected an array");
  std::vector<cplx> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_complex(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<double> real_list(const json& v, const std::string& field) {
  if (!v.is_array()) throw FieldError(field, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline json complex_json(cplx z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

inline json complex_list_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(complex_json(z));
  return a;
}

inline CoefficientKind parse_kind(const std::string& s, const std::string& field) {
  if (s == "zero") return CoefficientKind::zero;
  if (s == "polynomial") return CoefficientKind::polynomial;
  if (s == "piecewise-polynomial" || s == "piecewise_polynomial") return CoefficientKind::piecewise_polynomial;
  if (s == "inverse-power" || s == "inverse_power") return CoefficientKind::inverse_power;
  if (s == "sampled") return CoefficientKind::sampled;
  throw FieldError(field, "unknown kind '" + s +
                              "' (expected zero, polynomial, piecewise-polynomial, inverse-power or sampled)");
}

inline IntegrabilityClass parse_class(const std::string& s, const std::string& field) {
  if (s == "L3") return IntegrabilityClass::L3;
  if (s == "L2") return IntegrabilityClass::L2;
  if (s == "L1∩L3" || s == "L1_L3" || s == "L1L3") return IntegrabilityClass::L1_L3;
  if (s == "L1∩L2" || s == "L1_L2" || s == "L1L2") return IntegrabilityClass::L1_L2;
  throw FieldError(field, "unknown class '" + s + "' (expected L3, L2, L1_L3 or L1_L2)");
}

inline const char* class_token(IntegrabilityClass c) {
  switch (c) {
    case IntegrabilityClass::L3: return "L3";
    case IntegrabilityClass::L2: return "L2";
    case IntegrabilityClass::L1_L3: return "L1_L3";
    case IntegrabilityClass::L1_L2: return "L1_L2";
  }
  return "L3";
}

inline Coefficient parse_sigma(const json& j, const CoefficientDomain& domain) {
  const std::string path = "sigma";
  if (!j.is_object()) throw FieldError(path, "expected an object");
  const json& kind = require(j, path, "kind");
  if (!kind.is_string()) throw FieldError("sigma.kind", "expected a string");
  CoefficientSpec s;
  s.kind = parse_kind(kind.get<std::string>(), "sigma.kind");
  s.domain = domain;
  s.integrability = domain.halfline ? IntegrabilityClass::L1_L3 : IntegrabilityClass::L3;
  if (const json* c = optional_field(j, "class")) {
    if (!c->is_string()) throw FieldError("sigma.class", "expected a string");
    s.integrability = parse_class(c->get<std::string>(), "sigma.class");
  }
  if (const json* v = optional_field(j, "support_end")) s.support_end = as_number(*v, "sigma.support_end");
  switch (s.kind) {
    case CoefficientKind::zero:
      break;
    case CoefficientKind::polynomial:
      s.coeffs = complex_list(require(j, path, "coeffs"), "sigma.coeffs");
      break;
    case CoefficientKind::piecewise_polynomial: {
      s.breaks = real_list(require(j, path, "breaks"), "sigma.breaks");
      const json& pieces = require(j, path, "pieces");
      if (!pieces.is_array()) throw FieldError("sigma.pieces", "expected an array of coefficient lists");
      for (std::size_t i = 0; i < pieces.size(); ++i)
        s.pieces.push_back(complex_list(pieces[i], "sigma.pieces[" + std::to_string(i) + "]"));
      break;
    }
    case CoefficientKind::inverse_power:
      s.center = as_number(require(j, path, "center"), "sigma.center");
      s.exponent = as_number(require(j, path, "exponent"), "sigma.exponent");
      s.amplitude = as_complex(require(j, path, "amplitude"), "sigma.amplitude");
      if (const json* c = optional_field(j, "coeffs")) s.coeffs = complex_list(*c, "sigma.coeffs");
      break;
    case CoefficientKind::sampled:
      s.grid = real_list(require(j, path, "grid"), "sigma.grid");
      s.values = complex_list(require(j, path, "values"), "sigma.values");
      break;
  }
  try {
    return Coefficient(std::move(s));
  } catch (const FieldError&) {
    throw;
  } catch (const ValidationError& e) {
    throw FieldError("sigma", e.what());
  }
}

inline BoundaryMatrix parse_boundary(const json& j, const std::string& field) {
  if (j.is_string()) {
    if (j.get<std::string>() == "identity") return BoundaryMatrix::identity();
    throw FieldError(field, "unknown boundary matrix '" + j.get<std::string>() + "' (expected \"identity\" or an object)");
  }
  if (!j.is_object()) throw FieldError(field, "expected \"identity\" or {perm, lower}");
  const json& perm = require(j, field, "perm");
  if (!perm.is_array() || perm.size() != 3) throw FieldError(field + ".perm", "expected three integers");
  Permutation p{};
  for (int i = 0; i < 3; ++i) p[i] = as_int(perm[i], field + ".perm[" + std::to_string(i) + "]");
  std::array<cplx, 3> lower{};
  if (const json* l = optional_field(j, "lower")) {
    const std::vector<cplx> v = complex_list(*l, field + ".lower");
    if (v.size() != 3) throw FieldError(field + ".lower", "expected [l21, l31, l32]");
    lower = {v[0], v[1], v[2]};
  }
  try {
    return BoundaryMatrix(p, lower);
  } catch (const ValidationError& e) {
    throw FieldError(field + ".perm", e.what());
  }
}

inline json boundary_json(const BoundaryMatrix& b) {
  return json{{"perm", {b.permutation()[0], b.permutation()[1], b.permutation()[2]}},
              {"lower", complex_list_json({b.l21(), b.l31(), b.l32()})}};
}

inline std::string located(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Parse a problem document (JSON) into a validated ProblemDef.
inline ProblemDef parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("problem document: " + detail::located(text, e.byte > 0 ? e.byte - 1 : 0) +
                          ": malformed JSON (" + e.what() + ")");
  }
  if (!doc.is_object()) throw ValidationError("problem document: expected a JSON object");
  using detail::FieldError;

  const json& dom = detail::require(doc, "", "domain");
  if (!dom.is_object()) throw FieldError("domain", "expected an object");
  const json& dkind = detail::require(dom, "domain", "kind");
  if (!dkind.is_string()) throw FieldError("domain.kind", "expected a string");
  Domain domain;
  if (dkind.get<std::string>() == "interval") {
    const json* len = detail::optional_field(dom, "length");
    domain = Domain::interval(len ? detail::as_number(*len, "domain.length") : 1.0);
    if (!(domain.length > 0.0)) throw FieldError("domain.length", "must be positive");
  } else if (dkind.get<std::string>() == "halfline") {
    domain = Domain::halfline(detail::as_number(detail::require(dom, "domain", "truncation_X"), "domain.truncation_X"));
  } else {
    throw FieldError("domain.kind", "unknown kind '" + dkind.get<std::string>() + "' (expected interval or halfline)");
  }

  const CoefficientDomain cd{domain.is_halfline(), domain.is_halfline() ? 0.0 : domain.length};
  Coefficient sigma = detail::parse_sigma(detail::require(doc, "", "sigma"), cd);

  ExpressionParams params;
  params.s = detail::as_int(detail::require(doc, "", "s"), "s");
  params.kappa = detail::as_complex(detail::require(doc, "", "kappa"), "kappa");

  const BoundaryMatrix u = detail::parse_boundary(detail::require(doc, "", "U"), "U");
  std::optional<BoundaryMatrix> v;
  if (const json* vj = detail::optional_field(doc, "V"); vj && !vj->is_null()) v = detail::parse_boundary(*vj, "V");

  SolverSettings solver;
  if (const json* sj = detail::optional_field(doc, "solver")) {
    if (!sj->is_object()) throw FieldError("solver", "expected an object");
    if (const json* x = detail::optional_field(*sj, "steps"))
      solver.resolution.steps_per_unit = detail::as_number(*x, "solver.steps");
    if (const json* x = detail::optional_field(*sj, "grading"))
      solver.resolution.grading = detail::as_number(*x, "solver.grading");
    if (const json* x = detail::optional_field(*sj, "tolerance"))
      solver.tolerance = detail::as_number(*x, "solver.tolerance");
    if (const json* x = detail::optional_field(*sj, "tail_tolerance"))
      solver.tail_tolerance = detail::as_number(*x, "solver.tail_tolerance");
  }
  return ProblemDef(std::move(sigma), params, domain, u, v, solver);
}

inline json problem_json(const ProblemDef& p) {
  const CoefficientSpec& s = p.sigma().spec();
  json sigma{{"kind", to_string(s.kind)}, {"class", detail::class_token(s.integrability)}};
  switch (s.kind) {
    case CoefficientKind::zero:
      break;
    case CoefficientKind::polynomial:
      sigma["coeffs"] = detail::complex_list_json(s.coeffs);
      break;
    case CoefficientKind::piecewise_polynomial: {
      sigma["breaks"] = s.breaks;
      json pieces = json::array();
      for (const auto& pc : s.pieces) pieces.push_back(detail::complex_list_json(pc));
      sigma["pieces"] = pieces;
      break;
    }
    case CoefficientKind::inverse_power:
      sigma["center"] = s.center;
      sigma["exponent"] = s.exponent;
      sigma["amplitude"] = detail::complex_json(s.amplitude);
      if (!s.coeffs.empty()) sigma["coeffs"] = detail::complex_list_json(s.coeffs);
      break;
    case CoefficientKind::sampled:
      sigma["grid"] = s.grid;
      sigma["values"] = detail::complex_list_json(s.values);
      break;
  }
  if (s.support_end) sigma["support_end"] = *s.support_end;

  json doc;
  doc["sigma"] = sigma;
  doc["s"] = p.params().s;
  doc["kappa"] = detail::complex_json(p.params().kappa);
  if (p.is_halfline())
    doc["domain"] = {{"kind", "halfline"}, {"truncation_X", p.domain().truncation}};
  else
    doc["domain"] = {{"kind", "interval"}, {"length", p.domain().length}};
  doc["U"] = detail::boundary_json(p.U());
  if (p.V_opt()) doc["V"] = detail::boundary_json(*p.V_opt());
  doc["solver"] = {{"steps", p.solver().resolution.steps_per_unit},
                   {"grading", p.solver().resolution.grading},
                   {"tolerance", p.solver().tolerance},
                   {"tail_tolerance", p.solver().tail_tolerance}};
  return doc;
}

inline std::string serialize_problem(const ProblemDef& p) { return problem_json(p).dump(2) + "\n"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ProblemDef load_problem(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_problem(text);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && *b == ' ') ++b;
  if (b < e && *b == '+') ++b;
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc{} || r.ptr != e) throw ValidationError(what + ": '" + s + "' is not a number");
  return v;
}

inline long parse_count(const std::string& s, const std::string& what) {
  long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || v < 1)
    throw ValidationError(what + ": '" + s + "' is not a positive integer");
  return v;
}

inline std::vector<double> linspace(double a, double b, long n) {
  std::vector<double> out;
  for (long i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

}  // namespace detail

/// lambda samples from "real:a:b:n", "ray:arg:r0:r1:n" or "points:file".
///
/// A points file holds one value per line as "re im" or "re,im" (or just "re");
/// blank lines and lines starting with '#' are skipped.
inline std::vector<cplx> parse_lambda_grid(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  if (colon == std::string::npos) throw ValidationError("lambda-grid: expected real:a:b:n, ray:arg:r0:r1:n or points:file");
  if (head == "points") {
    const std::string path = spec.substr(colon + 1);
    std::istringstream in(read_file(path));
    std::vector<cplx> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      for (char& c : line)
        if (c == ',' || c == '\t' || c == '\r') c = ' ';
      std::istringstream ls(line);
      std::vector<std::string> tok;
      for (std::string t; ls >> t;) tok.push_back(t);
      if (tok.empty() || tok[0][0] == '#') continue;
      const std::string where = "lambda-grid " + path + " line " + std::to_string(lineno);
      if (tok.size() > 2) throw ValidationError(where + ": expected 're im'");
      out.emplace_back(detail::parse_double(tok[0], where),
                       tok.size() == 2 ? detail::parse_double(tok[1], where) : 0.0);
    }
    if (out.empty()) throw ValidationError("lambda-grid: " + path + " holds no points");
    return out;
  }
  const std::vector<std::string> f = detail::split(spec, ':');
  std::vector<cplx> out;
  if (head == "real") {
    if (f.size() != 4) throw ValidationError("lambda-grid: expected real:a:b:n");
    const double a = detail::parse_double(f[1], "lambda-grid a"), b = detail::parse_double(f[2], "lambda-grid b");
    for (double x : detail::linspace(a, b, detail::parse_count(f[3], "lambda-grid n"))) out.emplace_back(x, 0.0);
    return out;
  }
  if (head == "ray") {
    if (f.size() != 5) throw ValidationError("lambda-grid: expected ray:arg:r0:r1:n");
    const double arg = detail::parse_double(f[1], "lambda-grid arg");
    const double r0 = detail::parse_double(f[2], "lambda-grid r0"), r1 = detail::parse_double(f[3], "lambda-grid r1");
    for (double r : detail::linspace(r0, r1, detail::parse_count(f[4], "lambda-grid n"))) out.push_back(std::polar(r, arg));
    return out;
  }
  throw ValidationError("lambda-grid: unknown form '" + head + "' (expected real, ray or points)");
}

}  // namespace weyl3
