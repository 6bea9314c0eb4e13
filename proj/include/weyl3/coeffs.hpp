#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "weyl3/errors.hpp"
#include "weyl3/polynomial.hpp"

namespace weyl3 {

enum class CoefficientKind { zero, polynomial, piecewise_polynomial, inverse_power, sampled };

/// Declared integrability class of sigma. The L1 variants are the half-line classes.
enum class IntegrabilityClass { L3, L2, L1_L3, L1_L2 };

inline bool is_l2_class(IntegrabilityClass c) {
  return c == IntegrabilityClass::L2 || c == IntegrabilityClass::L1_L2;
}

inline const char* to_string(CoefficientKind k) {
  switch (k) {
    case CoefficientKind::zero: return "zero";
    case CoefficientKind::polynomial: return "polynomial";
    case CoefficientKind::piecewise_polynomial: return "piecewise-polynomial";
    case CoefficientKind::inverse_power: return "inverse-power";
    case CoefficientKind::sampled: return "sampled";
  }
  return "?";
}

inline const char* to_string(IntegrabilityClass c) {
  switch (c) {
    case IntegrabilityClass::L3: return "L3";
    case IntegrabilityClass::L2: return "L2";
    case IntegrabilityClass::L1_L3: return "L1∩L3";
    case IntegrabilityClass::L1_L2: return "L1∩L2";
  }
  return "?";
}

struct CoefficientDomain {
  bool halfline = false;
  double length = 1.0;  // T for an interval [0, T]; unused on the half-line

  friend bool operator==(const CoefficientDomain&, const CoefficientDomain&) = default;
};

/// Declarative description of sigma; validated when a Coefficient is built from it.
///
/// Kind-specific fields:
///  - polynomial: `coeffs` in powers of x.
///  - piecewise_polynomial: `breaks` (strictly increasing, starting at 0) and one
///    coefficient list per piece in `pieces`, each in powers of x.
///  - inverse_power: amplitude * |x - center|^(-exponent) + background polynomial `coeffs`.
///  - sampled: values on a strictly increasing `grid`, linear in between.
/// On the half-line sigma vanishes beyond the last break / grid node / `support_end`.
struct CoefficientSpec {
  CoefficientKind kind = CoefficientKind::zero;
  IntegrabilityClass integrability = IntegrabilityClass::L3;
  CoefficientDomain domain;
  std::vector<cplx> coeffs;
  std::vector<double> breaks;
  std::vector<std::vector<cplx>> pieces;
  double center = 0.0;
  double exponent = 0.0;
  cplx amplitude = 0.0;
  std::vector<double> grid;
  std::vector<cplx> values;
  std::optional<double> support_end;

  friend bool operator==(const CoefficientSpec&, const CoefficientSpec&) = default;
};

/// Immutable representation of sigma in L3 (or L2, L1∩L3, L1∩L2).
///
/// Internally sigma is a list of pieces; on each piece it is a polynomial plus at
/// most one singular term A*|x - x0|^(-alpha) whose center is a piece endpoint.
/// Segment integrals of sigma^p (p = 1, 2, 3) are closed-form on every piece.
class Coefficient {
 public:
  explicit Coefficient(CoefficientSpec spec) : spec_(std::move(spec)) {
    validate();
    build_pieces();
  }

  static Coefficient zero(CoefficientDomain domain = {}) {
    CoefficientSpec s;
    s.domain = domain;
    if (domain.halfline) s.integrability = IntegrabilityClass::L1_L3;
    return Coefficient(std::move(s));
  }

  static Coefficient polynomial(std::vector<cplx> coeffs, CoefficientDomain domain = {},
                                IntegrabilityClass cls = IntegrabilityClass::L3) {
    CoefficientSpec s;
    s.kind = CoefficientKind::polynomial;
    s.integrability = cls;
    s.domain = domain;
    s.coeffs = std::move(coeffs);
    return Coefficient(std::move(s));
  }

  static Coefficient inverse_power(double center, double exponent, cplx amplitude,
                                   IntegrabilityClass cls = IntegrabilityClass::L3,
                                   CoefficientDomain domain = {}) {
    CoefficientSpec s;
    s.kind = CoefficientKind::inverse_power;
    s.integrability = cls;
    s.domain = domain;
    s.center = center;
    s.exponent = exponent;
    s.amplitude = amplitude;
    return Coefficient(std::move(s));
  }

  const CoefficientSpec& spec() const { return spec_; }
  CoefficientKind kind() const { return spec_.kind; }
  IntegrabilityClass integrability() const { return spec_.integrability; }
  const CoefficientDomain& domain() const { return spec_.domain; }
  bool is_halfline() const { return spec_.domain.halfline; }

  /// Right end of the represented part: T on an interval, the support end on the half-line.
  double support_end() const { return end_; }
  const std::vector<double>& singular_points() const { return singular_; }
  /// Piece boundaries strictly inside (0, support_end()).
  std::vector<double> breakpoints() const {
    std::vector<double> b;
    for (std::size_t i = 1; i < pieces_.size(); ++i) b.push_back(pieces_[i].a);
    return b;
  }

  /// Pointwise value; throws DomainError outside the domain or at a singular point.
  cplx operator()(double x) const {
    check_inside(x, x, "eval_sigma");
    for (double s : singular_)
      if (x == s) throw DomainError("sigma is singular at x = " + fmt(x));
    if (pieces_.empty() || x > end_) return 0.0;
    const Piece& pc = pieces_[piece_index(x)];
    cplx v = pc.poly(x);
    if (pc.singular) v += pc.amplitude * std::pow(std::abs(x - pc.center), -pc.exponent);
    return v;
  }

  /// Integral of sigma^power over [a, b], power in {1, 2, 3}.
  cplx segment_integral(int power, double a, double b) const {
    if (power < 1 || power > 3) throw ValidationError("segment_integral: power must be 1, 2 or 3");
    if (a > b) return -segment_integral(power, b, a);
    check_inside(a, b, "segment_integral");
    if (a == b || a >= end_) return 0.0;
    const double hi = std::min(b, end_);
    cplx total = 0.0;
    for (std::size_t i = piece_index(a); i < pieces_.size() && pieces_[i].a < hi; ++i) {
      const Piece& pc = pieces_[i];
      const double lo_x = std::max(a, pc.a);
      const double hi_x = std::min(hi, pc.b);
      if (hi_x > lo_x) total += piece_integral(pc, power, lo_x, hi_x);
    }
    return total;
  }

  /// First moment: integral of (x - (a + b)/2) sigma^power over [a, b].
  cplx segment_moment(int power, double a, double b) const {
    if (power < 1 || power > 3) throw ValidationError("segment_moment: power must be 1, 2 or 3");
    if (a > b) return segment_moment(power, b, a);
    check_inside(a, b, "segment_moment");
    if (a == b || a >= end_) return 0.0;
    const double hi = std::min(b, end_);
    const double mid = 0.5 * (a + b);
    cplx total = 0.0;
    for (std::size_t i = piece_index(a); i < pieces_.size() && pieces_[i].a < hi; ++i) {
      const Piece& pc = pieces_[i];
      const double lo_x = std::max(a, pc.a);
      const double hi_x = std::min(hi, pc.b);
      if (hi_x > lo_x) total += piece_moment(pc, power, lo_x, hi_x, mid);
    }
    return total;
  }

  /// Integral of |sigma|^p over [a, b] by tanh-sinh quadrature on each piece.
  double abs_power_integral(double p, double a, double b, double tol = 1e-12) const {
    if (a > b) std::swap(a, b);
    check_inside(a, b, "abs_power_integral");
    const double hi = std::min(b, end_);
    double total = 0.0;
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (std::size_t i = a >= end_ ? pieces_.size() : piece_index(a);
         i < pieces_.size() && pieces_[i].a < hi; ++i) {
      const Piece& pc = pieces_[i];
      const double lo_x = std::max(a, pc.a);
      const double hi_x = std::min(hi, pc.b);
      if (!(hi_x > lo_x)) continue;
      if (pc.singular) {
        const double u_lo = std::abs(pc.side > 0 ? lo_x - pc.center : pc.center - hi_x);
        const double u_hi = std::abs(pc.side > 0 ? hi_x - pc.center : pc.center - lo_x);
        auto f = [&](double u) {
          const cplx v = pc.shifted(u) + pc.amplitude * std::pow(u, -pc.exponent);
          return std::pow(std::abs(v), p);
        };
        if (u_lo == 0.0 && p * pc.exponent >= 1.0)
          throw IntegrabilityError("|sigma|^" + fmt(p) + " is not integrable at x0 = " +
                                   fmt(pc.center) + " (needs p*alpha < 1)");
        total += integrator.integrate(f, u_lo, u_hi, tol);
      } else {
        auto f = [&](double x) { return std::pow(std::abs(pc.poly(x)), p); };
        total += integrator.integrate(f, lo_x, hi_x, tol);
      }
    }
    return total;
  }

  /// Integral of |sigma|^p over the whole (supported) domain.
  double abs_power_norm(double p, double tol = 1e-12) const {
    return end_ > 0.0 ? abs_power_integral(p, 0.0, end_, tol) : 0.0;
  }

  /// Integral of |sigma| over [X, infinity) for half-line coefficients.
  double tail_abs_integral(double from) const {
    if (from >= end_) return 0.0;
    return abs_power_integral(1.0, std::max(from, 0.0), end_);
  }

  /// The value if sigma is one constant on [a, b] (used to merge identical propagator steps).
  std::optional<cplx> constant_on(double a, double b) const {
    if (a >= end_) return cplx{};
    if (b > end_) return std::nullopt;
    const std::size_t i = piece_index(a);
    const Piece& pc = pieces_[i];
    if (pc.singular || b > pc.b || pc.poly.degree() > 0) return std::nullopt;
    return pc.poly.coeff(0);
  }

  /// The global polynomial for zero and polynomial kinds on an interval.
  std::optional<Polynomial> as_polynomial() const {
    if (spec_.kind == CoefficientKind::zero) return Polynomial{};
    if (spec_.kind == CoefficientKind::polynomial && !is_halfline()) return Polynomial(spec_.coeffs);
    return std::nullopt;
  }

  /// sigma + P for an interval coefficient; the kind is kept whenever it can represent the sum.
  Coefficient plus_polynomial(const Polynomial& add) const {
    if (is_halfline())
      throw UnsupportedRepresentation("plus_polynomial: a polynomial shift is not in L1 on the half-line");
    CoefficientSpec s = spec_;
    switch (spec_.kind) {
      case CoefficientKind::zero:
        s.kind = CoefficientKind::polynomial;
        s.coeffs = add.coeffs();
        break;
      case CoefficientKind::polynomial:
      case CoefficientKind::inverse_power:
        s.coeffs = (Polynomial(spec_.coeffs) + add).coeffs();
        break;
      case CoefficientKind::piecewise_polynomial:
        for (auto& pc : s.pieces) pc = (Polynomial(pc) + add).coeffs();
        break;
      case CoefficientKind::sampled:
        if (add.degree() <= 1) {
          for (std::size_t i = 0; i < s.grid.size(); ++i) s.values[i] += add(s.grid[i]);
        } else {
          s = to_piecewise_spec();
          for (auto& pc : s.pieces) pc = (Polynomial(pc) + add).coeffs();
        }
        break;
    }
    return Coefficient(std::move(s));
  }

  friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.spec_ == b.spec_; }

  /// Sum of two coefficients on the same domain. Supported unless both carry
  /// (different) singular terms, or a singular term meets a piecewise partner.
  friend Coefficient sum(const Coefficient& a, const Coefficient& b);

 private:
  struct PowerTerm {
    cplx coeff;
    double exponent;
  };

  struct Piece {
    double a = 0.0;
    double b = 0.0;
    Polynomial poly;                        // in powers of x
    std::array<Polynomial, 3> antideriv;   // of poly^p, p = 1..3
    std::array<Polynomial, 3> antideriv_x; // of x * poly^p
    bool singular = false;
    double center = 0.0;
    double side = 1.0;                      // +1 if the piece lies right of the center
    double exponent = 0.0;
    cplx amplitude = 0.0;
    Polynomial local;                       // poly(center + side*u)
    std::array<std::vector<PowerTerm>, 3> terms;  // sigma^p = sum coeff * u^exponent

    cplx shifted(double u) const { return local(u); }
  };

  static std::string fmt(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
  }

  void fail(const std::string& field, const std::string& why) const {
    throw ValidationError("coefficient (" + std::string(to_string(spec_.kind)) + ") field '" + field +
                          "': " + why);
  }

  double declared_end() const {
    const CoefficientSpec& s = spec_;
    if (!s.domain.halfline) return s.domain.length;
    switch (s.kind) {
      case CoefficientKind::zero: return 0.0;
      case CoefficientKind::piecewise_polynomial: return s.breaks.back();
      case CoefficientKind::sampled: return s.grid.back();
      default: return *s.support_end;
    }
  }

  void validate() const {
    const CoefficientSpec& s = spec_;
    if (s.domain.halfline) {
      if (s.integrability != IntegrabilityClass::L1_L3 && s.integrability != IntegrabilityClass::L1_L2)
        fail("class", "half-line coefficients must be of class L1∩L3 or L1∩L2");
    } else {
      if (!(s.domain.length > 0.0) || !std::isfinite(s.domain.length))
        fail("domain.length", "interval length must be positive and finite");
      if (s.support_end) fail("support_end", "only meaningful on the half-line");
    }
    auto check_breaks = [&](const std::vector<double>& br, const char* name) {
      if (br.size() < 2) fail(name, "needs at least two nodes");
      for (std::size_t i = 1; i < br.size(); ++i)
        if (!(br[i] > br[i - 1])) fail(name, "must be strictly increasing");
      if (std::abs(br.front()) > 1e-12) fail(name, "must start at 0");
      if (!s.domain.halfline && std::abs(br.back() - s.domain.length) > 1e-12 * s.domain.length)
        fail(name, "must end at the interval length " + fmt(s.domain.length));
      if (!std::isfinite(br.back())) fail(name, "must be finite");
    };
    auto need_support = [&] {
      if (s.domain.halfline && (!s.support_end || !(*s.support_end > 0.0) || !std::isfinite(*s.support_end)))
        fail("support_end", "half-line " + std::string(to_string(s.kind)) +
                                " coefficients need a finite positive support_end (sigma must be in L1)");
    };
    switch (s.kind) {
      case CoefficientKind::zero:
        break;
      case CoefficientKind::polynomial:
        need_support();
        break;
      case CoefficientKind::piecewise_polynomial:
        check_breaks(s.breaks, "breaks");
        if (s.pieces.size() + 1 != s.breaks.size()) fail("pieces", "need exactly one piece per break interval");
        break;
      case CoefficientKind::sampled:
        check_breaks(s.grid, "grid");
        if (s.values.size() != s.grid.size()) fail("values", "need one value per grid node");
        break;
      case CoefficientKind::inverse_power: {
        need_support();
        const double end = declared_end();
        if (!(s.center > 0.0 && s.center < end)) fail("center", "x0 must lie strictly inside (0, " + fmt(end) + ")");
        if (!(s.exponent > 0.0)) fail("exponent", "alpha must be positive");
        if (is_l2_class(s.integrability)) {
          if (!(2.0 * s.exponent < 1.0))
            fail("exponent", "class " + std::string(to_string(s.integrability)) +
                                 " violates the integrability bound 2*alpha < 1 (alpha = " + fmt(s.exponent) + ")");
        } else if (!(3.0 * s.exponent < 1.0)) {
          fail("exponent", "class " + std::string(to_string(s.integrability)) +
                               " violates the integrability bound 3*alpha < 1 (alpha = " + fmt(s.exponent) + ")");
        }
        break;
      }
    }
  }

  CoefficientSpec to_piecewise_spec() const {
    CoefficientSpec s = spec_;
    s.kind = CoefficientKind::piecewise_polynomial;
    s.breaks = s.grid;
    s.pieces.clear();
    for (std::size_t i = 0; i + 1 < spec_.grid.size(); ++i) {
      const double x0 = spec_.grid[i], x1 = spec_.grid[i + 1];
      const cplx slope = (spec_.values[i + 1] - spec_.values[i]) / (x1 - x0);
      s.pieces.push_back({spec_.values[i] - slope * x0, slope});
    }
    s.grid.clear();
    s.values.clear();
    return s;
  }

  void add_piece(double a, double b, Polynomial poly) {
    Piece pc;
    pc.a = a;
    pc.b = b;
    pc.poly = std::move(poly);
    for (int p = 1; p <= 3; ++p) {
      const Polynomial q = pc.poly.pow(p);
      pc.antideriv[p - 1] = q.antiderivative();
      pc.antideriv_x[p - 1] = (Polynomial({0.0, 1.0}) * q).antiderivative();
    }
    pieces_.push_back(std::move(pc));
  }

  void add_singular_piece(double a, double b, Polynomial poly, double center, double exponent, cplx amplitude) {
    Piece pc;
    pc.a = a;
    pc.b = b;
    pc.poly = std::move(poly);
    pc.singular = true;
    pc.center = center;
    pc.side = a >= center ? 1.0 : -1.0;
    pc.exponent = exponent;
    pc.amplitude = amplitude;
    pc.local = pc.poly.compose_affine(center, pc.side);
    for (int p = 1; p <= 3; ++p) {
      double binom = 1.0;
      for (int m = 0; m <= p; ++m) {
        // C(p, m) * local^m * A^(p-m) * u^(-(p-m) alpha)
        const Polynomial q = pc.local.pow(m);
        const cplx scale = binom * std::pow(amplitude, p - m);
        for (int i = 0; i <= q.degree(); ++i)
          if (q.coeff(i) != cplx{})
            pc.terms[p - 1].push_back({scale * q.coeff(i), i - (p - m) * exponent});
        binom = binom * (p - m) / (m + 1);
      }
    }
    pieces_.push_back(std::move(pc));
  }

  void build_pieces() {
    const CoefficientSpec& s = spec_;
    end_ = declared_end();
    switch (s.kind) {
      case CoefficientKind::zero:
        if (end_ > 0.0) add_piece(0.0, end_, {});
        break;
      case CoefficientKind::polynomial:
        add_piece(0.0, end_, Polynomial(s.coeffs));
        break;
      case CoefficientKind::piecewise_polynomial:
        for (std::size_t i = 0; i + 1 < s.breaks.size(); ++i)
          add_piece(s.breaks[i], s.breaks[i + 1], Polynomial(s.pieces[i]));
        break;
      case CoefficientKind::sampled: {
        const CoefficientSpec pw = to_piecewise_spec();
        for (std::size_t i = 0; i + 1 < pw.breaks.size(); ++i)
          add_piece(pw.breaks[i], pw.breaks[i + 1], Polynomial(pw.pieces[i]));
        break;
      }
      case CoefficientKind::inverse_power:
        add_singular_piece(0.0, s.center, Polynomial(s.coeffs), s.center, s.exponent, s.amplitude);
        add_singular_piece(s.center, end_, Polynomial(s.coeffs), s.center, s.exponent, s.amplitude);
        singular_.push_back(s.center);
        break;
    }
  }

  void check_inside(double a, double b, const char* what) const {
    const double slack = 1e-12 * std::max(1.0, std::abs(b));
    if (a < -slack || (!is_halfline() && b > spec_.domain.length + slack) || !std::isfinite(b))
      throw DomainError(std::string(what) + ": [" + fmt(a) + ", " + fmt(b) + "] is outside the domain");
  }

  std::size_t piece_index(double x) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](double v, const Piece& pc) { return v < pc.b; });
    if (it == pieces_.end()) return pieces_.size() - 1;
    return static_cast<std::size_t>(it - pieces_.begin());
  }

  cplx piece_integral(const Piece& pc, int power, double lo, double hi) const {
    if (!pc.singular) {
      const Polynomial& anti = pc.antideriv[power - 1];
      return anti(hi) - anti(lo);
    }
    const double u_lo = pc.side > 0 ? lo - pc.center : pc.center - hi;
    const double u_hi = pc.side > 0 ? hi - pc.center : pc.center - lo;
    cplx total = 0.0;
    for (const PowerTerm& t : pc.terms[power - 1]) {
      const double e1 = t.exponent + 1.0;
      if (u_lo <= 0.0 && e1 <= 0.0)
        throw IntegrabilityError("sigma^" + std::to_string(power) + " is not integrable at x0 = " +
                                 fmt(pc.center) + " (power*alpha >= 1)");
      if (std::abs(e1) < 1e-14)
        total += t.coeff * std::log(u_hi / u_lo);
      else
        total += t.coeff * (std::pow(u_hi, e1) - (u_lo > 0.0 ? std::pow(u_lo, e1) : 0.0)) / e1;
    }
    return total;
  }

  cplx piece_moment(const Piece& pc, int power, double lo, double hi, double mid) const {
    if (!pc.singular) {
      const Polynomial& ax = pc.antideriv_x[power - 1];
      const Polynomial& a0 = pc.antideriv[power - 1];
      return (ax(hi) - ax(lo)) - mid * (a0(hi) - a0(lo));
    }
    // x - mid = (center - mid) + side * u
    const double u_lo = pc.side > 0 ? lo - pc.center : pc.center - hi;
    const double u_hi = pc.side > 0 ? hi - pc.center : pc.center - lo;
    cplx first = 0.0;
    for (const PowerTerm& t : pc.terms[power - 1]) {
      const double e2 = t.exponent + 2.0;
      first += t.coeff * (std::pow(u_hi, e2) - (u_lo > 0.0 ? std::pow(u_lo, e2) : 0.0)) / e2;
    }
    return (pc.center - mid) * piece_integral(pc, power, lo, hi) + pc.side * first;
  }

  CoefficientSpec spec_;
  std::vector<Piece> pieces_;
  std::vector<double> singular_;
  double end_ = 0.0;
};

inline Coefficient make_coefficient(CoefficientSpec spec) { return Coefficient(std::move(spec)); }

inline Coefficient sum(const Coefficient& a, const Coefficient& b) {
  if (!(a.domain() == b.domain())) throw ValidationError("sum: coefficients live on different domains");
  const bool sa = a.kind() == CoefficientKind::inverse_power;
  const bool sb = b.kind() == CoefficientKind::inverse_power;
  auto weaker = [&](IntegrabilityClass x, IntegrabilityClass y) {
    return is_l2_class(x) ? x : (is_l2_class(y) ? y : x);
  };
  if (sa || sb) {
    const Coefficient& sing = sa ? a : b;
    const Coefficient& other = sa ? b : a;
    CoefficientSpec s = sing.spec();
    s.integrability = weaker(a.integrability(), b.integrability());
    if (sa && sb) {
      if (a.spec().center != b.spec().center || a.spec().exponent != b.spec().exponent ||
          a.support_end() != b.support_end())
        throw UnsupportedRepresentation("sum: at most one singular term per coefficient");
      s.amplitude = a.spec().amplitude + b.spec().amplitude;
      s.coeffs = (Polynomial(a.spec().coeffs) + Polynomial(b.spec().coeffs)).coeffs();
      return Coefficient(std::move(s));
    }
    if (other.kind() == CoefficientKind::zero) return sing;
    if (other.kind() == CoefficientKind::polynomial && other.support_end() == sing.support_end()) {
      s.coeffs = (Polynomial(s.coeffs) + Polynomial(other.spec().coeffs)).coeffs();
      return Coefficient(std::move(s));
    }
    throw UnsupportedRepresentation("sum: a singular coefficient can only absorb a polynomial on the same support");
  }
  // Both regular: merge into a piecewise polynomial over the union of breakpoints.
  std::vector<double> nodes{0.0, a.support_end(), b.support_end()};
  for (double x : a.breakpoints()) nodes.push_back(x);
  for (double x : b.breakpoints()) nodes.push_back(x);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  while (nodes.size() > 1 && nodes.back() <= 0.0) nodes.pop_back();
  if (nodes.size() < 2) return Coefficient::zero(a.domain());
  CoefficientSpec s;
  s.kind = CoefficientKind::piecewise_polynomial;
  s.integrability = weaker(a.integrability(), b.integrability());
  s.domain = a.domain();
  s.breaks = nodes;
  auto local_poly = [](const Coefficient& c, double lo, double hi) -> Polynomial {
    if (lo >= c.support_end()) return {};
    return c.pieces_[c.piece_index(0.5 * (lo + hi))].poly;
  };
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    s.pieces.push_back((local_poly(a, nodes[i], nodes[i + 1]) + local_poly(b, nodes[i], nodes[i + 1])).coeffs());
  return Coefficient(std::move(s));
}

}  // namespace weyl3
