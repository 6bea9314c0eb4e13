#pragma once

#include <complex>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "weyl3/weyl3.hpp"

namespace weyl3::fixtures {

inline ProblemDef interval_problem(Coefficient sigma, ExpressionParams p = {1, 0.0},
                                   BoundaryMatrix u = BoundaryMatrix::identity(),
                                   BoundaryMatrix v = BoundaryMatrix::identity()) {
  return ProblemDef(std::move(sigma), p, Domain::interval(1.0), std::move(u), std::move(v));
}

inline ProblemDef sigma_zero_problem() { return interval_problem(Coefficient::zero()); }
inline ProblemDef sigma_x2_problem() { return interval_problem(Coefficient::polynomial({0.0, 0.0, 1.0})); }

inline BoundaryMatrix mixed_U() { return BoundaryMatrix({2, 3, 1}, {cplx(0.3), cplx(-0.2), cplx(0.5, 0.1)}); }
inline BoundaryMatrix mixed_V() { return BoundaryMatrix({3, 1, 2}, {cplx(0.1), cplx(0.4, -0.2), cplx(-0.6)}); }

inline ProblemDef halfline_problem(Coefficient sigma, double X, BoundaryMatrix u = BoundaryMatrix::identity()) {
  return ProblemDef(std::move(sigma), {1, 0.0}, Domain::halfline(X), std::move(u), std::nullopt);
}

inline Coefficient halfline_zero() { return Coefficient::zero(CoefficientDomain{true, 0.0}); }

/// Piecewise-linear hat of height `height` on [a, b], zero elsewhere on [0, end].
inline Coefficient hat(double a, double b, double height, CoefficientDomain domain = {},
                       IntegrabilityClass cls = IntegrabilityClass::L3) {
  const double m = 0.5 * (a + b);
  const double slope = height / (m - a);
  CoefficientSpec s;
  s.kind = CoefficientKind::piecewise_polynomial;
  s.integrability = cls;
  s.domain = domain;
  s.breaks = {0.0};
  if (a > 0.0) {
    s.breaks.push_back(a);
    s.pieces.push_back({0.0});
  }
  s.breaks.insert(s.breaks.end(), {m, b});
  s.pieces.push_back({-slope * a, slope});
  s.pieces.push_back({slope * b, -slope});
  if (!domain.halfline && b < domain.length) {
    s.breaks.push_back(domain.length);
    s.pieces.push_back({0.0});
  }
  return Coefficient(std::move(s));
}

inline double max_abs_diff(const Mat3& a, const Mat3& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Random lambda in the annulus r0 <= |lambda| <= r1, with |arg| kept away from the real axis.
inline cplx random_lambda(std::mt19937_64& rng, double r0, double r1) {
  std::uniform_real_distribution<double> rad(std::log(r0), std::log(r1));
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  return std::polar(std::exp(rad(rng)), ang(rng));
}

inline const std::vector<cplx>& moderate_lambdas() {
  static const std::vector<cplx> v{{2, 3},  {-10, 5}, {20, 1},  {-7, -4}, {30, 20},
                                   {5, -8}, {-15, 12}, {12, 9}, {-3, 25}, {40, -6}};
  return v;
}

}  // namespace weyl3::fixtures
