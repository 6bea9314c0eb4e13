#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>

#include "weyl3/coeffs.hpp"
#include "weyl3/errors.hpp"
#include "weyl3/linalg.hpp"
#include "weyl3/polynomial.hpp"

namespace weyl3 {

/// Parameters of y''' + s (sigma' y)' + s sigma' y' + kappa sigma'' y.
struct ExpressionParams {
  int s = 1;
  cplx kappa = 0.0;

  void validate() const {
    if (s != 0 && s != 1) throw ValidationError("expression parameter s must be 0 or 1");
    if (s + std::abs(kappa) == 0.0) throw ValidationError("expression parameters violate s + |κ| ≠ 0");
  }

  friend bool operator==(const ExpressionParams&, const ExpressionParams&) = default;
};

/// Constants a_kj of the associated matrix, f_kj = a_kj * sigma^(k-j+1) for j <= k.
struct AssociatedMatrixCoeffs {
  cplx a11, a21, a22, a31, a32, a33;

  /// a_kj with 1-based indices, zero above the diagonal.
  cplx operator()(int k, int j) const {
    switch (10 * k + j) {
      case 11: return a11;
      case 21: return a21;
      case 22: return a22;
      case 31: return a31;
      case 32: return a32;
      case 33: return a33;
      default: return 0.0;
    }
  }
};

inline AssociatedMatrixCoeffs matrix_coeffs(const ExpressionParams& p) {
  p.validate();
  const cplx s = static_cast<double>(p.s);
  const cplx k = p.kappa;
  AssociatedMatrixCoeffs a;
  a.a11 = -(s + k);
  a.a21 = -(1.5 * k * k + 0.5 * s * s + 2.0 * k * s);
  a.a22 = 2.0 * k;
  a.a31 = k * (k * k - s * s);
  a.a32 = -(1.5 * k * k + 0.5 * s * s - 2.0 * k * s);
  a.a33 = s - k;
  return a;
}

/// F for a given value of sigma: superdiagonal ones, a_kj sigma^(k-j+1) on and below the diagonal.
inline Mat3 assemble_F(const AssociatedMatrixCoeffs& a, cplx sigma) {
  Mat3 f = Mat3::Zero();
  f(0, 1) = 1.0;
  f(1, 2) = 1.0;
  for (int k = 1; k <= 3; ++k)
    for (int j = 1; j <= k; ++j) f(k - 1, j - 1) = a(k, j) * std::pow(sigma, k - j + 1);
  return f;
}

inline Mat3 assemble_F(const Coefficient& c, const ExpressionParams& p, double x) {
  return assemble_F(matrix_coeffs(p), c(x));
}

/// y^[0..3] as polynomials.
using QuasiDerivatives = std::array<Polynomial, 4>;

/// y^[k] = (y^[k-1])' - sum_{j<=k} f_kj y^[j-1], with f_kj = a_kj sigma^(k-j+1).
inline QuasiDerivatives quasi_derivatives(const Polynomial& sigma, const AssociatedMatrixCoeffs& a,
                                          const Polynomial& y) {
  constexpr int n = 3;
  std::array<Polynomial, n + 1> sigma_pow;
  sigma_pow[0] = Polynomial::constant(1.0);
  for (int p = 1; p <= n; ++p) sigma_pow[p] = sigma_pow[p - 1] * sigma;
  QuasiDerivatives q;
  q[0] = y;
  for (int k = 1; k <= n; ++k) {
    Polynomial next = q[k - 1].derivative();
    for (int j = 1; j <= k; ++j) next = next - a(k, j) * (sigma_pow[k - j + 1] * q[j - 1]);
    q[k] = next;
  }
  return q;
}

inline QuasiDerivatives quasi_derivatives(const Coefficient& c, const ExpressionParams& p,
                                          const Polynomial& y) {
  const auto sigma = c.as_polynomial();
  if (!sigma) throw UnsupportedRepresentation("quasi_derivatives needs a polynomial sigma");
  return quasi_derivatives(*sigma, matrix_coeffs(p), y);
}

/// The formal expression evaluated symbolically for polynomial sigma and y.
inline Polynomial apply_expression(const Polynomial& sigma, const ExpressionParams& p, const Polynomial& y) {
  const Polynomial ds = sigma.derivative();
  const Polynomial dds = ds.derivative();
  const cplx s = static_cast<double>(p.s);
  return y.derivative().derivative().derivative() + s * (ds * y).derivative() + s * (ds * y.derivative()) +
         p.kappa * (dds * y);
}

struct AssociationResidual {
  double max_residual = 0.0;  // max |y^[3] - l(y)| over the grid
  double scale = 0.0;         // max |l(y)| over the grid
  double relative() const { return scale > 0.0 ? max_residual / scale : max_residual; }
};

inline AssociationResidual check_association(const Polynomial& sigma, const AssociatedMatrixCoeffs& a,
                                             const ExpressionParams& p, const Polynomial& y,
                                             std::span<const double> grid) {
  const Polynomial lhs = quasi_derivatives(sigma, a, y)[3];
  const Polynomial rhs = apply_expression(sigma, p, y);
  AssociationResidual r;
  for (double x : grid) {
    r.max_residual = std::max(r.max_residual, std::abs(lhs(x) - rhs(x)));
    r.scale = std::max(r.scale, std::abs(rhs(x)));
  }
  return r;
}

inline AssociationResidual check_association(const Coefficient& c, const ExpressionParams& p,
                                             const Polynomial& y, std::span<const double> grid) {
  const auto sigma = c.as_polynomial();
  if (!sigma) throw UnsupportedRepresentation("check_association needs a polynomial sigma");
  return check_association(*sigma, matrix_coeffs(p), p, y, grid);
}

}  // namespace weyl3
