#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "weyl3/errors.hpp"
#include "weyl3/linalg.hpp"
#include "weyl3/problem.hpp"
#include "weyl3/propagator.hpp"
#include "weyl3/weyl_core.hpp"

namespace weyl3 {

/// Cube roots of unity ordered by Re(rho * omega).
struct OmegaOrder {
  cplx rho;
  std::array<cplx, 3> omega;
  std::array<double, 3> real_parts;  // Re(rho * omega_j)
  bool tie = false;

  /// Mode exponent mu_j = rho * omega_j, 1-based.
  cplx mode(int j) const { return rho * omega[j - 1]; }
};

inline OmegaOrder omega_order(cplx rho) {
  if (rho == cplx{}) throw ValidationError("omega_order: rho must be nonzero");
  const double third = 2.0 * std::numbers::pi / 3.0;
  std::array<cplx, 3> w{cplx(1.0, 0.0), std::polar(1.0, third), std::polar(1.0, -third)};
  std::sort(w.begin(), w.end(), [&](cplx a, cplx b) { return (rho * a).real() < (rho * b).real(); });
  OmegaOrder o;
  o.rho = rho;
  o.omega = w;
  for (int j = 0; j < 3; ++j) o.real_parts[j] = (rho * w[j]).real();
  const double tol = 1e-12 * std::abs(rho);
  o.tie = o.real_parts[1] - o.real_parts[0] <= tol || o.real_parts[2] - o.real_parts[1] <= tol;
  return o;
}

/// Exact mode vector [1, mu, mu^2] of the sigma = 0 system.
inline Vec3 mode_vector(cplx mu) { return Vec3(1.0, mu, mu * mu); }

/// Decay conditions at the truncation point for one lambda.
///
/// With Vm = [v(mu_1), v(mu_2), v(mu_3)], row j of Vm^{-1} reads off the coordinate
/// along mode j. Phi_2(X) may not contain mode 3, Phi_1(X) neither mode 2 nor 3.
inline EndConditions halfline_end_conditions(cplx lambda, OmegaOrder* order_out = nullptr) {
  if (lambda == cplx{}) throw BranchError("halfline: lambda = 0 is a branch point");
  if (std::abs(lambda.imag()) <= 1e-12 * std::abs(lambda))
    throw BranchError(std::string("halfline: lambda lies on the ") +
                      (lambda.real() > 0.0 ? "positive" : "negative") + " real cut");
  const OmegaOrder o = omega_order(principal_cbrt(lambda));
  if (o.tie) throw StokesError("halfline: Stokes line, the omega ordering is degenerate");
  if (order_out) *order_out = o;
  Mat3 vm;
  for (int j = 0; j < 3; ++j) vm.col(j) = mode_vector(o.mode(j + 1));
  const Mat3 dual = vm.inverse();
  return {dual.row(2), dual.row(1), vm.col(0)};
}

/// Weyl-Yurko matrix on the half-line from decay conditions imposed at X; poles are flagged.
inline WeylSample sample_weyl_halfline(const ProblemDef& prob, cplx lambda) {
  if (!prob.is_halfline()) throw ValidationError("weyl_matrix_halfline: problem is not a half-line problem");
  const EndConditions ec = halfline_end_conditions(lambda);
  const auto [t, tinv] = prob.propagator().transfer_and_inverse(lambda);
  return weyl_from_transfer(lambda, prob.U(), t, tinv, ec);
}

inline WeylSample weyl_matrix_halfline(const ProblemDef& prob, cplx lambda) {
  WeylSample s = sample_weyl_halfline(prob, lambda);
  throw_if_pole(s);
  return s;
}

}  // namespace weyl3
