#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <string>

#include "weyl3/boundary.hpp"
#include "weyl3/errors.hpp"
#include "weyl3/linalg.hpp"

namespace weyl3 {

/// Relative pivot below which a Weyl column is treated as a pole.
inline constexpr double kPoleTolerance = 1e-13;

/// Right-end conditions shared by the interval and half-line constructions.
///
/// Column k of the Weyl solutions must be annihilated by the first 3-k rows:
/// column 2 by `first`, column 1 by `first` and `second`. `kernel` spans the
/// common null space of both rows, i.e. the direction of Phi_1 at the right end.
struct EndConditions {
  Row3 first;
  Row3 second;
  Vec3 kernel;
};

inline EndConditions interval_end_conditions(const BoundaryMatrix& v) {
  return {v.row(1), v.row(2), cross(v.row(1), v.row(2))};
}

/// The Weyl-Yurko matrix at one lambda with pole diagnostics.
struct WeylSample {
  cplx lambda;
  Mat3 M = Mat3::Identity();
  bool pole = false;
  int pole_column = 0;                 // 1 or 2 when pole
  std::array<double, 2> pivots{};      // relative pivots of columns 1 and 2
  double pivot_min() const { return std::min(pivots[0], pivots[1]); }

  /// Largest deviation from the unit lower triangular pattern.
  double triangularity_defect() const {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
      d = std::max(d, std::abs(M(i, i) - 1.0));
      for (int j = i + 1; j < 3; ++j) d = std::max(d, std::abs(M(i, j)));
    }
    return d;
  }
};

/// M from the transfer T = T(0 -> end), its inverse, the boundary matrix U and end rows.
///
/// Column 1 is shot backward: Phi_1(end) is along `kernel`, so Phi_1(0) ∝ T^{-1} kernel
/// and M e_1 = U Phi_1(0) normalized to a unit first entry. Column 2 uses the row
/// w = first * T * U^{-1} = first * C(end): m32 = -w_2 / w_3.
inline WeylSample weyl_from_transfer(cplx lambda, const BoundaryMatrix& u, const Mat3& transfer,
                                     const Mat3& inverse, const EndConditions& ec) {
  WeylSample s;
  s.lambda = lambda;
  const Mat3 umat = u.matrix();
  const Vec3 z = inverse * ec.kernel;
  const Vec3 uz = umat * z;
  const Eigen::Vector3d z_scale = inverse.cwiseAbs() * ec.kernel.cwiseAbs();
  const double scale1 = umat.row(0).cwiseAbs().dot(z_scale.transpose());
  // m_jk ~ q^(j-k) away from poles, so a pivot is also compared with the balanced size of its vector
  const double q = std::max(1.0, std::cbrt(std::abs(lambda)));
  const double d[3] = {1.0, q, q * q};
  double size1 = 0.0, size2 = 0.0;
  for (int i = 0; i < 3; ++i) size1 = std::max(size1, std::abs(uz(i)) / d[i]);
  const double denom1 = std::max(scale1, size1);
  s.pivots[0] = denom1 > 0.0 ? std::abs(uz(0)) / denom1 : 0.0;

  const Mat3 uinv = u.inverse();
  const Row3 w = ec.first * transfer * uinv;
  const Eigen::RowVector3d w_scale = ec.first.cwiseAbs() * transfer.cwiseAbs() * uinv.cwiseAbs();
  for (int i = 0; i < 3; ++i) size2 = std::max(size2, std::abs(w(i)) * d[i] / d[2]);
  const double denom2 = std::max(w_scale(2), size2);
  s.pivots[1] = denom2 > 0.0 ? std::abs(w(2)) / denom2 : 0.0;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.M = Mat3::Identity();
  if (s.pivots[0] < kPoleTolerance) {
    s.pole = true;
    s.pole_column = 1;
    s.M(1, 0) = s.M(2, 0) = cplx(nan, nan);
  } else {
    s.M(1, 0) = uz(1) / uz(0);
    s.M(2, 0) = uz(2) / uz(0);
  }
  if (s.pivots[1] < kPoleTolerance) {
    if (!s.pole) s.pole_column = 2;
    s.pole = true;
    s.M(2, 1) = cplx(nan, nan);
  } else {
    s.M(2, 1) = -w(1) / w(2);
  }
  return s;
}

inline void throw_if_pole(const WeylSample& s) {
  if (s.pole)
    throw PoleError("Weyl matrix column " + std::to_string(s.pole_column) + " has a pole near lambda (" +
                        std::to_string(s.lambda.real()) + ", " + std::to_string(s.lambda.imag()) +
                        "), relative pivot " + std::to_string(s.pivots[s.pole_column - 1]),
                    s.pole_column, s.pivots[s.pole_column - 1]);
}

}  // namespace weyl3
