#pragma once

#include <array>
#include <string>

#include "weyl3/errors.hpp"
#include "weyl3/linalg.hpp"

namespace weyl3 {

/// 1-based permutation (p1, p2, p3): row i of the boundary matrix ends at column p_i.
using Permutation = std::array<int, 3>;

/// A boundary matrix U = P L with P a permutation matrix and L unit lower triangular.
///
/// Row i is U_i = [l_{p_i,1}, ..., l_{p_i,p_i-1}, 1, 0, ...], i.e. row p_i of L, so
/// the form U_i Y = sum_{j <= p_i} u_ij y_j has u_{i,p_i} = 1.
class BoundaryMatrix {
 public:
  BoundaryMatrix() : BoundaryMatrix({1, 2, 3}, {0.0, 0.0, 0.0}) {}

  /// `lower` holds (l21, l31, l32).
  BoundaryMatrix(Permutation perm, std::array<cplx, 3> lower) : perm_(perm), lower_(lower) {
    std::array<bool, 3> seen{};
    for (int p : perm_) {
      if (p < 1 || p > 3 || seen[p - 1])
        throw ValidationError("boundary matrix: perm must be a permutation of (1, 2, 3)");
      seen[p - 1] = true;
    }
  }

  static BoundaryMatrix identity() { return {}; }

  /// Factor a matrix with the permutation-triangular pattern and unit pivots.
  static BoundaryMatrix from_matrix(const Mat3& u, double tol = 1e-12) {
    Permutation perm{};
    for (int i = 0; i < 3; ++i) {
      int last = -1;
      for (int j = 0; j < 3; ++j)
        if (std::abs(u(i, j)) > tol) last = j;
      if (last < 0 || std::abs(u(i, last) - 1.0) > tol)
        throw ValidationError("boundary matrix: each row needs a unit last nonzero entry");
      perm[i] = last + 1;
    }
    BoundaryMatrix probe(perm, {0.0, 0.0, 0.0});
    const Mat3 l = probe.permutation_matrix().transpose() * u;
    BoundaryMatrix b(perm, {l(1, 0), l(2, 0), l(2, 1)});
    if (max_abs(b.matrix() - u) > tol * (1.0 + max_abs(u)))
      throw ValidationError("boundary matrix: not of the form P * L");
    return b;
  }

  const Permutation& permutation() const { return perm_; }
  const std::array<cplx, 3>& lower() const { return lower_; }
  cplx l21() const { return lower_[0]; }
  cplx l31() const { return lower_[1]; }
  cplx l32() const { return lower_[2]; }

  Mat3 unit_lower() const {
    Mat3 l = Mat3::Identity();
    l(1, 0) = lower_[0];
    l(2, 0) = lower_[1];
    l(2, 1) = lower_[2];
    return l;
  }

  /// P with P(i, p_i) = 1.
  Mat3 permutation_matrix() const {
    Mat3 p = Mat3::Zero();
    for (int i = 0; i < 3; ++i) p(i, perm_[i] - 1) = 1.0;
    return p;
  }

  Mat3 matrix() const { return permutation_matrix() * unit_lower(); }

  /// Row U_i, 1-based.
  Row3 row(int i) const { return unit_lower().row(perm_[i - 1] - 1); }

  /// U^{-1} = L^{-1} P^T, exact for unit triangular L.
  Mat3 inverse() const {
    Mat3 linv = Mat3::Identity();
    linv(1, 0) = -lower_[0];
    linv(2, 1) = -lower_[2];
    linv(2, 0) = lower_[2] * lower_[0] - lower_[1];
    return linv * permutation_matrix().transpose();
  }

  int sign() const { return permutation_sign({perm_[0] - 1, perm_[1] - 1, perm_[2] - 1}); }

  /// P (L R) for a unit lower triangular R; the permutation is unchanged.
  BoundaryMatrix times_unit_lower(const Mat3& r) const {
    const Mat3 l = unit_lower() * r;
    return BoundaryMatrix(perm_, {l(1, 0), l(2, 0), l(2, 1)});
  }

  friend bool operator==(const BoundaryMatrix&, const BoundaryMatrix&) = default;

 private:
  Permutation perm_;
  std::array<cplx, 3> lower_;
};

}  // namespace weyl3
