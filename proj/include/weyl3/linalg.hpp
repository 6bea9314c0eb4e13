#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "weyl3/polynomial.hpp"

namespace weyl3 {

using Mat3 = Eigen::Matrix<cplx, 3, 3>;
using Vec3 = Eigen::Matrix<cplx, 3, 1>;
using Row3 = Eigen::Matrix<cplx, 1, 3>;

inline double norm1(const Mat3& a) {
  double m = 0.0;
  for (int j = 0; j < 3; ++j) m = std::max(m, a.col(j).cwiseAbs().sum());
  return m;
}

inline double max_abs(const Mat3& a) { return a.cwiseAbs().maxCoeff(); }

/// Bilinear cross product (no conjugation): rows a, b are annihilated by the result.
inline Vec3 cross(const Row3& a, const Row3& b) {
  return Vec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

/// Cube root with arg in (-pi/3, pi/3]; arg of the input taken in (-pi, pi].
inline cplx principal_cbrt(cplx z) {
  if (z == cplx{}) return {};
  return std::polar(std::cbrt(std::abs(z)), std::arg(z) / 3.0);
}

/// exp(A) together with exp(-A).
struct ExpPair {
  Mat3 forward;
  Mat3 backward;
};

namespace detail {

template <int M>
constexpr std::array<double, M + 1> pade_coefficients() {
  std::array<double, M + 1> c{};
  c[0] = 1.0;
  for (int j = 1; j <= M; ++j)
    c[j] = c[j - 1] * static_cast<double>(M - j + 1) / (static_cast<double>(j) * (2 * M - j + 1));
  return c;
}

template <int M>
ExpPair pade_pair(const Mat3& a) {
  static constexpr auto c = pade_coefficients<M>();
  const Mat3 id = Mat3::Identity();
  const Mat3 a2 = a * a;
  Mat3 even = c[0] * id;
  Mat3 odd = c[1] * id;
  Mat3 power = id;
  for (int j = 2; j <= M; j += 2) {
    power = power * a2;
    even += c[j] * power;
    if (j + 1 <= M) odd += c[j + 1] * power;
  }
  const Mat3 u = a * odd;
  const Mat3 p = even + u;  // numerator of exp(A), denominator of exp(-A)
  const Mat3 q = even - u;
  return {q.partialPivLu().solve(p), p.partialPivLu().solve(q)};
}

}  // namespace detail

/// Scaling-and-squaring Pade exponential of a 3x3 matrix, returning exp(A) and exp(-A).
inline ExpPair expm_pair(const Mat3& a) {
  const double nrm = norm1(a);
  if (nrm <= 0.05) return detail::pade_pair<4>(a);
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  ExpPair r = detail::pade_pair<6>(a * std::ldexp(1.0, -squarings));
  for (int i = 0; i < squarings; ++i) {
    r.forward = r.forward * r.forward;
    r.backward = r.backward * r.backward;
  }
  return r;
}

inline Mat3 expm(const Mat3& a) { return expm_pair(a).forward; }

/// Matrix power by repeated squaring.
inline Mat3 matrix_power(Mat3 base, long long n) {
  Mat3 r = Mat3::Identity();
  while (n > 0) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return r;
}

/// Sign of a permutation of {0, 1, 2}.
inline int permutation_sign(const std::array<int, 3>& p) {
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace weyl3
