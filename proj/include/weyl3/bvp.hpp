#pragma once

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "weyl3/boundary.hpp"
#include "weyl3/errors.hpp"
#include "weyl3/halfline.hpp"
#include "weyl3/linalg.hpp"
#include "weyl3/problem.hpp"
#include "weyl3/weyl_core.hpp"

namespace weyl3 {

/// Right-end conditions of a problem at lambda (interval: V_1, V_2; half-line: decay).
inline EndConditions end_conditions(const ProblemDef& prob, cplx lambda) {
  return prob.is_halfline() ? halfline_end_conditions(lambda) : interval_end_conditions(prob.V());
}

/// M(lambda) with pole diagnostics; poles are flagged, not thrown.
inline WeylSample sample_weyl(const ProblemDef& prob, cplx lambda) {
  const EndConditions ec = end_conditions(prob, lambda);
  const auto [t, tinv] = prob.propagator().transfer_and_inverse(lambda);
  return weyl_from_transfer(lambda, prob.U(), t, tinv, ec);
}

/// M(lambda); throws PoleError near a pole of either column.
inline WeylSample weyl_matrix(const ProblemDef& prob, cplx lambda) {
  WeylSample s = sample_weyl(prob, lambda);
  throw_if_pole(s);
  return s;
}

/// C(x, lambda) = T(0 -> x) U^{-1}, so that U C(0, lambda) = I.
inline Mat3 fundamental_matrix(const ProblemDef& prob, cplx lambda, double x) {
  if (x < 0.0 || x > prob.endpoint()) throw DomainError("fundamental_matrix: x outside [0, endpoint]");
  return Propagator(prob.sigma(), prob.params(), 0.0, x, prob.solver().resolution).transfer(lambda) * prob.U().inverse();
}

struct WeylSolutions {
  WeylSample sample;
  std::vector<double> xs;
  std::vector<Mat3> C;    // C(x, lambda) at xs
  std::vector<Mat3> Phi;  // Phi(x, lambda) = C(x, lambda) M(lambda) at xs
};

namespace detail {

inline void normalize(Vec3& v) {
  const double m = v.cwiseAbs().maxCoeff();
  if (m > 0.0) v /= m;
}

inline void normalize(Row3& v) {
  const double m = v.cwiseAbs().maxCoeff();
  if (m > 0.0) v /= m;
}

/// Phi_1 and Phi_2 at every cell boundary.
///
/// Forming Phi = C M cancels once C grows like exp(|rho|): the decaying columns drown
/// in roundoff of the growing ones. Here each column is propagated cell by cell and
/// projected back after every cell onto the line it must lie on. For Phi_1 that line is
/// the end kernel carried backward; for Phi_2 it is the intersection of the planes
/// {first * Y(end) = 0} and {U_1 Y(0) = 0}, both carried as covectors in their stable
/// direction.
inline std::array<std::vector<Vec3>, 2> stable_columns(const Propagator::Cells& cells, const EndConditions& ec,
                                                       const BoundaryMatrix& u, const Vec3& phi1_0,
                                                       const Vec3& phi2_0) {
  const std::size_t n = cells.count;
  std::vector<Vec3> line1(n + 1);
  std::vector<Row3> cov_end(n + 1), cov_start(n + 1);
  Vec3 k = ec.kernel;
  Row3 w = ec.first;
  normalize(k);
  normalize(w);
  std::size_t b = n;
  line1[b] = k;
  cov_end[b] = w;
  for (std::size_t i = cells.maps.size(); i-- > 0;)
    for (long long r = 0; r < cells.repeat[i]; ++r) {
      k = cells.maps[i].backward * k;
      w = w * cells.maps[i].forward;
      normalize(k);
      normalize(w);
      --b;
      line1[b] = k;
      cov_end[b] = w;
    }
  Row3 z = u.row(1);
  normalize(z);
  b = 0;
  cov_start[0] = z;
  for (std::size_t i = 0; i < cells.maps.size(); ++i)
    for (long long r = 0; r < cells.repeat[i]; ++r) {
      z = z * cells.maps[i].backward;
      normalize(z);
      cov_start[++b] = z;
    }

  auto project = [](const Vec3& v, Vec3 dir) {
    dir.normalize();
    return Vec3(dir * dir.dot(v));
  };
  std::array<std::vector<Vec3>, 2> out{std::vector<Vec3>(n + 1), std::vector<Vec3>(n + 1)};
  Vec3 p1 = phi1_0, p2 = phi2_0;
  out[0][0] = p1;
  out[1][0] = p2;
  b = 0;
  for (std::size_t i = 0; i < cells.maps.size(); ++i)
    for (long long r = 0; r < cells.repeat[i]; ++r) {
      ++b;
      p1 = project(cells.maps[i].forward * p1, line1[b]);
      const Vec3 line2 = cross(cov_end[b], cov_start[b]);
      p2 = line2.cwiseAbs().maxCoeff() > 0.0 ? project(cells.maps[i].forward * p2, line2)
                                              : Vec3(cells.maps[i].forward * p2);
      out[0][b] = p1;
      out[1][b] = p2;
    }
  return out;
}

}  // namespace detail

/// Phi(x, lambda) at the given positions together with M and C; throws on poles.
inline WeylSolutions weyl_solutions(const ProblemDef& prob, cplx lambda, const std::vector<double>& xs) {
  const EndConditions ec = end_conditions(prob, lambda);
  const Propagator prop = prob.propagator(xs);
  const Propagator::Result run = prop.run(lambda, true, true);
  WeylSolutions out;
  out.sample = weyl_from_transfer(lambda, prob.U(), run.transfer, run.inverse, ec);
  throw_if_pole(out.sample);
  const Mat3 uinv = prob.U().inverse();
  const Mat3 start = uinv * out.sample.M;
  const Propagator::Cells cells = prop.cells(lambda);
  const auto cols = detail::stable_columns(cells, ec, prob.U(), start.col(0), start.col(1));
  const std::vector<double>& st = prop.stations();
  out.xs = xs;
  for (double x : xs) {
    const std::size_t idx = static_cast<std::size_t>(std::lower_bound(st.begin(), st.end(), x) - st.begin());
    const Mat3 c = run.at_stations[idx] * uinv;
    const std::size_t cell = cells.station_cell[idx];
    Mat3 phi;
    phi.col(0) = cols[0][cell];
    phi.col(1) = cols[1][cell];
    phi.col(2) = c.col(2);
    out.C.push_back(c);
    out.Phi.push_back(phi);
  }
  return out;
}

/// Delta_jk(lambda) with the roundoff scale of its expansion terms.
struct CharValue {
  int j = 1;
  int k = 1;
  cplx lambda;
  cplx value;
  double scale = 0.0;
  /// Row order of the determinant.
  static constexpr const char* convention = "U_1..U_{k-1}, U_j, V_1..V_{3-k}";
  double relative() const { return scale > 0.0 ? std::abs(value) / scale : std::abs(value); }
};

namespace detail {

/// Characteristic determinant from C(1) = T U^{-1}, C(1)^{-1} = U T^{-1} and det C(1).
///
/// The U-rows are unit rows, so the determinant reduces to a signed minor of
/// W = [V_l C(1)]. For k = 1 the 2x2 minors of C(1) are taken from its inverse
/// by Jacobi's identity; forming them from C(1) directly cancels catastrophically
/// once C grows like exp(|rho|).
/// Typical entry sizes of a matrix in the balanced coordinates diag(1, q, q^2) of
/// the propagator: |A_ij| ~ (d_i / d_j) max |D^{-1} A D|.
inline Eigen::Matrix3d balanced_scale(const Mat3& a, double q) {
  const double d[3] = {1.0, q, q * q};
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a(i, j)) * d[j] / d[i]);
  Eigen::Matrix3d s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s(i, j) = m * d[i] / d[j];
  return s;
}

inline CharValue char_from_transfer(int j, int k, cplx lambda, const BoundaryMatrix& v, const Mat3& c1,
                                    const Mat3& c1inv, double det_c1) {
  const double q = std::max(1.0, std::cbrt(std::abs(lambda)));
  CharValue out;
  out.j = j;
  out.k = k;
  out.lambda = lambda;
  std::vector<int> rows;  // 0-based columns of the unit rows, in determinant order
  for (int i = 1; i < k; ++i) rows.push_back(i - 1);
  rows.push_back(j - 1);
  std::array<int, 3> order{};
  std::array<bool, 3> used{};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    order[i] = rows[i];
    used[rows[i]] = true;
  }
  std::vector<int> comp;
  for (int c = 0; c < 3; ++c)
    if (!used[c]) comp.push_back(c);
  for (std::size_t i = 0; i < comp.size(); ++i) order[rows.size() + i] = comp[i];
  const double sign = permutation_sign(order);

  if (k == 3) {
    out.value = sign;
    out.scale = 1.0;
    return out;
  }
  if (k == 2) {
    const Row3 v1 = v.row(1);
    const int c = comp[0];
    const Eigen::Matrix3d typ = balanced_scale(c1, q);
    cplx w = 0.0;
    double sc = 0.0;
    for (int r = 0; r < 3; ++r) {
      w += v1(r) * c1(r, c);
      sc += std::abs(v1(r)) * typ(r, c);
    }
    out.value = sign * w;
    out.scale = sc;
    return out;
  }
  const Row3 v1 = v.row(1), v2 = v.row(2);
  const int a = comp[0], b = comp[1];
  const int cc = 3 - a - b;
  const Eigen::Matrix3d typ = balanced_scale(c1inv, q);
  cplx sum = 0.0;
  double sc = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int s = r + 1; s < 3; ++s) {
      const cplx vmin = v1(r) * v2(s) - v1(s) * v2(r);
      const int t = 3 - r - s;
      const double sg = ((t + cc) % 2 == 0) ? 1.0 : -1.0;
      const cplx cmin = sg * det_c1 * c1inv(cc, t);
      sum += vmin * cmin;
      sc += std::abs(vmin) * typ(cc, t);
    }
  out.value = sign * sum;
  out.scale = sc;
  return out;
}

inline void check_jk(int j, int k) {
  if (!(1 <= k && k <= j && j <= 3)) throw ValidationError("char_fn: need 1 <= k <= j <= 3");
}

}  // namespace detail

/// Reusable evaluator of one Delta_jk: the mesh is built once.
class CharFunction {
 public:
  CharFunction(const ProblemDef& prob, int j, int k)
      : prop_(prob.propagator()), u_(prob.U()), v_(prob.V()), j_(j), k_(k) {
    detail::check_jk(j, k);
    if (prob.is_halfline()) throw ValidationError("char_fn: characteristic functions need a finite interval");
  }

  int j() const { return j_; }
  int k() const { return k_; }

  CharValue operator()(cplx lambda) const {
    if (k_ == 3) return detail::char_from_transfer(j_, k_, lambda, v_, Mat3::Identity(), Mat3::Identity(), 1.0);
    const bool need_inverse = k_ == 1;
    const Propagator::Result r = prop_.run(lambda, need_inverse, false);
    const Mat3 c1 = r.transfer * u_.inverse();
    const Mat3 c1inv = need_inverse ? Mat3(u_.matrix() * r.inverse) : Mat3::Identity();
    return detail::char_from_transfer(j_, k_, lambda, v_, c1, c1inv, u_.sign());
  }

 private:
  Propagator prop_;
  BoundaryMatrix u_, v_;
  int j_, k_;
};

/// Characteristic function Delta_jk(lambda), 1 <= k <= j <= 3, for a finite-interval problem.
inline CharValue char_fn(const ProblemDef& prob, int j, int k, cplx lambda) { return CharFunction(prob, j, k)(lambda); }

}  // namespace weyl3
