#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "weyl3/coeffs.hpp"
#include "weyl3/errors.hpp"
#include "weyl3/linalg.hpp"
#include "weyl3/regularization.hpp"

namespace weyl3 {

/// Mesh control for the propagator.
struct Resolution {
  /// Steps per unit length away from singular points.
  double steps_per_unit = 2000.0;
  /// Near a singular point x0 the nodes are x0 + L (i/n)^grading, so the step
  /// scales like distance^(1 - 1/grading); 4 gives distance^0.75.
  double grading = 4.0;

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// lambda with its principal cube root rho, arg rho in (-pi/3, pi/3].
struct SpectralPoint {
  cplx lambda;
  cplx rho;
};

inline SpectralPoint spectral_point(cplx lambda) { return {lambda, principal_cbrt(lambda)}; }

struct TransferMatrix {
  Mat3 matrix;
  double a = 0.0;
  double b = 0.0;
  cplx lambda;
};

/// Transfer matrices of Y' = (F(x) + Lambda) Y for a fixed (sigma, s, kappa) on [a, b].
///
/// Each mesh cell uses the fourth-order Magnus step exp(B0 + [B1, B0]) with
/// B0 = integral of (F + Lambda) and B1 = (1/h) * integral of (x - mid)(F + Lambda),
/// so only segment integrals and first moments of sigma^p are ever needed. On
/// cells where sigma is constant B1 = 0. Lambda enters only at entry (3, 1), and
/// the lambda-independent part is precomputed; a new lambda costs one 3x3
/// exponential per cell.
class Propagator {
 public:
  Propagator(const Coefficient& c, const ExpressionParams& p, double a, double b, const Resolution& res = {},
             std::vector<double> stations = {})
      : a_(a), b_(b) {
    if (!(b >= a)) throw ValidationError("propagate: need a <= b");
    if (!(res.steps_per_unit > 0.0) || !(res.grading >= 1.0))
      throw ValidationError("propagate: resolution must be positive (steps > 0, grading >= 1)");
    const AssociatedMatrixCoeffs coeffs = matrix_coeffs(p);
    std::sort(stations.begin(), stations.end());
    stations.erase(std::unique(stations.begin(), stations.end()), stations.end());
    for (double x : stations)
      if (x < a || x > b) throw ValidationError("propagate: station outside [a, b]");
    stations_ = stations;
    build(c, coeffs, res);
  }

  double start() const { return a_; }
  double end() const { return b_; }
  const std::vector<double>& stations() const { return stations_; }
  std::size_t cell_count() const {
    std::size_t n = 0;
    for (const Step& s : steps_) n += static_cast<std::size_t>(s.repeat);
    return n;
  }

  struct Result {
    Mat3 transfer;
    Mat3 inverse;                   // only when requested
    std::vector<Mat3> at_stations;  // T(a -> station), aligned with stations()
  };

  Result run(cplx lambda, bool with_inverse, bool with_stations) const {
    Result r;
    r.transfer = Mat3::Identity();
    r.inverse = Mat3::Identity();
    if (with_stations) r.at_stations.assign(stations_.size(), Mat3::Identity());
    const double q = std::max(1.0, std::cbrt(std::abs(lambda)));
    std::size_t mark = 0;
    auto record = [&](std::size_t done) {
      while (mark < marks_.size() && marks_[mark].first == done) {
        if (with_stations) r.at_stations[marks_[mark].second] = r.transfer;
        ++mark;
      }
    };
    record(0);
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      const Step& st = steps_[i];
      Mat3 gen = st.generator;
      gen(2, 0) += st.lambda_weight * lambda;
      ExpPair e = balanced_exp(gen, q);
      if (st.repeat > 1) {
        e.forward = matrix_power(e.forward, st.repeat);
        if (with_inverse) e.backward = matrix_power(e.backward, st.repeat);
      }
      r.transfer = e.forward * r.transfer;
      if (with_inverse) r.inverse = r.inverse * e.backward;
      record(i + 1);
    }
    return r;
  }

  Mat3 transfer(cplx lambda) const { return run(lambda, false, false).transfer; }

  std::pair<Mat3, Mat3> transfer_and_inverse(cplx lambda) const {
    Result r = run(lambda, true, false);
    return {r.transfer, r.inverse};
  }

  std::vector<Mat3> station_transfers(cplx lambda) const { return run(lambda, false, true).at_stations; }

  /// Cell maps at one lambda: step i covers repeat[i] identical cells with map maps[i].
  struct Cells {
    std::vector<ExpPair> maps;
    std::vector<long long> repeat;
    std::vector<std::size_t> station_cell;  // cells done when each station is reached
    std::size_t count = 0;
  };

  Cells cells(cplx lambda) const {
    Cells c;
    const double q = std::max(1.0, std::cbrt(std::abs(lambda)));
    std::vector<std::size_t> done{0};
    for (const Step& st : steps_) {
      Mat3 gen = st.generator;
      gen(2, 0) += st.lambda_weight * lambda;
      c.maps.push_back(balanced_exp(gen, q));
      c.repeat.push_back(st.repeat);
      c.count += static_cast<std::size_t>(st.repeat);
      done.push_back(c.count);
    }
    c.station_cell.assign(stations_.size(), 0);
    for (const auto& [steps_done, station] : marks_) c.station_cell[station] = done[steps_done];
    return c;
  }

 private:
  struct Step {
    Mat3 generator;      // Magnus exponent without its lambda term
    cplx lambda_weight;  // coefficient of lambda at entry (3, 1)
    long long repeat;
  };

  /// exp(A) via the similarity diag(1, q, q^2), which brings h*lambda down to h*|lambda|^(1/3).
  static ExpPair balanced_exp(const Mat3& a, double q) {
    if (q == 1.0) return expm_pair(a);
    const double d[3] = {1.0, q, q * q};
    Mat3 b;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) = a(i, j) * (d[j] / d[i]);
    ExpPair e = expm_pair(b);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        e.forward(i, j) *= d[i] / d[j];
        e.backward(i, j) *= d[i] / d[j];
      }
    return e;
  }

  static Mat3 integrated(const AssociatedMatrixCoeffs& a, double diag, const std::array<cplx, 3>& moments) {
    Mat3 g = Mat3::Zero();
    g(0, 1) = diag;
    g(1, 2) = diag;
    for (int k = 1; k <= 3; ++k)
      for (int j = 1; j <= k; ++j) {
        const cplx akj = a(k, j);
        if (akj != cplx{}) g(k - 1, j - 1) = akj * moments[k - j];
      }
    return g;
  }

  /// Step for a cell with integrals m0 and first moments m1 of sigma^p.
  static Step magnus_step(const AssociatedMatrixCoeffs& a, double h, const std::array<cplx, 3>& m0,
                          const std::array<cplx, 3>& m1, long long repeat) {
    const Mat3 b0 = integrated(a, h, m0);
    std::array<cplx, 3> scaled{};
    for (int p = 0; p < 3; ++p) scaled[p] = m1[p] / h;
    const Mat3 b1 = integrated(a, 0.0, scaled);
    // [B1, h E31] = h (B1_33 - B1_11) E31
    return {b0 + b1 * b0 - b0 * b1, h + h * (b1(2, 2) - b1(0, 0)), repeat};
  }

  /// Integrals or first moments of the powers that actually enter F; for L2
  /// classes the sigma^3 entry has a zero constant and its integral may not exist.
  static std::array<cplx, 3> moments(const Coefficient& c, const AssociatedMatrixCoeffs& a, double lo, double hi,
                                     bool first) {
    const bool need[3] = {a.a11 != cplx{} || a.a22 != cplx{} || a.a33 != cplx{},
                          a.a21 != cplx{} || a.a32 != cplx{}, a.a31 != cplx{}};
    std::array<cplx, 3> m{};
    for (int p = 1; p <= 3; ++p)
      if (need[p - 1]) m[p - 1] = first ? c.segment_moment(p, lo, hi) : c.segment_integral(p, lo, hi);
    return m;
  }

  void build(const Coefficient& c, const AssociatedMatrixCoeffs& a, const Resolution& res) {
    std::vector<double> special{a_, b_};
    auto add_inside = [&](double x) {
      if (x > a_ && x < b_) special.push_back(x);
    };
    for (double x : c.breakpoints()) add_inside(x);
    for (double x : c.singular_points()) add_inside(x);
    add_inside(c.support_end());
    for (double x : stations_) add_inside(x);
    std::sort(special.begin(), special.end());
    special.erase(std::unique(special.begin(), special.end()), special.end());
    const auto& sing = c.singular_points();
    auto is_singular = [&](double x) { return std::find(sing.begin(), sing.end(), x) != sing.end(); };

    std::vector<std::pair<double, std::size_t>> node_steps;  // (node, steps done) for station marks
    node_steps.emplace_back(a_, 0);
    for (std::size_t s = 0; s + 1 < special.size(); ++s) {
      const double p = special[s], q = special[s + 1];
      const double len = q - p;
      const long long n = std::max<long long>(1, static_cast<long long>(std::ceil(res.steps_per_unit * len - 1e-9)));
      if (auto value = c.constant_on(p, q)) {
        const double h = len / static_cast<double>(n);
        std::array<cplx, 3> m{};
        for (int k = 0; k < 3; ++k) m[k] = std::pow(*value, k + 1) * h;
        steps_.push_back(magnus_step(a, h, m, {}, n));
      } else {
        std::vector<double> nodes = graded_nodes(p, q, n, is_singular(p), is_singular(q), res.grading);
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
          const double lo = nodes[i], hi = nodes[i + 1];
          if (!(hi > lo)) continue;
          steps_.push_back(magnus_step(a, hi - lo, moments(c, a, lo, hi, false), moments(c, a, lo, hi, true), 1));
        }
      }
      node_steps.emplace_back(q, steps_.size());
    }
    for (std::size_t i = 0; i < stations_.size(); ++i) {
      for (const auto& [x, done] : node_steps)
        if (x == stations_[i]) {
          marks_.emplace_back(done, i);
          break;
        }
    }
    std::sort(marks_.begin(), marks_.end());
  }

  static std::vector<double> graded_nodes(double p, double q, long long n, bool left, bool right, double g) {
    std::vector<double> nodes;
    const double len = q - p;
    if (!left && !right) {
      for (long long i = 0; i <= n; ++i) nodes.push_back(p + len * static_cast<double>(i) / static_cast<double>(n));
    } else if (left && !right) {
      for (long long i = 0; i <= n; ++i) nodes.push_back(p + len * std::pow(static_cast<double>(i) / n, g));
    } else if (!left && right) {
      for (long long i = n; i >= 0; --i) nodes.push_back(q - len * std::pow(static_cast<double>(i) / n, g));
    } else {
      const double mid = 0.5 * (p + q);
      const long long h = std::max<long long>(1, n / 2);
      for (long long i = 0; i <= h; ++i) nodes.push_back(p + (mid - p) * std::pow(static_cast<double>(i) / h, g));
      for (long long i = h - 1; i >= 0; --i) nodes.push_back(q - (q - mid) * std::pow(static_cast<double>(i) / h, g));
    }
    nodes.front() = p;
    nodes.back() = q;
    return nodes;
  }

  double a_, b_;
  std::vector<double> stations_;
  std::vector<Step> steps_;
  std::vector<std::pair<std::size_t, std::size_t>> marks_;  // (steps done, station index)
};

/// Transfer matrix from a to b for one lambda.
inline TransferMatrix propagate(const Coefficient& c, const ExpressionParams& p, cplx lambda, double a, double b,
                                const Resolution& res = {}) {
  return {Propagator(c, p, a, b, res).transfer(lambda), a, b, lambda};
}

}  // namespace weyl3
