#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "weyl3/bvp.hpp"
#include "weyl3/errors.hpp"
#include "weyl3/problem.hpp"

namespace weyl3 {

/// Axis-aligned rectangle [re_lo, re_hi] x [im_lo, im_hi] in the lambda-plane.
struct Rectangle {
  double re_lo = -1.0, re_hi = 1.0;
  double im_lo = -1.0, im_hi = 1.0;

  static Rectangle square(double r) { return {-r, r, -r, r}; }
  bool contains(cplx z) const {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
  /// Smallest |lambda| over the rectangle.
  double min_modulus() const {
    const double x = std::clamp(0.0, re_lo, re_hi);
    const double y = std::clamp(0.0, im_lo, im_hi);
    return std::hypot(x, y);
  }
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

struct Eigenvalue {
  int n = 0;  // 1-based index after sorting by |lambda|
  cplx lambda;
  int multiplicity = 1;
  double residual = 0.0;  // |Delta| / scale at lambda
  bool converged = true;
};

struct Spectrum {
  int j = 1, k = 1;
  std::vector<Eigenvalue> eigenvalues;
  Rectangle region;
  /// True when every zero of the region up to max_count was located.
  bool complete = true;
};

namespace detail {

/// Argument-principle search for the zeros of one Delta_jk inside a fixed root rectangle.
///
/// All contour vertices live on an integer lattice over the root rectangle, so
/// samples are shared between neighbouring boxes and each point is evaluated once.
class ZeroSearch {
 public:
  using Index = std::int64_t;

  struct Box {
    Index x0, x1, y0, y1;
    int count = -1;
  };

  ZeroSearch(const ProblemDef& prob, int j, int k, const Rectangle& root)
      : delta_(prob, j, k), root_(root), length_(prob.endpoint()) {
    if (!(root.re_hi > root.re_lo) || !(root.im_hi > root.im_lo))
      throw ValidationError("spectrum: region must have positive width and height");
    dx_ = (root.re_hi - root.re_lo) / static_cast<double>(kCells);
    dy_ = (root.im_hi - root.im_lo) / static_cast<double>(kCells);
  }

  Box root_box() const { return {0, kCells, 0, kCells, -1}; }

  Rectangle rectangle(const Box& b) const {
    return {root_.re_lo + dx_ * static_cast<double>(b.x0), root_.re_lo + dx_ * static_cast<double>(b.x1),
            root_.im_lo + dy_ * static_cast<double>(b.y0), root_.im_lo + dy_ * static_cast<double>(b.y1)};
  }

  /// Winding number of Delta along the boundary of b.
  int count(const Box& b) {
    double total = 0.0;
    total += horizontal(b.y0, b.x0, b.x1);
    total += vertical(b.x1, b.y0, b.y1);
    total -= horizontal(b.y1, b.x0, b.x1);
    total -= vertical(b.x0, b.y0, b.y1);
    const double w = total / (2.0 * std::numbers::pi);
    const double n = std::round(w);
    if (std::abs(w - n) > 0.05 || n < 0.0)
      throw ContourError("count_zeros: winding number " + std::to_string(w) + " is not resolved");
    return static_cast<int>(n);
  }

  /// Split b across its longer side at `num`/64 of the width.
  std::pair<Box, Box> split(const Box& b, int num) const {
    const Rectangle r = rectangle(b);
    Box a = b, c = b;
    a.count = c.count = -1;
    if (r.re_hi - r.re_lo >= r.im_hi - r.im_lo) {
      const Index m = b.x0 + (b.x1 - b.x0) * num / 64;
      a.x1 = c.x0 = m;
    } else {
      const Index m = b.y0 + (b.y1 - b.y0) * num / 64;
      a.y1 = c.y0 = m;
    }
    return {a, c};
  }

  bool splittable(const Box& b) const { return b.x1 - b.x0 >= 64 && b.y1 - b.y0 >= 64; }

  CharValue evaluate(cplx lambda) const { return delta_(lambda); }

  /// Newton iteration with a central-difference derivative; nullopt when it leaves `limit`.
  std::optional<Eigenvalue> newton(cplx start, const Rectangle& limit) const {
    cplx z = start;
    CharValue f = delta_(z);
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const double h = 1e-6 * std::max(std::abs(z), 1.0);
      const cplx d = (delta_(z + h).value - delta_(z - h).value) / (2.0 * h);
      if (d == cplx{} || !std::isfinite(std::abs(d))) return std::nullopt;
      const cplx step = f.value / d;
      z -= step;
      const double w = std::max(limit.re_hi - limit.re_lo, limit.im_hi - limit.im_lo);
      const double cx = 0.5 * (limit.re_lo + limit.re_hi), cy = 0.5 * (limit.im_lo + limit.im_hi);
      if (std::abs(z.real() - cx) > 2.0 * w || std::abs(z.imag() - cy) > 2.0 * w) return std::nullopt;
      f = delta_(z);
      if (f.relative() < 1e-9 && std::abs(step) < 1e-10 * std::max(std::abs(z), 1.0)) {
        converged = true;
        break;
      }
    }
    if (!converged) return std::nullopt;
    for (int polish = 0; polish < 2; ++polish) {
      const double h = 1e-6 * std::max(std::abs(z), 1.0);
      const cplx d = (delta_(z + h).value - delta_(z - h).value) / (2.0 * h);
      const cplx next = z - f.value / d;
      const CharValue fn = delta_(next);
      if (!(fn.relative() <= f.relative())) break;
      z = next;
      f = fn;
    }
    Eigenvalue e;
    e.lambda = z;
    e.residual = f.relative();
    return e;
  }

 private:
  static constexpr Index kCells = Index{1} << 44;

  struct Sample {
    cplx value;
  };

  cplx at(Index ix, Index iy) const {
    return {root_.re_lo + dx_ * static_cast<double>(ix), root_.im_lo + dy_ * static_cast<double>(iy)};
  }

  cplx sample(Index ix, Index iy) {
    auto& row = rows_[iy];
    if (auto it = row.find(ix); it != row.end()) return it->second.value;
    const cplx lambda = at(ix, iy);
    const CharValue v = delta_(lambda);
    if (!std::isfinite(std::abs(v.value)))
      throw NumericalError("count_zeros: characteristic function overflowed on the contour");
    if (v.relative() < 1e-10)
      throw ContourError("count_zeros: contour passes too close to a zero near lambda (" +
                         std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) + ")");
    row[ix] = {v.value};
    cols_[ix][iy] = {v.value};
    return v.value;
  }

  /// Phase increment along a lattice segment p -> q, refined until each step is resolved.
  double segment(Index px, Index py, Index qx, Index qy, cplx fp, cplx fq) {
    const cplx a = at(px, py), b = at(qx, qy);
    const double len = std::abs(b - a);
    const double dmin = segment_min_modulus(a, b);
    const double limit = 0.5 * std::pow(std::max(dmin, 1.0), 2.0 / 3.0) / length_;
    const double dtheta = std::arg(fq / fp);
    if (len <= limit && std::abs(dtheta) <= std::numbers::pi / 4) return dtheta;
    const Index span = std::max(std::abs(qx - px), std::abs(qy - py));
    if (span < 2 || len < 1e-9 * std::max(std::abs(a), 1.0))
      throw ContourError("count_zeros: phase change not resolved, the contour is too close to a zero");
    const Index mx = px + (qx - px) / 2, my = py + (qy - py) / 2;
    const cplx fm = sample(mx, my);
    return segment(px, py, mx, my, fp, fm) + segment(mx, my, qx, qy, fm, fq);
  }

  static double segment_min_modulus(cplx a, cplx b) {
    const cplx d = b - a;
    const double n2 = std::norm(d);
    if (n2 == 0.0) return std::abs(a);
    const double t = std::clamp(-(std::conj(d) * a).real() / n2, 0.0, 1.0);
    return std::abs(a + t * d);
  }

  /// Phase increment along the horizontal line iy from x0 to x1 (x0 < x1), reusing cached points.
  double horizontal(Index iy, Index x0, Index x1) {
    sample(x0, iy);
    sample(x1, iy);
    std::vector<std::pair<Index, cplx>> pts;
    const auto& row = rows_[iy];
    for (auto it = row.lower_bound(x0); it != row.end() && it->first <= x1; ++it)
      pts.emplace_back(it->first, it->second.value);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      total += segment(pts[i].first, iy, pts[i + 1].first, iy, pts[i].second, pts[i + 1].second);
    return total;
  }

  double vertical(Index ix, Index y0, Index y1) {
    sample(ix, y0);
    sample(ix, y1);
    std::vector<std::pair<Index, cplx>> pts;
    const auto& col = cols_[ix];
    for (auto it = col.lower_bound(y0); it != col.end() && it->first <= y1; ++it)
      pts.emplace_back(it->first, it->second.value);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      total += segment(ix, pts[i].first, ix, pts[i + 1].first, pts[i].second, pts[i + 1].second);
    return total;
  }

  CharFunction delta_;
  Rectangle root_;
  double length_;
  double dx_ = 0.0, dy_ = 0.0;
  std::map<Index, std::map<Index, Sample>> rows_;  // iy -> ix -> sample
  std::map<Index, std::map<Index, Sample>> cols_;  // ix -> iy -> sample
};

inline void sort_and_number(std::vector<Eigenvalue>& ev) {
  std::stable_sort(ev.begin(), ev.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    const double ma = std::abs(a.lambda), mb = std::abs(b.lambda);
    if (ma != mb) return ma < mb;
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  for (std::size_t i = 0; i < ev.size(); ++i) ev[i].n = static_cast<int>(i) + 1;
}

}  // namespace detail

/// Number of zeros of Delta_jk inside the rectangle, counted with multiplicity.
inline int count_zeros(const ProblemDef& prob, int j, int k, const Rectangle& rect) {
  detail::ZeroSearch search(prob, j, k, rect);
  return search.count(search.root_box());
}

/// Zeros of Delta_jk in `region` by increasing |lambda|, at most `max_count` of them.
///
/// Boxes are processed smallest modulus first; a box with one zero is handed to
/// Newton from its centre, others are split at 27/64 (or another off-centre
/// fraction when the split line runs too close to a zero).
inline Spectrum find_eigenvalues(const ProblemDef& prob, int j, int k, const Rectangle& region, int max_count) {
  if (max_count < 1) throw ValidationError("spectrum: max_count must be at least 1");
  detail::ZeroSearch search(prob, j, k, region);
  using Box = detail::ZeroSearch::Box;
  Spectrum out;
  out.j = j;
  out.k = k;
  out.region = region;

  Box root = search.root_box();
  try {
    root.count = search.count(root);
  } catch (const ContourError& e) {
    throw ContourError(std::string("spectrum: region boundary passes too close to a zero, enlarge the region (") +
                       e.what() + ")");
  }

  auto key = [&](const Box& b) { return search.rectangle(b).min_modulus(); };
  auto cmp = [&](const Box& a, const Box& b) { return key(a) > key(b); };
  std::priority_queue<Box, std::vector<Box>, decltype(cmp)> queue(cmp);
  if (root.count > 0) queue.push(root);

  std::vector<Eigenvalue> found;
  auto enough = [&](double next_modulus) {
    if (static_cast<int>(found.size()) < max_count) return false;
    std::vector<double> mods;
    for (const Eigenvalue& e : found) mods.push_back(std::abs(e.lambda));
    std::nth_element(mods.begin(), mods.begin() + (max_count - 1), mods.end());
    return next_modulus > mods[static_cast<std::size_t>(max_count - 1)];
  };

  static constexpr int kFractions[] = {27, 37, 23, 41, 19, 45, 31};
  while (!queue.empty()) {
    const Box b = queue.top();
    if (enough(key(b))) break;
    queue.pop();
    const Rectangle r = search.rectangle(b);
    const double size = std::max(r.re_hi - r.re_lo, r.im_hi - r.im_lo);
    const cplx centre(0.5 * (r.re_lo + r.re_hi), 0.5 * (r.im_lo + r.im_hi));
    const bool tiny = size < 1e-7 * std::max(std::abs(centre), 1.0) || !search.splittable(b);

    if (b.count == 1 || tiny) {
      if (auto e = search.newton(centre, r); e && (r.contains(e->lambda) || tiny)) {
        e->multiplicity = b.count;
        found.push_back(*e);
        continue;
      }
      if (tiny) {
        Eigenvalue e;
        e.lambda = centre;
        e.multiplicity = b.count;
        e.residual = search.evaluate(centre).relative();
        e.converged = false;
        found.push_back(e);
        continue;
      }
    }

    bool done = false;
    for (int num : kFractions) {
      auto [a, c] = search.split(b, num);
      try {
        a.count = search.count(a);
        c.count = search.count(c);
      } catch (const ContourError&) {
        continue;
      }
      if (a.count + c.count != b.count) continue;
      if (a.count > 0) queue.push(a);
      if (c.count > 0) queue.push(c);
      done = true;
      break;
    }
    if (!done) {
      Eigenvalue e;
      e.lambda = centre;
      e.multiplicity = b.count;
      e.residual = search.evaluate(centre).relative();
      e.converged = false;
      found.push_back(e);
    }
  }

  detail::sort_and_number(found);
  if (static_cast<int>(found.size()) > max_count) found.resize(static_cast<std::size_t>(max_count));
  int total = 0;
  for (const Eigenvalue& e : found) total += e.multiplicity;
  out.complete = static_cast<int>(found.size()) == max_count || total == root.count;
  out.eigenvalues = std::move(found);
  return out;
}

/// The `count` zeros of smallest modulus: the square [-r, r]^2 grows until they all
/// lie inside its inscribed disk, which makes them the smallest zeros overall.
inline Spectrum find_eigenvalues_auto(const ProblemDef& prob, int j, int k, int count) {
  if (count < 1) throw ValidationError("spectrum: count must be at least 1");
  const double t = prob.endpoint();
  double r = std::pow(2.0 * std::numbers::pi / std::sqrt(3.0) * (count + 1.5) / t, 3.0);
  r = std::max(r, 8.0);
  for (int attempt = 0; attempt < 12; ++attempt) {
    Spectrum s;
    try {
      s = find_eigenvalues(prob, j, k, Rectangle::square(r), count);
    } catch (const ContourError&) {
      r *= 1.37;
      continue;
    }
    if (static_cast<int>(s.eigenvalues.size()) == count && std::abs(s.eigenvalues.back().lambda) < r) return s;
    r *= 1.6;
  }
  throw ConvergenceError("spectrum: could not enclose " + std::to_string(count) + " eigenvalues");
}

struct AsymptoticsFit {
  int k = 1;
  double slope = 0.0;
  double intercept = 0.0;
  double chi = 0.0;                // intercept / slope
  std::vector<double> residuals;   // |lambda_n|^(1/3) / slope - n - chi, for every n
  int first_n = 0, last_n = 0;     // fit range
};

/// Least-squares line |lambda_n|^(1/3) = slope (n + chi) over the upper half of the indices.
inline AsymptoticsFit fit_asymptotics(const Spectrum& spec) {
  if (spec.j != spec.k || (spec.k != 1 && spec.k != 2))
    throw ValidationError("fit_asymptotics: needs a spectrum of (1,1) or (2,2)");
  const int n_total = static_cast<int>(spec.eigenvalues.size());
  if (n_total < 8) throw ValidationError("fit_asymptotics: needs at least 8 eigenvalues");
  AsymptoticsFit fit;
  fit.k = spec.k;
  fit.first_n = n_total / 2 + 1;
  fit.last_n = n_total;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const Eigenvalue& e : spec.eigenvalues) {
    if (e.n < fit.first_n) continue;
    const double x = e.n, y = std::cbrt(std::abs(e.lambda));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double den = m * sxx - sx * sx;
  fit.slope = (m * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / m;
  if (!(fit.slope > 0.0)) throw ConvergenceError("fit_asymptotics: fitted slope is not positive");
  fit.chi = fit.intercept / fit.slope;
  for (const Eigenvalue& e : spec.eigenvalues)
    fit.residuals.push_back(std::cbrt(std::abs(e.lambda)) / fit.slope - e.n - fit.chi);
  return fit;
}

}  // namespace weyl3
