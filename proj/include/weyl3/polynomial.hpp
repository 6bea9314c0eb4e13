#pragma once

#include <algorithm>
#include <complex>
#include <initializer_list>
#include <utility>
#include <vector>

namespace weyl3 {

using cplx = std::complex<double>;

/// Dense polynomial with complex coefficients; coeffs()[k] multiplies x^k.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }

  static Polynomial constant(cplx value) { return Polynomial({value}); }
  static Polynomial monomial(int power, cplx value = 1.0) {
    std::vector<cplx> c(static_cast<std::size_t>(power) + 1, 0.0);
    c.back() = value;
    return Polynomial(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx coeff(int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(k)] : cplx{};
  }

  template <class T>
  cplx operator()(T x) const {
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * cplx(x) + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<cplx> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Polynomial(std::move(d));
  }

  /// Antiderivative vanishing at x = 0.
  Polynomial antiderivative() const {
    if (c_.empty()) return {};
    std::vector<cplx> a(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / static_cast<double>(k + 1);
    return Polynomial(std::move(a));
  }

  Polynomial pow(int p) const {
    Polynomial r = constant(1.0);
    for (int i = 0; i < p; ++i) r = r * *this;
    return r;
  }

  /// The polynomial u -> P(shift + scale * u).
  Polynomial compose_affine(cplx shift, cplx scale) const {
    const Polynomial lin({shift, scale});
    Polynomial r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * lin + constant(*it);
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<cplx> c(std::max(a.c_.size(), b.c_.size()), 0.0);
    for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<cplx> c(a.c_.size() + b.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(cplx s, const Polynomial& a) {
    std::vector<cplx> c = a.c_;
    for (auto& v : c) v *= s;
    return Polynomial(std::move(c));
  }
  friend Polynomial operator*(double s, const Polynomial& a) { return cplx(s) * a; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
  }

  std::vector<cplx> c_;
};

/// Maximum of |P(x)| over a set of sample points.
template <class Range>
double max_abs_on(const Polynomial& p, const Range& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(p(x)));
  return m;
}

}  // namespace weyl3
