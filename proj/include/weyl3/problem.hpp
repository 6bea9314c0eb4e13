#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "weyl3/boundary.hpp"
#include "weyl3/coeffs.hpp"
#include "weyl3/errors.hpp"
#include "weyl3/propagator.hpp"
#include "weyl3/regularization.hpp"

namespace weyl3 {

enum class DomainKind { interval, halfline };

struct Domain {
  DomainKind kind = DomainKind::interval;
  double length = 1.0;      // interval [0, length]
  double truncation = 0.0;  // half-line truncation point X

  static Domain interval(double length = 1.0) { return {DomainKind::interval, length, 0.0}; }
  static Domain halfline(double truncation) { return {DomainKind::halfline, 0.0, truncation}; }

  bool is_halfline() const { return kind == DomainKind::halfline; }
  /// Right endpoint used by the solvers: the interval length or the truncation X.
  double endpoint() const { return is_halfline() ? truncation : length; }

  friend bool operator==(const Domain&, const Domain&) = default;
};

struct SolverSettings {
  Resolution resolution;
  double tolerance = 1e-12;  // quadrature tolerance
  /// Bound on the integral of |sigma| beyond the half-line truncation point.
  double tail_tolerance = 1e-10;

  friend bool operator==(const SolverSettings&, const SolverSettings&) = default;
};

/// One spectral problem: (sigma, s, kappa, U, V or truncation X).
class ProblemDef {
 public:
  ProblemDef(Coefficient sigma, ExpressionParams params, Domain domain, BoundaryMatrix u,
             std::optional<BoundaryMatrix> v, SolverSettings solver = {})
      : sigma_(std::move(sigma)),
        params_(params),
        domain_(domain),
        u_(std::move(u)),
        v_(std::move(v)),
        solver_(solver) {
    validate();
  }

  const Coefficient& sigma() const { return sigma_; }
  const ExpressionParams& params() const { return params_; }
  const Domain& domain() const { return domain_; }
  const BoundaryMatrix& U() const { return u_; }
  const std::optional<BoundaryMatrix>& V_opt() const { return v_; }
  const BoundaryMatrix& V() const {
    if (!v_) throw ValidationError("problem has no boundary matrix V");
    return *v_;
  }
  const SolverSettings& solver() const { return solver_; }
  bool is_halfline() const { return domain_.is_halfline(); }
  double endpoint() const { return domain_.endpoint(); }

  ProblemDef with_sigma(Coefficient sigma) const {
    return {std::move(sigma), params_, domain_, u_, v_, solver_};
  }
  ProblemDef with_U(BoundaryMatrix u) const { return {sigma_, params_, domain_, std::move(u), v_, solver_}; }
  ProblemDef with_V(std::optional<BoundaryMatrix> v) const {
    return {sigma_, params_, domain_, u_, std::move(v), solver_};
  }
  ProblemDef with_solver(SolverSettings s) const { return {sigma_, params_, domain_, u_, v_, s}; }

  /// Propagator over [0, endpoint] with optional output stations.
  Propagator propagator(std::vector<double> stations = {}) const {
    return Propagator(sigma_, params_, 0.0, endpoint(), solver_.resolution, std::move(stations));
  }

  friend bool operator==(const ProblemDef&, const ProblemDef&) = default;

 private:
  void validate() const {
    params_.validate();
    if (domain_.is_halfline()) {
      if (!sigma_.is_halfline()) throw ValidationError("domain: half-line problem needs a half-line sigma");
      if (!(domain_.truncation > 0.0) || !std::isfinite(domain_.truncation))
        throw ValidationError("domain.truncation_X must be positive and finite");
      const double tail = sigma_.tail_abs_integral(domain_.truncation);
      if (!(tail < solver_.tail_tolerance))
        throw ValidationError("domain.truncation_X: integral of |sigma| beyond X is " + std::to_string(tail) +
                              ", above the tail tolerance");
    } else {
      if (sigma_.is_halfline()) throw ValidationError("domain: interval problem needs an interval sigma");
      if (!(domain_.length > 0.0) || std::abs(domain_.length - sigma_.domain().length) > 1e-12 * domain_.length)
        throw ValidationError("domain.length must match the length of sigma's domain");
      if (!v_) throw ValidationError("V: required for interval problems");
    }
    if (is_l2_class(sigma_.integrability())) {
      const cplx k = params_.kappa;
      const bool allowed = params_.s == 1 && k.imag() == 0.0 &&
                           (k.real() == -1.0 || k.real() == 0.0 || k.real() == 1.0);
      if (!allowed)
        throw ValidationError("sigma.class: L2-type coefficients are only valid for s = 1 and κ ∈ {-1, 0, 1}");
    }
    if (!(solver_.resolution.steps_per_unit > 0.0)) throw ValidationError("solver.steps must be positive");
  }

  Coefficient sigma_;
  ExpressionParams params_;
  Domain domain_;
  BoundaryMatrix u_;
  std::optional<BoundaryMatrix> v_;
  SolverSettings solver_;
};

}  // namespace weyl3
