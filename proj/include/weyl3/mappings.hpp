#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "weyl3/bvp.hpp"
#include "weyl3/errors.hpp"
#include "weyl3/problem.hpp"
#include "weyl3/regularization.hpp"

namespace weyl3 {

/// R(x, lambda) = Phi(x, lambda) Phi~(x, lambda)^{-1}.
struct MappingSample {
  double x = 0.0;
  cplx lambda;
  Mat3 R;
  cplx r21() const { return R(1, 0); }
  cplx r31() const { return R(2, 0); }
  cplx r32() const { return R(2, 1); }
};

struct MappingResult {
  std::vector<MappingSample> samples;
  /// max over xs of |R' - (F + Lambda) R + R (F~ + Lambda)|, R' by finite differences.
  double transfer_residual = 0.0;
};

/// Finite-difference step for R'(x).
inline constexpr double kMappingStep = 1e-3;

inline MappingResult spectral_mapping(const ProblemDef& a, const ProblemDef& b, cplx lambda,
                                      const std::vector<double>& xs, double h = kMappingStep) {
  const double end = std::min(a.endpoint(), b.endpoint());
  std::vector<double> stations;
  for (double x : xs) {
    if (x < 0.0 || x > end) throw DomainError("spectral_mapping: x outside the common domain");
    stations.push_back(x);
    for (double d : {-4.0 * h, -3.0 * h, -2.0 * h, -h, h, 2.0 * h, 3.0 * h, 4.0 * h})
      if (x + d >= 0.0 && x + d <= end) stations.push_back(x + d);
  }
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end()), stations.end());
  const WeylSolutions sa = weyl_solutions(a, lambda, stations);
  const WeylSolutions sb = weyl_solutions(b, lambda, stations);
  auto r_at = [&](double x) {
    const std::size_t i = static_cast<std::size_t>(std::lower_bound(stations.begin(), stations.end(), x) -
                                                   stations.begin());
    return Mat3(sa.Phi[i] * sb.Phi[i].inverse());
  };

  MappingResult out;
  Mat3 lam = Mat3::Zero();
  lam(2, 0) = lambda;
  const AssociatedMatrixCoeffs ca = matrix_coeffs(a.params()), cb = matrix_coeffs(b.params());
  for (double x : xs) {
    const Mat3 r = r_at(x);
    out.samples.push_back({x, lambda, r});
    // fourth-order differences: central where x +- 2h fit, one-sided otherwise
    Mat3 dr;
    if (x - 2.0 * h >= 0.0 && x + 2.0 * h <= end) {
      dr = (r_at(x - 2.0 * h) - 8.0 * r_at(x - h) + 8.0 * r_at(x + h) - r_at(x + 2.0 * h)) / (12.0 * h);
    } else {
      const double dir = x + 4.0 * h <= end ? 1.0 : -1.0;
      dr = dir * (-25.0 * r + 48.0 * r_at(x + dir * h) - 36.0 * r_at(x + dir * 2.0 * h) +
                  16.0 * r_at(x + dir * 3.0 * h) - 3.0 * r_at(x + dir * 4.0 * h)) /
           (12.0 * h);
    }
    const Mat3 fa = assemble_F(ca, a.sigma()(x)) + lam;
    const Mat3 fb = assemble_F(cb, b.sigma()(x)) + lam;
    out.transfer_residual = std::max(out.transfer_residual, max_abs(dr - fa * r + r * fb));
  }
  return out;
}

/// Shift of sigma that keeps the Weyl-Yurko matrix: constant for s = 1, affine c1 x + c2 for s = 0.
struct ShiftSpec {
  double slope = 0.0;   // c1
  double offset = 0.0;  // c2, or the constant c
  static ShiftSpec constant(double c) { return {0.0, c}; }
  static ShiftSpec affine(double c1, double c2) { return {c1, c2}; }
  bool is_zero() const { return slope == 0.0 && offset == 0.0; }
  Polynomial polynomial() const { return Polynomial({cplx(offset), cplx(slope)}); }
};

/// A problem and its partner with sigma~ = sigma + shift and adjusted boundary matrices.
///
/// With sigma^ = sigma - sigma~ = -shift the mapping R(x) is unit lower triangular:
/// r21 = -a11 sigma^, r32 = a33 sigma^, and r31 = (1/2)(s^2 - kappa^2) sigma^2 for
/// s = 1 or kappa sigma^' - (1/2) kappa^2 sigma^2 for s = 0. The partner takes
/// U~ = U R(0) and V~ = V R(1), so that Phi = R Phi~.
struct IsospectralShift {
  ProblemDef base;
  ShiftSpec shift;
  ProblemDef partner;

  /// R(x) from the closed form.
  Mat3 mapping_at(double x) const {
    const AssociatedMatrixCoeffs a = matrix_coeffs(base.params());
    const cplx k = base.params().kappa;
    const double s = base.params().s;
    const cplx hat = -(shift.slope * x + shift.offset);
    const cplx dhat = -shift.slope;
    Mat3 r = Mat3::Identity();
    r(1, 0) = -a.a11 * hat;
    r(2, 1) = a.a33 * hat;
    r(2, 0) = base.params().s == 1 ? 0.5 * (s * s - k * k) * hat * hat : k * dhat - 0.5 * k * k * hat * hat;
    return r;
  }
};

inline IsospectralShift isospectral_shift(const ProblemDef& prob, const ShiftSpec& shift) {
  if (prob.is_halfline()) throw ValidationError("isospectral_shift: needs a finite-interval problem");
  if (prob.params().s == 1 && shift.slope != 0.0)
    throw ValidationError("isospectral_shift: for s = 1 the shift must be constant");
  if (shift.is_zero()) return {prob, shift, prob};
  IsospectralShift out{prob, shift, prob};
  const Mat3 r0 = out.mapping_at(0.0), r1 = out.mapping_at(prob.endpoint());
  out.partner = ProblemDef(prob.sigma().plus_polynomial(shift.polynomial()), prob.params(), prob.domain(),
                           prob.U().times_unit_lower(r0), prob.V().times_unit_lower(r1), prob.solver());
  return out;
}

struct UniquenessResult {
  double max_residual = 0.0;  // max over jk and lambda of |m_jk - m~_jk|
  std::vector<bool> skipped;  // pole at the sample in either problem
  int used() const { return static_cast<int>(std::count(skipped.begin(), skipped.end(), false)); }
};

inline UniquenessResult uniqueness_residual(const ProblemDef& a, const ProblemDef& b, const std::vector<cplx>& lambdas) {
  if (a.is_halfline() != b.is_halfline())
    throw ValidationError("uniqueness_residual: problems live on different domains");
  if (a.U().permutation() != b.U().permutation() ||
      (!a.is_halfline() && a.V().permutation() != b.V().permutation()))
    throw ValidationError("uniqueness_residual: problems must share the permutations of U and V");
  UniquenessResult out;
  for (cplx lambda : lambdas) {
    const WeylSample ma = sample_weyl(a, lambda), mb = sample_weyl(b, lambda);
    const bool skip = ma.pole || mb.pole;
    out.skipped.push_back(skip);
    if (skip) continue;
    for (int j = 1; j < 3; ++j)
      for (int k = 0; k < j; ++k) out.max_residual = std::max(out.max_residual, std::abs(ma.M(j, k) - mb.M(j, k)));
  }
  return out;
}

enum class EntryStatus { fixed, determined, free };

inline const char* to_string(EntryStatus s) {
  switch (s) {
    case EntryStatus::fixed: return "fixed";
    case EntryStatus::determined: return "determined";
    case EntryStatus::free: return "free";
  }
  return "?";
}

struct RecoveredEntry {
  std::string name;  // "v11", "v22", or a combination such as "v21-v11*v22"
  EntryStatus status = EntryStatus::free;
  cplx value;        // mean over the usable samples when determined or fixed
  double spread = 0.0;  // max deviation from the mean across usable samples
};

/// Boundary data recoverable from Phi(1, lambda) when V is hidden but its permutation is known.
struct RecoveredV {
  Permutation perm;
  Row3 V1;
  std::optional<Row3> V2;  // only when fully determined
  std::vector<RecoveredEntry> entries;

  const RecoveredEntry* find(const std::string& name) const {
    for (const RecoveredEntry& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }
};

namespace detail {

/// Mean and spread of per-sample values, skipping samples whose denominator is negligible.
inline RecoveredEntry quotient_entry(const std::string& name, const std::vector<cplx>& num,
                                     const std::vector<cplx>& den, const std::vector<double>& scale) {
  std::vector<cplx> vals;
  for (std::size_t i = 0; i < num.size(); ++i)
    if (std::abs(den[i]) > 1e-8 * scale[i]) vals.push_back(num[i] / den[i]);
  if (vals.empty())
    throw ConvergenceError("recover_V: denominator for " + name + " vanishes at every sample, supply more lambda values");
  cplx mean = 0.0;
  for (cplx v : vals) mean += v;
  mean /= static_cast<double>(vals.size());
  double spread = 0.0;
  for (cplx v : vals) spread = std::max(spread, std::abs(v - mean));
  return {name, EntryStatus::determined, mean, spread};
}

inline std::string entry_name(int l, int j) { return "v" + std::to_string(l) + std::to_string(j); }

}  // namespace detail

/// V_1 and the determinable part of V_2 from samples of Phi(1, lambda).
///
/// V_1 annihilates Phi_1(1) and Phi_2(1), so it is their cross product scaled to a unit
/// entry q1. V_2 Phi_1(1) = 0 then fixes what the permutation leaves undetermined.
inline RecoveredV recover_V(const Permutation& q, const std::vector<Mat3>& phi_at_end) {
  BoundaryMatrix(q, {0.0, 0.0, 0.0});  // validates the permutation
  if (phi_at_end.size() < 2) throw ValidationError("recover_V: needs Phi(1, lambda) at two or more lambda values");
  const int q1 = q[0], q2 = q[1];
  RecoveredV out;
  out.perm = q;

  std::vector<std::vector<cplx>> v1_samples(3);
  std::vector<cplx> den1;
  std::vector<double> sc1;
  for (const Mat3& phi : phi_at_end) {
    const Vec3 n = cross(phi.col(0).transpose(), phi.col(1).transpose());
    for (int j = 0; j < 3; ++j) v1_samples[j].push_back(n(j));
    den1.push_back(n(q1 - 1));
    sc1.push_back(n.cwiseAbs().maxCoeff());
  }
  out.V1 = Row3::Zero();
  out.V1(q1 - 1) = 1.0;
  out.entries.push_back({detail::entry_name(1, q1), EntryStatus::fixed, 1.0, 0.0});
  for (int j = 1; j < q1; ++j) {
    RecoveredEntry e = detail::quotient_entry(detail::entry_name(1, j), v1_samples[j - 1], den1, sc1);
    out.V1(j - 1) = e.value;
    out.entries.push_back(e);
  }

  auto column = [&](int row) {
    std::vector<cplx> c;
    for (const Mat3& phi : phi_at_end) c.push_back(phi(row - 1, 0));
    return c;
  };
  auto negate = [](std::vector<cplx> v) {
    for (cplx& x : v) x = -x;
    return v;
  };
  std::vector<double> sc2;
  for (const Mat3& phi : phi_at_end) sc2.push_back(phi.col(0).cwiseAbs().maxCoeff());

  if (q2 == 1) {
    out.V2 = Row3(1.0, 0.0, 0.0);
    out.entries.push_back({detail::entry_name(2, 1), EntryStatus::fixed, 1.0, 0.0});
  } else if (q1 == 1 && q2 == 2) {
    out.entries.push_back({detail::entry_name(2, 1), EntryStatus::free, 0.0, 0.0});
  } else if (q1 == 1 && q2 == 3) {
    out.entries.push_back({detail::entry_name(2, 1), EntryStatus::free, 0.0, 0.0});
    out.entries.push_back(detail::quotient_entry(detail::entry_name(2, 2), negate(column(3)), column(2), sc2));
  } else if (q1 == 2 && q2 == 3) {
    out.entries.push_back({detail::entry_name(2, 1), EntryStatus::free, 0.0, 0.0});
    out.entries.push_back({detail::entry_name(2, 2), EntryStatus::free, 0.0, 0.0});
    out.entries.push_back(detail::quotient_entry("v21-v11*v22", negate(column(3)), column(1), sc2));
  } else {  // (3, 2)
    RecoveredEntry e = detail::quotient_entry(detail::entry_name(2, 1), negate(column(2)), column(1), sc2);
    out.V2 = Row3(e.value, 1.0, 0.0);
    out.entries.push_back(e);
  }
  return out;
}

/// Forward-solves `prob` (whose V only generates the data) and recovers V from Phi(1, lambda).
inline RecoveredV recover_V(const ProblemDef& prob, const std::vector<cplx>& lambdas) {
  if (prob.is_halfline()) throw ValidationError("recover_V: needs a finite-interval problem");
  std::vector<Mat3> phi;
  for (cplx lambda : lambdas) {
    try {
      phi.push_back(weyl_solutions(prob, lambda, {prob.endpoint()}).Phi[0]);
    } catch (const PoleError&) {
    }
  }
  return recover_V(prob.V().permutation(), phi);
}

}  // namespace weyl3
