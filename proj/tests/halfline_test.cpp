#include <numbers>

#include "support.hpp"

using namespace weyl3;
using fixtures::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;

const std::vector<cplx>& off_cut_lambdas() {
  static const std::vector<cplx> v{{2, 3},   {-10, 5},  {20, 1},    {-7, -4},  {30, 20},
                                   {5, -8},  {-15, 12}, {100, -60}, {-3, 25},  {-400, 90}};
  return v;
}

void expect_order(double arg, std::array<cplx, 3> want, std::array<double, 3> re) {
  const OmegaOrder o = omega_order(std::polar(2.0, arg));
  EXPECT_FALSE(o.tie);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(std::abs(o.omega[j] - want[j]), 0.0, 1e-14) << j;
    EXPECT_NEAR(o.real_parts[j] / 2.0, re[j], 1e-14) << j;
    EXPECT_NEAR(std::abs(std::pow(o.omega[j], 3) - 1.0), 0.0, 1e-14);
  }
}

}  // namespace

TEST(Halfline, OmegaOrdering) {
  const cplx up = std::polar(1.0, 2.0 * kPi / 3.0), down = std::polar(1.0, -2.0 * kPi / 3.0);
  const double r3 = std::sqrt(3.0) / 2.0;
  expect_order(kPi / 6.0, {up, down, 1.0}, {-r3, 0.0, r3});
  expect_order(kPi / 2.0, {up, 1.0, down}, {-r3, 0.0, r3});
  EXPECT_TRUE(omega_order(3.0).tie);
  EXPECT_TRUE(omega_order(std::polar(1.0, kPi / 3.0)).tie);
}

TEST(Halfline, ClosedFormForZeroSigma) {
  const ProblemDef prob = fixtures::halfline_problem(fixtures::halfline_zero(), 2.0);
  for (cplx lambda : off_cut_lambdas()) {
    const OmegaOrder o = omega_order(principal_cbrt(lambda));
    const cplx rho = o.rho;
    const WeylSample w = weyl_matrix_halfline(prob, lambda);
    const double q = std::cbrt(std::abs(lambda));
    EXPECT_LE(std::abs(w.M(1, 0) - rho * o.omega[0]), 1e-8 * q) << lambda;
    EXPECT_LE(std::abs(w.M(2, 0) - rho * rho * o.omega[0] * o.omega[0]), 1e-8 * q * q) << lambda;
    EXPECT_LE(std::abs(w.M(2, 1) - rho * (o.omega[0] + o.omega[1])), 1e-8 * q) << lambda;
    EXPECT_LE(w.triangularity_defect(), 1e-12);
  }
}

TEST(Halfline, TruncationIndependenceForCompactSupport) {
  const Coefficient bump = fixtures::hat(0.1, 0.9, 0.8, CoefficientDomain{true, 0.0}, IntegrabilityClass::L1_L3);
  const BoundaryMatrix u({1, 3, 2}, {0.2, 0.0, 0.5});
  const ProblemDef p2 = fixtures::halfline_problem(bump, 2.0, u);
  const ProblemDef p4 = fixtures::halfline_problem(bump, 4.0, u);
  for (cplx lambda : off_cut_lambdas()) {
    const WeylSample a = weyl_matrix_halfline(p2, lambda), b = weyl_matrix_halfline(p4, lambda);
    EXPECT_LE(max_abs_diff(a.M, b.M), 1e-8 * std::max(1.0, max_abs(a.M))) << lambda;
  }
}

TEST(Halfline, FirstSolutionDecays) {
  const Coefficient bump = fixtures::hat(0.0, 1.0, 1.0, CoefficientDomain{true, 0.0}, IntegrabilityClass::L1_L3);
  const ProblemDef prob = fixtures::halfline_problem(bump, 3.0);
  std::vector<double> xs;
  for (int i = 0; i <= 30; ++i) xs.push_back(0.1 * i);
  for (cplx lambda : off_cut_lambdas()) {
    const OmegaOrder o = omega_order(principal_cbrt(lambda));
    const WeylSolutions ws = weyl_solutions(prob, lambda, xs);
    const double q = std::max(1.0, std::cbrt(std::abs(lambda)));
    const Eigen::Vector3d d(1.0, q, q * q);
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double size = (ws.Phi[i].col(0).cwiseAbs().cwiseQuotient(d)).maxCoeff();
      const double scaled = size * std::exp(-o.real_parts[0] * xs[i]);
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    EXPECT_LT(hi / lo, 20.0) << lambda;
  }
}

TEST(Halfline, EqualDataGiveEqualMatricesAndBumpIsVisible) {
  const CoefficientDomain hd{true, 0.0};
  const Coefficient base = fixtures::hat(0.2, 1.2, 0.5, hd, IntegrabilityClass::L1_L3);
  const ProblemDef a = fixtures::halfline_problem(base, 2.0);
  const ProblemDef b = fixtures::halfline_problem(fixtures::hat(0.2, 1.2, 0.5, hd, IntegrabilityClass::L1_L3), 2.0);
  // add a 1e-2 hat on [0.4, 0.8]
  const Coefficient extra = fixtures::hat(0.4, 0.8, 1e-2, hd, IntegrabilityClass::L1_L3);
  const ProblemDef c = fixtures::halfline_problem(sum(base, extra), 2.0);
  double same = 0.0, diff = 0.0;
  for (cplx lambda : off_cut_lambdas()) {
    const Mat3 ma = weyl_matrix_halfline(a, lambda).M;
    same = std::max(same, max_abs_diff(ma, weyl_matrix_halfline(b, lambda).M));
    diff = std::max(diff, max_abs_diff(ma, weyl_matrix_halfline(c, lambda).M));
  }
  EXPECT_LT(same, 1e-12);
  EXPECT_GT(diff, 1e-5);
}

TEST(Halfline, BranchAndStokesErrors) {
  const ProblemDef prob = fixtures::halfline_problem(fixtures::halfline_zero(), 2.0);
  EXPECT_THROW(weyl_matrix_halfline(prob, 5.0), BranchError);
  EXPECT_THROW(weyl_matrix_halfline(prob, -5.0), BranchError);
  EXPECT_THROW(weyl_matrix_halfline(prob, 0.0), BranchError);
  EXPECT_NO_THROW(weyl_matrix_halfline(prob, cplx(5.0, 1e-6)));
  try {
    weyl_matrix_halfline(prob, 5.0);
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.kind()), "branch-cut");
  }
  StokesError s("tie");
  EXPECT_EQ(std::string(s.kind()), "stokes-line");
}

TEST(Halfline, RejectsLongTailAndIntervalProblems) {
  CoefficientSpec spec;
  spec.kind = CoefficientKind::polynomial;
  spec.integrability = IntegrabilityClass::L1_L3;
  spec.domain = {true, 0.0};
  spec.coeffs = {1.0};
  spec.support_end = 3.0;
  EXPECT_THROW(fixtures::halfline_problem(Coefficient(spec), 2.0), ValidationError);
  EXPECT_NO_THROW(fixtures::halfline_problem(Coefficient(spec), 3.0));
  EXPECT_THROW(weyl_matrix_halfline(fixtures::sigma_zero_problem(), cplx(1.0, 1.0)), ValidationError);
}
