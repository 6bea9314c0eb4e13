#include <numbers>

#include "support.hpp"

using namespace weyl3;
using fixtures::max_abs_diff;

namespace {

double max_weyl_difference(const ProblemDef& a, const ProblemDef& b) {
  double d = 0.0;
  for (cplx lambda : fixtures::moderate_lambdas())
    d = std::max(d, max_abs_diff(weyl_matrix(a, lambda).M, weyl_matrix(b, lambda).M));
  return d;
}

bool unit_lower(const Mat3& r, double tol) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(r(i, i) - 1.0) > tol) return false;
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(r(i, j)) > tol) return false;
  }
  return true;
}

ProblemDef recovery_problem(Permutation q, std::array<cplx, 3> lower) {
  return fixtures::interval_problem(Coefficient::polynomial({0.1, 0.3, -0.2}), {1, 0.0},
                                    BoundaryMatrix::identity(), BoundaryMatrix(q, lower));
}

}  // namespace

TEST(Mappings, IdenticalProblemsGiveIdentity) {
  const ProblemDef p = fixtures::interval_problem(Coefficient::polynomial({0.0, 0.0, 1.0}), {1, 0.0},
                                                  fixtures::mixed_U(), fixtures::mixed_V());
  for (cplx lambda : fixtures::moderate_lambdas()) {
    const MappingResult r = spectral_mapping(p, p, lambda, {0.0, 0.3, 0.7, 1.0});
    for (const MappingSample& s : r.samples) EXPECT_LE(max_abs_diff(s.R, Mat3::Identity()), 1e-9);
    EXPECT_LT(r.transfer_residual, 1e-6);
  }
  EXPECT_LT(uniqueness_residual(p, p, fixtures::moderate_lambdas()).max_residual, 1e-12);
}

TEST(Mappings, TransferResidualOnSmoothPair) {
  const ProblemDef a = fixtures::interval_problem(Coefficient::polynomial({0.0, 0.0, 1.0}), {1, cplx(0.5, 0.2)});
  const ProblemDef b = fixtures::interval_problem(Coefficient::polynomial({0.3, -1.0, 0.0, 0.5}), {1, cplx(0.5, 0.2)},
                                                  BoundaryMatrix({1, 2, 3}, {0.2, -0.1, 0.3}),
                                                  BoundaryMatrix({1, 2, 3}, {0.4, 0.0, 0.0}));
  for (cplx lambda : fixtures::moderate_lambdas()) {
    const MappingResult r = spectral_mapping(a, b, lambda, {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0});
    EXPECT_LT(r.transfer_residual, 1e-6) << lambda;
  }
}

TEST(Mappings, ConstantShiftPartner) {
  const ProblemDef base = fixtures::sigma_x2_problem();
  const IsospectralShift iso = isospectral_shift(base, ShiftSpec::constant(0.3));
  Mat3 want;
  want << 1.0, 0.0, 0.0, -0.3, 1.0, 0.0, 0.045, -0.3, 1.0;
  EXPECT_LE(max_abs_diff(iso.mapping_at(0.0), want), 1e-15);
  EXPECT_LE(max_abs_diff(iso.mapping_at(0.6), want), 1e-15);
  EXPECT_EQ(iso.partner.U().permutation(), base.U().permutation());
  EXPECT_NEAR(std::abs(iso.partner.sigma()(0.5) - 0.55), 0.0, 1e-15);
  EXPECT_LT(max_weyl_difference(base, iso.partner), 1e-8);
  EXPECT_LT(uniqueness_residual(base, iso.partner, fixtures::moderate_lambdas()).max_residual, 1e-8);
}

TEST(Mappings, ConstantShiftWithKappaAndMixedBoundary) {
  const ProblemDef base = fixtures::interval_problem(Coefficient::polynomial({0.2, 0.0, 1.0}), {1, cplx(0.4, 0.1)},
                                                     fixtures::mixed_U(), fixtures::mixed_V());
  const IsospectralShift iso = isospectral_shift(base, ShiftSpec::constant(-0.25));
  EXPECT_EQ(iso.partner.V().permutation(), base.V().permutation());
  EXPECT_LT(max_weyl_difference(base, iso.partner), 1e-8);
}

TEST(Mappings, AffineShiftForKappaOnly) {
  const ProblemDef base = fixtures::interval_problem(Coefficient::zero(), {0, 1.0});
  const IsospectralShift iso = isospectral_shift(base, ShiftSpec::affine(0.1, 0.2));
  for (double x : {0.0, 0.4, 1.0}) {
    const double hat = -(0.1 * x + 0.2);
    Mat3 want;
    want << 1.0, 0.0, 0.0, hat, 1.0, 0.0, -0.1 - 0.5 * hat * hat, -hat, 1.0;
    EXPECT_LE(max_abs_diff(iso.mapping_at(x), want), 1e-15) << x;
  }
  EXPECT_LT(max_weyl_difference(base, iso.partner), 1e-8);
}

TEST(Mappings, ZeroShiftReturnsBase) {
  const ProblemDef base = fixtures::sigma_x2_problem();
  EXPECT_TRUE(isospectral_shift(base, ShiftSpec::constant(0.0)).partner == base);
}

TEST(Mappings, ShiftKindMustMatchS) {
  EXPECT_THROW(isospectral_shift(fixtures::sigma_x2_problem(), ShiftSpec::affine(0.1, 0.2)), ValidationError);
  const ProblemDef half = fixtures::halfline_problem(fixtures::halfline_zero(), 2.0);
  EXPECT_THROW(isospectral_shift(half, ShiftSpec::constant(0.1)), ValidationError);
}

TEST(Mappings, IsospectralMappingIsConstantInLambda) {
  const ProblemDef base = fixtures::sigma_x2_problem();
  const IsospectralShift iso = isospectral_shift(base, ShiftSpec::constant(0.3));
  const std::vector<double> xs{0.0, 0.2, 0.5, 0.8, 1.0};
  std::vector<Mat3> first;
  double variation = 0.0, closed = 0.0;
  for (cplx lambda : fixtures::moderate_lambdas()) {
    const MappingResult r = spectral_mapping(base, iso.partner, lambda, xs);
    EXPECT_LT(r.transfer_residual, 1e-6);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Mat3& rm = r.samples[i].R;
      EXPECT_TRUE(unit_lower(rm, 1e-8)) << lambda;
      if (first.size() < xs.size()) first.push_back(rm);
      variation = std::max(variation, max_abs_diff(rm, first[i]));
      closed = std::max(closed, max_abs_diff(rm, iso.mapping_at(xs[i])));
    }
  }
  EXPECT_LT(variation, 1e-8);
  EXPECT_LT(closed, 1e-8);
}

TEST(Mappings, MappingAtZeroIsBoundaryQuotient) {
  const ProblemDef a = fixtures::interval_problem(Coefficient::polynomial({0.0, 0.0, 1.0}), {1, 0.0},
                                                  fixtures::mixed_U(), fixtures::mixed_V());
  const ProblemDef b = fixtures::interval_problem(Coefficient::polynomial({0.0, 0.5}), {1, 0.0},
                                                  BoundaryMatrix({2, 3, 1}, {-0.1, 0.6, 0.2}), fixtures::mixed_V());
  for (cplx lambda : {cplx(3.0, 4.0), cplx(-20.0, 6.0)}) {
    const Mat3 r0 = spectral_mapping(a, b, lambda, {0.0}).samples[0].R;
    // R(0) = C(0) M (C~(0) M~)^{-1}; compare with C(0) C~(0)^{-1} = U^{-1} U~ after removing M
    const Mat3 ma = weyl_matrix(a, lambda).M, mb = weyl_matrix(b, lambda).M;
    const Mat3 rc = a.U().inverse() * ma * mb.inverse() * b.U().matrix();
    EXPECT_LE(max_abs_diff(r0, rc), 1e-10 * max_abs(rc));
  }
  const IsospectralShift iso = isospectral_shift(a, ShiftSpec::constant(0.3));
  const Mat3 r0 = spectral_mapping(a, iso.partner, cplx(5.0, 2.0), {0.0}).samples[0].R;
  EXPECT_LE(max_abs_diff(r0, a.U().inverse() * iso.partner.U().matrix()), 1e-10);
}

TEST(Mappings, LambdaCommutesWithUnitLower) {
  const IsospectralShift iso = isospectral_shift(fixtures::sigma_x2_problem(), ShiftSpec::constant(0.7));
  Mat3 lam = Mat3::Zero();
  lam(2, 0) = cplx(12.0, -5.0);
  for (double x : {0.0, 0.5, 1.0}) {
    const Mat3 r = iso.mapping_at(x);
    EXPECT_EQ(lam * r - r * lam, Mat3::Zero());
  }
}

TEST(Mappings, SecondSubdiagonalRelation) {
  for (const ExpressionParams& p : {ExpressionParams{1, 0.0}, ExpressionParams{1, cplx(0.5, -0.3)},
                                    ExpressionParams{0, 1.0}, ExpressionParams{0, cplx(0.0, 1.0)}}) {
    const ProblemDef base = fixtures::interval_problem(Coefficient::polynomial({0.1, 0.0, 1.0}), p);
    const ShiftSpec shift = p.s == 1 ? ShiftSpec::constant(0.3) : ShiftSpec::affine(0.2, -0.1);
    const IsospectralShift iso = isospectral_shift(base, shift);
    const AssociatedMatrixCoeffs a = matrix_coeffs(p);
    for (double x : {0.0, 0.5, 1.0}) {
      const Mat3 r = iso.mapping_at(x);
      const cplx hat = -(shift.slope * x + shift.offset);
      EXPECT_NEAR(std::abs(r(2, 1) - (r(1, 0) - a.a22 * hat)), 0.0, 1e-14);
      // the same relation from numerically computed R
      const Mat3 rn = spectral_mapping(base, iso.partner, cplx(6.0, 4.0), {x}).samples[0].R;
      EXPECT_NEAR(std::abs(rn(2, 1) - (rn(1, 0) - a.a22 * hat)), 0.0, 1e-8);
    }
  }
}

TEST(Mappings, MappingStaysBoundedAlongRay) {
  const ProblemDef base = fixtures::sigma_x2_problem();
  const IsospectralShift iso = isospectral_shift(base, ShiftSpec::constant(0.3));
  const double arg = 2.0 * std::numbers::pi / 3.0;
  for (double r : {1e3, 1e4, 1e5}) {
    const Mat3 rm = spectral_mapping(base, iso.partner, std::polar(r, arg), {0.5}).samples[0].R;
    EXPECT_LT(max_abs(rm), 10.0) << r;
  }
}

TEST(Mappings, BumpIsDetected) {
  const ProblemDef a = fixtures::sigma_x2_problem();
  const Coefficient bumped = sum(a.sigma(), fixtures::hat(0.3, 0.7, 0.05));
  const ProblemDef b = a.with_sigma(bumped);
  EXPECT_GT(uniqueness_residual(a, b, fixtures::moderate_lambdas()).max_residual, 1e-5);
  const ProblemDef c = a.with_sigma(sum(a.sigma(), fixtures::hat(0.3, 0.7, 1e-2)));
  EXPECT_GT(uniqueness_residual(a, c, fixtures::moderate_lambdas()).max_residual, 1e-5);
}

TEST(Mappings, UniquenessNeedsSharedPermutations) {
  const ProblemDef a = fixtures::sigma_x2_problem();
  const ProblemDef b = a.with_U(BoundaryMatrix({2, 1, 3}, {0.0, 0.0, 0.0}));
  EXPECT_THROW(uniqueness_residual(a, b, fixtures::moderate_lambdas()), ValidationError);
}

TEST(Mappings, RecoverFirstRowFixed) {
  const RecoveredV r = recover_V(recovery_problem({2, 1, 3}, {0.35, 0.0, 0.0}), fixtures::moderate_lambdas());
  ASSERT_TRUE(r.V2.has_value());
  EXPECT_EQ(*r.V2, Row3(1.0, 0.0, 0.0));
  EXPECT_EQ(r.find("v21")->status, EntryStatus::fixed);
  EXPECT_NEAR(std::abs(r.V1(0) - 0.35), 0.0, 1e-8);
  EXPECT_EQ(r.find("v12")->status, EntryStatus::fixed);
}

TEST(Mappings, RecoverIdentityPermutationLeavesFree) {
  const RecoveredV r = recover_V(recovery_problem({1, 2, 3}, {0.6, 0.1, 0.2}), fixtures::moderate_lambdas());
  EXPECT_EQ(r.find("v21")->status, EntryStatus::free);
  EXPECT_FALSE(r.V2.has_value());
  EXPECT_LE((r.V1 - Row3(1.0, 0.0, 0.0)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Mappings, RecoverOneThree) {
  const RecoveredV r = recover_V(recovery_problem({1, 3, 2}, {0.5, 0.4, 0.7}), fixtures::moderate_lambdas());
  EXPECT_EQ(r.find("v21")->status, EntryStatus::free);
  const RecoveredEntry* v22 = r.find("v22");
  ASSERT_NE(v22, nullptr);
  EXPECT_EQ(v22->status, EntryStatus::determined);
  EXPECT_NEAR(std::abs(v22->value - 0.7), 0.0, 1e-8);
  EXPECT_LT(v22->spread, 1e-8);
}

TEST(Mappings, RecoverOneThreeForZeroSigma) {
  const ProblemDef p = fixtures::interval_problem(Coefficient::zero(), {1, 0.0}, BoundaryMatrix::identity(),
                                                  BoundaryMatrix({1, 3, 2}, {0.0, 0.0, 0.7}));
  EXPECT_NEAR(std::abs(recover_V(p, fixtures::moderate_lambdas()).find("v22")->value - 0.7), 0.0, 1e-8);
}

TEST(Mappings, RecoverTwoThreeCombination) {
  const RecoveredV r = recover_V(recovery_problem({2, 3, 1}, {0.5, 0.4, 0.2}), fixtures::moderate_lambdas());
  EXPECT_NEAR(std::abs(r.V1(0) - 0.5), 0.0, 1e-8);
  EXPECT_EQ(r.find("v21")->status, EntryStatus::free);
  EXPECT_EQ(r.find("v22")->status, EntryStatus::free);
  const RecoveredEntry* comb = r.find("v21-v11*v22");
  ASSERT_NE(comb, nullptr);
  EXPECT_EQ(comb->status, EntryStatus::determined);
  EXPECT_NEAR(std::abs(comb->value - 0.3), 0.0, 1e-8);
}

TEST(Mappings, RecoverThreeTwo) {
  const RecoveredV r =
      recover_V(recovery_problem({3, 2, 1}, {cplx(0.25, 0.1), -0.3, 0.45}), fixtures::moderate_lambdas());
  ASSERT_TRUE(r.V2.has_value());
  EXPECT_NEAR(std::abs(r.find("v21")->value - cplx(0.25, 0.1)), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(r.V1(0) + 0.3), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(r.V1(1) - 0.45), 0.0, 1e-8);
}

TEST(Mappings, RecoverNeedsTwoSamples) {
  EXPECT_THROW(recover_V(Permutation{1, 3, 2}, {Mat3::Identity()}), ValidationError);
}
