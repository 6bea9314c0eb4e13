#include <cmath>
#include <random>

#include "support.hpp"

using namespace weyl3;

namespace {

Coefficient half_quarter() { return Coefficient::inverse_power(0.5, 0.25, 1.0); }

}  // namespace

TEST(Coeffs, ZeroCoefficient) {
  const Coefficient c = Coefficient::zero();
  EXPECT_EQ(c(0.3), cplx(0.0));
  EXPECT_EQ(c.abs_power_norm(3.0), 0.0);
  EXPECT_EQ(c.segment_integral(3, 0.0, 1.0), cplx(0.0));
}

TEST(Coeffs, PolynomialEvaluationAndIntegrals) {
  const Coefficient x = Coefficient::polynomial({0.0, 1.0});
  EXPECT_NEAR(std::abs(x.segment_integral(1, 0.0, 1.0) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(x.segment_integral(3, 0.0, 1.0) - 0.25), 0.0, 1e-15);
  const Coefficient x2 = Coefficient::polynomial({0.0, 0.0, 1.0});
  EXPECT_NEAR(std::abs(x2(0.5) - 0.25), 0.0, 1e-16);
}

TEST(Coeffs, InversePowerValueAndCubeNorm) {
  const Coefficient c = half_quarter();
  EXPECT_NEAR(std::abs(c(9.0 / 16.0) - 2.0), 0.0, 1e-14);
  // (1/2)^{1/4} * 8 from 2 * 4 t^{1/4} on t in [0, 1/2]
  const double exact = 8.0 * std::pow(0.5, 0.25);
  EXPECT_NEAR(std::abs(c.segment_integral(3, 0.0, 1.0) - exact), 0.0, 1e-12);
  EXPECT_NEAR(c.abs_power_norm(3.0), exact, 1e-9);
  EXPECT_NEAR(exact, 6.72717, 1e-5);
}

TEST(Coeffs, InversePowerAtCenterIsDomainError) {
  EXPECT_THROW(half_quarter()(0.5), DomainError);
}

TEST(Coeffs, ClassViolationNamesTheBound) {
  try {
    Coefficient::inverse_power(0.5, 0.4, 1.0, IntegrabilityClass::L3);
    FAIL() << "alpha = 0.4 accepted for L3";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("3*alpha < 1"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(Coefficient::inverse_power(0.5, 0.4, 1.0, IntegrabilityClass::L2));
  EXPECT_THROW(Coefficient::inverse_power(0.5, 0.6, 1.0, IntegrabilityClass::L2), ValidationError);
}

TEST(Coeffs, HalflineNeedsL1Class) {
  CoefficientSpec s;
  s.domain = {true, 0.0};
  s.integrability = IntegrabilityClass::L3;
  EXPECT_THROW(Coefficient{s}, ValidationError);
  s.integrability = IntegrabilityClass::L1_L3;
  EXPECT_NO_THROW(Coefficient{s});
}

TEST(Coeffs, SampledNeedsIncreasingGrid) {
  CoefficientSpec s;
  s.kind = CoefficientKind::sampled;
  s.grid = {0.0, 0.5, 0.4, 1.0};
  s.values = {0.0, 1.0, 2.0, 3.0};
  EXPECT_THROW(Coefficient{s}, ValidationError);
  s.grid = {0.0, 0.4, 0.5, 1.0};
  const Coefficient c(s);
  EXPECT_NEAR(std::abs(c(0.45) - 1.5), 0.0, 1e-14);
  // piecewise linear: trapezoid rule is exact for p = 1
  const cplx exact = 0.5 * 0.4 * (0.0 + 1.0) + 0.5 * 0.1 * (1.0 + 2.0) + 0.5 * 0.5 * (2.0 + 3.0);
  EXPECT_NEAR(std::abs(c.segment_integral(1, 0.0, 1.0) - exact), 0.0, 1e-14);
}

TEST(Coeffs, SegmentIntegralOfNonintegrablePowerIsRejected) {
  const Coefficient c = Coefficient::inverse_power(0.5, 0.4, 1.0, IntegrabilityClass::L2);
  EXPECT_NO_THROW(c.segment_integral(2, 0.0, 1.0));
  EXPECT_THROW(c.segment_integral(3, 0.4, 0.6), IntegrabilityError);
  EXPECT_NO_THROW(c.segment_integral(3, 0.6, 0.9));
}

TEST(Coeffs, AdditivityAcrossSingularity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CoefficientSpec spec;
  spec.kind = CoefficientKind::inverse_power;
  spec.center = 0.37;
  spec.exponent = 0.3;
  spec.amplitude = cplx(0.8, -0.4);
  spec.coeffs = {cplx(0.2), cplx(-1.0, 0.5), cplx(0.3)};
  const Coefficient c(spec);
  for (int trial = 0; trial < 200; ++trial) {
    double a = u(rng), b = u(rng), m = u(rng);
    if (a > b) std::swap(a, b);
    m = a + (b - a) * m;
    for (int p = 1; p <= 3; ++p) {
      const cplx whole = c.segment_integral(p, a, b);
      const cplx parts = c.segment_integral(p, a, m) + c.segment_integral(p, m, b);
      EXPECT_LE(std::abs(whole - parts), 1e-12 * std::max(1.0, std::abs(whole))) << a << " " << m << " " << b;
    }
  }
}

TEST(Coeffs, AmplitudeScaling) {
  const cplx A(1.7, -0.6);
  const Coefficient one = Coefficient::inverse_power(0.42, 0.31, 1.0);
  const Coefficient big = Coefficient::inverse_power(0.42, 0.31, A);
  for (int p = 1; p <= 3; ++p) {
    const cplx ref = std::pow(A, p) * one.segment_integral(p, 0.1, 0.9);
    EXPECT_LE(std::abs(big.segment_integral(p, 0.1, 0.9) - ref), 1e-13 * std::abs(ref));
  }
}

TEST(Coeffs, SegmentIntegralMatchesQuadratureOnPolynomial) {
  const Coefficient c = Coefficient::polynomial({cplx(1.0, 0.5), cplx(-2.0), cplx(0.0, 3.0)});
  const Polynomial p({cplx(1.0, 0.5), cplx(-2.0), cplx(0.0, 3.0)});
  for (int k = 1; k <= 3; ++k) {
    const Polynomial anti = p.pow(k).antiderivative();
    const cplx ref = anti(0.8) - anti(0.15);
    EXPECT_LE(std::abs(c.segment_integral(k, 0.15, 0.8) - ref), 1e-14);
  }
}

TEST(Coeffs, FirstMomentOfLinearSigma) {
  const Coefficient x = Coefficient::polynomial({0.0, 1.0});
  // integral of (t - 1/2) t over [0, 1] = 1/3 - 1/4
  EXPECT_NEAR(std::abs(x.segment_moment(1, 0.0, 1.0) - 1.0 / 12.0), 0.0, 1e-15);
  const Coefficient s = half_quarter();
  // odd moment of an even function about its center
  EXPECT_NEAR(std::abs(s.segment_moment(3, 0.25, 0.75)), 0.0, 1e-13);
}

TEST(Coeffs, RandomL3DrawsHaveFiniteCubeNorm) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> alpha(0.01, 1.0 / 3.0 - 1e-3), center(0.05, 0.95), amp(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Coefficient c = Coefficient::inverse_power(center(rng), alpha(rng), cplx(amp(rng), amp(rng)));
    const double n = c.abs_power_norm(3.0);
    EXPECT_TRUE(std::isfinite(n));
    EXPECT_LT(n, 1e300);
  }
}
