#include <cmath>

#include <boost/math/special_functions/airy.hpp>
#include <gtest/gtest.h>

#include "mkdv/special.hpp"

using namespace mkdv;

namespace {

double boost_airy(double y, int j) {
  return j == 0 ? boost::math::airy_ai(y) : j == 1 ? boost::math::airy_ai_prime(y) : y * boost::math::airy_ai(y);
}

} // namespace

TEST(Airy, ValuesAtOrigin) {
  EXPECT_NEAR(airy_eval(0.0, 0), 0.355028053887817, 1e-15);
  EXPECT_NEAR(airy_eval(0.0, 1), -0.258819403792807, 1e-15);
  EXPECT_EQ(airy_eval(0.0, 2), 0.0);
}

TEST(Airy, AgreesWithBoostOnWideRange) {
  double worst = 0.0;
  for (int i = 0; i <= 800; ++i) {
    const double y = -10.0 + 0.025 * i;
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(airy_eval(y, j) - boost_airy(y, j)));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Airy, BranchesAgreeAcrossCrossovers) {
  for (double y : {airy_detail::kSeriesLeft, airy_detail::kSeriesRight}) {
    const auto below = airy_triple(std::nextafter(y, -INFINITY));
    const auto above = airy_triple(std::nextafter(y, INFINITY));
    EXPECT_NEAR(below.ai, above.ai, 1e-12);
    EXPECT_NEAR(below.ai_prime, above.ai_prime, 1e-12);
  }
}

TEST(Airy, TripleSatisfiesAiryEquation) {
  for (double y : {-9.5, -3.0, 0.7, 4.0, 12.0}) {
    const auto a = airy_triple(y);
    EXPECT_EQ(a.ai_second, y * a.ai);
  }
}

TEST(Airy, RejectsBadInput) {
  EXPECT_THROW(airy_eval(NAN, 0), DomainError);
  EXPECT_THROW(airy_eval(1.0, 3), DomainError);
}

TEST(Airy, FarTailsDecayAndStayBounded) {
  EXPECT_LT(airy_eval(30.0, 0), 1e-40);
  EXPECT_GT(airy_eval(30.0, 0), 0.0);
  for (double y : {-50.0, -200.0}) EXPECT_LT(std::abs(airy_eval(y, 0)), 1.0 / std::sqrt(std::numbers::pi) * std::pow(-y, -0.25) + 1e-12);
}

TEST(AiryTail, ClosedForm) {
  // int_y^inf Ai'^2 = -(1/3)(y Ai'^2 - y^2 Ai^2 + 2 Ai Ai')
  for (double y : {-6.0, -1.5, 0.0, 2.0, 5.0}) {
    const auto a = airy_triple(y);
    const double exact = -(y * a.ai_prime * a.ai_prime - y * y * a.ai * a.ai + 2.0 * a.ai * a.ai_prime) / 3.0;
    const auto t = airy_prime_squared_tail(y);
    EXPECT_NEAR(t.value, exact, 1e-12) << y;
    EXPECT_LE(t.remainder_bound, 1e-12);
  }
}

TEST(AiryRays, MatchesAiryOnDomain) {
  for (int i = 0; i <= 20; ++i) {
    const double y = -5.0 + 0.5 * i;
    for (int j = 0; j < 3; ++j) {
      const cplx q = airy_via_ray_quadrature(y, j);
      EXPECT_NEAR(q.real(), airy_eval(y, j), 1e-8) << y << " " << j;
      EXPECT_LE(std::abs(q.imag()), 1e-10);
    }
  }
}

TEST(AiryRays, DocumentedPoints) {
  EXPECT_NEAR(airy_via_ray_quadrature(0.0, 0).real(), 0.355028053887817, 1e-8);
  EXPECT_NEAR(airy_via_ray_quadrature(2.0, 1).real(), airy_eval(2.0, 1), 1e-8);
  EXPECT_NEAR(std::abs(airy_via_ray_quadrature(0.0, 2)), 0.0, 1e-8);
}

TEST(AiryRays, ErrorsOutsideContract) {
  EXPECT_THROW(airy_via_ray_quadrature(5.5, 0), DomainError);
  EXPECT_THROW(airy_via_ray_quadrature(0.0, 3), DomainError);
  RayQuadratureConfig coarse;
  coarse.nodes_per_panel = 4;
  EXPECT_THROW(airy_via_ray_quadrature(-5.0, 2, coarse), AccuracyError);
}

TEST(Painleve, ZeroStokesGivesZero) {
  const auto sol = painleve2_solve(0.0, -8.0, 8.0);
  EXPECT_EQ(sol.alpha(), 0.0);
  for (double y : {-8.0, 0.0, 7.5, 20.0}) EXPECT_EQ(sol.value(y), 0.0);
}

TEST(Painleve, ResidualCertificate) {
  for (double sigma : {0.25, 0.5, 0.75}) {
    const auto sol = painleve2_solve(cplx(0.0, sigma), -8.0, 8.0);
    EXPECT_LE(sol.residual_max(), 1e-8) << sigma;
  }
}

TEST(Painleve, IndependentTaylorOracle) {
  // High-precision Taylor integration from alpha Ai(10), frozen.
  const auto h = painleve2_solve(cplx(0.0, -0.5), -8.0, 8.0);
  EXPECT_NEAR(h.value(0.0), 0.17898347030820078, 1e-10);
  EXPECT_NEAR(h.deriv(0.0), -0.13379676495263165, 1e-10);
  EXPECT_NEAR(h.value(-4.0), -0.082547773854049578, 1e-10);
  EXPECT_NEAR(h.value(-8.0), 0.019168298104678019, 1e-10);
  const auto q = painleve2_solve(cplx(0.0, -0.25), -8.0, 8.0);
  EXPECT_NEAR(q.value(0.0), 0.088939639310473927, 1e-10);
  EXPECT_NEAR(q.value(2.0), 0.0087310953935969686, 1e-10);
  const auto t = painleve2_solve(cplx(0.0, -0.75), -8.0, 8.0);
  EXPECT_NEAR(t.value(-2.0), 0.36901281954382869, 1e-10);
  EXPECT_NEAR(t.value(-8.0), 0.17312392805794675, 1e-10);
  EXPECT_NEAR(t.deriv(-8.0), 0.71415425604630385, 1e-9);
}

TEST(Painleve, NegatingStokesNegatesSolution) {
  const auto a = painleve2_solve(cplx(0.0, 0.6), -8.0, 8.0);
  const auto b = painleve2_solve(cplx(0.0, -0.6), -8.0, 8.0);
  for (double y = -8.0; y <= 8.0; y += 0.37) EXPECT_NEAR(a.value(y), -b.value(y), 1e-8);
}

TEST(Painleve, AiryTailNormalization) {
  const cplx s(0.0, 0.5);
  const auto a = painleve2_solve(s, -8.0, 8.0);
  PainleveOptions fine;
  fine.panel_width = 0.25;
  fine.nodes_per_panel = 24;
  const auto b = painleve2_solve(s, -8.0, 8.0, fine);
  const double ra = a.value(6.0) / airy_eval(6.0, 0);
  const double rb = b.value(6.0) / airy_eval(6.0, 0);
  EXPECT_NEAR(ra, connection_coefficient(s), 1e-6);
  EXPECT_NEAR(ra, rb, 1e-4);
  EXPECT_EQ(a.value(12.0), connection_coefficient(s) * airy_eval(12.0, 0));
}

TEST(Painleve, RealAndDecaying) {
  const auto sol = painleve2_solve(cplx(0.0, 0.9), -8.0, 8.0);
  for (double v : sol.values()) EXPECT_TRUE(std::isfinite(v));
  EXPECT_LT(std::abs(sol.value(8.0)), 1e-7);
}

TEST(Painleve, TailIntegralOfSquare) {
  const auto sol = painleve2_solve(cplx(0.0, 0.5), -8.0, 8.0);
  for (double y : {-6.0, 0.0, 3.0}) {
    const double direct = quad::integrate_uniform([&](double x) { return sol.value(x) * sol.value(x); }, y, 30.0, 200, 20);
    EXPECT_NEAR(sol.integral_sq_tail(y), direct, 1e-12) << y;
  }
}

TEST(Painleve, ErrorsOutsideContract) {
  EXPECT_THROW(painleve2_solve(cplx(0.0, 1.0), -8.0, 8.0), DomainError);
  EXPECT_THROW(painleve2_solve(cplx(0.1, 0.5), -8.0, 8.0), DomainError);
  EXPECT_THROW(painleve2_solve(cplx(0.0, 0.5), -8.0, 5.0), DomainError);
  const auto sol = painleve2_solve(cplx(0.0, 0.5), -4.0, 8.0);
  EXPECT_THROW((void)sol.value(-4.5), RangeError);
}
