#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "mkdv/rh_model.hpp"

using namespace mkdv;

namespace {

const std::vector<double> kY{-2.0, -1.0, 0.0, 1.0, 2.0};
const std::vector<double> kP1{0.0, 1.0};
const std::vector<cplx> kP2{0.0, cplx(0.0, 1.0)};

} // namespace

TEST(ClosedForm, ZeroParameters) {
  const auto m = closed_form_coefficients(1.3, 0.0, 0.0);
  EXPECT_EQ(m.m11.max_abs(), 0.0);
  EXPECT_EQ(m.m12.max_abs(), 0.0);
  EXPECT_EQ(m.m21.max_abs(), 0.0);
}

TEST(ClosedForm, DocumentedValuesAtOrigin) {
  const auto m = closed_form_coefficients(0.0, 1.0, 0.0);
  EXPECT_NEAR(m.m11.entry(1, 2).real(), -0.0647049, 1e-7);
  EXPECT_EQ(m.m11.entry(1, 2), m.m11.entry(2, 1));
  EXPECT_EQ(m.m11.entry(1, 1), cplx(0.0));
  EXPECT_EQ(m.m21.max_abs(), 0.0);
}

TEST(ClosedForm, RejectsRealP2) { EXPECT_THROW(closed_form_coefficients(0.0, 1.0, cplx(0.5, 0.0)), DomainError); }

TEST(Quadrature, AgreesWithClosedFormOnGrid) {
  for (double y : kY)
    for (double p1 : kP1)
      for (cplx p2 : kP2) {
        const auto c = closed_form_coefficients(y, p1, p2);
        const auto q = quadrature_coefficients(y, p1, p2);
        EXPECT_LE(max_abs_diff(c.m11, q.m11), 1e-8);
        EXPECT_LE(max_abs_diff(c.m12, q.m12), 1e-8);
        EXPECT_LE(max_abs_diff(c.m21, q.m21), 1e-8);
      }
}

TEST(Quadrature, EntryStructure) {
  for (double y : {-1.5, 0.5}) {
    const auto q = quadrature_coefficients(y, 0.8, cplx(0.0, -0.6));
    EXPECT_LE(std::abs(q.m11.entry(1, 1)) + std::abs(q.m11.entry(2, 2)), 1e-8);
    EXPECT_LE(std::abs(q.m11.entry(1, 2) - q.m11.entry(2, 1)), 1e-8);
    EXPECT_LE(std::abs(q.m21.entry(1, 1)) + std::abs(q.m21.entry(2, 2)), 1e-8);
    EXPECT_LE(std::abs(q.m21.entry(1, 2) + q.m21.entry(2, 1)), 1e-8);
    EXPECT_LE(std::abs(q.m12.entry(1, 1) + q.m12.entry(2, 2)), 1e-8);
    EXPECT_LE(std::abs(q.m12.entry(1, 2) - q.m12.entry(2, 1)), 1e-8);
  }
}

TEST(Quadrature, PureP2HasNoSigma3Part) {
  const auto q = quadrature_coefficients(2.0, 0.0, cplx(0.0, 1.0));
  EXPECT_EQ(q.m12.entry(1, 1), cplx(0.0));
  EXPECT_EQ(q.m12.entry(2, 2), cplx(0.0));
  EXPECT_NEAR(q.m12.entry(1, 2).real(), airy_eval(2.0, 2) / 8.0, 1e-10);
}

TEST(Quadrature, NestedDoubleIntegralMatchesReducedForm) {
  const RayContour c;
  for (double y : {-1.0, 0.0, 1.5}) {
    const cplx reduced = reduced_sigma3_part(y, 1.0, c);
    const cplx nested = nested_sigma3_part(y, 1.0, c);
    EXPECT_LE(std::abs(reduced - nested), 1e-6) << y;
  }
}

TEST(Quadrature, TailLimit) {
  const auto q = quadrature_coefficients(8.0, 1.0, cplx(0.0, 1.0));
  EXPECT_LE(q.m11.max_abs(), 1e-6);
  EXPECT_LE(q.m12.max_abs(), 1e-6);
  EXPECT_LE(q.m21.max_abs(), 1e-6);
}

TEST(Quadrature, ContourContract) {
  EXPECT_THROW(RayContour(5.0, 24), DomainError);
  EXPECT_THROW(quadrature_coefficients(-2.0, 1.0, 0.0, RayContour(6.0, 3)), AccuracyError);
  const RayContour c;
  for (double w : c.radial_weights()) EXPECT_GT(w, 0.0);
}

TEST(GCoefficients, ZeroData) {
  const auto g = g_coefficients(0.3, {0.0, 0.0, 0.0});
  EXPECT_EQ(g.g1.max_abs() + g.g2.max_abs() + g.g3.max_abs(), 0.0);
}

TEST(GCoefficients, ChainToExpansionCoefficients) {
  const ScatteringParameters sp{0.0, 0.31, cplx(0.0, 0.05)};
  const AsymptoticSeries ser(3, 0.0, sp.r0_prime, sp.r0_second);
  for (double y = -4.0; y <= 4.0; y += 0.5) {
    const auto g = g_coefficients(y, sp);
    EXPECT_NEAR((-2.0 * g.g2.entry(2, 1)).real(), ser.u2(y), 1e-10);
    EXPECT_NEAR((-2.0 * g.g3.entry(2, 1)).real(), ser.u3(y), 1e-10);
    EXPECT_LE(std::abs((-2.0 * g.g3.entry(2, 1)).imag()), 1e-10);
  }
  const cplx s(0.0, -0.45);
  const auto t = std::make_shared<const PainleveSolution>(painleve2_solve(s, -8.0, 8.0));
  for (double y = -4.0; y <= 4.0; y += 0.5) {
    const auto g = g_coefficients(y, {s, 0.2, 0.0}, 1, t.get());
    EXPECT_NEAR((-2.0 * g.g1.entry(2, 1)).real(), u1_eval(y, *t), 1e-10);
  }
}

TEST(GCoefficients, MatchModelCoefficientsWithScaledParameters) {
  const ScatteringParameters sp{0.0, 0.4, cplx(0.0, -0.3)};
  for (double y : {-1.0, 0.0, 2.0}) {
    const auto g = g_coefficients(y, sp);
    const auto m = closed_form_coefficients(y, p1_of(sp), p2_of(sp));
    EXPECT_LE(max_abs_diff(g.g2, -1.0 / std::cbrt(3.0) * m.m11), 1e-14);
    EXPECT_LE(max_abs_diff(g.g3, -1.0 / std::cbrt(3.0) * m.m12), 1e-14);
  }
}

TEST(GCoefficients, HigherOrdersNeedZeroStokes) {
  const cplx s(0.0, 0.3);
  const auto t = std::make_shared<const PainleveSolution>(painleve2_solve(s, -8.0, 8.0));
  EXPECT_THROW(g_coefficients(0.0, {s, 0.1, 0.0}, 2, t.get()), UnsupportedOrderError);
  EXPECT_THROW(g_coefficients(0.0, {s, 0.1, 0.0}, 1), DomainError);
}
