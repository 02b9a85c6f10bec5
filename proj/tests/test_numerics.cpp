#include <atomic>
#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "mkdv/chebyshev.hpp"
#include "mkdv/io.hpp"
#include "mkdv/mat2.hpp"
#include "mkdv/parallel.hpp"
#include "mkdv/quadrature.hpp"

using namespace mkdv;

TEST(Quadrature, GaussLegendreIntegratesPolynomialsExactly) {
  const auto& g = quad::gauss_legendre(10);
  double s = 0.0, w = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    s += g.weights[i] * std::pow(g.nodes[i], 18);
    w += g.weights[i];
  }
  EXPECT_NEAR(w, 2.0, 1e-15);
  EXPECT_NEAR(s, 2.0 / 19.0, 1e-15);
}

TEST(Quadrature, UniformPanelsOnSmoothIntegrand) {
  const double v = quad::integrate_uniform([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 16, 20);
  EXPECT_NEAR(v, std::sqrt(std::numbers::pi), 1e-14);
}

TEST(Quadrature, ComplexIntegrand) {
  const cplx v = quad::integrate_uniform([](double x) { return std::exp(cplx(0.0, x)); }, 0.0, std::numbers::pi, 4, 20);
  EXPECT_NEAR(v.real(), 0.0, 1e-14);
  EXPECT_NEAR(v.imag(), 2.0, 1e-14);
}

TEST(Quadrature, AdaptiveHandlesPeakedIntegrand) {
  const auto r = quad::integrate_adaptive([](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-12);
  EXPECT_NEAR(r.value, 2.0 * std::atan(1.0 / 1e-2) / 1e-2, 1e-9);
}

TEST(Chebyshev, LobattoPointsAscendingWithEndpoints) {
  const auto x = cheb::lobatto_points(9, -2.0, 3.0);
  ASSERT_EQ(x.size(), 9u);
  EXPECT_DOUBLE_EQ(x.front(), -2.0);
  EXPECT_DOUBLE_EQ(x.back(), 3.0);
  for (std::size_t i = 1; i < x.size(); ++i) EXPECT_LT(x[i - 1], x[i]);
}

TEST(Chebyshev, SeriesDerivativeOfExponential) {
  const auto s = cheb::Series::fit([](double x) { return std::exp(0.5 * x); }, -3.0, 2.0, 40).chopped(1e-15);
  const auto d3 = s.derivative().derivative().derivative();
  for (double x : {-2.5, 0.0, 1.7}) {
    EXPECT_NEAR(s(x), std::exp(0.5 * x), 1e-14);
    EXPECT_NEAR(d3(x), 0.125 * std::exp(0.5 * x), 1e-11);
  }
}

TEST(Chebyshev, DifferentiationMatrixOnCubic) {
  const int n = 8;
  const auto x = cheb::lobatto_points(n, -1.0, 2.0);
  const auto D = cheb::differentiation_matrix(n, -1.0, 2.0);
  for (int i = 0; i < n; ++i) {
    double d = 0.0;
    for (int j = 0; j < n; ++j) d += D[static_cast<std::size_t>(i * n + j)] * std::pow(x[static_cast<std::size_t>(j)], 3);
    EXPECT_NEAR(d, 3.0 * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)], 1e-12);
  }
}

TEST(Chebyshev, BarycentricReproducesPolynomial) {
  const auto x = cheb::lobatto_points(6, 0.0, 1.0);
  std::vector<double> v;
  for (double xi : x) v.push_back(xi * xi * xi - xi);
  EXPECT_NEAR(cheb::barycentric(x, v, 0.3), 0.027 - 0.3, 1e-14);
}

TEST(Mat2, PauliAlgebra) {
  const Mat2 one = Mat2::identity();
  EXPECT_EQ(max_abs_diff(Mat2::sigma1() * Mat2::sigma1(), one), 0.0);
  EXPECT_EQ(max_abs_diff(Mat2::sigma1() * Mat2::sigma2(), kI * Mat2::sigma3()), 0.0);
  const Mat2 s31 = Mat2::sigma3() * Mat2::sigma1();
  EXPECT_EQ(s31.entry(1, 2), cplx(1.0));
  EXPECT_EQ(s31.entry(2, 1), cplx(-1.0));
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) EXPECT_EQ(std::stod(io::format_double(v)), v);
}

TEST(Io, CsvRoundTripAndValidation) {
  const auto dir = std::filesystem::temp_directory_path() / "mkdv_test_io";
  std::filesystem::remove_all(dir);
  io::Table t;
  t.columns = {"x", "u0"};
  t.rows = {{-1.0, 0.25}, {0.0, 1.0 / 3.0}};
  io::write_csv(dir / "a" / "t.csv", t);
  const auto back = io::read_csv(dir / "a" / "t.csv");
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.column("u0")[1], 1.0 / 3.0);
  EXPECT_THROW((void)back.column("missing"), IoError);
  io::atomic_write(dir / "bad.csv", "x,u0\n1,abc\n");
  EXPECT_THROW(io::read_csv(dir / "bad.csv"), IoError);
  EXPECT_THROW(io::read_csv(dir / "none.csv"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw DomainError("x"); }), DomainError);
}
