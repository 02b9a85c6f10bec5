#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mkdv/asymptotics.hpp"
#include "mkdv/error.hpp"
#include "mkdv/mat2.hpp"
#include "mkdv/quadrature.hpp"
#include "mkdv/special.hpp"

namespace mkdv {

/// Discretized contour Y = Y1 u Y2 u Y3 u Y4 (rays at arg pi/6, 5pi/6,
/// -5pi/6, -pi/6, truncated at radius R, oriented left to right).
/// Each node carries z and the oriented line element w * dz/dr.
class RayContour {
public:
  struct Node {
    cplx z;
    cplx dz;
  };

  RayContour() : RayContour(6.0, 24) {}
  RayContour(double radius, int nodes_per_panel) : radius_(radius), nodes_(nodes_per_panel) {
    if (!(radius >= 6.0)) throw DomainError("contour truncation radius must be at least 6");
    const auto br = ray_breakpoints(radius);
    const quad::GaussRule& g = quad::gauss_legendre(nodes_per_panel);
    const double pi = std::numbers::pi;
    const cplx d1 = std::polar(1.0, pi / 6.0), d2 = std::polar(1.0, 5.0 * pi / 6.0);
    const cplx d3 = std::polar(1.0, -5.0 * pi / 6.0), d4 = std::polar(1.0, -pi / 6.0);
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      const double half = 0.5 * (br[p + 1] - br[p]);
      const double mid = 0.5 * (br[p + 1] + br[p]);
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const double r = mid + half * g.nodes[i];
        const double w = half * g.weights[i];
        weights_.push_back(w);
        upper_.push_back({r * d1, w * d1});
        upper_.push_back({r * d2, -w * d2});
        lower_.push_back({r * d4, w * d4});
        lower_.push_back({r * d3, -w * d3});
      }
    }
  }

  double radius() const { return radius_; }
  int nodes_per_panel() const { return nodes_; }
  const std::vector<Node>& upper() const { return upper_; } // Y1 u Y2
  const std::vector<Node>& lower() const { return lower_; } // Y3 u Y4
  const std::vector<double>& radial_weights() const { return weights_; }

  template <class G>
  cplx integrate_upper(G&& g) const {
    cplx s = 0.0;
    for (const auto& n : upper_) s += g(n.z) * n.dz;
    return s;
  }
  template <class G>
  cplx integrate_lower(G&& g) const {
    cplx s = 0.0;
    for (const auto& n : lower_) s += g(n.z) * n.dz;
    return s;
  }

  /// Same contour with radius 1.25 R and more nodes, for error estimates.
  RayContour widened() const { return {1.25 * radius_, nodes_ + 8}; }

private:
  double radius_;
  int nodes_;
  std::vector<double> weights_;
  std::vector<Node> upper_, lower_;
};

/// Ray moments  I+_j(y) = int_{Y1 u Y2} z^j e^{2i theta} dz  and
/// I-_j(y) = int_{Y3 u Y4} z^j e^{-2i theta} dz,  theta = y z + 4 z^3 / 3.
struct RayMoments {
  std::array<cplx, 3> plus{};
  std::array<cplx, 3> minus{};
};

inline RayMoments ray_moments(double y, const RayContour& c) {
  RayMoments m;
  for (const auto& n : c.upper()) {
    const cplx e = cubic_phase(y, n.z, +1) * n.dz;
    m.plus[0] += e;
    m.plus[1] += n.z * e;
    m.plus[2] += n.z * n.z * e;
  }
  for (const auto& n : c.lower()) {
    const cplx e = cubic_phase(y, n.z, -1) * n.dz;
    m.minus[0] += e;
    m.minus[1] += n.z * e;
    m.minus[2] += n.z * n.z * e;
  }
  return m;
}

struct ModelCoefficients {
  double y = 0.0;
  double p1 = 0.0;
  cplx p2{};
  Mat2 m11, m12, m21;
};

inline void check_model_parameters(double y, double p1, cplx p2) {
  if (!std::isfinite(y) || !std::isfinite(p1)) throw DomainError("y and p1 must be finite");
  check_imaginary(p2, "p2");
}

inline ModelCoefficients closed_form_coefficients(double y, double p1, cplx p2) {
  check_model_parameters(y, p1, p2);
  ModelCoefficients mc{y, p1, p2, {}, {}, {}};
  if (p1 == 0.0 && p2 == 0.0) return mc;
  const AiryTriple a = airy_triple(y);
  const double J = p1 != 0.0 ? airy_prime_squared_tail(y).value : 0.0;
  const cplx i8 = 8.0 * kI;
  mc.m11 = (p1 / 4.0 * a.ai_prime) * Mat2::sigma1();
  mc.m12 = (p1 * p1 / i8 * J) * Mat2::sigma3() + (p2 / i8 * a.ai_second) * Mat2::sigma1();
  mc.m21 = (-p1 / i8 * a.ai_second) * (Mat2::sigma3() * Mat2::sigma1());
  return mc;
}

struct QuadratureOptions {
  double tolerance = 1e-10;   // on the R -> 1.25 R comparison
  double y_panel = 0.5;       // panel width for the y' integral of F'
  int y_nodes = 20;
};

/// sigma_3 coefficient of int_Y mu_1 w_1 dz, i.e. int_{+inf}^y F'(y') dy' with
/// F'(y') = (p1^2 / pi) I+_1(y') I-_1(y'), all moments by ray quadrature.
inline cplx reduced_sigma3_part(double y, double p1, const RayContour& c, const QuadratureOptions& opt = {}) {
  if (p1 == 0.0) return 0.0;
  const double cut = std::max(y, 0.0) + 12.0;
  const int panels = static_cast<int>(std::ceil((cut - y) / opt.y_panel));
  auto fprime = [&](double yy) {
    const RayMoments m = ray_moments(yy, c);
    return m.plus[1] * m.minus[1];
  };
  const cplx integral = quad::integrate_uniform(fprime, y, cut, panels, opt.y_nodes);
  return -(p1 * p1 / std::numbers::pi) * integral;
}

/// F1(y) = int_{Y1 u Y2} dz int_{Y3 u Y4} ds  s z e^{-2i theta(s)} e^{2i theta(z)} / (s - z).
inline cplx nested_double_integral(double y, const RayContour& c) {
  std::vector<cplx> zs, ze, ss, se;
  for (const auto& n : c.upper()) {
    zs.push_back(n.z);
    ze.push_back(n.z * cubic_phase(y, n.z, +1) * n.dz);
  }
  for (const auto& n : c.lower()) {
    ss.push_back(n.z);
    se.push_back(n.z * cubic_phase(y, n.z, -1) * n.dz);
  }
  cplx total = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    cplx inner = 0.0;
    for (std::size_t k = 0; k < ss.size(); ++k) inner += se[k] / (ss[k] - zs[i]);
    total += ze[i] * inner;
  }
  return total;
}

/// sigma_3 coefficient of int_Y mu_1 w_1 dz from the nested double integral:
/// -(p1^2 / 2 pi i) F1(y).
inline cplx nested_sigma3_part(double y, double p1, const RayContour& c) {
  if (p1 == 0.0) return 0.0;
  return -(p1 * p1 / (2.0 * std::numbers::pi * kI)) * nested_double_integral(y, c);
}

/// m11, m12, m21 from contour quadrature on Y:
///   m11 = -1/(2 pi i) int w1,  m21 = -1/(2 pi i) int z w1,
///   m12 = -1/(2 pi i) int (w2 + mu1 w1).
inline ModelCoefficients quadrature_coefficients(double y, double p1, cplx p2, const RayContour& c = {},
                                                 const QuadratureOptions& opt = {}) {
  check_model_parameters(y, p1, p2);
  const RayMoments m = ray_moments(y, c);
  const RayMoments mw = ray_moments(y, c.widened());
  double err = 0.0;
  for (int j = 0; j < 3; ++j)
    err = std::max({err, std::abs(m.plus[static_cast<std::size_t>(j)] - mw.plus[static_cast<std::size_t>(j)]),
                    std::abs(m.minus[static_cast<std::size_t>(j)] - mw.minus[static_cast<std::size_t>(j)])});
  if (err > opt.tolerance)
    throw AccuracyError("ray quadrature estimate " + num(err) + " above tolerance at y = " +
                        num(y));
  const cplx pre = -1.0 / (2.0 * std::numbers::pi * kI);
  ModelCoefficients mc{y, p1, p2, {}, {}, {}};
  mc.m11 = pre * p1 * Mat2(0.0, -m.minus[1], m.plus[1], 0.0);
  mc.m21 = pre * p1 * Mat2(0.0, -m.minus[2], m.plus[2], 0.0);
  const cplx g3 = reduced_sigma3_part(y, p1, c, opt);
  mc.m12 = pre * (p2 * Mat2(0.0, m.minus[2], m.plus[2], 0.0) + g3 * Mat2::sigma3());
  return mc;
}

/// Scattering parameters entering g_1, g_2, g_3.
struct ScatteringParameters {
  cplx s{};
  double r0_prime = 0.0;
  cplx r0_second{};
};

inline double p1_of(const ScatteringParameters& sp) { return sp.r0_prime / kCbrt3; }
inline cplx p2_of(const ScatteringParameters& sp) { return sp.r0_second / (2.0 * kCbrt9); }

struct GCoefficients {
  Mat2 g1, g2, g3;
  int count = 0; // how many of g1, g2, g3 are defined
};

/// g_1 (any admissible s) and, when s = 0, g_2 and g_3.
inline GCoefficients g_coefficients(double y, const ScatteringParameters& sp, int count = 3,
                                    const PainleveSolution* table = nullptr) {
  if (count < 1 || count > 3) throw UnsupportedOrderError("only g1, g2, g3 are available");
  check_stokes_parameter(sp.s);
  check_imaginary(sp.r0_second, "r''(0)");
  if (sp.s != 0.0 && count > 1) throw UnsupportedOrderError("g2 and g3 are only known when r(0) = 0");
  GCoefficients g;
  g.count = count;
  if (sp.s != 0.0) {
    if (!table) throw DomainError("a Painleve table is required when s != 0");
    const double u = table->value(y);
    const double q = table->integral_sq_tail(y);
    g.g1 = (-0.5 / kCbrt3) * Mat2(-kI * q, u, u, kI * q);
    return g;
  }
  if (count == 1) return g;
  const AiryTriple a = airy_triple(y);
  g.g2 = (-sp.r0_prime / (4.0 * kCbrt9) * a.ai_prime) * Mat2::sigma1();
  if (count == 3) {
    const double J = sp.r0_prime != 0.0 ? airy_prime_squared_tail(y).value : 0.0;
    g.g3 = (kI * sp.r0_prime * sp.r0_prime / 24.0 * J) * Mat2::sigma3() +
           (kI * sp.r0_second / 48.0 * y * a.ai) * Mat2::sigma1();
  }
  return g;
}

} // namespace mkdv
