#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "mkdv/error.hpp"
#include "mkdv/mat2.hpp"
#include "mkdv/quadrature.hpp"

namespace mkdv {

/// Ai and its first two derivatives at one point.
struct AiryTriple {
  double y = 0.0;
  double ai = 0.0;
  double ai_prime = 0.0;
  double ai_second = 0.0;
};

namespace airy_detail {

// Branch limits. Inside [kSeriesLeft, kSeriesRight] the Maclaurin sums are
// carried in long double; outside, the large-argument expansions are used.
inline constexpr double kSeriesLeft = -8.0;
inline constexpr double kSeriesRight = 6.0;

struct Pair {
  long double ai;
  long double aip;
};

// Ai(0) = 3^{-2/3} / Gamma(2/3), -Ai'(0) = 3^{-1/3} / Gamma(1/3)
inline constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
inline constexpr long double kAip0 = 0.258819403792806798405183560189203963L;

inline Pair maclaurin(double yd) {
  const long double y = yd;
  const long double y3 = y * y * y;
  // f, g are the two canonical solutions; fp, gp their derivatives.
  long double tf = 1.0L, tg = y, tfp = y * y / 2.0L, tgp = 1.0L;
  long double f = tf, g = tg, fp = tfp, gp = tgp;
  for (int k = 0; k < 200; ++k) {
    const long double kk = k;
    tf *= y3 / ((3 * kk + 2) * (3 * kk + 3));
    tg *= y3 / ((3 * kk + 3) * (3 * kk + 4));
    tfp *= y3 / ((3 * kk + 3) * (3 * kk + 5));
    tgp *= y3 / ((3 * kk + 1) * (3 * kk + 3));
    f += tf;
    g += tg;
    fp += tfp;
    gp += tgp;
    const long double tail = std::fabs(tf) + std::fabs(tg) + std::fabs(tfp) + std::fabs(tgp);
    if (tail <= 1e-24L * (std::fabs(f) + std::fabs(g) + std::fabs(fp) + std::fabs(gp))) break;
  }
  return {kAi0 * f - kAip0 * g, kAi0 * fp - kAip0 * gp};
}

// Coefficients u_k and v_k of the large-argument expansions.
inline const std::array<double, 40>& u_coeffs() {
  static const std::array<double, 40> u = [] {
    std::array<double, 40> c{};
    c[0] = 1.0;
    for (int k = 1; k < 40; ++k)
      c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k - 1)] * (6.0 * k - 5) * (6.0 * k - 3) *
                                       (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
    return c;
  }();
  return u;
}

inline const std::array<double, 40>& v_coeffs() {
  static const std::array<double, 40> v = [] {
    std::array<double, 40> c{};
    const auto& u = u_coeffs();
    c[0] = 1.0;
    for (int k = 1; k < 40; ++k)
      c[static_cast<std::size_t>(k)] = -(6.0 * k + 1) / (6.0 * k - 1) * u[static_cast<std::size_t>(k)];
    return c;
  }();
  return v;
}

// Sum of (-1)^k c_k / zeta^k truncated at the smallest term.
inline double alternating_sum(const std::array<double, 40>& c, double zeta) {
  double s = 0.0;
  double prev = INFINITY;
  double zk = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double term = c[k] / zk;
    if (std::abs(term) > prev) break;
    s += (k % 2 == 0) ? term : -term;
    prev = std::abs(term);
    zk *= zeta;
  }
  return s;
}

inline Pair asymptotic_right(double y) {
  const double zeta = 2.0 / 3.0 * y * std::sqrt(y);
  const double e = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
  const double q = std::pow(y, 0.25);
  return {e / q * alternating_sum(u_coeffs(), zeta), -q * e * alternating_sum(v_coeffs(), zeta)};
}

// Oscillatory side, x = -y > 0: the even/odd parts of the same series.
inline Pair asymptotic_left(double y) {
  const double x = -y;
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  const auto& u = u_coeffs();
  const auto& v = v_coeffs();
  double ue = 0.0, uo = 0.0, ve = 0.0, vo = 0.0;
  double zk = 1.0;
  double prev = INFINITY;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double tu = u[k] / zk;
    const double tv = v[k] / zk;
    const double mag = std::max(std::abs(tu), std::abs(tv));
    if (mag > prev) break;
    prev = mag;
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      ue += sgn * tu;
      ve += sgn * tv;
    } else {
      uo += sgn * tu;
      vo += sgn * tv;
    }
    zk *= zeta;
  }
  const double phase = zeta - std::numbers::pi / 4.0;
  const double c = std::cos(phase), s = std::sin(phase);
  const double rp = 1.0 / std::sqrt(std::numbers::pi);
  const double q = std::pow(x, 0.25);
  return {rp / q * (c * ue + s * uo), rp * q * (s * ve - c * vo)};
}

} // namespace airy_detail

/// Ai(y), Ai'(y) and Ai''(y) = y Ai(y).
inline AiryTriple airy_triple(double y) {
  if (!std::isfinite(y)) throw DomainError("Airy function needs a finite argument");
  using namespace airy_detail;
  Pair p{};
  if (y > kSeriesRight) {
    p = asymptotic_right(y);
  } else if (y < kSeriesLeft) {
    p = asymptotic_left(y);
  } else {
    p = maclaurin(y);
  }
  AiryTriple t;
  t.y = y;
  t.ai = static_cast<double>(p.ai);
  t.ai_prime = static_cast<double>(p.aip);
  t.ai_second = static_cast<double>(static_cast<long double>(y) * p.ai);
  return t;
}

/// Ai^{(j)}(y) for j in {0, 1, 2}.
inline double airy_eval(double y, int j) {
  if (j < 0 || j > 2) throw DomainError("Airy derivative order must be 0, 1 or 2");
  const AiryTriple t = airy_triple(y);
  return j == 0 ? t.ai : (j == 1 ? t.ai_prime : t.ai_second);
}

/// Integral of Ai'(s)^2 over [y, inf) by adaptive quadrature up to y + 12
/// plus a bound on what is left beyond the cut.
struct TailIntegral {
  double value = 0.0;
  double quadrature_error = 0.0;
  double remainder_bound = 0.0;
};

inline TailIntegral airy_prime_squared_tail(double y) {
  const double cut = std::max(y, 0.0) + 12.0;
  TailIntegral out;
  auto f = [](double s) {
    const double d = airy_eval(s, 1);
    return d * d;
  };
  const auto r = quad::integrate_adaptive(f, y, cut, 1e-15);
  out.value = r.value;
  out.quadrature_error = r.error;
  // For s >= cut, Ai'(s)^2 <= s^{1/2} e^{-2 zeta(s)} / (4 pi) and zeta'(s) = sqrt(s),
  // so the tail is below e^{-2 zeta(cut)} / (8 pi).
  const double zeta = 2.0 / 3.0 * cut * std::sqrt(cut);
  out.remainder_bound = std::exp(-2.0 * zeta) / (8.0 * std::numbers::pi);
  if (out.remainder_bound > 1e-12) throw AccuracyError("Airy tail remainder above 1e-12");
  return out;
}

// ---------------------------------------------------------------------------
// Ray quadrature.

/// Quadrature settings for the rays arg z = pi/6, 5pi/6 (and their conjugates).
struct RayQuadratureConfig {
  double radius = 6.0;
  int nodes_per_panel = 24;
  double tolerance = 1e-11;
};

/// Graded panel breakpoints on [0, R]: finer near the origin.
inline std::vector<double> ray_breakpoints(double radius) {
  static constexpr std::array<double, 13> unit{0.0,   0.125, 0.25, 0.5, 0.75, 1.0, 1.5,
                                               2.0,   2.5,   3.0,  4.0, 5.0,  6.0};
  std::vector<double> b(unit.size());
  for (std::size_t i = 0; i < unit.size(); ++i) b[i] = unit[i] * radius / 6.0;
  return b;
}

/// Integral of g(z) over Y1 u Y2 (oriented left to right).
template <class G>
cplx integrate_upper_rays(G&& g, double radius, int nodes) {
  const cplx e1 = std::polar(1.0, std::numbers::pi / 6.0);
  const cplx e2 = std::polar(1.0, 5.0 * std::numbers::pi / 6.0);
  const auto br = ray_breakpoints(radius);
  auto integrand = [&](double r) { return g(r * e1) * e1 - g(r * e2) * e2; };
  return quad::integrate_panels(integrand, br, nodes);
}

/// Integral of g(z) over Y3 u Y4 (oriented left to right).
template <class G>
cplx integrate_lower_rays(G&& g, double radius, int nodes) {
  const cplx e4 = std::polar(1.0, -std::numbers::pi / 6.0);
  const cplx e3 = std::polar(1.0, -5.0 * std::numbers::pi / 6.0);
  const auto br = ray_breakpoints(radius);
  auto integrand = [&](double r) { return g(r * e4) * e4 - g(r * e3) * e3; };
  return quad::integrate_panels(integrand, br, nodes);
}

/// exp(+-2i(y z + 4 z^3 / 3)).
inline cplx cubic_phase(double y, cplx z, int sign) {
  return std::exp(static_cast<double>(sign) * 2.0 * kI * (y * z + 4.0 / 3.0 * z * z * z));
}

struct RayQuadratureResult {
  cplx value;
  double error_estimate = 0.0;
};

/// (2i)^j / pi times the integral of z^j e^{2i(yz + 4z^3/3)} over Y1 u Y2,
/// which reproduces Ai^{(j)}(y).
inline RayQuadratureResult airy_via_ray_quadrature_detailed(double y, int j,
                                                            const RayQuadratureConfig& cfg = {}) {
  if (!(y >= -5.0 && y <= 5.0)) throw DomainError("ray quadrature is set up for y in [-5, 5]");
  if (j < 0 || j > 2) throw DomainError("ray quadrature derivative order must be 0, 1 or 2");
  auto g = [&](cplx z) { return std::pow(z, j) * cubic_phase(y, z, +1); };
  const cplx pref = std::pow(2.0 * kI, j) / std::numbers::pi;
  const cplx base = pref * integrate_upper_rays(g, cfg.radius, cfg.nodes_per_panel);
  const cplx wider = pref * integrate_upper_rays(g, 1.25 * cfg.radius, cfg.nodes_per_panel + 8);
  RayQuadratureResult res{base, std::abs(base - wider)};
  if (res.error_estimate > cfg.tolerance)
    throw AccuracyError("ray quadrature estimate " + num(res.error_estimate) + " above tolerance");
  return res;
}

inline cplx airy_via_ray_quadrature(double y, int j, const RayQuadratureConfig& cfg = {}) {
  return airy_via_ray_quadrature_detailed(y, j, cfg).value;
}

} // namespace mkdv
