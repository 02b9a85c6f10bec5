#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "mkdv/error.hpp"
#include "mkdv/mat2.hpp"
#include "mkdv/parallel.hpp"

namespace mkdv {

/// Real initial profile sampled on a uniform grid. When `profile` is set it is
/// the exact function behind the samples and is used for off-grid evaluation.
struct InitialDatum {
  std::vector<double> grid;
  std::vector<double> values;
  double mass = 0.0;
  double support_radius = 0.0;
  std::function<double(double)> profile;

  double spacing() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }

  /// u0(x); zero outside the sampled window.
  double at(double x) const {
    if (profile) return profile(x);
    if (grid.size() < 2 || x < grid.front() || x > grid.back()) return 0.0;
    // Local six-point Lagrange interpolation.
    const double dx = spacing();
    const auto n = static_cast<std::ptrdiff_t>(grid.size());
    const auto i0 = static_cast<std::ptrdiff_t>(std::floor((x - grid.front()) / dx));
    const std::ptrdiff_t first = std::clamp<std::ptrdiff_t>(i0 - 2, 0, std::max<std::ptrdiff_t>(n - 6, 0));
    const std::ptrdiff_t last = std::min<std::ptrdiff_t>(first + 6, n);
    double sum = 0.0;
    for (std::ptrdiff_t i = first; i < last; ++i) {
      double w = 1.0;
      for (std::ptrdiff_t j = first; j < last; ++j)
        if (j != i) w *= (x - grid[static_cast<std::size_t>(j)]) / (grid[static_cast<std::size_t>(i)] - grid[static_cast<std::size_t>(j)]);
      sum += w * values[static_cast<std::size_t>(i)];
    }
    return sum;
  }
};

/// Validate samples and fill mass (trapezoid) and support radius.
inline InitialDatum make_datum(std::vector<double> x, std::vector<double> u,
                               std::function<double(double)> profile = {}) {
  if (x.size() != u.size()) throw DomainError("grid and values differ in length");
  if (x.size() < 8) throw DomainError("initial datum needs at least 8 samples");
  const double dx = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  if (!(dx > 0.0)) throw DomainError("grid must be increasing");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (std::abs((x[i + 1] - x[i]) - dx) > 1e-8 * dx) throw DomainError("grid must be uniform");
  for (double v : u)
    if (!std::isfinite(v)) throw DomainError("initial datum has non-finite values");
  if (std::max(std::abs(u.front()), std::abs(u.back())) > 1e-8)
    throw DomainError("initial datum does not decay at the edge of its window");
  InitialDatum d;
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m += (i == 0 || i + 1 == u.size() ? 0.5 : 1.0) * u[i];
  d.mass = m * dx;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) >= 1e-14) d.support_radius = std::max(d.support_radius, std::abs(x[i]));
  d.grid = std::move(x);
  d.values = std::move(u);
  d.profile = std::move(profile);
  return d;
}

/// Sample `f` on [-half_width, half_width] with spacing close to dx.
inline InitialDatum sample_datum(std::function<double(double)> f, double half_width, double dx) {
  if (!(half_width > 0.0) || !(dx > 0.0)) throw DomainError("sampling window and spacing must be positive");
  const auto cells = static_cast<std::size_t>(std::ceil(2.0 * half_width / dx));
  std::vector<double> x(cells + 1), u(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    // Mirror the left half so the grid is exactly symmetric about 0.
    x[i] = 2 * i <= cells ? -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(cells)
                          : -x[cells - i];
    u[i] = f(x[i]);
  }
  return make_datum(std::move(x), std::move(u), std::move(f));
}

struct ScatteringOptions {
  int akns_sign = +1;       // multiplies the potential in the spectral problem
  double max_step = 0.005;  // RK4 step bound
  double phase_step = 0.05; // bound on |k| h
  double tolerance = 1e-8;
  int threads = 1;
};

/// Jost data (a, b) at one k: psi ~ (a e^{-ikx}, b e^{ikx}) as x -> +inf.
struct JostData {
  cplx a{1.0, 0.0};
  cplx b{0.0, 0.0};
};

/// Integrate the gauge-transformed Zakharov-Shabat system
///   w1' =  i q e^{2ikx} w2,   w2' = -i q e^{-2ikx} w1,   q = sign * u0
/// from w = (1, 0) at the left edge of the support to the right edge.
inline JostData jost_data(const InitialDatum& d, double k, const ScatteringOptions& opt = {}) {
  JostData out;
  if (d.support_radius <= 0.0) return out;
  const double lo = std::max(-d.support_radius, d.grid.front());
  const double hi = std::min(d.support_radius, d.grid.back());
  double h = opt.max_step;
  if (k != 0.0) h = std::min(h, opt.phase_step / std::abs(k));
  const auto steps = static_cast<long>(std::ceil((hi - lo) / h));
  h = (hi - lo) / static_cast<double>(steps);
  const double sgn = opt.akns_sign >= 0 ? 1.0 : -1.0;
  auto rhs = [&](double x, const cplx& w1, const cplx& w2, cplx& d1, cplx& d2) {
    const double q = sgn * d.at(x);
    const cplx e = std::polar(1.0, 2.0 * k * x);
    d1 = kI * q * e * w2;
    d2 = -kI * q * std::conj(e) * w1;
  };
  cplx w1 = 1.0, w2 = 0.0;
  for (long n = 0; n < steps; ++n) {
    const double x = lo + h * static_cast<double>(n);
    cplx a1, a2, b1, b2, c1, c2, e1, e2;
    rhs(x, w1, w2, a1, a2);
    rhs(x + 0.5 * h, w1 + 0.5 * h * a1, w2 + 0.5 * h * a2, b1, b2);
    rhs(x + 0.5 * h, w1 + 0.5 * h * b1, w2 + 0.5 * h * b2, c1, c2);
    rhs(x + h, w1 + h * c1, w2 + h * c2, e1, e2);
    w1 += h / 6.0 * (a1 + 2.0 * b1 + 2.0 * c1 + e1);
    w2 += h / 6.0 * (a2 + 2.0 * b2 + 2.0 * c2 + e2);
  }
  if (!std::isfinite(std::abs(w1)) || !std::isfinite(std::abs(w2)))
    throw SolverError("Zakharov-Shabat integration overflowed at k = " + num(k));
  out.a = w1;
  out.b = w2;
  return out;
}

struct ReflectionData {
  std::vector<double> k_grid;
  std::vector<cplx> r_values;
  cplx r0{};
  cplx r0_prime{};
  cplx r0_second{};
  double sup_abs = 0.0;
  double symmetry_residual = 0.0;
  double unitarity_defect = 0.0; // max | |a|^2 - |b|^2 - 1 |
  int akns_sign = +1;
};

/// Clustered symmetric k-grid: +-0.0125 m (m = 1..8), then 0.15..2 by 0.05
/// and 2.25..12 by 0.25.
inline std::vector<double> default_k_grid() {
  std::vector<double> pos;
  for (int m = 1; m <= 8; ++m) pos.push_back(0.0125 * m);
  for (int m = 3; m <= 40; ++m) pos.push_back(0.05 * m);
  for (int m = 9; m <= 48; ++m) pos.push_back(0.25 * m);
  std::vector<double> k;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) k.push_back(-*it);
  k.push_back(0.0);
  k.insert(k.end(), pos.begin(), pos.end());
  return k;
}

struct ZeroDerivatives {
  cplx r0{};
  cplx r0_prime{};
  cplx r0_second{};
  double raw_violation = 0.0; // largest of |Re r0|, |Im r0'|, |Re r0''| before enforcement
  int levels = 0;
};

/// Central differences at h = 0.1 / 2^j over the grid points available,
/// Richardson-extrapolated, then projected onto the exact structure
/// r0 in iR, r0' in R, r0'' in iR.
inline ZeroDerivatives derivatives_at_zero(const std::vector<double>& k, const std::vector<cplx>& r,
                                           double tolerance = 1e-8) {
  if (k.size() != r.size()) throw DomainError("k-grid and r-values differ in length");
  auto find = [&](double kk) -> const cplx* {
    for (std::size_t i = 0; i < k.size(); ++i)
      if (std::abs(k[i] - kk) <= 1e-12) return &r[i];
    return nullptr;
  };
  const cplx* z = find(0.0);
  if (!z) throw DomainError("k-grid must contain 0");
  int near = 0;
  for (double kk : k) near += std::abs(kk) <= 0.1 + 1e-12 ? 1 : 0;
  if (near < 5) throw DomainError("k-grid needs at least 5 points within |k| <= 0.1");

  std::vector<cplx> d1, d2;
  for (int j = 0; j < 8; ++j) {
    const double h = 0.1 / std::ldexp(1.0, j);
    const cplx* p = find(h);
    const cplx* m = find(-h);
    if (!p || !m) {
      if (d1.empty()) continue;
      break;
    }
    d1.push_back((*p - *m) / (2.0 * h));
    d2.push_back((*p - 2.0 * *z + *m) / (h * h));
  }
  if (d1.empty()) throw DomainError("k-grid has no symmetric pair at 0.1 / 2^j");
  auto richardson = [](std::vector<cplx> t) {
    for (std::size_t m = 1; m < t.size(); ++m) {
      const double f = std::ldexp(1.0, static_cast<int>(2 * m));
      for (std::size_t i = t.size() - 1; i >= m; --i) t[i] = (f * t[i] - t[i - 1]) / (f - 1.0);
    }
    return t.back();
  };
  ZeroDerivatives out;
  out.levels = static_cast<int>(d1.size());
  const cplx r0 = *z;
  const cplx r1 = richardson(d1);
  const cplx r2 = richardson(d2);
  out.raw_violation = std::max({std::abs(r0.real()), std::abs(r1.imag()), std::abs(r2.real())});
  if (out.raw_violation > tolerance)
    throw ConventionError("reflection data at k = 0 violate the symmetry structure by " +
                          num(out.raw_violation));
  out.r0 = {0.0, r0.imag()};
  out.r0_prime = {r1.real(), 0.0};
  out.r0_second = {0.0, r2.imag()};
  return out;
}

inline ZeroDerivatives derivatives_at_zero(const ReflectionData& rd, double tolerance = 1e-8) {
  return derivatives_at_zero(rd.k_grid, rd.r_values, tolerance);
}

/// r(k) = b(k) / a(k) on a symmetric grid containing 0, with the structural
/// checks and the derivatives at 0.
inline ReflectionData compute_reflection(const InitialDatum& d, const std::vector<double>& k_grid,
                                         const ScatteringOptions& opt = {}) {
  const std::size_t n = k_grid.size();
  if (n == 0) throw DomainError("empty k-grid");
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(k_grid[i] + k_grid[n - 1 - i]) > 1e-12) throw DomainError("k-grid must be symmetric about 0");
  if (std::none_of(k_grid.begin(), k_grid.end(), [](double k) { return k == 0.0; }))
    throw DomainError("k-grid must contain 0");
  ReflectionData rd;
  rd.k_grid = k_grid;
  rd.akns_sign = opt.akns_sign >= 0 ? 1 : -1;
  rd.r_values.assign(n, 0.0);
  std::vector<double> defect(n, 0.0);
  parallel_for(n, opt.threads, [&](std::size_t i) {
    const JostData j = jost_data(d, k_grid[i], opt);
    rd.r_values[i] = j.b / j.a;
    defect[i] = std::abs(std::norm(j.a) - std::norm(j.b) - 1.0) / std::norm(j.a);
  });
  for (std::size_t i = 0; i < n; ++i) {
    rd.sup_abs = std::max(rd.sup_abs, std::abs(rd.r_values[i]));
    rd.unitarity_defect = std::max(rd.unitarity_defect, defect[i]);
    rd.symmetry_residual =
        std::max(rd.symmetry_residual, std::abs(rd.r_values[i] + std::conj(rd.r_values[n - 1 - i])));
  }
  if (rd.unitarity_defect > opt.tolerance)
    throw SolverError("Zakharov-Shabat integration lost |a|^2 - |b|^2 = 1 by " + num(rd.unitarity_defect));
  if (rd.symmetry_residual > opt.tolerance)
    throw ConventionError("r(k) = -conj(r(-k)) violated by " + num(rd.symmetry_residual));
  if (!(rd.sup_abs < 1.0)) throw ConventionError("sup |r| reached 1");
  const ZeroDerivatives z = derivatives_at_zero(rd, opt.tolerance);
  rd.r0 = z.r0;
  rd.r0_prime = z.r0_prime;
  rd.r0_second = z.r0_second;
  return rd;
}

/// First-order (Born) reflection coefficient -i sign * int u0 e^{-2ikx} dx
/// by the trapezoid rule on the sample grid.
inline cplx born_reflection(const InitialDatum& d, double k, int akns_sign = +1) {
  cplx s = 0.0;
  const std::size_t n = d.grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    s += w * d.values[i] * std::polar(1.0, -2.0 * k * d.grid[i]);
  }
  return -kI * static_cast<double>(akns_sign >= 0 ? 1 : -1) * s * d.spacing();
}

} // namespace mkdv
