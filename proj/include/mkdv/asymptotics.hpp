#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mkdv/chebyshev.hpp"
#include "mkdv/error.hpp"
#include "mkdv/special.hpp"

namespace mkdv {

inline const double kCbrt3 = std::cbrt(3.0);
inline const double kCbrt9 = std::cbrt(9.0); // 3^{2/3}

/// x, t and y = x (3t)^{-1/3}.
struct SimilarityPoint {
  double x = 0.0;
  double t = 1.0;
  double y = 0.0;
};

inline SimilarityPoint similarity_point(double x, double t) {
  if (!(t >= 1.0)) throw DomainError("t must be at least 1");
  return {x, t, x / std::cbrt(3.0 * t)};
}

inline double similarity_x(double y, double t) { return y * std::cbrt(3.0 * t); }

/// u1(y) = 3^{-1/3} u_P(y; s, 0, -s).
inline double u1_eval(double y, const PainleveSolution& table) {
  if (table.alpha() == 0.0) return 0.0;
  return table.value(y) / kCbrt3;
}

/// u2(y) = r'(0) / (2 3^{2/3}) Ai'(y).
inline double u2_eval(double y, double r0_prime) {
  if (r0_prime == 0.0) return 0.0;
  return r0_prime / (2.0 * kCbrt9) * airy_eval(y, 1);
}

inline void check_imaginary(cplx v, const char* what) {
  if (std::abs(v.real()) > 1e-12 * std::max(1.0, std::abs(v)))
    throw DomainError(std::string(what) + " must be purely imaginary");
}

/// u3(y) = -i r''(0) / 24 * y Ai(y).
inline double u3_eval(double y, cplx r0_second) {
  check_imaginary(r0_second, "r''(0)");
  if (r0_second.imag() == 0.0) return 0.0;
  return r0_second.imag() / 24.0 * y * airy_eval(y, 0);
}

/// Truncated expansion sum_{j<=N} u_j(y) t^{-j/3}.
class AsymptoticSeries {
public:
  AsymptoticSeries(int order, cplx s, double r0_prime, cplx r0_second,
                   std::shared_ptr<const PainleveSolution> table = nullptr)
      : order_(order), s_(s), r0_prime_(r0_prime), r0_second_(r0_second), table_(std::move(table)) {
    if (order < 1) throw DomainError("expansion order must be at least 1");
    if (order > 3) throw UnsupportedOrderError("only u1, u2, u3 are available");
    check_stokes_parameter(s);
    check_imaginary(r0_second, "r''(0)");
    if (s != 0.0 && order >= 2)
      throw UnsupportedOrderError("orders above 1 need r(0) = 0; u2 is unknown when s != 0");
    if (s != 0.0) {
      if (!table_) throw DomainError("a Painleve table is required when s != 0");
      if (std::abs(table_->s() - s) > 1e-14) throw DomainError("Painleve table was built for a different s");
    }
  }

  int order() const { return order_; }
  cplx s() const { return s_; }
  double r0_prime() const { return r0_prime_; }
  cplx r0_second() const { return r0_second_; }
  const PainleveSolution* table() const { return table_.get(); }

  double u1(double y) const { return table_ && s_ != 0.0 ? u1_eval(y, *table_) : 0.0; }
  double u2(double y) const { return u2_eval(y, r0_prime_); }
  double u3(double y) const { return u3_eval(y, r0_second_); }

  double coefficient(int j, double y) const {
    switch (j) {
      case 1: return u1(y);
      case 2: return u2(y);
      case 3: return u3(y);
      default: throw UnsupportedOrderError("coefficient u" + std::to_string(j) + " is not available");
    }
  }

  /// Same data, different truncation order.
  AsymptoticSeries with_order(int order) const { return {order, s_, r0_prime_, r0_second_, table_}; }

private:
  int order_;
  cplx s_;
  double r0_prime_;
  cplx r0_second_;
  std::shared_ptr<const PainleveSolution> table_;
};

inline double series_eval(const SimilarityPoint& pt, const AsymptoticSeries& series) {
  if (!(pt.t >= 1.0)) throw DomainError("t must be at least 1");
  const double tau = std::cbrt(pt.t);
  double sum = 0.0;
  double scale = 1.0;
  for (int j = 1; j <= series.order(); ++j) {
    scale /= tau;
    sum += series.coefficient(j, pt.y) * scale;
  }
  return sum;
}

/// Coefficient functions entering the hierarchy; unset entries are zero.
struct HierarchyInputs {
  std::function<double(double)> u1, u2, u3, u4;
};

struct HierarchyOptions {
  int nodes = 256;
  double margin = 1.0;
  double chop = 1e-13;
};

/// Pointwise residual of the j-th hierarchy equation
///   u_j''' - y u_j' - j u_j - c_j (nonlinear_j)' ,  j = 1..4,
/// with derivatives from a Chebyshev fit that extends `margin` beyond the grid.
inline std::vector<double> hierarchy_residual(int j, const HierarchyInputs& in, const std::vector<double>& y_grid,
                                              const HierarchyOptions& opt = {}) {
  if (j < 1 || j > 4) throw UnsupportedOrderError("hierarchy equations are available for j = 1..4");
  if (y_grid.empty()) return {};
  const auto [lo_it, hi_it] = std::minmax_element(y_grid.begin(), y_grid.end());
  const double a = *lo_it - opt.margin;
  const double b = *hi_it + opt.margin;
  const std::vector<double> nodes = cheb::lobatto_points(opt.nodes, a, b);

  auto fit = [&](const std::function<double(double)>& f) -> std::optional<cheb::Series> {
    if (!f) return std::nullopt;
    std::vector<double> v(nodes.size());
    try {
      for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = f(nodes[i]);
    } catch (const Error& e) {
      throw DifferentiationError(std::string("coefficient function unavailable on the smooth margin: ") + e.what());
    }
    cheb::Series s = cheb::Series::from_values(a, b, v).chopped(opt.chop);
    if (s.size() + 8 > nodes.size())
      throw DifferentiationError("coefficient function is not resolved by " + std::to_string(opt.nodes) + " nodes");
    return s;
  };
  const auto s1 = fit(in.u1), s2 = fit(in.u2), s3 = fit(in.u3), s4 = fit(in.u4);
  const std::optional<cheb::Series>* own[] = {&s1, &s2, &s3, &s4};
  const auto& uj = *own[j - 1];

  // Nonlinear term N_j(y) before differentiation.
  auto val = [](const std::optional<cheb::Series>& s, double y) { return s ? (*s)(y) : 0.0; };
  std::function<double(double)> nonlinear;
  double c = 0.0;
  switch (j) {
    case 1:
      c = 2.0 * kCbrt9;
      nonlinear = [&](double y) { const double v = val(s1, y); return v * v * v; };
      break;
    case 2:
      c = 6.0 * kCbrt9;
      nonlinear = [&](double y) { const double v = val(s1, y); return v * v * val(s2, y); };
      break;
    case 3:
      c = 6.0 * kCbrt9;
      nonlinear = [&](double y) {
        const double v1 = val(s1, y), v2 = val(s2, y);
        return v1 * v2 * v2 + v1 * v1 * val(s3, y);
      };
      break;
    default:
      c = 2.0 * kCbrt9;
      nonlinear = [&](double y) {
        const double v1 = val(s1, y), v2 = val(s2, y);
        return v2 * v2 * v2 + 6.0 * v1 * v2 * val(s3, y) + 3.0 * v1 * v1 * val(s4, y);
      };
  }
  std::vector<double> nv(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) nv[i] = nonlinear(nodes[i]);
  const cheb::Series dn = cheb::Series::from_values(a, b, nv).chopped(opt.chop).derivative();

  std::vector<double> out(y_grid.size(), 0.0);
  if (uj) {
    const cheb::Series d1 = uj->derivative();
    const cheb::Series d3 = d1.derivative().derivative();
    for (std::size_t i = 0; i < y_grid.size(); ++i) {
      const double y = y_grid[i];
      out[i] = d3(y) - y * d1(y) - j * (*uj)(y);
    }
  }
  for (std::size_t i = 0; i < y_grid.size(); ++i) out[i] -= c * dn(y_grid[i]);
  return out;
}

} // namespace mkdv
