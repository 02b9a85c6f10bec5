#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "mkdv/error.hpp"

namespace mkdv::cheb {

/// Chebyshev-Lobatto points cos(pi j / (n-1)) mapped to [a, b], ascending.
inline std::vector<double> lobatto_points(int n, double a, double b) {
  if (n < 2) throw DomainError("need at least two Chebyshev points");
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double t = -std::cos(std::numbers::pi * j / (n - 1));
    x[static_cast<std::size_t>(j)] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  return x;
}

/// Truncated Chebyshev series on [a, b].
class Series {
public:
  Series() = default;
  Series(double a, double b, std::vector<double> coeffs)
      : a_(a), b_(b), c_(std::move(coeffs)) {}

  /// Interpolate values given at lobatto_points(n, a, b) (ascending order).
  static Series from_values(double a, double b, std::span<const double> values) {
    const int n = static_cast<int>(values.size());
    if (n < 2) throw DomainError("Chebyshev fit needs at least two samples");
    const int m = n - 1;
    // lobatto_points are ascending, i.e. t_j = cos(pi (m - j) / m).
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k <= m; ++k) {
      double s = 0.0;
      for (int j = 0; j <= m; ++j) {
        const double w = (j == 0 || j == m) ? 0.5 : 1.0;
        const double f = values[static_cast<std::size_t>(m - j)];
        s += w * f * std::cos(std::numbers::pi * static_cast<double>(j) * k / m);
      }
      c[static_cast<std::size_t>(k)] = 2.0 * s / m;
    }
    c.front() *= 0.5;
    c.back() *= 0.5;
    return Series(a, b, std::move(c));
  }

  static Series fit(const std::function<double(double)>& f, double a, double b, int n) {
    const auto x = lobatto_points(n, a, b);
    std::vector<double> v(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = f(x[i]);
    return from_values(a, b, v);
  }

  double lower() const { return a_; }
  double upper() const { return b_; }
  std::span<const double> coefficients() const { return c_; }
  std::size_t size() const { return c_.size(); }

  /// Drop the trailing coefficients that sit below rel_tol * max|c|.
  Series chopped(double rel_tol) const {
    double scale = 0.0;
    for (double v : c_) scale = std::max(scale, std::abs(v));
    std::size_t keep = c_.size();
    while (keep > 1 && std::abs(c_[keep - 1]) <= rel_tol * scale) --keep;
    return Series(a_, b_, std::vector<double>(c_.begin(), c_.begin() + static_cast<long>(keep)));
  }

  Series derivative() const {
    const std::size_t n = c_.size();
    if (n <= 1) return Series(a_, b_, {0.0});
    std::vector<double> d(n - 1, 0.0);
    // d_{k-1} = d_{k+1} + 2 k c_k
    double dk1 = 0.0;
    double dk2 = 0.0;
    for (std::size_t k = n - 1; k >= 1; --k) {
      const double dk = dk2 + 2.0 * static_cast<double>(k) * c_[k];
      d[k - 1] = dk;
      dk2 = dk1;
      dk1 = dk;
    }
    d[0] *= 0.5;
    const double scale = 2.0 / (b_ - a_);
    for (double& v : d) v *= scale;
    return Series(a_, b_, std::move(d));
  }

  double operator()(double x) const {
    const double t = (2.0 * x - a_ - b_) / (b_ - a_);
    double bk1 = 0.0;
    double bk2 = 0.0;
    for (std::size_t k = c_.size(); k-- > 1;) {
      const double bk = 2.0 * t * bk1 - bk2 + c_[k];
      bk2 = bk1;
      bk1 = bk;
    }
    return t * bk1 - bk2 + c_[0];
  }

private:
  double a_ = -1.0;
  double b_ = 1.0;
  std::vector<double> c_{0.0};
};

/// Barycentric interpolation on Lobatto nodes (weights (-1)^j, halved at ends).
inline double barycentric(std::span<const double> nodes, std::span<const double> values, double x) {
  const std::size_t n = nodes.size();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double diff = x - nodes[j];
    if (diff == 0.0) return values[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j + 1 == n) w *= 0.5;
    w /= diff;
    num += w * values[j];
    den += w;
  }
  return num / den;
}

/// First-derivative matrix (row-major, n x n) for ascending Lobatto nodes on [a, b].
inline std::vector<double> differentiation_matrix(int n, double a, double b) {
  const auto x = lobatto_points(n, -1.0, 1.0);
  std::vector<double> D(static_cast<std::size_t>(n * n), 0.0);
  auto c = [n](int j) { return ((j == 0 || j == n - 1) ? 2.0 : 1.0) * ((j % 2 == 0) ? 1.0 : -1.0); };
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = c(i) / c(j) / (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)]);
      D[static_cast<std::size_t>(i * n + j)] = v;
      diag -= v;
    }
    // Negative-sum trick keeps rows exact on constants.
    D[static_cast<std::size_t>(i * n + i)] = diag;
  }
  const double scale = 2.0 / (b - a);
  for (double& v : D) v *= scale;
  return D;
}

} // namespace mkdv::cheb
