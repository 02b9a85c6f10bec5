#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "mkdv/error.hpp"

namespace mkdv::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Nodes by Newton iteration on P_n from the Chebyshev initial guesses.
inline GaussRule make_gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs n >= 1");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

/// Cached rule; thread-safe.
inline const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

/// Composite Gauss-Legendre over consecutive breakpoints.
template <class F>
auto integrate_panels(F&& f, std::span<const double> breaks, int n) {
  using R = decltype(f(0.0));
  const GaussRule& g = gauss_legendre(n);
  R sum{};
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p];
    const double b = breaks[p + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    R panel{};
    for (std::size_t i = 0; i < g.nodes.size(); ++i) panel += g.weights[i] * f(mid + half * g.nodes[i]);
    sum += half * panel;
  }
  return sum;
}

/// Uniform composite rule on [a, b] with `panels` panels.
template <class F>
auto integrate_uniform(F&& f, double a, double b, int panels, int n) {
  std::vector<double> br(static_cast<std::size_t>(panels) + 1);
  for (int i = 0; i <= panels; ++i) br[static_cast<std::size_t>(i)] = a + (b - a) * i / panels;
  return integrate_panels(std::forward<F>(f), br, n);
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive bisection with a 15/30-point Gauss comparison per interval.
template <class F>
AdaptiveResult integrate_adaptive(F&& f, double a, double b, double tol, int max_depth = 40) {
  const GaussRule& lo = gauss_legendre(15);
  const GaussRule& hi = gauss_legendre(30);
  auto rule = [&](const GaussRule& g, double x0, double x1) {
    const double half = 0.5 * (x1 - x0);
    const double mid = 0.5 * (x0 + x1);
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * f(mid + half * g.nodes[i]);
    return half * s;
  };
  AdaptiveResult out;
  struct Job {
    double a, b;
    int depth;
  };
  std::vector<Job> stack{{a, b, 0}};
  while (!stack.empty()) {
    const Job job = stack.back();
    stack.pop_back();
    const double coarse = rule(lo, job.a, job.b);
    const double fine = rule(hi, job.a, job.b);
    const double err = std::abs(fine - coarse);
    const double local_tol = tol * (job.b - job.a) / (b - a);
    if (err <= std::max(local_tol, 1e-17) || job.depth >= max_depth) {
      out.value += fine;
      out.error += err;
      continue;
    }
    const double m = 0.5 * (job.a + job.b);
    stack.push_back({m, job.b, job.depth + 1});
    stack.push_back({job.a, m, job.depth + 1});
  }
  return out;
}

} // namespace mkdv::quad
