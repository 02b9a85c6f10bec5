#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "mkdv/airy.hpp"
#include "mkdv/chebyshev.hpp"
#include "mkdv/error.hpp"
#include "mkdv/mat2.hpp"
#include "mkdv/quadrature.hpp"

namespace mkdv {

/// Connection coefficient: u_P(y; s, 0, -s) ~ alpha(s) Ai(y) as y -> +inf.
inline double connection_coefficient(cplx s) { return (kI * s).real(); }

/// Throws unless s is purely imaginary with |s| < 1.
inline void check_stokes_parameter(cplx s) {
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("s must be finite");
  if (std::abs(s.real()) > 1e-12 * std::max(1.0, std::abs(s)))
    throw DomainError("s must be purely imaginary");
  if (std::abs(s) >= 1.0) throw DomainError("|s| must be below 1");
}

struct PainleveOptions {
  double panel_width = 0.5;
  int nodes_per_panel = 20;
  double anchor_min = 10.0;
  double rel_tol = 1e-13;
  double abs_tol = 1e-24;
  double blowup = 1e3;
};

/// Real Ablowitz-Segur solution of u'' = y u + 2 u^3, tabulated on Chebyshev
/// panels between y_min and the anchor point and continued by alpha Ai(y)
/// to the right of the anchor.
class PainleveSolution {
public:
  PainleveSolution() = default;

  cplx s() const { return s_; }
  double alpha() const { return alpha_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  double anchor() const { return anchor_; }
  double residual_max() const { return residual_max_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& derivs() const { return derivs_; }

  double value(double y) const { return eval(y, 0); }
  double deriv(double y) const { return eval(y, 1); }
  double second(double y) const { return eval(y, 2); }

  /// Integral of u_P^2 over [y, inf).
  double integral_sq_tail(double y) const {
    check_range(y);
    const double a2 = alpha_ * alpha_;
    auto airy_sq_tail = [](double x) {
      const AiryTriple t = airy_triple(x);
      return t.ai_prime * t.ai_prime - x * t.ai * t.ai;
    };
    if (y >= anchor_) return a2 * airy_sq_tail(y);
    const std::size_t p = panel_of(y);
    const double hi = breaks_[p + 1];
    auto f = [&](double x) {
      const double v = eval_panel(p, x, 0);
      return v * v;
    };
    const double br[2] = {y, hi};
    return quad::integrate_panels(f, br, 30) + cumulative_[p + 1] + a2 * airy_sq_tail(anchor_);
  }

  friend PainleveSolution painleve2_solve(cplx s, double y_min, double y_max, const PainleveOptions& opt);

private:
  void check_range(double y) const {
    if (!(y >= y_min_)) throw RangeError("y = " + num(y) + " lies left of the Painleve table");
  }

  std::size_t panel_of(double y) const {
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), y);
    std::size_t p = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - breaks_.begin() - 1, 0));
    return std::min(p, breaks_.size() - 2);
  }

  std::span<const double> panel_span(const std::vector<double>& v, std::size_t p) const {
    const std::size_t n = static_cast<std::size_t>(nodes_);
    return {v.data() + p * (n - 1), n};
  }

  double eval_panel(std::size_t p, double y, int order) const {
    const auto x = panel_span(grid_, p);
    const auto& src = order == 0 ? values_ : (order == 1 ? derivs_ : seconds_);
    return cheb::barycentric(x, panel_span(src, p), y);
  }

  double eval(double y, int order) const {
    check_range(y);
    if (y >= anchor_) return alpha_ * airy_eval(y, order);
    return eval_panel(panel_of(y), y, order);
  }

  cplx s_{};
  double alpha_ = 0.0;
  double y_min_ = 0.0;
  double y_max_ = 0.0;
  double anchor_ = 0.0;
  int nodes_ = 0;
  std::vector<double> breaks_;
  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  std::vector<double> seconds_;
  std::vector<double> cumulative_; // integral of u^2 from breaks_[p] to the anchor
  double residual_max_ = 0.0;
};

/// Shoot leftward from the anchor max(y_max, anchor_min) with data
/// (alpha Ai, alpha Ai') and tabulate on [y_min, anchor].
inline PainleveSolution painleve2_solve(cplx s, double y_min, double y_max, const PainleveOptions& opt = {}) {
  check_stokes_parameter(s);
  if (!(y_min < y_max)) throw DomainError("need y_min < y_max");
  if (y_max < 6.0) throw DomainError("y_max must be at least 6 so the Airy tail anchors the solution");

  PainleveSolution sol;
  sol.s_ = cplx(0.0, s.imag());
  sol.alpha_ = connection_coefficient(sol.s_);
  sol.y_min_ = y_min;
  sol.y_max_ = y_max;
  sol.anchor_ = std::max(y_max, opt.anchor_min);
  sol.nodes_ = opt.nodes_per_panel;

  const int panels = static_cast<int>(std::ceil((sol.anchor_ - y_min) / opt.panel_width));
  sol.breaks_.resize(static_cast<std::size_t>(panels) + 1);
  for (int p = 0; p <= panels; ++p)
    sol.breaks_[static_cast<std::size_t>(p)] = y_min + (sol.anchor_ - y_min) * p / panels;
  sol.breaks_.back() = sol.anchor_;

  const std::size_t n = static_cast<std::size_t>(opt.nodes_per_panel);
  for (int p = 0; p < panels; ++p) {
    const auto x = cheb::lobatto_points(opt.nodes_per_panel, sol.breaks_[static_cast<std::size_t>(p)],
                                        sol.breaks_[static_cast<std::size_t>(p) + 1]);
    sol.grid_.insert(sol.grid_.end(), x.begin() + (p == 0 ? 0 : 1), x.end());
  }
  const std::size_t total = sol.grid_.size();
  sol.values_.assign(total, 0.0);
  sol.derivs_.assign(total, 0.0);

  if (sol.alpha_ != 0.0) {
    using State = std::array<double, 2>;
    namespace ode = boost::numeric::odeint;
    auto rhs = [](const State& u, State& du, double y) {
      du[0] = u[1];
      du[1] = y * u[0] + 2.0 * u[0] * u[0] * u[0];
    };
    const AiryTriple a = airy_triple(sol.anchor_);
    State state{sol.alpha_ * a.ai, sol.alpha_ * a.ai_prime};
    std::vector<double> times(sol.grid_.rbegin(), sol.grid_.rend());
    std::size_t idx = total;
    auto observer = [&](const State& u, double) {
      if (!std::isfinite(u[0]) || std::abs(u[0]) > opt.blowup)
        throw SolverError("Painleve shot diverged near y = " + num(sol.grid_[idx - 1]) +
                          " (|u| = " + num(std::abs(u[0])) + ")");
      --idx;
      sol.values_[idx] = u[0];
      sol.derivs_[idx] = u[1];
    };
    auto stepper = ode::make_controlled(opt.abs_tol, opt.rel_tol, ode::runge_kutta_fehlberg78<State>());
    ode::integrate_times(stepper, rhs, state, times.begin(), times.end(), -0.01, observer);
  }

  // Second derivatives from the u' interpolant, the residual certificate and
  // the cumulative integral of u^2.
  sol.seconds_.assign(total, 0.0);
  sol.cumulative_.assign(static_cast<std::size_t>(panels) + 1, 0.0);
  double res = 0.0;
  for (int p = panels - 1; p >= 0; --p) {
    const std::size_t pp = static_cast<std::size_t>(p);
    const double lo = sol.breaks_[pp];
    const double hi = sol.breaks_[pp + 1];
    const auto D = cheb::differentiation_matrix(opt.nodes_per_panel, lo, hi);
    const auto x = sol.panel_span(sol.grid_, pp);
    const auto d1 = sol.panel_span(sol.derivs_, pp);
    std::vector<double> d2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d2[i] += D[i * n + j] * d1[j];
    for (std::size_t i = 0; i < n; ++i) sol.seconds_[pp * (n - 1) + i] = d2[i];
    auto residual_at = [&](double y, double u, double upp) {
      if (y < sol.y_min_ || y > sol.y_max_) return;
      res = std::max(res, std::abs(upp - y * u - 2.0 * u * u * u));
    };
    const auto u = sol.panel_span(sol.values_, pp);
    for (std::size_t i = 0; i < n; ++i) residual_at(x[i], u[i], d2[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double m = 0.5 * (x[i] + x[i + 1]);
      residual_at(m, cheb::barycentric(x, u, m), cheb::barycentric(x, d2, m));
    }
    auto sq = [&](double y) {
      const double v = cheb::barycentric(x, u, y);
      return v * v;
    };
    const double br[2] = {lo, hi};
    sol.cumulative_[pp] = sol.cumulative_[pp + 1] + quad::integrate_panels(sq, br, 30);
  }
  sol.residual_max_ = res;
  return sol;
}

} // namespace mkdv
