#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>

#include "mkdv/mkdv.hpp"

using namespace mkdv;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> y;
  for (int i = 0; i <= n; ++i) y.push_back(a + (b - a) * i / n);
  return y;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Outcome airy_rays() {
  double err = 0.0, im = 0.0;
  for (double y : {-2.0, -1.0, 0.0, 1.0, 2.0, 3.0})
    for (int j = 0; j < 3; ++j) {
      const cplx q = airy_via_ray_quadrature(y, j);
      err = std::max(err, std::abs(q.real() - airy_eval(y, j)));
      im = std::max(im, std::abs(q.imag()));
    }
  return {err <= 1e-8 && im <= 1e-10, "max |quad - Ai^(j)| " + fmt("%.2e", err) + ", max |Im| " + fmt("%.2e", im)};
}

Outcome model_coefficients() {
  const auto rows = rh_check({-2, -1, 0, 1, 2}, {0, 1}, {0, 1}, true);
  double worst = 0.0, nested = 0.0;
  bool ok = true;
  for (const auto& r : rows) {
    double& w = r.tolerance > 1e-8 ? nested : worst;
    w = std::max(w, r.abs_err);
    ok = ok && r.abs_err <= r.tolerance;
  }
  return {ok, "closed form vs quadrature " + fmt("%.2e", worst) + ", nested vs reduced sigma3 part " + fmt("%.2e", nested)};
}

Outcome painleve_certificate() {
  double res = 0.0, neg = 0.0;
  bool real = true;
  for (double sigma : {0.25, 0.5, 0.75}) {
    const auto a = painleve2_solve(cplx(0.0, sigma), -8.0, 8.0);
    const auto b = painleve2_solve(cplx(0.0, -sigma), -8.0, 8.0);
    res = std::max(res, a.residual_max());
    for (double y : grid(-8.0, 8.0, 320)) {
      neg = std::max(neg, std::abs(a.value(y) + b.value(y)));
      real = real && std::isfinite(a.value(y));
    }
  }
  return {res <= 1e-8 && neg <= 1e-8 && real,
          "residual " + fmt("%.2e", res) + ", s -> -s defect " + fmt("%.2e", neg) + ", values real"};
}

Outcome hierarchy() {
  const auto y = grid(-4.0, 4.0, 160);
  HierarchyInputs two, three, one;
  two.u2 = [](double x) { return 0.7 * airy_eval(x, 1); };
  three.u3 = [](double x) { return 0.7 * x * airy_eval(x, 0); };
  const auto t = std::make_shared<const PainleveSolution>(painleve2_solve(cplx(0.0, 0.5), -8.0, 8.0));
  one.u1 = [&](double x) { return u1_eval(x, *t); };
  const double r2 = max_abs(hierarchy_residual(2, two, y));
  const double r3 = max_abs(hierarchy_residual(3, three, y));
  const double r1 = max_abs(hierarchy_residual(1, one, y));
  return {std::max({r1, r2, r3}) <= 1e-6,
          "j=1 " + fmt("%.2e", r1) + ", j=2 " + fmt("%.2e", r2) + ", j=3 " + fmt("%.2e", r3)};
}

Outcome coefficient_chain() {
  double e = 0.0;
  const ScatteringParameters sp{0.0, 0.31, cplx(0.0, 0.05)};
  const AsymptoticSeries ser(3, 0.0, sp.r0_prime, sp.r0_second);
  const cplx s(0.0, -0.5);
  const auto t = std::make_shared<const PainleveSolution>(painleve2_solve(s, -8.0, 8.0));
  for (double y : grid(-4.0, 4.0, 80)) {
    const auto g = g_coefficients(y, sp);
    const auto g1 = g_coefficients(y, {s, 0.0, 0.0}, 1, t.get());
    e = std::max({e, std::abs(-2.0 * g1.g1.entry(2, 1) - u1_eval(y, *t)),
                  std::abs(-2.0 * g.g2.entry(2, 1) - ser.u2(y)), std::abs(-2.0 * g.g3.entry(2, 1) - ser.u3(y))});
  }
  return {e <= 1e-10, "max |u_j + 2 (g_j)_21| " + fmt("%.2e", e)};
}

ExperimentConfig end_to_end(const std::string& family, std::vector<int> orders) {
  ExperimentConfig c;
  c.family = family;
  c.params.epsilon = 0.05;
  c.t_list = {20, 40, 80, 160};
  c.orders = std::move(orders);
  return c;
}

std::string slope_text(const OrderReport& o) {
  if (!o.fit) return "E" + std::to_string(o.order) + " slope n/a";
  return "E" + std::to_string(o.order) + " slope " + fmt("%.3f", o.fit->slope) + " (target " +
         fmt("%.3f", o.expected_slope) + "; left " + fmt("%.3f", o.fit_left->slope) + ", right " +
         fmt("%.3f", o.fit_right->slope) + ")";
}

bool slope_ok(const OrderReport& o, double tol) { return o.fit && std::abs(o.fit->slope - o.expected_slope) <= tol; }

std::vector<VerificationReport> pde_runs;

Outcome zero_mass_end_to_end() {
  const auto r = run_experiment(end_to_end("zero-mass", {2, 3}));
  pde_runs.push_back(r);
  const bool ok = slope_ok(r.orders[0], 0.15) && slope_ok(r.orders[1], 0.15);
  return {ok, slope_text(r.orders[0]) + ", " + slope_text(r.orders[1]) + ", conventions " +
                  to_string(r.conventions.s_convention) + " / AKNS " + std::to_string(r.conventions.akns_sign)};
}

Outcome sech_end_to_end() {
  auto c = end_to_end("sech", {1});
  c.ratio_check = true;
  const auto r = run_experiment(c);
  pde_runs.push_back(r);
  const auto& o = r.orders[0];
  const bool ratio_ok = o.ratio_y0 && std::abs(*o.ratio_y0 - 1.0) <= 0.10;
  return {slope_ok(o, 0.15) && ratio_ok,
          slope_text(o) + ", ratio at y = 0, t = 160: " + (o.ratio_y0 ? fmt("%.4f", *o.ratio_y0) : "n/a")};
}

double linear_relative_error(double eps) {
  const auto d = sample_datum([=](double x) { return eps / std::cosh(x); }, 40.0, 0.0025);
  PdeOptions o{60.0, 512, 0.01};
  o.sponge = false;
  o.tail_tolerance = 1e300;
  MkdvSolver solver(d, o);
  Snapshot s = solver.snapshot();
  for (std::size_t m = 0; m < s.u_hat.size(); ++m) {
    const double k = std::numbers::pi * static_cast<double>(m) / o.L;
    s.u_hat[m] *= std::polar(1.0, k * k * k * 10.0);
  }
  std::vector<double> xs;
  for (std::size_t j = 0; j < s.u.size(); ++j) xs.push_back(s.x(j));
  const auto lin = sample(s, xs);
  const auto u = evolve(d, {10.0}, o).snapshots[0].u;
  double e = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) e = std::max(e, std::abs(u[j] - lin[j]));
  return e / eps;
}

Outcome pde_health() {
  double drift = 0.0;
  for (const auto& r : pde_runs) drift = std::max({drift, r.max_mass_drift, r.max_l2_drift});
  const double e1 = linear_relative_error(1e-4), e2 = linear_relative_error(5e-5);
  const double drop = e1 / e2;
  const bool ok = !pde_runs.empty() && drift <= 1e-8 && e1 <= 2.0 * 1e-4 * 1e-4 && std::abs(drop - 4.0) <= 0.4;
  return {ok, "max drift " + fmt("%.2e", drift) + " over " + std::to_string(pde_runs.size()) +
                  " runs, linear relative error " + fmt("%.2e", e1) + ", drop under halving " + fmt("%.3f", drop)};
}

Outcome scattering_invariants() {
  double sym = 0.0, sup = 0.0;
  std::vector<double> eps{1e-2, 5e-3, 2.5e-3}, born;
  for (double e : eps) {
    const auto d = builtin_family("sech", {e, 40.0, 0.0025, ""});
    const auto rd = compute_reflection(d, default_k_grid());
    sym = std::max(sym, rd.symmetry_residual);
    sup = std::max(sup, rd.sup_abs);
    double b = 0.0;
    for (std::size_t i = 0; i < rd.k_grid.size(); ++i)
      b = std::max(b, std::abs(rd.r_values[i] - born_reflection(d, rd.k_grid[i])));
    born.push_back(b / e);
  }
  const auto zm = compute_reflection(builtin_family("zero-mass", {0.05, 40.0, 0.0025, ""}), default_k_grid());
  sym = std::max(sym, zm.symmetry_residual);
  sup = std::max(sup, zm.sup_abs);
  const double slope = loglog_slope(eps, born);
  const double r0 = std::abs(zm.r0);
  return {sym <= 1e-10 && sup < 1.0 && std::abs(slope - 2.0) <= 0.1 && r0 <= 1e-10,
          "symmetry " + fmt("%.2e", sym) + ", sup|r| " + fmt("%.4f", sup) + ", Born slope " + fmt("%.3f", slope) +
              ", zero-mass |r(0)| " + fmt("%.2e", r0)};
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "Airy ray integrals", 5, airy_rays},
      {2, "model coefficients", 60, model_coefficients},
      {3, "Painleve II certificate", 30, painleve_certificate},
      {4, "hierarchy residuals", 10, hierarchy},
      {5, "coefficient chain", 5, coefficient_chain},
      {6, "end-to-end, zero-mass data", 600, zero_mass_end_to_end},
      {7, "end-to-end, sech data", 600, sech_end_to_end},
      {8, "PDE oracle health", 120, pde_health},
      {9, "scattering invariants", 60, scattering_invariants},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs <= c.budget_s;
    failed += pass ? 0 : 1;
    std::printf("criterion %d %s  %s: %s [%.1f s]\n", c.id, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of 9 criteria pass\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
