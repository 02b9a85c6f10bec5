#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include <fftw3.h>

#include "mkdv/error.hpp"
#include "mkdv/mat2.hpp"
#include "mkdv/scattering.hpp"

namespace mkdv {

struct PdeOptions {
  double L = 1200.0;     // domain is [-L, L)
  int N = 1 << 15;       // Fourier modes, power of two
  double dt = 0.01;
  bool sponge = true;    // absorbing layer next to the periodic seam
  double sponge_fraction = 0.15;
  double sponge_strength = 5.0;
  double tail_fraction = 0.05;
  double tail_tolerance = 1e-10;
  double drift_tolerance = 1e-8;
};

/// Solution at one time, kept in Fourier form (r2c layout, unnormalized).
struct Snapshot {
  double t = 0.0;
  double L = 0.0;
  int N = 0;
  std::vector<cplx> u_hat;
  std::vector<double> u;  // grid values at x_j = -L + 2 L j / N
  double mass = 0.0;
  double l2 = 0.0;
  double absorbed_mass = 0.0;
  double absorbed_l2 = 0.0;
  double mass_drift = 0.0; // |mass + absorbed - mass0| / int |u0|
  double l2_drift = 0.0;   // |l2 + absorbed - l2_0| / l2_0
  double tail_energy = 0.0;

  double x(std::size_t j) const { return -L + 2.0 * L * static_cast<double>(j) / N; }
};

namespace pde_detail {

inline std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

// One r2c/c2r pair with its own aligned buffers.
class Fft {
public:
  explicit Fft(int n) : n_(n) {
    real_.reset(static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(n))));
    spec_.reset(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * static_cast<std::size_t>(n / 2 + 1))));
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(n, real_.get(), spec_.get(), FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(n, spec_.get(), real_.get(), FFTW_ESTIMATE);
  }
  ~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  double* real() { return real_.get(); }
  cplx* spec() { return reinterpret_cast<cplx*>(spec_.get()); }
  void forward() { fftw_execute(fwd_); }
  // c2r destroys its input; callers refill spec() before every use.
  void backward() {
    fftw_execute(bwd_);
    const double s = 1.0 / n_;
    double* r = real_.get();
    for (int i = 0; i < n_; ++i) r[i] *= s;
  }

private:
  int n_;
  std::unique_ptr<double, FftwDeleter> real_;
  std::unique_ptr<fftw_complex, FftwDeleter> spec_;
  fftw_plan fwd_{};
  fftw_plan bwd_{};
};

} // namespace pde_detail

/// Integrating-factor RK4 solver for u_t = 6 u^2 u_x - u_xxx on [-L, L),
/// written as  u_hat_t = i k^3 u_hat + 2 i k F[u^3] - F[sigma u].
class MkdvSolver {
public:
  MkdvSolver(const InitialDatum& datum, const PdeOptions& opt) : opt_(opt), fft_(opt.N) {
    if (opt.N < 16 || (opt.N & (opt.N - 1)) != 0) throw DomainError("N must be a power of two >= 16");
    if (!(opt.L > 0.0) || !(opt.dt > 0.0)) throw DomainError("L and dt must be positive");
    const std::size_t n = static_cast<std::size_t>(opt.N);
    const std::size_t h = n / 2 + 1;
    dx_ = 2.0 * opt.L / opt.N;
    k_.resize(h);
    mask_.resize(h);
    for (std::size_t m = 0; m < h; ++m) {
      k_[m] = std::numbers::pi * static_cast<double>(m) / opt.L;
      mask_[m] = (3 * m < n) ? 1.0 : 0.0; // 2/3 rule; drops the Nyquist mode too
    }
    sigma_.assign(n, 0.0);
    if (opt.sponge) {
      const double inner = (1.0 - opt.sponge_fraction) * opt.L;
      for (std::size_t j = 0; j < n; ++j) {
        const double ax = std::abs(x(j));
        if (ax <= inner) continue;
        const double s = std::min((ax - inner) / (opt.L - inner), 1.0);
        const double r = std::sin(0.5 * std::numbers::pi * s);
        sigma_[j] = opt.sponge_strength * r * r;
      }
    }
    double* u = fft_.real();
    double l1 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      u[j] = datum.at(x(j));
      l1 += std::abs(u[j]);
    }
    fft_.forward();
    uh_.assign(fft_.spec(), fft_.spec() + h);
    for (std::size_t m = 0; m < h; ++m) uh_[m] *= mask_[m];
    to_physical(uh_, grid_);
    mass0_ = integral(grid_, 1);
    l2_0_ = integral(grid_, 2);
    l1_0_ = l1 * dx_;
    umax0_ = max_abs(grid_);
    half_.resize(h);
    full_.resize(h);
    tmp_.resize(h);
    set_step(opt.dt);
  }

  double time() const { return t_; }
  const PdeOptions& options() const { return opt_; }
  double x(std::size_t j) const { return -opt_.L + dx_ * static_cast<double>(j); }

  /// Step to exactly `target` (last step shortened) and return the snapshot.
  Snapshot advance_to(double target) {
    if (target < t_) throw DomainError("targets must be ascending");
    while (t_ < target) {
      const double remaining = target - t_;
      const long steps = static_cast<long>(std::ceil(remaining / opt_.dt - 1e-9));
      const double h = remaining / static_cast<double>(steps);
      set_step(h);
      for (long s = 0; s < steps; ++s) step();
      t_ = target;
    }
    return snapshot();
  }

  Snapshot snapshot() {
    Snapshot s;
    s.t = t_;
    s.L = opt_.L;
    s.N = opt_.N;
    s.u_hat = uh_;
    to_physical(uh_, s.u);
    s.mass = integral(s.u, 1);
    s.l2 = integral(s.u, 2);
    s.absorbed_mass = absorbed_mass_;
    s.absorbed_l2 = absorbed_l2_;
    s.mass_drift = l1_0_ > 0.0 ? std::abs(s.mass + absorbed_mass_ - mass0_) / l1_0_ : 0.0;
    s.l2_drift = l2_0_ > 0.0 ? std::abs(s.l2 + absorbed_l2_ - l2_0_) / l2_0_ : 0.0;
    const double edge = (1.0 - opt_.tail_fraction) * opt_.L;
    for (std::size_t j = 0; j < s.u.size(); ++j)
      if (std::abs(x(j)) >= edge) s.tail_energy += s.u[j] * s.u[j] * dx_;
    return s;
  }

private:
  void set_step(double h) {
    if (h == h_) return;
    h_ = h;
    for (std::size_t m = 0; m < k_.size(); ++m) {
      const double k3 = k_[m] * k_[m] * k_[m];
      half_[m] = std::polar(1.0, 0.5 * h * k3);
      full_[m] = std::polar(1.0, h * k3);
    }
  }

  void to_physical(const std::vector<cplx>& vh, std::vector<double>& out) {
    std::copy(vh.begin(), vh.end(), fft_.spec());
    fft_.backward();
    out.assign(fft_.real(), fft_.real() + opt_.N);
  }

  double integral(const std::vector<double>& u, int power) const {
    double s = 0.0;
    for (double v : u) s += power == 1 ? v : v * v;
    return s * dx_;
  }

  static double max_abs(const std::vector<double>& u) {
    double m = 0.0;
    for (double v : u) m = std::max(m, std::abs(v));
    return m;
  }

  // Nonlinear and damping terms; also returns d/dt of the absorbed mass and L2.
  void rhs(const std::vector<cplx>& vh, std::vector<cplx>& out, double& dmass, double& dl2) {
    to_physical(vh, work_);
    const std::size_t n = work_.size();
    double* r = fft_.real();
    for (std::size_t j = 0; j < n; ++j) {
      const double u = work_[j];
      if (!std::isfinite(u) || std::abs(u) > 1e3 * (umax0_ + 1.0))
        throw InstabilityError("solution blew up at t = " + num(t_));
      r[j] = u * u * u;
    }
    fft_.forward();
    const cplx* c = fft_.spec();
    out.resize(k_.size());
    for (std::size_t m = 0; m < k_.size(); ++m) out[m] = 2.0 * kI * k_[m] * c[m] * mask_[m];
    dmass = 0.0;
    dl2 = 0.0;
    if (!opt_.sponge) return;
    for (std::size_t j = 0; j < n; ++j) {
      const double su = sigma_[j] * work_[j];
      r[j] = su;
      dmass += su;
      dl2 += 2.0 * su * work_[j];
    }
    dmass *= dx_;
    dl2 *= dx_;
    fft_.forward();
    for (std::size_t m = 0; m < k_.size(); ++m) out[m] -= c[m] * mask_[m];
  }

  void step() {
    const std::size_t h = k_.size();
    const double dt = h_;
    double ma, la, mb, lb, mc, lc, md, ld;
    rhs(uh_, a_, ma, la);
    for (std::size_t m = 0; m < h; ++m) tmp_[m] = half_[m] * (uh_[m] + 0.5 * dt * a_[m]);
    rhs(tmp_, b_, mb, lb);
    for (std::size_t m = 0; m < h; ++m) tmp_[m] = half_[m] * uh_[m] + 0.5 * dt * b_[m];
    rhs(tmp_, c_, mc, lc);
    for (std::size_t m = 0; m < h; ++m) tmp_[m] = full_[m] * uh_[m] + half_[m] * dt * c_[m];
    rhs(tmp_, d_, md, ld);
    for (std::size_t m = 0; m < h; ++m)
      uh_[m] = full_[m] * uh_[m] +
               dt / 6.0 * (full_[m] * a_[m] + 2.0 * half_[m] * (b_[m] + c_[m]) + d_[m]);
    absorbed_mass_ += dt / 6.0 * (ma + 2.0 * mb + 2.0 * mc + md);
    absorbed_l2_ += dt / 6.0 * (la + 2.0 * lb + 2.0 * lc + ld);
    t_ += dt;
  }

  PdeOptions opt_;
  pde_detail::Fft fft_;
  double dx_ = 0.0;
  double t_ = 0.0;
  double h_ = -1.0;
  std::vector<double> k_, mask_, sigma_;
  std::vector<cplx> uh_, half_, full_;
  std::vector<cplx> a_, b_, c_, d_;
  std::vector<cplx> tmp_;
  std::vector<double> grid_, work_;
  double mass0_ = 0.0, l2_0_ = 0.0, l1_0_ = 0.0, umax0_ = 0.0;
  double absorbed_mass_ = 0.0, absorbed_l2_ = 0.0;
};

struct EvolutionResult {
  PdeOptions options;
  std::vector<Snapshot> snapshots;
  double max_mass_drift = 0.0;
  double max_l2_drift = 0.0;
  double max_tail_energy = 0.0;
};

/// Evolve to each target time. Rejects the run on seam contamination or on
/// conservation drift beyond tolerance.
inline EvolutionResult evolve(const InitialDatum& datum, const std::vector<double>& t_targets,
                              const PdeOptions& opt = {}) {
  for (std::size_t i = 0; i < t_targets.size(); ++i) {
    if (!(t_targets[i] >= 0.0)) throw DomainError("target times must be non-negative");
    if (i && !(t_targets[i] > t_targets[i - 1])) throw DomainError("target times must be ascending");
  }
  MkdvSolver solver(datum, opt);
  EvolutionResult res;
  res.options = opt;
  for (double t : t_targets) {
    Snapshot s = solver.advance_to(t);
    if (s.tail_energy > opt.tail_tolerance)
      throw WrapAroundError("tail energy " + num(s.tail_energy) + " near the seam at t = " +
                            num(t));
    if (s.mass_drift > opt.drift_tolerance || s.l2_drift > opt.drift_tolerance)
      throw InstabilityError("conservation drift (mass " + num(s.mass_drift) + ", L2 " +
                             num(s.l2_drift) + ") at t = " + num(t));
    res.max_mass_drift = std::max(res.max_mass_drift, s.mass_drift);
    res.max_l2_drift = std::max(res.max_l2_drift, s.l2_drift);
    res.max_tail_energy = std::max(res.max_tail_energy, s.tail_energy);
    res.snapshots.push_back(std::move(s));
  }
  return res;
}

/// Trigonometric interpolation of a snapshot at arbitrary points in [-L, L).
inline std::vector<double> sample(const Snapshot& s, const std::vector<double>& xs) {
  std::vector<double> out(xs.size(), 0.0);
  const int half = s.N / 2;
  for (std::size_t p = 0; p < xs.size(); ++p) {
    const double x = xs[p];
    if (!(x >= -s.L && x < s.L)) throw DomainError("sample point " + num(x) + " outside the domain");
    const double th = std::numbers::pi * (x + s.L) / s.L;
    const cplx step = std::polar(1.0, th);
    cplx e = step;
    double acc = s.u_hat[0].real();
    for (int m = 1; m < half; ++m) {
      acc += 2.0 * (s.u_hat[static_cast<std::size_t>(m)] * e).real();
      if (m % 64 == 0) e = std::polar(1.0, th * (m + 1));
      else e *= step;
    }
    acc += (s.u_hat[static_cast<std::size_t>(half)] * std::polar(1.0, th * half)).real();
    out[p] = acc / s.N;
  }
  return out;
}

} // namespace mkdv
