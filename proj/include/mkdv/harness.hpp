#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <boost/version.hpp>
#include <fftw3.h>

#include "mkdv/asymptotics.hpp"
#include "mkdv/error.hpp"
#include "mkdv/io.hpp"
#include "mkdv/parallel.hpp"
#include "mkdv/pde_reference.hpp"
#include "mkdv/rh_model.hpp"
#include "mkdv/scattering.hpp"
#include "mkdv/special.hpp"

namespace mkdv {

// ---------------------------------------------------------------------------
// Initial data.

struct FamilyParams {
  double epsilon = 0.05;
  double half_width = 40.0;
  double dx = 0.0025;
  std::string csv_path;
};

inline const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"sech", "gaussian", "zero-mass", "custom-csv"};
  return names;
}

/// sech: eps sech x (mass eps pi); gaussian: eps exp(-x^2) (mass eps sqrt(pi));
/// zero-mass: eps d/dx sech x (mass 0); custom-csv: columns x, u0.
inline InitialDatum builtin_family(const std::string& name, const FamilyParams& p = {}) {
  const double e = p.epsilon;
  if (name == "custom-csv") {
    if (p.csv_path.empty()) throw UsageError("custom-csv needs a file path");
    const io::Table t = io::read_csv(p.csv_path);
    return make_datum(t.column("x"), t.column("u0"));
  }
  std::function<double(double)> f;
  if (name == "sech") f = [e](double x) { return e / std::cosh(x); };
  else if (name == "gaussian") f = [e](double x) { return e * std::exp(-x * x); };
  else if (name == "zero-mass") f = [e](double x) { return -e * std::tanh(x) / std::cosh(x); };
  else throw UsageError("unknown family '" + name + "'");
  return sample_datum(std::move(f), p.half_width, p.dx);
}

// ---------------------------------------------------------------------------
// Slope fits.

struct SlopeFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double intercept = 0.0;
};

/// Least-squares slope of log(errs) against log(ts) with its standard error.
inline SlopeFit fit_slope(const std::vector<double>& ts, const std::vector<double>& errs) {
  if (ts.size() != errs.size()) throw DegenerateFitError("times and errors differ in length");
  if (ts.size() < 4) throw DegenerateFitError("a slope needs at least 4 points");
  const std::size_t n = ts.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(ts[i] > 0.0)) throw DegenerateFitError("times must be positive");
    if (!(errs[i] > 0.0)) throw DegenerateFitError("error values must be positive");
    lx[i] = std::log(ts[i]);
    ly[i] = std::log(errs[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw DegenerateFitError("times must not all coincide");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - f.intercept - f.slope * lx[i];
    rss += r * r;
  }
  f.stderr_ = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  return f;
}

// ---------------------------------------------------------------------------
// Conventions.

enum class SConvention { RZero, IRZero };

inline std::string to_string(SConvention c) { return c == SConvention::RZero ? "s = r(0)" : "s = i r(0)"; }

struct Conventions {
  SConvention s_convention = SConvention::RZero;
  int akns_sign = +1;
};

/// s from r(0) under a convention; |s| <= 1e-10 is treated as exactly 0.
inline cplx stokes_parameter(cplx r0, SConvention c) {
  cplx s = c == SConvention::RZero ? r0 : kI * r0;
  if (std::abs(s) <= 1e-10) s = 0.0;
  return s;
}

// ---------------------------------------------------------------------------
// Experiments.

struct Tolerances {
  double slope = 0.15;
  double ratio = 0.10;
  double drift = 1e-8;

  static Tolerances profile(const std::string& name) {
    if (name == "default") return {};
    if (name == "strict") return {0.10, 0.05, 1e-8};
    throw UsageError("unknown tolerance profile '" + name + "'");
  }
};

struct ExperimentConfig {
  std::string family = "zero-mass";
  FamilyParams params;
  double M = 2.0;
  std::vector<double> t_list{20.0, 40.0, 80.0, 160.0};
  std::vector<int> orders{2};
  int y_points = 201;
  PdeOptions pde{1200.0, 1 << 15, 0.02};
  Tolerances tol;
  bool ratio_check = false;
  std::optional<Conventions> conventions; // unset: auto-probe
  int threads = 1;

  void validate() const {
    if (!(M > 0.0)) throw UsageError("M must be positive");
    if (t_list.empty()) throw UsageError("t_list is empty");
    for (std::size_t i = 0; i < t_list.size(); ++i) {
      if (!(t_list[i] >= 1.0)) throw UsageError("times must be at least 1");
      if (i && !(t_list[i] > t_list[i - 1])) throw UsageError("times must be ascending");
    }
    if (orders.empty()) throw UsageError("no expansion orders requested");
    for (int n : orders)
      if (n < 1 || n > 3) throw UsageError("expansion orders must lie in {1, 2, 3}");
    if (y_points < 3) throw UsageError("y_points must be at least 3");
  }

  io::json to_json() const {
    io::json j;
    j["family"] = family;
    j["epsilon"] = params.epsilon;
    j["half_width"] = params.half_width;
    j["dx"] = params.dx;
    if (!params.csv_path.empty()) j["csv"] = params.csv_path;
    j["M"] = M;
    j["t_list"] = t_list;
    j["orders"] = orders;
    j["y_points"] = y_points;
    j["pde"] = {{"L", pde.L}, {"N", pde.N}, {"dt", pde.dt}, {"sponge", pde.sponge},
                {"sponge_fraction", pde.sponge_fraction}, {"sponge_strength", pde.sponge_strength},
                {"tail_fraction", pde.tail_fraction}, {"tail_tolerance", pde.tail_tolerance}};
    j["tolerances"] = {{"slope", tol.slope}, {"ratio", tol.ratio}, {"drift", tol.drift}};
    j["ratio_check"] = ratio_check;
    if (conventions) {
      j["s_convention"] = conventions->s_convention == SConvention::RZero ? "r0" : "i_r0";
      j["akns_sign"] = conventions->akns_sign;
    } else {
      j["s_convention"] = "auto";
      j["akns_sign"] = "auto";
    }
    return j;
  }

  /// Overlay keys present in `j` onto this config.
  void merge_json(const io::json& j) {
    try {
      if (j.contains("family")) family = j["family"].get<std::string>();
      if (j.contains("epsilon")) params.epsilon = j["epsilon"].get<double>();
      if (j.contains("half_width")) params.half_width = j["half_width"].get<double>();
      if (j.contains("dx")) params.dx = j["dx"].get<double>();
      if (j.contains("csv")) params.csv_path = j["csv"].get<std::string>();
      if (j.contains("M")) M = j["M"].get<double>();
      if (j.contains("t_list")) t_list = j["t_list"].get<std::vector<double>>();
      if (j.contains("order")) orders = {j["order"].get<int>()};
      if (j.contains("orders")) orders = j["orders"].get<std::vector<int>>();
      if (j.contains("y_points")) y_points = j["y_points"].get<int>();
      if (j.contains("ratio_check")) ratio_check = j["ratio_check"].get<bool>();
      if (j.contains("pde")) {
        const auto& p = j["pde"];
        if (p.contains("L")) pde.L = p["L"].get<double>();
        if (p.contains("N")) pde.N = p["N"].get<int>();
        if (p.contains("dt")) pde.dt = p["dt"].get<double>();
        if (p.contains("sponge")) pde.sponge = p["sponge"].get<bool>();
        if (p.contains("sponge_fraction")) pde.sponge_fraction = p["sponge_fraction"].get<double>();
        if (p.contains("sponge_strength")) pde.sponge_strength = p["sponge_strength"].get<double>();
        if (p.contains("tail_fraction")) pde.tail_fraction = p["tail_fraction"].get<double>();
        if (p.contains("tail_tolerance")) pde.tail_tolerance = p["tail_tolerance"].get<double>();
      }
      if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (t.contains("slope")) tol.slope = t["slope"].get<double>();
        if (t.contains("ratio")) tol.ratio = t["ratio"].get<double>();
        if (t.contains("drift")) tol.drift = t["drift"].get<double>();
      }
      const bool has_s = j.contains("s_convention") && j["s_convention"] != "auto";
      const bool has_a = j.contains("akns_sign") && j["akns_sign"].is_number();
      if (has_s || has_a) {
        Conventions c = conventions.value_or(Conventions{});
        if (has_s) {
          const auto v = j["s_convention"].get<std::string>();
          if (v == "r0") c.s_convention = SConvention::RZero;
          else if (v == "i_r0") c.s_convention = SConvention::IRZero;
          else throw UsageError("s_convention must be r0, i_r0 or auto");
        }
        if (has_a) c.akns_sign = j["akns_sign"].get<int>() >= 0 ? 1 : -1;
        conventions = c;
      }
    } catch (const io::json::exception& e) {
      throw UsageError(std::string("bad config: ") + e.what());
    }
  }
};

/// Errors at one time for one truncation order.
struct TimeErrors {
  double t = 0.0;
  double E = 0.0;
  double E_left = 0.0;  // y <= 0
  double E_right = 0.0; // y >= 0
  double u_pde_y0 = 0.0;
  double series_y0 = 0.0;
};

struct OrderReport {
  int order = 1;
  double expected_slope = 0.0;
  std::vector<TimeErrors> times;
  std::optional<SlopeFit> fit, fit_left, fit_right;
  bool trivially_zero = false;
  bool pass_slope = false;
  bool pass_left = false;
  bool pass_right = false;
  std::optional<double> ratio_y0; // u_pde / series at y = 0, last t
  bool pass_ratio = true;
};

struct ProbeCandidate {
  Conventions conventions;
  double relative_error = 0.0;
  std::string note;
  bool pass = false;
};

struct ProbeResult {
  std::vector<ProbeCandidate> candidates;
  Conventions selected;
  bool resolved = false;
};

struct VerificationReport {
  ExperimentConfig config;
  Conventions conventions;
  std::optional<ProbeResult> probe;
  ReflectionData reflection;
  cplx s{};
  double alpha = 0.0;
  double painleve_residual = 0.0;
  std::vector<OrderReport> orders;
  double max_mass_drift = 0.0;
  double max_l2_drift = 0.0;
  double max_tail_energy = 0.0;
  bool pass_pde = false;
  bool pass = false;
  // Sector profiles per t: y, u_pde, and the series at each requested order.
  std::vector<io::Table> profiles;
};

inline std::vector<double> sector_grid(double M, int points) {
  const double ymax = M / kCbrt3;
  std::vector<double> y(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    y[static_cast<std::size_t>(i)] = -ymax + 2.0 * ymax * i / (points - 1);
  }
  y[static_cast<std::size_t>(points / 2)] = points % 2 ? 0.0 : y[static_cast<std::size_t>(points / 2)];
  return y;
}

namespace harness_detail {

struct Pipeline {
  ReflectionData rd;
  cplx s{};
  std::shared_ptr<const PainleveSolution> table;
};

inline Pipeline scattering_side(const InitialDatum& d, const Conventions& c, double M, int threads) {
  ScatteringOptions so;
  so.akns_sign = c.akns_sign;
  so.threads = threads;
  Pipeline p;
  p.rd = compute_reflection(d, default_k_grid(), so);
  p.s = stokes_parameter(p.rd.r0, c.s_convention);
  try {
    check_stokes_parameter(p.s);
  } catch (const DomainError& e) {
    throw ConventionError(to_string(c.s_convention) + " gives an inadmissible s: " + e.what());
  }
  const double ylo = std::min(-8.0, -M / kCbrt3 - 2.0);
  p.table = std::make_shared<const PainleveSolution>(painleve2_solve(p.s, ylo, 8.0));
  return p;
}

} // namespace harness_detail

/// N = 1 comparison on a cheap sech run under all four combinations of the
/// s-definition and the AKNS sign. A candidate passes when the relative sup
/// error in the sector at the last time is below 25%.
inline ProbeResult probe_conventions(int threads = 1) {
  static std::mutex mu;
  static std::optional<ProbeResult> cache;
  std::lock_guard lock(mu);
  if (cache) return *cache;

  FamilyParams fp;
  fp.epsilon = 0.05;
  const InitialDatum d = builtin_family("sech", fp);
  PdeOptions po{400.0, 1 << 13, 0.02};
  po.tail_tolerance = 1e-6;
  const double t = 20.0;
  const EvolutionResult ev = evolve(d, {t}, po);
  const double M = 2.0;
  const auto ys = sector_grid(M, 41);
  std::vector<double> xs(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) xs[i] = similarity_x(ys[i], t);
  const auto u = sample(ev.snapshots.back(), xs);
  double umax = 0.0;
  for (double v : u) umax = std::max(umax, std::abs(v));

  ProbeResult res;
  for (int sign : {+1, -1}) {
    for (SConvention sc : {SConvention::RZero, SConvention::IRZero}) {
      ProbeCandidate cand;
      cand.conventions = {sc, sign};
      try {
        const auto p = harness_detail::scattering_side(d, cand.conventions, M, threads);
        const AsymptoticSeries series(1, p.s, p.rd.r0_prime.real(), p.rd.r0_second, p.table);
        double err = 0.0;
        for (std::size_t i = 0; i < ys.size(); ++i)
          err = std::max(err, std::abs(u[i] - series_eval(similarity_point(xs[i], t), series)));
        cand.relative_error = err / umax;
        cand.pass = cand.relative_error < 0.25;
      } catch (const Error& e) {
        cand.note = e.what();
        cand.relative_error = INFINITY;
      }
      res.candidates.push_back(cand);
    }
  }
  int passing = 0;
  for (const auto& c : res.candidates)
    if (c.pass) {
      ++passing;
      res.selected = c.conventions;
    }
  res.resolved = passing == 1;
  if (!res.resolved) throw ConventionError(std::to_string(passing) + " convention candidates pass the probe");
  cache = res;
  return res;
}

inline VerificationReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  VerificationReport rep;
  rep.config = cfg;
  if (cfg.conventions) {
    rep.conventions = *cfg.conventions;
  } else {
    rep.probe = probe_conventions(cfg.threads);
    rep.conventions = rep.probe->selected;
  }
  const InitialDatum d = builtin_family(cfg.family, cfg.params);
  const auto p = harness_detail::scattering_side(d, rep.conventions, cfg.M, cfg.threads);
  rep.reflection = p.rd;
  rep.s = p.s;
  rep.alpha = p.table->alpha();
  rep.painleve_residual = p.table->residual_max();

  std::vector<AsymptoticSeries> series;
  for (int n : cfg.orders) series.emplace_back(n, p.s, p.rd.r0_prime.real(), p.rd.r0_second, p.table);

  PdeOptions po = cfg.pde;
  po.drift_tolerance = cfg.tol.drift;
  const EvolutionResult ev = evolve(d, cfg.t_list, po);
  rep.max_mass_drift = ev.max_mass_drift;
  rep.max_l2_drift = ev.max_l2_drift;
  rep.max_tail_energy = ev.max_tail_energy;
  rep.pass_pde = ev.max_mass_drift <= cfg.tol.drift && ev.max_l2_drift <= cfg.tol.drift;

  const auto ys = sector_grid(cfg.M, cfg.y_points);
  rep.orders.resize(series.size());
  for (std::size_t o = 0; o < series.size(); ++o) {
    rep.orders[o].order = cfg.orders[o];
    rep.orders[o].expected_slope = -(cfg.orders[o] + 1) / 3.0;
  }
  for (const Snapshot& snap : ev.snapshots) {
    const double t = snap.t;
    std::vector<double> xs(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) xs[i] = similarity_x(ys[i], t);
    std::vector<double> u(ys.size());
    parallel_for(ys.size(), cfg.threads, [&](std::size_t i) { u[i] = sample(snap, {xs[i]})[0]; });
    io::Table prof;
    prof.columns = {"y", "x", "u_pde"};
    for (int n : cfg.orders) prof.columns.push_back("series_N" + std::to_string(n));
    prof.rows.assign(ys.size(), {});
    for (std::size_t i = 0; i < ys.size(); ++i) prof.rows[i] = {ys[i], xs[i], u[i]};
    for (std::size_t o = 0; o < series.size(); ++o) {
      TimeErrors te;
      te.t = t;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double v = series_eval(similarity_point(xs[i], t), series[o]);
        prof.rows[i].push_back(v);
        const double e = std::abs(u[i] - v);
        te.E = std::max(te.E, e);
        if (ys[i] <= 0.0) te.E_left = std::max(te.E_left, e);
        if (ys[i] >= 0.0) te.E_right = std::max(te.E_right, e);
        if (ys[i] == 0.0) {
          te.u_pde_y0 = u[i];
          te.series_y0 = v;
        }
      }
      rep.orders[o].times.push_back(te);
    }
    rep.profiles.push_back(std::move(prof));
  }

  bool all = rep.pass_pde;
  for (auto& orp : rep.orders) {
    std::vector<double> ts, e, el, er;
    double emax = 0.0;
    for (const auto& te : orp.times) {
      ts.push_back(te.t);
      e.push_back(te.E);
      el.push_back(te.E_left);
      er.push_back(te.E_right);
      emax = std::max(emax, te.E);
    }
    const auto within = [&](const std::optional<SlopeFit>& f) {
      return f && std::abs(f->slope - orp.expected_slope) <= cfg.tol.slope;
    };
    if (emax == 0.0) {
      orp.trivially_zero = true;
      orp.pass_slope = orp.pass_left = orp.pass_right = true;
    } else if (ts.size() >= 4) {
      orp.fit = fit_slope(ts, e);
      orp.fit_left = fit_slope(ts, el);
      orp.fit_right = fit_slope(ts, er);
      orp.pass_slope = within(orp.fit);
      orp.pass_left = within(orp.fit_left);
      orp.pass_right = within(orp.fit_right);
    } else {
      // Too few times for a slope: nothing to judge.
      orp.pass_slope = orp.pass_left = orp.pass_right = true;
    }
    const auto& last = orp.times.back();
    if (last.series_y0 != 0.0) orp.ratio_y0 = last.u_pde_y0 / last.series_y0;
    if (cfg.ratio_check) orp.pass_ratio = orp.ratio_y0 && std::abs(*orp.ratio_y0 - 1.0) <= cfg.tol.ratio;
    all = all && orp.pass_slope && orp.pass_left && orp.pass_right && orp.pass_ratio;
  }
  rep.pass = all;
  return rep;
}

// ---------------------------------------------------------------------------
// Reports.

inline io::json complex_json(cplx z) { return io::json::array({z.real(), z.imag()}); }

inline io::json environment_manifest(int threads) {
  io::json e;
#if defined(__clang__)
  e["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  e["compiler"] = std::string("gcc ") + __VERSION__;
#endif
  e["cxx_standard"] = static_cast<long>(__cplusplus);
  e["fftw"] = std::string(fftw_version);
  e["boost"] = std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
               std::to_string(BOOST_VERSION % 100);
  e["threads"] = threads;
  return e;
}

inline io::json conventions_json(const Conventions& c) {
  return {{"s_definition", to_string(c.s_convention)},
          {"akns_sign", c.akns_sign},
          {"connection_coefficient", "alpha(s) = i s"}};
}

inline io::json report_json(const VerificationReport& r) {
  io::json j;
  j["config"] = r.config.to_json();
  j["conventions"] = conventions_json(r.conventions);
  if (r.probe) {
    io::json cands = io::json::array();
    for (const auto& c : r.probe->candidates) {
      io::json cj = conventions_json(c.conventions);
      cj["relative_error"] = std::isfinite(c.relative_error) ? io::json(c.relative_error) : io::json(nullptr);
      cj["pass"] = c.pass;
      if (!c.note.empty()) cj["note"] = c.note;
      cands.push_back(cj);
    }
    j["convention_probe"] = {{"family", "sech"}, {"epsilon", 0.05}, {"t", 20.0}, {"candidates", cands}};
  } else {
    j["convention_probe"] = nullptr;
  }
  j["scattering"] = {{"r0", complex_json(r.reflection.r0)},
                     {"r0_prime", complex_json(r.reflection.r0_prime)},
                     {"r0_second", complex_json(r.reflection.r0_second)},
                     {"sup_abs", r.reflection.sup_abs},
                     {"symmetry_residual", r.reflection.symmetry_residual},
                     {"s", complex_json(r.s)},
                     {"alpha", r.alpha},
                     {"painleve_residual", r.painleve_residual}};
  io::json orders = io::json::array();
  for (const auto& o : r.orders) {
    io::json oj;
    oj["order"] = o.order;
    oj["expected_slope"] = o.expected_slope;
    auto fit = [](const std::optional<SlopeFit>& f) -> io::json {
      if (!f) return nullptr;
      return {{"slope", f->slope}, {"stderr", f->stderr_}};
    };
    oj["fit"] = fit(o.fit);
    oj["fit_left"] = fit(o.fit_left);
    oj["fit_right"] = fit(o.fit_right);
    oj["trivially_zero"] = o.trivially_zero;
    oj["ratio_y0_last_t"] = o.ratio_y0 ? io::json(*o.ratio_y0) : io::json(nullptr);
    io::json ts = io::json::array();
    for (const auto& t : o.times)
      ts.push_back({{"t", t.t}, {"E", t.E}, {"E_left", t.E_left}, {"E_right", t.E_right},
                    {"u_pde_y0", t.u_pde_y0}, {"series_y0", t.series_y0}});
    oj["times"] = ts;
    oj["pass"] = {{"slope", o.pass_slope}, {"slope_left", o.pass_left}, {"slope_right", o.pass_right},
                  {"ratio", o.pass_ratio}};
    orders.push_back(oj);
  }
  j["orders"] = orders;
  j["pde"] = {{"max_mass_drift", r.max_mass_drift},
              {"max_l2_drift", r.max_l2_drift},
              {"max_tail_energy", r.max_tail_energy},
              {"pass", r.pass_pde}};
  j["pass"] = r.pass;
  j["environment"] = environment_manifest(r.config.threads);
  return j;
}

inline io::Table errors_table(const VerificationReport& r) {
  io::Table t;
  t.columns = {"t", "N", "E", "E_left", "E_right"};
  for (const auto& o : r.orders)
    for (const auto& te : o.times) t.rows.push_back({te.t, static_cast<double>(o.order), te.E, te.E_left, te.E_right});
  return t;
}

inline void write_report(const VerificationReport& r, const std::filesystem::path& dir) {
  io::write_json(dir / "verify_report.json", report_json(r));
  io::write_csv(dir / "verify_errors.csv", errors_table(r));
  for (std::size_t i = 0; i < r.profiles.size(); ++i)
    io::write_csv(dir / ("verify_profile_t" + io::format_double(r.config.t_list[i]) + ".csv"), r.profiles[i]);
}

// ---------------------------------------------------------------------------
// Tables shared by the CLI and the tests.

inline io::Table reflection_table(const ReflectionData& rd) {
  io::Table t;
  t.columns = {"k", "re_r", "im_r"};
  for (std::size_t i = 0; i < rd.k_grid.size(); ++i)
    t.rows.push_back({rd.k_grid[i], rd.r_values[i].real(), rd.r_values[i].imag()});
  return t;
}

inline io::json reflection_header(const ReflectionData& rd) {
  return {{"r0", complex_json(rd.r0)},
          {"r0_prime", complex_json(rd.r0_prime)},
          {"r0_second", complex_json(rd.r0_second)},
          {"sup_abs", rd.sup_abs},
          {"symmetry_residual", rd.symmetry_residual},
          {"unitarity_defect", rd.unitarity_defect},
          {"akns_sign", rd.akns_sign}};
}

inline io::Table datum_table(const InitialDatum& d) {
  io::Table t;
  t.columns = {"x", "u0"};
  for (std::size_t i = 0; i < d.grid.size(); ++i) t.rows.push_back({d.grid[i], d.values[i]});
  return t;
}

inline io::Table snapshot_table(const Snapshot& s) {
  io::Table t;
  t.columns = {"x", "u"};
  for (std::size_t j = 0; j < s.u.size(); ++j) t.rows.push_back({s.x(j), s.u[j]});
  return t;
}

inline std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0.0)) throw UsageError("grid needs lo < hi and a positive step");
  const auto n = static_cast<int>(std::llround((hi - lo) / step));
  std::vector<double> g(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / n;
  return g;
}

inline io::Table painleve_table(const PainleveSolution& sol, const std::vector<double>& ys) {
  io::Table t;
  t.columns = {"y", "u", "u_prime"};
  for (double y : ys) t.rows.push_back({y, sol.value(y), sol.deriv(y)});
  return t;
}

/// Columns y, u1 and, when they exist for this s, u2 and u3.
inline io::Table coefficient_table(const AsymptoticSeries& series, const std::vector<double>& ys) {
  io::Table t;
  const bool higher = series.s() == 0.0;
  t.columns = {"y", "u1"};
  if (higher) t.columns.insert(t.columns.end(), {"u2", "u3"});
  for (double y : ys) {
    std::vector<double> row{y, series.u1(y)};
    if (higher) row.insert(row.end(), {series.u2(y), series.u3(y)});
    t.rows.push_back(std::move(row));
  }
  return t;
}

struct RhCheckRow {
  double y = 0.0;
  double p1 = 0.0;
  double p2 = 0.0; // imaginary part
  std::string entry;
  double closed_form = 0.0;
  double quadrature = 0.0;
  double abs_err = 0.0;
  double tolerance = 1e-8;
};

/// Closed form vs contour quadrature for every real and imaginary part of
/// every entry of m11, m12, m21, plus the nested double-integral check of the
/// sigma_3 part of m12 (closed_form holds the reduced value).
inline std::vector<RhCheckRow> rh_check(const std::vector<double>& ys, const std::vector<double>& p1s,
                                        const std::vector<double>& p2s, bool nested = true, int threads = 1) {
  struct Point {
    double y, p1, p2;
  };
  std::vector<Point> pts;
  for (double y : ys)
    for (double p1 : p1s)
      for (double p2 : p2s) pts.push_back({y, p1, p2});
  std::vector<std::vector<RhCheckRow>> out(pts.size());
  const RayContour contour;
  parallel_for(pts.size(), threads, [&](std::size_t k) {
    const auto [y, p1, p2] = pts[k];
    const cplx p2c{0.0, p2};
    const auto cf = closed_form_coefficients(y, p1, p2c);
    const auto qc = quadrature_coefficients(y, p1, p2c, contour);
    const std::pair<const char*, std::pair<const Mat2*, const Mat2*>> mats[] = {
        {"m11", {&cf.m11, &qc.m11}}, {"m12", {&cf.m12, &qc.m12}}, {"m21", {&cf.m21, &qc.m21}}};
    for (const auto& [name, mm] : mats) {
      for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
          const cplx a = mm.first->entry(i, j), b = mm.second->entry(i, j);
          const std::string base = std::string(name) + "_" + std::to_string(i) + std::to_string(j);
          out[k].push_back({y, p1, p2, base + "_re", a.real(), b.real(), std::abs(a.real() - b.real())});
          out[k].push_back({y, p1, p2, base + "_im", a.imag(), b.imag(), std::abs(a.imag() - b.imag())});
        }
    }
    if (nested && p1 != 0.0) {
      const cplx red = reduced_sigma3_part(y, p1, contour);
      const cplx nst = nested_sigma3_part(y, p1, contour);
      out[k].push_back({y, p1, p2, "m12_sigma3_nested_re", red.real(), nst.real(), std::abs(red.real() - nst.real()), 1e-6});
      out[k].push_back({y, p1, p2, "m12_sigma3_nested_im", red.imag(), nst.imag(), std::abs(red.imag() - nst.imag()), 1e-6});
    }
  });
  std::vector<RhCheckRow> rows;
  for (auto& v : out) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

inline std::string rh_check_csv(const std::vector<RhCheckRow>& rows) {
  std::string s = "y,p1,p2,entry,closed_form,quadrature,abs_err\n";
  for (const auto& r : rows)
    s += io::format_double(r.y) + "," + io::format_double(r.p1) + "," + io::format_double(r.p2) + "," + r.entry + "," +
         io::format_double(r.closed_form) + "," + io::format_double(r.quadrature) + "," + io::format_double(r.abs_err) +
         "\n";
  return s;
}

} // namespace mkdv
