#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mkdv/mkdv.hpp"

namespace {

using mkdv::io::json;
namespace fs = std::filesystem;

struct Globals {
  std::string config;
  std::string out = "out";
  int threads = 1;
  std::string profile = "default";
};

struct DatumFlags {
  std::string family;
  double epsilon = 0.0;
  std::string csv;
  CLI::Option* family_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* csv_opt = nullptr;

  void add(CLI::App* app) {
    family_opt = app->add_option("--family", family, "sech | gaussian | zero-mass | custom-csv");
    epsilon_opt = app->add_option("--epsilon", epsilon, "amplitude");
    csv_opt = app->add_option("--datum", csv, "CSV with columns x, u0 (implies custom-csv)");
  }

  void apply(mkdv::ExperimentConfig& c) const {
    if (family_opt->count()) c.family = family;
    if (epsilon_opt->count()) c.params.epsilon = epsilon;
    if (csv_opt->count()) {
      c.family = "custom-csv";
      c.params.csv_path = csv;
    }
  }
};

json load_config(const Globals& g) { return g.config.empty() ? json::object() : mkdv::io::read_json(g.config); }

mkdv::ExperimentConfig base_config(const Globals& g, const json& cfg) {
  mkdv::ExperimentConfig c;
  c.tol = mkdv::Tolerances::profile(g.profile);
  c.merge_json(cfg);
  c.threads = g.threads;
  return c;
}

template <class T>
T pick(const CLI::Option* opt, const T& flag, const json& cfg, const char* key, const T& fallback) {
  if (opt && opt->count()) return flag;
  if (cfg.contains(key)) return cfg[key].get<T>();
  return fallback;
}

json manifest(const std::string& command, const Globals& g) {
  json m;
  m["command"] = command;
  m["tolerance_profile"] = g.profile;
  m["environment"] = mkdv::environment_manifest(g.threads);
  return m;
}

mkdv::Conventions fixed_conventions(const json& cfg, const CLI::Option* sign_opt, int sign,
                                    const CLI::Option* sconv_opt, const std::string& sconv) {
  mkdv::Conventions c;
  c.akns_sign = pick(sign_opt, sign, cfg, "akns_sign", 1) >= 0 ? 1 : -1;
  const std::string s = pick(sconv_opt, sconv, cfg, "s_convention", std::string("r0"));
  if (s == "r0") c.s_convention = mkdv::SConvention::RZero;
  else if (s == "i_r0") c.s_convention = mkdv::SConvention::IRZero;
  else throw mkdv::UsageError("s-convention must be r0 or i_r0");
  return c;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"mKdV Painleve-sector verification toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tolerance-profile", g.profile, "strict | default")->check(CLI::IsMember({"strict", "default"}));

  // scatter
  auto* scatter = app.add_subcommand("scatter", "initial datum -> reflection coefficient");
  DatumFlags scatter_datum;
  scatter_datum.add(scatter);
  int scatter_sign = 1;
  auto* scatter_sign_opt = scatter->add_option("--akns-sign", scatter_sign, "+1 or -1");

  // evolve
  auto* evolve = app.add_subcommand("evolve", "initial datum -> PDE snapshots");
  DatumFlags evolve_datum;
  evolve_datum.add(evolve);
  std::vector<double> evolve_t;
  double evolve_L = 0.0, evolve_dt = 0.0;
  int evolve_modes = 0;
  bool evolve_no_sponge = false;
  auto* evolve_t_opt = evolve->add_option("--t", evolve_t, "output times")->delimiter(',');
  auto* evolve_L_opt = evolve->add_option("--L", evolve_L, "half period");
  auto* evolve_modes_opt = evolve->add_option("--modes", evolve_modes, "Fourier modes");
  auto* evolve_dt_opt = evolve->add_option("--dt", evolve_dt, "time step");
  evolve->add_flag("--no-sponge", evolve_no_sponge, "disable the absorbing layer");

  // painleve
  auto* painleve = app.add_subcommand("painleve", "Stokes parameter s = i sigma -> Painleve II table");
  double pii_sigma = 0.5, pii_lo = -8.0, pii_hi = 8.0, pii_dy = 0.05;
  auto* pii_sigma_opt = painleve->add_option("--s", pii_sigma, "imaginary part of s");
  auto* pii_lo_opt = painleve->add_option("--y-min", pii_lo, "left end of the y table");
  auto* pii_hi_opt = painleve->add_option("--y-max", pii_hi, "right end of the y table");
  auto* pii_dy_opt = painleve->add_option("--dy", pii_dy, "y spacing");

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "scattering data -> expansion coefficient tables");
  DatumFlags coeffs_datum;
  coeffs_datum.add(coeffs);
  std::string coeffs_rjson;
  int coeffs_sign = 1;
  std::string coeffs_sconv = "r0";
  double co_lo = -4.0, co_hi = 4.0, co_dy = 0.05;
  coeffs->add_option("--r-json", coeffs_rjson, "header written by scatter (r.json)");
  auto* coeffs_sign_opt = coeffs->add_option("--akns-sign", coeffs_sign, "+1 or -1");
  auto* coeffs_sconv_opt = coeffs->add_option("--s-convention", coeffs_sconv, "r0 | i_r0");
  auto* co_lo_opt = coeffs->add_option("--y-min", co_lo, "left end of the y table");
  auto* co_hi_opt = coeffs->add_option("--y-max", co_hi, "right end of the y table");
  auto* co_dy_opt = coeffs->add_option("--dy", co_dy, "y spacing");

  // rh-check
  auto* rhc = app.add_subcommand("rh-check", "closed-form vs contour-quadrature model coefficients");
  std::vector<double> rh_y{-2, -1, 0, 1, 2}, rh_p1{0, 1}, rh_p2{0, 1};
  bool rh_no_nested = false;
  auto* rh_y_opt = rhc->add_option("--y", rh_y, "similarity variables")->delimiter(',');
  auto* rh_p1_opt = rhc->add_option("--p1", rh_p1, "real p1 values")->delimiter(',');
  auto* rh_p2_opt = rhc->add_option("--p2", rh_p2, "imaginary parts of p2")->delimiter(',');
  rhc->add_flag("--no-nested", rh_no_nested, "skip the nested double-integral check");

  // verify
  auto* verify = app.add_subcommand("verify", "full pipeline -> verification report");
  DatumFlags verify_datum;
  verify_datum.add(verify);
  std::vector<int> v_orders;
  std::vector<double> v_t;
  double v_M = 2.0;
  std::string v_sconv;
  int v_sign = 1;
  auto* v_orders_opt = verify->add_option("--order", v_orders, "truncation orders N")->delimiter(',');
  auto* v_t_opt = verify->add_option("--t", v_t, "times")->delimiter(',');
  auto* v_M_opt = verify->add_option("--M", v_M, "sector width");
  auto* v_sconv_opt = verify->add_option("--s-convention", v_sconv, "r0 | i_r0 | auto");
  auto* v_sign_opt = verify->add_option("--akns-sign", v_sign, "+1 or -1 (default: probe)");

  CLI11_PARSE(app, argc, argv);

  try {
    const json cfg = load_config(g);
    const fs::path out = g.out;
    bool pass = true;

    if (*scatter) {
      auto c = base_config(g, cfg);
      scatter_datum.apply(c);
      const auto d = mkdv::builtin_family(c.family, c.params);
      mkdv::ScatteringOptions so;
      so.akns_sign = pick(scatter_sign_opt, scatter_sign, cfg, "akns_sign", 1) >= 0 ? 1 : -1;
      so.threads = g.threads;
      const auto rd = mkdv::compute_reflection(d, mkdv::default_k_grid(), so);
      pass = rd.symmetry_residual <= 1e-10 && rd.sup_abs < 1.0;
      json m = manifest("scatter", g);
      m["datum"] = {{"family", c.family}, {"epsilon", c.params.epsilon}, {"mass", d.mass},
                    {"support_radius", d.support_radius}, {"file", "datum.csv"}};
      m["scattering"] = mkdv::reflection_header(rd);
      m["data_file"] = "r.csv";
      m["pass"] = {{"symmetry", rd.symmetry_residual <= 1e-10}, {"subunitary", rd.sup_abs < 1.0}, {"all", pass}};
      mkdv::io::write_csv(out / "datum.csv", mkdv::datum_table(d));
      mkdv::io::write_csv(out / "r.csv", mkdv::reflection_table(rd));
      mkdv::io::write_json(out / "r.json", m);
    } else if (*evolve) {
      auto c = base_config(g, cfg);
      evolve_datum.apply(c);
      if (evolve_t_opt->count()) c.t_list = evolve_t;
      if (evolve_L_opt->count()) c.pde.L = evolve_L;
      if (evolve_modes_opt->count()) c.pde.N = evolve_modes;
      if (evolve_dt_opt->count()) c.pde.dt = evolve_dt;
      if (evolve_no_sponge) c.pde.sponge = false;
      c.pde.drift_tolerance = c.tol.drift;
      const auto d = mkdv::builtin_family(c.family, c.params);
      const auto ev = mkdv::evolve(d, c.t_list, c.pde);
      json snaps = json::array();
      for (const auto& s : ev.snapshots) {
        const std::string file = "snapshot_t" + mkdv::io::format_double(s.t) + ".csv";
        mkdv::io::write_csv(out / file, mkdv::snapshot_table(s));
        snaps.push_back({{"t", s.t}, {"file", file}, {"mass", s.mass}, {"l2", s.l2}, {"mass_drift", s.mass_drift},
                         {"l2_drift", s.l2_drift}, {"tail_energy", s.tail_energy}});
      }
      pass = ev.max_mass_drift <= c.tol.drift && ev.max_l2_drift <= c.tol.drift;
      json m = manifest("evolve", g);
      m["datum"] = {{"family", c.family}, {"epsilon", c.params.epsilon}, {"mass", d.mass}};
      m["L"] = c.pde.L;
      m["N"] = c.pde.N;
      m["dt"] = c.pde.dt;
      m["sponge"] = c.pde.sponge;
      m["snapshots"] = snaps;
      m["max_mass_drift"] = ev.max_mass_drift;
      m["max_l2_drift"] = ev.max_l2_drift;
      m["max_tail_energy"] = ev.max_tail_energy;
      m["pass"] = pass;
      mkdv::io::write_json(out / "evolve.json", m);
    } else if (*painleve) {
      const double sigma = pick(pii_sigma_opt, pii_sigma, cfg, "s", 0.5);
      const double lo = pick(pii_lo_opt, pii_lo, cfg, "y_min", -8.0);
      const double hi = pick(pii_hi_opt, pii_hi, cfg, "y_max", 8.0);
      const double dy = pick(pii_dy_opt, pii_dy, cfg, "dy", 0.05);
      const auto sol = mkdv::painleve2_solve(mkdv::cplx{0.0, sigma}, lo, std::max(hi, 6.0));
      pass = sol.residual_max() <= 1e-8;
      json m = manifest("painleve", g);
      m["s"] = mkdv::complex_json(sol.s());
      m["alpha"] = sol.alpha();
      m["y_min"] = lo;
      m["y_max"] = hi;
      m["residual_max"] = sol.residual_max();
      m["data_file"] = "painleve.csv";
      m["pass"] = pass;
      mkdv::io::write_csv(out / "painleve.csv", mkdv::painleve_table(sol, mkdv::uniform_grid(lo, hi, dy)));
      mkdv::io::write_json(out / "painleve.json", m);
    } else if (*coeffs) {
      const double lo = pick(co_lo_opt, co_lo, cfg, "y_min", -4.0);
      const double hi = pick(co_hi_opt, co_hi, cfg, "y_max", 4.0);
      const double dy = pick(co_dy_opt, co_dy, cfg, "dy", 0.05);
      const auto conv = fixed_conventions(cfg, coeffs_sign_opt, coeffs_sign, coeffs_sconv_opt, coeffs_sconv);
      mkdv::cplx r0, r0p, r0pp;
      json source;
      if (!coeffs_rjson.empty()) {
        const json h = mkdv::io::read_json(coeffs_rjson).at("scattering");
        auto cx = [&](const char* k) { return mkdv::cplx{h.at(k)[0].get<double>(), h.at(k)[1].get<double>()}; };
        r0 = cx("r0");
        r0p = cx("r0_prime");
        r0pp = cx("r0_second");
        source = {{"r_json", coeffs_rjson}};
      } else {
        auto c = base_config(g, cfg);
        coeffs_datum.apply(c);
        const auto d = mkdv::builtin_family(c.family, c.params);
        mkdv::ScatteringOptions so;
        so.akns_sign = conv.akns_sign;
        so.threads = g.threads;
        const auto rd = mkdv::compute_reflection(d, mkdv::default_k_grid(), so);
        r0 = rd.r0;
        r0p = rd.r0_prime;
        r0pp = rd.r0_second;
        source = {{"family", c.family}, {"epsilon", c.params.epsilon}};
      }
      const mkdv::cplx s = mkdv::stokes_parameter(r0, conv.s_convention);
      mkdv::check_stokes_parameter(s);
      const auto table = std::make_shared<const mkdv::PainleveSolution>(
          mkdv::painleve2_solve(s, std::min(lo, -8.0) - 2.0, std::max(hi, 8.0) + 2.0));
      const int order = s == 0.0 ? 3 : 1;
      const mkdv::AsymptoticSeries series(order, s, r0p.real(), r0pp, table);
      const auto ys = mkdv::uniform_grid(lo, hi, dy);
      mkdv::HierarchyInputs in;
      in.u1 = [&](double y) { return series.u1(y); };
      if (order == 3) {
        in.u2 = [&](double y) { return series.u2(y); };
        in.u3 = [&](double y) { return series.u3(y); };
      }
      json residuals;
      for (int j = 1; j <= order; ++j) {
        const auto r = mkdv::hierarchy_residual(j, in, ys);
        double mx = 0.0;
        for (double v : r) mx = std::max(mx, std::abs(v));
        residuals["u" + std::to_string(j)] = mx;
        pass = pass && mx <= 1e-6;
      }
      json m = manifest("coeffs", g);
      m["source"] = source;
      m["conventions"] = mkdv::conventions_json(conv);
      m["s"] = mkdv::complex_json(s);
      m["r0_prime"] = mkdv::complex_json(r0p);
      m["r0_second"] = mkdv::complex_json(r0pp);
      m["available"] = order == 3 ? json::array({"u1", "u2", "u3"}) : json::array({"u1"});
      m["hierarchy_residual_max"] = residuals;
      m["data_file"] = "coeffs.csv";
      m["pass"] = pass;
      mkdv::io::write_csv(out / "coeffs.csv", mkdv::coefficient_table(series, ys));
      mkdv::io::write_json(out / "coeffs.json", m);
    } else if (*rhc) {
      const auto ys = pick(rh_y_opt, rh_y, cfg, "y", rh_y);
      const auto p1s = pick(rh_p1_opt, rh_p1, cfg, "p1", rh_p1);
      const auto p2s = pick(rh_p2_opt, rh_p2, cfg, "p2", rh_p2);
      const auto rows = mkdv::rh_check(ys, p1s, p2s, !rh_no_nested, g.threads);
      double worst = 0.0, worst_nested = 0.0;
      for (const auto& r : rows) {
        double& w = r.tolerance > 1e-8 ? worst_nested : worst;
        w = std::max(w, r.abs_err);
        pass = pass && r.abs_err <= r.tolerance;
      }
      json m = manifest("rh-check", g);
      m["y"] = ys;
      m["p1"] = p1s;
      m["p2_imag"] = p2s;
      m["max_abs_err"] = worst;
      m["max_nested_err"] = worst_nested;
      m["data_file"] = "rh_check.csv";
      m["pass"] = pass;
      mkdv::io::atomic_write(out / "rh_check.csv", mkdv::rh_check_csv(rows));
      mkdv::io::write_json(out / "rh_check.json", m);
    } else if (*verify) {
      auto c = base_config(g, cfg);
      verify_datum.apply(c);
      if (v_orders_opt->count()) c.orders = v_orders;
      if (v_t_opt->count()) c.t_list = v_t;
      if (v_M_opt->count()) c.M = v_M;
      if (v_sconv_opt->count() || v_sign_opt->count()) {
        json o;
        if (v_sconv_opt->count()) o["s_convention"] = v_sconv;
        if (v_sign_opt->count()) o["akns_sign"] = v_sign;
        if (v_sconv_opt->count() && v_sconv == "auto") c.conventions.reset();
        c.merge_json(o);
      }
      const auto rep = mkdv::run_experiment(c);
      mkdv::write_report(rep, out);
      pass = rep.pass;
    }
    std::cout << (pass ? "PASS" : "FAIL") << "  " << out.string() << "\n";
    return pass ? 0 : 1;
  } catch (const mkdv::UsageError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}
