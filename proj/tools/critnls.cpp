// critnls: command-line front end for the radial energy-critical NLS lab.
// Subcommands validate the perturbation, evaluate functionals, run lambda
// scans, shoot ground states, sweep Nehari bounds, report the bubble
// constant, evolve radial data conservatively, classify fields, and emit
// exact-rational exponent certificates. Every run writes a CSV (byte-stable
// for a fixed config and seed) plus a side manifest with the resolved
// config, version and wall time.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "critnls/config.hpp"
#include "critnls/csv.hpp"
#include "critnls/evolution.hpp"
#include "critnls/exponents.hpp"
#include "critnls/parallel.hpp"
#include "critnls/rng.hpp"
#include "critnls/variational.hpp"
#include "critnls/version.hpp"

namespace {

using namespace critnls;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BracketFailure:
    case ErrorCode::NoBracket:
    case ErrorCode::NonconvergedODE:
    case ErrorCode::FixedPointDiverged:
    case ErrorCode::InvarianceViolated:
      return 3;
    case ErrorCode::IOFailure:
      return 1;
    default:
      return 2;
  }
}

void write_manifest(const std::string& csv_path, const std::string& sub,
                    const RunConfig& cfg, double wall_s) {
  std::ofstream out(csv_path + ".manifest");
  if (!out) throw Error(ErrorCode::IOFailure, "cannot write manifest");
  char stamp[64] = "unknown";
  const std::time_t now = std::time(nullptr);
  if (std::tm* tm = std::gmtime(&now))
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", tm);
  out << "subcommand = " << sub << "\n"
      << "version = " << CRITNLS_VERSION << "\n"
      << "timestamp_utc = " << stamp << "\n"
      << "wall_time_s = " << wall_s << "\n"
      << "workers = " << worker_count() << "\n"
      << "[config]\n"
      << config_echo(cfg);
}

RadialField gaussian_field(const GridPtr& g, double amp, double width) {
  return sample(g, [=](double r) {
    return Complex{amp * std::exp(-0.5 * r * r / (width * width)), 0.0};
  });
}

// initial data for evolve, per config
RadialField initial_state(const RunConfig& cfg) {
  auto grid = cfg.evolution_grid();
  if (cfg.psi0 == "gaussian")
    return gaussian_field(grid, cfg.psi0_amplitude, cfg.psi0_width);
  if (cfg.psi0 == "file") {
    if (cfg.psi0_path.empty())
      throw Error(ErrorCode::ConfigParse, "psi0 = file needs psi0_path");
    return load_csv(grid, cfg.psi0_path);
  }
  if (cfg.psi0 == "ground_state") {
    ShootConfig sc;
    sc.r_max = cfg.shoot_rmax;
    sc.max_bisect = cfg.shoot_max_bisect;
    const auto gs = shoot_ground_state(cfg.nonlinearity(), cfg.omega,
                                       cfg.variational_grid(), sc);
    const double l = cfg.psi0_lambda;
    const double amp = std::pow(l, 0.5 * cfg.dimension);
    return sample(grid, [&, amp, l](double r) {
      return Complex{amp * gs.profile(l * r), 0.0};
    });
  }
  throw Error(ErrorCode::ConfigParse, "unknown psi0 kind '" + cfg.psi0 + "'");
}

Rational parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)),
                    std::stoll(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigParse,
                "expected an exact rational like 39/19, got '" + s + "'");
  }
}

std::vector<std::string> report_header(const RunConfig& cfg) {
  std::vector<std::string> cols = {"mass", "kinetic", "potF", "crit_norm"};
  for (std::size_t k = 0; k < cfg.terms.size(); ++k)
    cols.push_back("term" + std::to_string(k) + "_norm");
  for (const char* c : {"H", "H0", "S_omega", "I_omega", "K", "P_norm"})
    cols.push_back(c);
  return cols;
}

std::vector<double> report_row(const FunctionalReport& rep) {
  std::vector<double> row = {rep.mass, rep.kinetic, rep.potF, rep.pot_crit};
  for (double v : rep.per_term) row.push_back(v);
  for (double v : {rep.H, rep.H0, rep.S_omega, rep.I_omega, rep.K})
    row.push_back(v);
  double p_sq = 0.0;
  for (double c : rep.momentum) p_sq += c * c;
  row.push_back(std::sqrt(p_sq));
  return row;
}

struct CommonFlags {
  std::string config_path;
  std::string in_path;
  std::string out_path;
};

void add_config_overrides(
    CLI::App* sub, CommonFlags& fl,
    std::vector<std::pair<std::string, std::string>>& ov) {
  sub->add_option("--config", fl.config_path, "run configuration file");
  auto push = [&ov](const std::string& k) {
    return [&ov, k](const std::string& v) { ov.emplace_back(k, v); };
  };
  sub->add_option_function<std::string>("--d", push("dimension"),
                                        "spatial dimension");
  sub->add_option_function<std::string>("--omega", push("omega"),
                                        "frequency omega");
  sub->add_option_function<std::string>("--terms", push("terms"),
                                        "perturbation terms [[mu, p], ...]");
  sub->add_option_function<std::string>("--dt", push("dt"), "time step");
  sub->add_option_function<std::string>("--t-end", push("t_end"),
                                        "final time");
  sub->add_option_function<std::string>("--sample-every", push("sample_every"),
                                        "sample stride in steps");
  sub->add_option_function<std::string>("--seed", push("seed"), "rng seed");
  sub->add_option("--in", fl.in_path, "input field CSV (r,re,im)");
  sub->add_option("--out", fl.out_path, "output CSV path");
}

RunConfig resolve_config(
    const CommonFlags& fl,
    const std::vector<std::pair<std::string, std::string>>& overrides,
    const std::string& default_out) {
  RunConfig cfg;
  if (!fl.config_path.empty()) cfg = load_config(fl.config_path);
  for (const auto& [k, v] : overrides) apply_config_line(cfg, k, v, "--" + k);
  if (!fl.out_path.empty()) cfg.out = fl.out_path;
  if (cfg.out.empty()) cfg.out = default_out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial lab for the perturbed energy-critical NLS"};
  app.require_subcommand(1);

  CommonFlags fl;
  std::vector<std::pair<std::string, std::string>> ov;

  auto* c_validate =
      app.add_subcommand("validate-nl", "validate the perturbation spec");
  auto* c_funcs =
      app.add_subcommand("functionals", "evaluate all functionals of one field");
  auto* c_scan =
      app.add_subcommand("scan-lambda", "scan K, S, I along the L^2 scaling");
  auto* c_ground =
      app.add_subcommand("ground-state", "shoot the ground state, report m_omega");
  auto* c_sweep =
      app.add_subcommand("bound-sweep", "Nehari upper bounds from trial families");
  auto* c_sigma =
      app.add_subcommand("sigma", "bubble norms and the sharp constant");
  auto* c_evolve =
      app.add_subcommand("evolve", "conservative radial time integration");
  auto* c_classify =
      app.add_subcommand("classify", "membership in A_{omega,+} and A_0");
  auto* c_expo =
      app.add_subcommand("exponents", "exotic exponent record, exact rationals");
  auto* c_pairs =
      app.add_subcommand("pairs", "the named L^2-admissible pairs");

  for (auto* sub : {c_validate, c_funcs, c_scan, c_ground, c_sweep, c_sigma,
                    c_evolve, c_classify})
    add_config_overrides(sub, fl, ov);

  std::string q_dump, final_dump, m_omega_opt, p1_str = "2", p_str;
  c_ground->add_option("--dump-q", q_dump, "also write Q as a field CSV");
  c_evolve->add_option("--dump-final", final_dump,
                       "also write the final state as a field CSV");
  c_classify->add_option("--m-omega", m_omega_opt,
                         "threshold m_omega (computed by shooting if absent)");
  int expo_d = 5;
  c_expo->add_option("--d", expo_d, "dimension (>= 5)");
  c_expo->add_option("--p1", p1_str, "lowest power p1, exact rational");
  std::string expo_out = "exponents.csv";
  c_expo->add_option("--out", expo_out, "output CSV path");
  int pairs_d = 5;
  c_pairs->add_option("--d", pairs_d, "dimension (>= 3)");
  c_pairs->add_option("--p", p_str,
                      "power for the p-dependent pair (default: midpoint of "
                      "the admissible window)");
  std::string pairs_out = "pairs.csv";
  c_pairs->add_option("--out", pairs_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  try {
    if (c_validate->parsed()) {
      RunConfig cfg = resolve_config(fl, ov, "validate-nl.csv");
      const auto rep = validate(cfg.nonlinearity());
      CsvWriter csv(cfg.out);
      csv.header({"ok", "diagnostic_only", "eps0", "issues"});
      std::string issues;
      for (const auto& iss : rep.issues) {
        if (!issues.empty()) issues += "; ";
        issues += std::string(error_name(iss.code)) + " " + iss.message;
      }
      csv.row(std::vector<std::string>{rep.ok ? "1" : "0",
                                       rep.diagnostic_only ? "1" : "0",
                                       fmt_double(rep.eps0), issues});
      write_manifest(cfg.out, "validate-nl", cfg, wall());
      if (!rep.ok) {
        for (const auto& iss : rep.issues)
          std::cerr << error_name(iss.code) << ": " << iss.message << "\n";
        return 2;
      }
      std::cout << "valid, eps0 = " << rep.eps0
                << (rep.diagnostic_only ? " (diagnostic mode)" : "") << "\n";
      return 0;
    }

    if (c_funcs->parsed()) {
      RunConfig cfg = resolve_config(fl, ov, "functionals.csv");
      auto grid = cfg.variational_grid();
      const RadialField u =
          fl.in_path.empty()
              ? gaussian_field(grid, cfg.psi0_amplitude, cfg.psi0_width)
              : load_csv(grid, fl.in_path);
      const auto rep = report(cfg.nonlinearity(), cfg.omega, u);
      CsvWriter csv(cfg.out);
      csv.header(report_header(cfg));
      csv.row(report_row(rep));
      write_manifest(cfg.out, "functionals", cfg, wall());
      std::cout << "S_omega = " << rep.S_omega << ", K = " << rep.K << "\n";
      return 0;
    }

    if (c_scan->parsed()) {
      RunConfig cfg = resolve_config(fl, ov, "scan-lambda.csv");
      auto grid = cfg.variational_grid();
      const RadialField u =
          fl.in_path.empty()
              ? gaussian_field(grid, cfg.psi0_amplitude, cfg.psi0_width)
              : load_csv(grid, fl.in_path);
      double lmin = cfg.lambda_min, lmax = cfg.lambda_max;
      if (!(lmin > 0.0) || !(lmax > 0.0)) {
        // center the window on the root so the scan always shows the full
        // sign structure, whatever the field's scale
        const double ls =
            lambda_star(cfg.nonlinearity(), cfg.omega,
                        report(cfg.nonlinearity(), cfg.omega, u));
        lmin = 1e-3 * ls;
        lmax = 1e3 * ls;
      }
      const auto sc = scan(cfg.nonlinearity(), cfg.omega, u, lmin, lmax,
                           cfg.n_lambda);
      CsvWriter csv(cfg.out);
      csv.header({"lambda", "K", "S", "I"});
      for (std::size_t i = 0; i < sc.lambdas.size(); ++i)
        csv.row(std::vector<double>{sc.lambdas[i], sc.K_vals[i], sc.S_vals[i],
                                    sc.I_vals[i]});
      write_manifest(cfg.out, "scan-lambda", cfg, wall());
      std::cout << "lambda_star = " << sc.lambda_star
                << ", sign_changes = " << sc.sign_changes
                << ", I_increasing = " << sc.I_strictly_increasing
                << ", S_concave_past_root = " << sc.S_concave_past_root
                << "\n";
      return 0;
    }

    if (c_ground->parsed()) {
      RunConfig cfg = resolve_config(fl, ov, "ground-state.csv");
      ShootConfig sc;
      sc.r_max = cfg.shoot_rmax;
      sc.max_bisect = cfg.shoot_max_bisect;
      const auto gs = shoot_ground_state(cfg.nonlinearity(), cfg.omega,
                                         cfg.variational_grid(), sc);
      CsvWriter csv(cfg.out);
      csv.header({"omega", "a0", "m_omega", "sigma_pow_over_d", "gap",
                  "K_residual", "pde_residual", "iterations"});
      csv.row(std::vector<double>{gs.omega, gs.a0, gs.m_omega,
                                  gs.sigma_pow / cfg.dimension, gs.gap,
                                  gs.K_residual, gs.pde_residual,
                                  static_cast<double>(gs.iterations)});
      if (!q_dump.empty()) dump_csv(gs.Q, q_dump);
      write_manifest(cfg.out, "ground-state", cfg, wall());
      std::cout << "a0 = " << gs.a0 << ", m_omega = " << gs.m_omega
                << ", gap = " << gs.gap << "\n";
      return 0;
    }

    if (c_sweep->parsed()) {
      RunConfig cfg = resolve_config(fl, ov, "bound-sweep.csv");
      auto grid = cfg.variational_grid();
      SplitMix rng(cfg.seed);
      std::vector<RadialField> trials;
      trials.reserve(cfg.trials);
      for (int i = 0; i < cfg.trials; ++i)
        trials.push_back(gaussian_field(grid, rng.uniform(0.1, 2.0),
                                        rng.uniform(0.5, 5.0)));
      const auto bounds =
          m_omega_upper_bounds(cfg.nonlinearity(), cfg.omega, trials);
      CsvWriter csv(cfg.out);
      csv.header({"trial", "lambda_star", "S_at_star", "I_at_star"});
      double best = bounds.empty() ? 0.0 : bounds[0].S_at_star;
      for (std::size_t i = 0; i < bounds.size(); ++i) {
        csv.row(std::vector<double>{static_cast<double>(i),
                                    bounds[i].lambda_star,
                                    bounds[i].S_at_star, bounds[i].I_at_star});
        best = std::min(best, bounds[i].S_at_star);
      }
      write_manifest(cfg.out, "bound-sweep", cfg, wall());
      std::cout << "best upper bound for m_omega: " << best << " from "
                << bounds.size() << " trials\n";
      return 0;
    }

    if (c_sigma->parsed()) {
      RunConfig cfg = resolve_config(fl, ov, "sigma.csv");
      auto grid = cfg.variational_grid();
      const auto est = sigma_estimate(grid);
      const double resid = bubble_pde_residual(grid);
      CsvWriter csv(cfg.out);
      csv.header({"d", "grad_sq", "crit_norm", "rel_mismatch", "sigma_pow",
                  "sigma", "pde_residual"});
      csv.row(std::vector<double>{static_cast<double>(cfg.dimension),
                                  est.grad_sq, est.crit_norm, est.rel_mismatch,
                                  est.sigma_pow, est.sigma, resid});
      write_manifest(cfg.out, "sigma", cfg, wall());
      std::cout << "sigma^{d/2} = " << est.sigma_pow
                << ", mismatch = " << est.rel_mismatch
                << ", pde residual = " << resid << "\n";
      return 0;
    }

    if (c_evolve->parsed()) {
      RunConfig cfg = resolve_config(fl, ov, "trace.csv");
      const RadialField psi0 =
          fl.in_path.empty() ? initial_state(cfg)
                             : load_csv(cfg.evolution_grid(), fl.in_path);
      EvolveOptions opt;
      opt.dt = cfg.dt;
      opt.t_end = cfg.t_end;
      opt.sample_every = cfg.sample_every;
      opt.include_critical = cfg.include_critical;
      opt.fixed_point_tol = cfg.tol_fixed_point;
      opt.cfl_bound = cfg.cfl_bound;
      const auto tr = evolve(cfg.nonlinearity(), cfg.omega, psi0, opt);
      CsvWriter csv(cfg.out);
      csv.header({"t", "mass_drift", "H_drift", "K", "potF", "crit_norm",
                  "w_p1_accum", "w_accum", "grad_max", "residual"});
      for (std::size_t i = 0; i < tr.times.size(); ++i)
        csv.row(std::vector<double>{tr.times[i], tr.mass_drift[i],
                                    tr.H_drift[i], tr.K_t[i], tr.potF_t[i],
                                    tr.crit_t[i], tr.w_p1_accum[i],
                                    tr.w_accum[i], tr.grad_max[i],
                                    tr.residual_t[i]});
      if (!final_dump.empty()) dump_csv(tr.final_state, final_dump);
      write_manifest(cfg.out, "evolve", cfg, wall());
      std::cout << "samples = " << tr.times.size()
                << ", final mass drift = " << tr.mass_drift.back()
                << ", final H drift = " << tr.H_drift.back()
                << ", valid_until ~ " << tr.valid_until
                << (tr.cfl_warning ? " [warn: grad_max*dt over bound]" : "")
                << "\n";
      return 0;
    }

    if (c_classify->parsed()) {
      RunConfig cfg = resolve_config(fl, ov, "classify.csv");
      auto grid = cfg.variational_grid();
      const RadialField u =
          fl.in_path.empty()
              ? gaussian_field(grid, cfg.psi0_amplitude, cfg.psi0_width)
              : load_csv(grid, fl.in_path);
      const double sigma_pow = sigma_estimate(grid).sigma_pow;
      double m_omega;
      if (!m_omega_opt.empty()) {
        m_omega = std::stod(m_omega_opt);
      } else {
        ShootConfig sc;
        sc.r_max = cfg.shoot_rmax;
        sc.max_bisect = cfg.shoot_max_bisect;
        m_omega =
            shoot_ground_state(cfg.nonlinearity(), cfg.omega, grid, sc)
                .m_omega;
      }
      const auto cl =
          classify(cfg.nonlinearity(), cfg.omega, u, m_omega, sigma_pow);
      CsvWriter csv(cfg.out);
      csv.header({"in_A_omega_plus", "in_A0", "margin_S", "margin_K",
                  "margin_H0", "margin_grad"});
      csv.row(std::vector<double>{cl.in_A_omega_plus ? 1.0 : 0.0,
                                  cl.in_A0 ? 1.0 : 0.0, cl.margin_S,
                                  cl.margin_K, cl.margin_H0, cl.margin_grad});
      write_manifest(cfg.out, "classify", cfg, wall());
      std::cout << "in_A_omega_plus = " << cl.in_A_omega_plus
                << ", in_A0 = " << cl.in_A0 << "\n";
      return 0;
    }

    if (c_expo->parsed()) {
      const Rational p1 = parse_rational(p1_str);
      const auto e = exponents::exotic(expo_d, p1);
      CsvWriter csv(expo_out);
      csv.header({"d", "p1", "s_p1", "alpha", "s_alpha", "rho", "gamma",
                  "rho_star", "gamma_star", "alpha_in_interval",
                  "rho_gamma_hs_admissible", "gamma_above_diagonal",
                  "s_alpha_consistent"});
      csv.row(std::vector<std::string>{
          std::to_string(e.d), e.p1.str(), e.s_p1.str(), e.alpha.str(),
          e.s_alpha.str(), e.rho.str(), e.gamma.str(), e.rho_star.str(),
          e.gamma_star.str(), e.alpha_in_interval ? "1" : "0",
          e.rho_gamma_hs_admissible ? "1" : "0",
          e.gamma_above_diagonal ? "1" : "0",
          e.s_alpha_consistent ? "1" : "0"});
      RunConfig cfg;
      cfg.dimension = expo_d;
      cfg.out = expo_out;
      write_manifest(expo_out, "exponents", cfg, wall());
      std::cout << "alpha = " << e.alpha.str() << ", rho = " << e.rho.str()
                << ", gamma = " << e.gamma.str()
                << (e.all_certified() ? " [all certificates pass]"
                                      : " [see certificate columns]")
                << "\n";
      return 0;
    }

    if (c_pairs->parsed()) {
      const Rational p = p_str.empty()
                             ? (exponents::two_star_mass(pairs_d) +
                                exponents::two_star_energy(pairs_d)) /
                                       Rational(2) -
                                   Rational(1)
                             : parse_rational(p_str);
      const auto named = exponents::named_pairs(pairs_d, p);
      CsvWriter csv(pairs_out);
      csv.header({"name", "q", "r", "l2_admissible"});
      for (const auto& np : named)
        csv.row(std::vector<std::string>{np.name, np.pair.q.str(),
                                         np.pair.r.str(),
                                         np.l2_admissible ? "1" : "0"});
      RunConfig cfg;
      cfg.dimension = pairs_d;
      cfg.out = pairs_out;
      write_manifest(pairs_out, "pairs", cfg, wall());
      for (const auto& np : named)
        std::cout << np.name << " (" << np.pair.q.str() << ", "
                  << np.pair.r.str() << ") "
                  << (np.l2_admissible ? "admissible" : "NOT admissible")
                  << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "critnls: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "critnls: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
