// Acceptance suite: one numbered check per release criterion, each printing
// a single PASS/FAIL line with its measured numbers and wall time. Run with
// no arguments for all criteria, or with a number (1..8) for one of them.
// Exit status is the count of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "critnls/evolution.hpp"
#include "critnls/exponents.hpp"
#include "critnls/rng.hpp"
#include "critnls/variational.hpp"

using namespace critnls;

namespace {

GridPtr vgrid(int d) { return RadialGrid::graded(d, 12288, 200.0, 3.0); }
GridPtr egrid(int d) { return RadialGrid::uniform(d, 8192, 100.0); }

NonlinearitySpec spec5() { return {5, {{1.0, 2.0}}}; }
NonlinearitySpec spec4() { return {4, {{1.0, 2.5}}}; }

RadialField gaussian(const GridPtr& g, double amp, double width) {
  return sample(g, [=](double r) {
    return Complex{amp * std::exp(-0.5 * r * r / (width * width)), 0.0};
  });
}

RadialField gaussian_mixture(const GridPtr& g, SplitMix& rng) {
  const double a1 = rng.uniform(0.1, 2.0), s1 = rng.uniform(0.5, 5.0);
  const double a2 = rng.uniform(0.1, 2.0), s2 = rng.uniform(0.5, 5.0);
  const double a3 = rng.uniform(0.1, 2.0), s3 = rng.uniform(0.5, 5.0);
  return sample(g, [=](double r) {
    return Complex{a1 * std::exp(-0.5 * r * r / (s1 * s1)) +
                       a2 * std::exp(-0.5 * r * r / (s2 * s2)) +
                       a3 * std::exp(-0.5 * r * r / (s3 * s3)),
                   0.0};
  });
}

// shared across criteria so the expensive runs happen once in all-mode
struct Cache {
  std::optional<GroundStateResult> gs5, gs4, gs5_w01;
  std::optional<EvolutionTrace> t08q_trace;

  const GroundStateResult& ground5() {
    if (!gs5) gs5 = shoot_ground_state(spec5(), 1.0, vgrid(5));
    return *gs5;
  }
  const GroundStateResult& ground4() {
    if (!gs4) gs4 = shoot_ground_state(spec4(), 1.0, vgrid(4));
    return *gs4;
  }
  const GroundStateResult& ground5_w01() {
    if (!gs5_w01) gs5_w01 = shoot_ground_state(spec5(), 0.1, vgrid(5));
    return *gs5_w01;
  }
  const EvolutionTrace& trace_T08Q() {
    if (!t08q_trace) {
      const auto& gs = ground5();
      auto g = egrid(5);
      const double l = 0.8, amp = std::pow(l, 2.5);
      auto psi0 = sample(g, [&](double r) {
        return Complex{amp * gs.profile(l * r), 0.0};
      });
      EvolveOptions opt;
      opt.dt = 1e-3;
      opt.t_end = 2.0;
      opt.sample_every = 100;
      t08q_trace = evolve(spec5(), 1.0, psi0, opt);
    }
    return *t08q_trace;
  }
};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [FAILED: " << what << "]";
    }
  }
};

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. Bubble identity: |grad W|^2 vs |W|_{2^*}^{2^*} within 1e-3 and PDE
//    residual of -Delta W = W^{2^*-1} below 1e-4, d in {4, 5}, < 1 s each.
Outcome criterion1(Cache&) {
  Outcome out;
  for (int d : {4, 5}) {
    const auto t0 = std::chrono::steady_clock::now();
    auto g = vgrid(d);
    const auto est = sigma_estimate(g);
    const double resid = bubble_pde_residual(g);
    const double secs = seconds_since(t0);
    out.detail << "d=" << d << ": mismatch=" << est.rel_mismatch
               << " residual=" << resid << " (" << secs << "s) ";
    out.require(est.rel_mismatch < 1e-3, "norm identity tolerance");
    out.require(resid < 1e-4, "PDE residual tolerance");
    out.require(secs < 1.0, "runtime under 1 s");
  }
  return out;
}

// 2. Threshold gap: shooting converges with |K(Q)|/|grad Q|^2 < 1e-4 and
//    m_omega < sigma^{d/2}/d strictly, for (d=5, [(1,2)], w=1) and
//    (d=4, [(1,2.5)], w=1), < 30 s each.
Outcome criterion2(Cache& cache) {
  Outcome out;
  for (int d : {5, 4}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& gs = (d == 5) ? cache.ground5() : cache.ground4();
    const double secs = seconds_since(t0);
    out.detail << "d=" << d << ": K_res=" << gs.K_residual
               << " m=" << gs.m_omega << " sigma^{d/2}/d=" << gs.sigma_pow / d
               << " gap=" << gs.gap << " (" << secs << "s) ";
    out.require(gs.K_residual < 1e-4, "K residual tolerance");
    out.require(gs.m_omega < gs.sigma_pow / d, "m below the bubble threshold");
    out.require(gs.gap > 0.0, "positive gap");
    out.require(secs < 30.0, "runtime under 30 s");
  }
  return out;
}

// 3. Scaling-lemma suite on 100 random positive Gaussian mixtures per
//    d in {4, 5}: one K sign change; I strictly increasing; S concave past
//    the root; dS/dlambda|_1 = K to 1e-8 relative; < 10 s total.
Outcome criterion3(Cache&) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  double worst_fd = 0.0;
  for (int d : {4, 5}) {
    const NonlinearitySpec spec = (d == 4) ? spec4() : spec5();
    auto g = vgrid(d);
    SplitMix rng(2026 + d);
    int bad_signs = 0, bad_incr = 0, bad_concave = 0;
    for (int trial = 0; trial < 100; ++trial) {
      auto u = gaussian_mixture(g, rng);
      const auto base = report(spec, 1.0, u);
      const auto sc = scan(spec, 1.0, u, 1e-3, 1e3, 241);
      if (sc.sign_changes != 1) ++bad_signs;
      double total = 0.0;
      bool incr = true;
      for (std::size_t i = 1; i < sc.I_vals.size(); ++i) {
        const double diff = sc.I_vals[i] - sc.I_vals[i - 1];
        total += diff;
        if (diff <= -1e-12) incr = false;
      }
      if (!incr || !(total > 0.0)) ++bad_incr;
      if (!sc.S_concave_past_root) ++bad_concave;

      auto S = [&](double l) { return scaled_report(spec, base, l).S_omega; };
      const double h = 0.02;
      const double d1 = (S(1.0 + h) - S(1.0 - h)) / (2.0 * h);
      const double d2 = (S(1.0 + 0.5 * h) - S(1.0 - 0.5 * h)) / h;
      const double fd = (4.0 * d2 - d1) / 3.0;
      worst_fd = std::max(worst_fd, std::abs(fd - base.K) / std::abs(base.K));
    }
    out.detail << "d=" << d << ": bad_signs=" << bad_signs
               << " bad_incr=" << bad_incr << " bad_concave=" << bad_concave
               << " ";
    out.require(bad_signs == 0, "unique K sign change");
    out.require(bad_incr == 0, "I strictly increasing");
    out.require(bad_concave == 0, "S concave past the root");
  }
  const double secs = seconds_since(t0);
  out.detail << "worst dS/dl vs K rel err=" << worst_fd << " (" << secs
             << "s total)";
  out.require(worst_fd < 1e-8, "dS/dlambda matches K to 1e-8");
  out.require(secs < 10.0, "runtime under 10 s");
  return out;
}

// 4. Nehari consistency: the T_mu Q family recovers m_omega to 1e-6
//    relative; every Gaussian-family bound sits above m_omega - 1e-6; < 5 s.
Outcome criterion4(Cache& cache) {
  Outcome out;
  const auto spec = spec5();
  const auto& gs = cache.ground5();
  const auto t0 = std::chrono::steady_clock::now();
  double min_q_family = 1e300;
  for (double mu : {0.5, 0.63, 0.8, 1.0, 1.26, 1.59, 2.0}) {
    const auto scaled = scaled_report(spec, gs.report, mu);
    const double ls = lambda_star(spec, 1.0, scaled);
    min_q_family =
        std::min(min_q_family, scaled_report(spec, scaled, ls).S_omega);
  }
  auto g = vgrid(5);
  std::vector<RadialField> trials;
  for (double w : {0.5, 0.7, 0.9, 1.2, 1.6, 2.1, 2.8, 3.7})
    trials.push_back(gaussian(g, 1.0, w));
  const auto bounds = m_omega_upper_bounds(spec, 1.0, trials);
  double min_gauss = 1e300;
  int below = 0;
  for (const auto& nb : bounds) {
    min_gauss = std::min(min_gauss, nb.S_at_star);
    if (!(nb.S_at_star >= gs.m_omega - 1e-6)) ++below;
  }
  const double secs = seconds_since(t0);
  const double rel = std::abs(min_q_family - gs.m_omega) / gs.m_omega;
  out.detail << "T_mu Q min=" << min_q_family << " vs m=" << gs.m_omega
             << " (rel " << rel << "), gaussian min=" << min_gauss
             << ", bounds below m: " << below << " (" << secs << "s)";
  out.require(rel < 1e-6, "Q-family recovers m_omega");
  out.require(below == 0, "all bounds above m_omega - 1e-6");
  out.require(secs < 5.0, "runtime under 5 s");
  return out;
}

// 5. Conservation: tiny-Gaussian and T_{0.8}Q runs at dt=1e-3, n=8192,
//    t_end=2 keep mass and Hamiltonian drifts below 1e-8; < 5 min each.
//    The tiny run also shows the scattering proxy: the potential columns
//    decay monotonically after the initial transient, inside the validity
//    window.
Outcome criterion5(Cache& cache) {
  Outcome out;
  {
    const auto t0 = std::chrono::steady_clock::now();
    EvolveOptions opt;
    opt.dt = 1e-3;
    opt.t_end = 2.0;
    opt.sample_every = 100;
    auto tr = evolve(spec5(), 1.0, gaussian(egrid(5), 1e-3, 1.0), opt);
    double worst_m = 0.0, worst_h = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      worst_m = std::max(worst_m, tr.mass_drift[i]);
      worst_h = std::max(worst_h, tr.H_drift[i]);
    }
    int proxy_bad = 0;
    for (std::size_t i = 1; i < tr.times.size(); ++i) {
      if (tr.times[i] < 0.2 || tr.times[i] > tr.valid_until) continue;
      if (tr.potF_t[i] > tr.potF_t[i - 1] * (1.0 + 1e-9)) ++proxy_bad;
      if (tr.crit_t[i] > tr.crit_t[i - 1] * (1.0 + 1e-9)) ++proxy_bad;
    }
    const double secs = seconds_since(t0);
    out.detail << "tiny: mass_drift=" << worst_m << " H_drift=" << worst_h
               << " proxy_violations=" << proxy_bad << " (" << secs << "s) ";
    out.require(worst_m < 1e-8, "tiny run mass drift");
    out.require(worst_h < 1e-8, "tiny run H drift");
    out.require(proxy_bad == 0, "monotone potential decay");
    out.require(secs < 300.0, "tiny run under 5 min");
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& tr = cache.trace_T08Q();
    double worst_m = 0.0, worst_h = 0.0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      worst_m = std::max(worst_m, tr.mass_drift[i]);
      worst_h = std::max(worst_h, tr.H_drift[i]);
    }
    const double secs = seconds_since(t0);
    out.detail << "T_{0.8}Q: mass_drift=" << worst_m << " H_drift=" << worst_h
               << " (" << secs << "s)";
    out.require(worst_m < 1e-8, "Q run mass drift");
    out.require(worst_h < 1e-8, "Q run H drift");
    out.require(secs < 300.0, "Q run under 5 min");
  }
  return out;
}

// 6. Flow invariance: the T_{0.8}Q run stays in A_{omega,+} at every
//    sample, inf_t K > 0, and sup_t |psi|_{H^1}^2 stays under the
//    calibrated bound. Shares the criterion-5 run.
Outcome criterion6(Cache& cache) {
  Outcome out;
  const auto& gs = cache.ground5();
  const auto& tr = cache.trace_T08Q();
  try {
    const auto audit = invariance_audit(spec5(), 1.0, tr, gs.m_omega);
    out.detail << "samples=" << tr.times.size() << " inf K=" << audit.inf_K
               << " inf margin_S=" << audit.inf_margin_S
               << " sup H1^2=" << audit.sup_H1_sq
               << " bound=" << audit.h1_bound;
    out.require(audit.all_in_set, "all samples in A_{omega,+}");
    out.require(audit.inf_K > 0.0, "inf K positive");
    out.require(audit.h1_bounded, "H1 norm under the calibrated bound");
  } catch (const Error& e) {
    out.pass = false;
    out.detail << " [FAILED: " << e.what() << "]";
  }
  return out;
}

// 7. Standing wave: the Q run at omega = 0.1 keeps its modulus profile
//    within 1e-3 relative over t_end = 0.5, and halving dt and the grid
//    spacing shrinks the residual diagnostic by >= 3x; < 5 min.
Outcome criterion7(Cache& cache) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const double omega = 0.1;
  const auto& gs = cache.ground5_w01();
  {
    auto g = egrid(5);
    auto Q = sample(g, [&](double r) { return Complex{gs.profile(r), 0.0}; });
    EvolveOptions opt;
    opt.dt = 1e-3;
    opt.t_end = 0.5;
    opt.sample_every = 100;
    auto tr = evolve(spec5(), omega, Q, opt);
    double dmax = 0.0;
    for (int i = 0; i < Q.size(); ++i)
      dmax = std::max(dmax, std::abs(std::abs(tr.final_state.values[i]) -
                                     Q.values[i].real()));
    const double drift = dmax / gs.a0;
    out.detail << "modulus drift=" << drift << " ";
    out.require(drift < 1e-3, "modulus drift under 1e-3");
  }
  {
    auto run_residual = [&](int n, double dt) {
      auto g = RadialGrid::uniform(5, n, 100.0);
      auto Q =
          sample(g, [&](double r) { return Complex{gs.profile(r), 0.0}; });
      EvolveOptions opt;
      opt.dt = dt;
      opt.t_end = 0.05;
      opt.sample_every = static_cast<int>(std::llround(0.01 / dt));
      auto tr = evolve(spec5(), omega, Q, opt);
      double worst = 0.0;
      for (double v : tr.residual_t) worst = std::max(worst, v);
      return worst;
    };
    const double r1 = run_residual(8192, 1e-3);
    const double r2 = run_residual(16384, 5e-4);
    out.detail << "residual " << r1 << " -> " << r2 << " (ratio " << r1 / r2
               << ")";
    out.require(r2 * 3.0 <= r1, "residual shrinks by >= 3x");
  }
  const double secs = seconds_since(t0);
  out.detail << " (" << secs << "s)";
  out.require(secs < 300.0, "runtime under 5 min");
  return out;
}

// 8. Exponent certificates: exact-rational invariants for d in {5,6,7},
//    20 p1 values each in the low-regularity half of the admissible window
//    (all certificates including the gamma bound), plus the five named
//    pairs; < 1 s.
Outcome criterion8(Cache&) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  namespace ex = exponents;
  for (int d : {5, 6, 7}) {
    const Rational lo = ex::two_star_mass(d) - Rational(1);
    const Rational half =
        lo + (ex::two_star_energy(d) - ex::two_star_mass(d)) / Rational(2);
    int bad = 0;
    Rational prev_alpha;
    bool first = true;
    for (int k = 1; k <= 20; ++k) {
      const Rational p1 = lo + Rational(k, 21) * (half - lo);
      const auto e = ex::exotic(d, p1);
      const bool ok =
          e.alpha_in_interval && e.rho_gamma_hs_admissible &&
          e.gamma_above_diagonal && e.s_alpha_consistent &&
          e.rho_star == ex::conjugate(e.rho) &&
          e.s_alpha == Rational(1) - Rational(4, d) * e.s_p1 &&
          e.rho ==
              (e.alpha + Rational(1) + ex::two_star_energy(d)) / Rational(2) &&
          (first || e.alpha < prev_alpha);
      if (!ok) ++bad;
      prev_alpha = e.alpha;
      first = false;
    }
    const Rational pmid =
        (ex::two_star_mass(d) + ex::two_star_energy(d)) / Rational(2) -
        Rational(1);
    int pairs_bad = 0;
    for (const auto& np : ex::named_pairs(d, pmid))
      if (!np.l2_admissible) ++pairs_bad;
    out.detail << "d=" << d << ": bad_records=" << bad
               << " bad_pairs=" << pairs_bad << " ";
    out.require(bad == 0, "all exponent certificates");
    out.require(pairs_bad == 0, "five named pairs admissible");
  }
  const double secs = seconds_since(t0);
  out.detail << "(" << secs << "s)";
  out.require(secs < 1.0, "runtime under 1 s");
  return out;
}

const char* kNames[8] = {"bubble identity",    "threshold gap",
                         "scaling-lemma suite", "Nehari consistency",
                         "conservation",        "flow invariance",
                         "standing wave",       "exponent certificates"};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  if (argc > 1) {
    const int n = std::atoi(argv[1]);
    if (n < 1 || n > 8) {
      std::fprintf(stderr, "usage: %s [criterion 1..8]\n", argv[0]);
      return 64;
    }
    which.push_back(n);
  } else {
    for (int i = 1; i <= 8; ++i) which.push_back(i);
  }

  Cache cache;
  int failures = 0;
  for (int n : which) {
    Outcome out;
    switch (n) {
      case 1: out = criterion1(cache); break;
      case 2: out = criterion2(cache); break;
      case 3: out = criterion3(cache); break;
      case 4: out = criterion4(cache); break;
      case 5: out = criterion5(cache); break;
      case 6: out = criterion6(cache); break;
      case 7: out = criterion7(cache); break;
      case 8: out = criterion8(cache); break;
    }
    std::printf("criterion %d (%s): %s  %s\n", n, kNames[n - 1],
                out.pass ? "PASS" : "FAIL", out.detail.str().c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures;
}
