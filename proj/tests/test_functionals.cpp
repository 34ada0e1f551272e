#include "critnls/functionals.hpp"

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"

using critnls::Complex;
using critnls::NonlinearitySpec;
using critnls::RadialField;
using critnls::RadialGrid;

namespace {

critnls::GridPtr vgrid(int d) { return RadialGrid::graded(d, 12288, 200.0, 3.0); }

RadialField gaussian(const critnls::GridPtr& g, double amp = 1.0,
                     double width = 1.0) {
  return critnls::sample(g, [=](double r) {
    return Complex{amp * std::exp(-0.5 * r * r / (width * width)), 0.0};
  });
}

}  // namespace

TEST_CASE("zero field reports all zeros") {
  NonlinearitySpec s{5, {{1.0, 2.0}}};
  auto g = RadialGrid::uniform(5, 512, 20.0);
  auto rep = critnls::report(s, 1.0, critnls::zero_field(g));
  CHECK(rep.mass == 0.0);
  CHECK(rep.kinetic == 0.0);
  CHECK(rep.potF == 0.0);
  CHECK(rep.pot_crit == 0.0);
  CHECK(rep.H == 0.0);
  CHECK(rep.S_omega == 0.0);
  CHECK(rep.I_omega == 0.0);
  CHECK(rep.K == 0.0);
}

TEST_CASE("report satisfies the defining identities") {
  NonlinearitySpec s{5, {{1.0, 2.0}}};
  auto g = vgrid(5);
  auto rep = critnls::report(s, 1.0, gaussian(g));
  CHECK(rep.I_omega ==
        doctest::Approx(rep.S_omega - 0.5 * rep.K).epsilon(1e-13));
  CHECK(rep.H == doctest::Approx(rep.H0 - 0.5 * rep.potF).epsilon(1e-13));
  CHECK(rep.S_omega ==
        doctest::Approx(rep.H + 0.5 * rep.omega * rep.mass).epsilon(1e-13));
  REQUIRE(rep.momentum.size() == 5);
  for (double p : rep.momentum) CHECK(p == 0.0);
}

TEST_CASE("diagnostic mode: S_0 = H0 and K = kinetic - crit") {
  NonlinearitySpec s{5, {}};
  auto g = vgrid(5);
  auto rep = critnls::report(s, 0.0, gaussian(g));
  CHECK(rep.potF == 0.0);
  CHECK(rep.S_omega == doctest::Approx(rep.H0).epsilon(1e-14));
  CHECK(rep.K ==
        doctest::Approx(rep.kinetic - rep.pot_crit).epsilon(1e-14));
}

TEST_CASE("potF >= 0 for valid specs") {
  NonlinearitySpec s{4, {{0.5, 2.25}, {1.5, 2.75}}};
  auto g = vgrid(4);
  oracles::Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    auto u = gaussian(g, rng.uniform(0.1, 2.0), rng.uniform(0.5, 4.0));
    CHECK(critnls::report(s, 1.0, u).potF >= 0.0);
  }
}

TEST_CASE("scaled_report: identity at lambda = 1, mass invariance") {
  NonlinearitySpec s{5, {{1.0, 2.0}}};
  auto g = vgrid(5);
  auto base = critnls::report(s, 1.0, gaussian(g));
  auto same = critnls::scaled_report(s, base, 1.0);
  CHECK(same.kinetic == base.kinetic);
  CHECK(same.pot_crit == base.pot_crit);
  CHECK(same.S_omega == base.S_omega);
  for (double l : {0.5, 2.0}) {
    auto sc = critnls::scaled_report(s, base, l);
    CHECK(sc.mass == base.mass);
  }
  CHECK_THROWS_AS(critnls::scaled_report(s, base, 0.0), critnls::Error);
  CHECK_THROWS_AS(critnls::scaled_report(s, base, -1.0), critnls::Error);
}

TEST_CASE("scaling exponents: d=5, p=2 gives l^2, l^{5/2}, l^{10/3}") {
  NonlinearitySpec s{5, {{1.0, 2.0}}};
  auto g = vgrid(5);
  auto base = critnls::report(s, 1.0, gaussian(g));
  const double l = 1.7;
  auto sc = critnls::scaled_report(s, base, l);
  CHECK(sc.kinetic ==
        doctest::Approx(std::pow(l, 2.0) * base.kinetic).epsilon(1e-13));
  CHECK(sc.per_term[0] ==
        doctest::Approx(std::pow(l, 2.5) * base.per_term[0]).epsilon(1e-13));
  CHECK(sc.pot_crit ==
        doctest::Approx(std::pow(l, 10.0 / 3.0) * base.pot_crit)
            .epsilon(1e-13));
}

TEST_CASE("analytic scaling laws agree with actually resampled fields") {
  NonlinearitySpec s{5, {{1.0, 2.0}}};
  auto g = vgrid(5);
  auto u = gaussian(g, 1.2, 1.4);
  auto base = critnls::report(s, 1.0, u);
  for (double l : {0.5, 2.0}) {
    const auto analytic = critnls::scaled_report(s, base, l);
    const auto resampled = critnls::report(s, 1.0, critnls::l2_scale(u, l));
    CHECK(std::abs(resampled.mass - analytic.mass) / analytic.mass < 1e-3);
    CHECK(std::abs(resampled.kinetic - analytic.kinetic) / analytic.kinetic <
          1e-3);
    CHECK(std::abs(resampled.pot_crit - analytic.pot_crit) /
              analytic.pot_crit <
          1e-3);
    CHECK(std::abs(resampled.K - analytic.K) /
              (std::abs(analytic.K) + analytic.kinetic) <
          1e-3);
  }
}

TEST_CASE("scaled_report composes: T_l T_m = T_{lm}") {
  NonlinearitySpec s{4, {{1.0, 2.5}}};
  auto g = vgrid(4);
  auto base = critnls::report(s, 2.0, gaussian(g));
  auto once = critnls::scaled_report(s, base, 0.6 * 1.9);
  auto twice =
      critnls::scaled_report(s, critnls::scaled_report(s, base, 0.6), 1.9);
  CHECK(twice.S_omega == doctest::Approx(once.S_omega).epsilon(1e-13));
  CHECK(twice.K == doctest::Approx(once.K).epsilon(1e-13));
}

TEST_CASE("d/dl S(T_l u)|_1 = K(u) via Richardson central differences") {
  for (int d : {4, 5}) {
    NonlinearitySpec s{d, {{1.0, d == 4 ? 2.5 : 2.0}}};
    auto g = vgrid(d);
    oracles::Rng rng(97 + d);
    for (int i = 0; i < 5; ++i) {
      auto u = gaussian(g, rng.uniform(0.3, 1.5), rng.uniform(0.7, 3.0));
      auto base = critnls::report(s, 1.0, u);
      auto S = [&](double l) {
        return critnls::scaled_report(s, base, l).S_omega;
      };
      const double h = 1e-2;
      const double d1 = (S(1.0 + h) - S(1.0 - h)) / (2.0 * h);
      const double d2 = (S(1.0 + 0.5 * h) - S(1.0 - 0.5 * h)) / h;
      const double fd = (4.0 * d2 - d1) / 3.0;
      CHECK(std::abs(fd - base.K) <=
            1e-8 * std::max({1.0, std::abs(base.K), base.kinetic}));
    }
  }
}

TEST_CASE("bubble W: PDE residual below 1e-4 on the default grid") {
  for (int d : {4, 5}) CHECK(critnls::bubble_pde_residual(vgrid(d)) < 1e-4);
}

TEST_CASE("bubble W: |grad W|^2 = |W|_{2^*}^{2^*} within 1e-3") {
  for (int d : {4, 5}) {
    auto est = critnls::sigma_estimate(vgrid(d));
    CHECK(est.rel_mismatch < 1e-3);
    // and both sides agree with the closed-form sigma^{d/2}
    const double exact = oracles::sigma_pow_exact(d);
    CHECK(std::abs(est.grad_sq - exact) / exact < 1e-3);
    CHECK(std::abs(est.crit_norm - exact) / exact < 1e-3);
    CHECK(est.sigma == doctest::Approx(std::pow(exact, 2.0 / d)).epsilon(1e-3));
  }
}

TEST_CASE("bubble W, d=4: crit norm against adaptive quadrature oracle") {
  auto g = vgrid(4);
  const double got = critnls::lp_norm_pow(critnls::bubble_W(g), 4.0);
  const double cd = oracles::sphere_area_factor(4);
  const double expect = oracles::adaptive_simpson(
      [&](double r) {
        const double w = critnls::bubble_value(4, r);
        return cd * std::pow(w, 4.0) * r * r * r;
      },
      0.0, 200.0, 1e-10);
  CHECK(std::abs(got - expect) / expect < 1e-3);
}

TEST_CASE("K(W) vanishes in diagnostic mode") {
  NonlinearitySpec s{5, {}};
  auto g = vgrid(5);
  auto rep = critnls::report(s, 0.0, critnls::bubble_W(g));
  CHECK(std::abs(rep.K) / rep.kinetic < 1e-3);
}

TEST_CASE("T'_l leaves the W invariants unchanged within 1e-3") {
  for (int d : {4, 5}) {
    auto g = vgrid(d);
    auto W = critnls::bubble_W(g);
    const double g0 = critnls::grad_norm_sq(W);
    const double c0 = critnls::lp_norm_pow(W, 2.0 + 4.0 / (d - 2));
    for (double l : {0.5, 2.0}) {
      auto Wl = critnls::hdot1_scale(W, l);
      CHECK(std::abs(critnls::grad_norm_sq(Wl) - g0) / g0 < 1e-3);
      CHECK(std::abs(critnls::lp_norm_pow(Wl, 2.0 + 4.0 / (d - 2)) - c0) /
                c0 <
            1e-3);
    }
    auto W1 = critnls::hdot1_scale(W, 1.0);
    for (int i = 0; i < W.size(); i += 511)
      CHECK(std::abs(W1.values[i] - W.values[i]) < 1e-12);
  }
  auto g = vgrid(4);
  CHECK_THROWS_AS(critnls::hdot1_scale(critnls::bubble_W(g), -2.0),
                  critnls::Error);
}
