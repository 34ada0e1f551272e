#ifndef CRITNLS_VARIATIONAL_HPP
#define CRITNLS_VARIATIONAL_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "critnls/functionals.hpp"
#include "critnls/parallel.hpp"

namespace critnls {

// --- lambda root and scans ------------------------------------------------
//
// Along the L^2-scaling T_l, K(T_l u) = l^2 kin - sum_k c_k l^{a_k} - c* l^{2^*}
// with every a_k strictly inside (2, 2^*), so K/l^2 decreases strictly from
// kin > 0 to -inf and there is exactly one root lambda(u). The scan certifies
// that sign structure together with the monotonicity of I and the concavity
// of S past the root on sampled values.

struct LambdaScan {
  std::vector<double> lambdas;
  std::vector<double> K_vals;
  std::vector<double> S_vals;
  std::vector<double> I_vals;
  double lambda_star = 0.0;
  int sign_changes = 0;
  // certificates evaluated on the sampled grid
  bool I_strictly_increasing = false;
  bool S_second_diff_bounded = false;  // 2 S[l-,l,l+] <= K/l^2 + tol
  bool S_concave_past_root = false;
};

namespace detail {

inline bool field_is_zero(const FunctionalReport& base) {
  return base.kinetic == 0.0 && base.pot_crit == 0.0 && base.mass == 0.0;
}

}  // namespace detail

// Root of K(T_l u) = 0: bracket by doubling/halving from l = 1, then bisect
// to relative width 1e-12. Uses the closed-form scaled report only.
inline double lambda_star(const NonlinearitySpec& spec, double omega,
                          const FunctionalReport& base) {
  if (detail::field_is_zero(base))
    throw Error(ErrorCode::ZeroField, "lambda_star needs a nonzero field");
  (void)omega;
  auto K_at = [&](double l) {
    return critnls::scaled_report(spec, base, l).K;
  };
  double lo = 1.0, hi = 1.0;
  const double K1 = K_at(1.0);
  if (K1 > 0.0) {
    hi = 2.0;
    while (K_at(hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e9)
        throw Error(ErrorCode::BracketFailure,
                    "K never changes sign below lambda = 1e9");
    }
  } else if (K1 < 0.0) {
    lo = 0.5;
    while (K_at(lo) < 0.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-9)
        throw Error(ErrorCode::BracketFailure,
                    "K never changes sign above lambda = 1e-9");
    }
  } else {
    return 1.0;
  }
  while (hi - lo > 1e-12 * lo) {
    const double mid = 0.5 * (lo + hi);
    if (K_at(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double lambda_star(const NonlinearitySpec& spec, double omega,
                          const RadialField& u) {
  return lambda_star(spec, omega, report(spec, omega, u));
}

inline LambdaScan scan(const NonlinearitySpec& spec, double omega,
                       const RadialField& u, double lambda_min,
                       double lambda_max, int n_points) {
  const FunctionalReport base = report(spec, omega, u);
  if (detail::field_is_zero(base))
    throw Error(ErrorCode::ZeroField, "scan needs a nonzero field");
  LambdaScan sc;
  sc.lambda_star = lambda_star(spec, omega, base);
  sc.lambdas.resize(n_points);
  sc.K_vals.resize(n_points);
  sc.S_vals.resize(n_points);
  sc.I_vals.resize(n_points);
  const double step =
      std::log(lambda_max / lambda_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double l = lambda_min * std::exp(i * step);
    const auto rep = critnls::scaled_report(spec, base, l);
    sc.lambdas[i] = l;
    sc.K_vals[i] = rep.K;
    sc.S_vals[i] = rep.S_omega;
    sc.I_vals[i] = rep.I_omega;
  }

  sc.sign_changes = 0;
  for (int i = 1; i < n_points; ++i)
    if ((sc.K_vals[i - 1] > 0.0) != (sc.K_vals[i] > 0.0)) ++sc.sign_changes;

  sc.I_strictly_increasing = true;
  double total = 0.0;
  for (int i = 1; i < n_points; ++i) {
    const double diff = sc.I_vals[i] - sc.I_vals[i - 1];
    total += diff;
    if (diff <= -1e-12) sc.I_strictly_increasing = false;
  }
  if (!(total > 0.0)) sc.I_strictly_increasing = false;

  // discrete second derivative 2 S[l_{i-1}, l_i, l_{i+1}]
  const double s_scale =
      std::max(1.0, std::abs(*std::max_element(
                        sc.S_vals.begin(), sc.S_vals.end(),
                        [](double a, double b) {
                          return std::abs(a) < std::abs(b);
                        })));
  sc.S_second_diff_bounded = true;
  sc.S_concave_past_root = true;
  for (int i = 1; i + 1 < n_points; ++i) {
    const double hm = sc.lambdas[i] - sc.lambdas[i - 1];
    const double hp = sc.lambdas[i + 1] - sc.lambdas[i];
    const double spp = 2.0 *
                       (hm * sc.S_vals[i + 1] - (hm + hp) * sc.S_vals[i] +
                        hp * sc.S_vals[i - 1]) /
                       (hm * hp * (hm + hp));
    const double li = sc.lambdas[i];
    const double bound = sc.K_vals[i] / (li * li);
    if (spp > bound + 1e-7 * (1.0 + std::abs(bound)))
      sc.S_second_diff_bounded = false;
    if (li >= sc.lambda_star && spp > 1e-10 * s_scale)
      sc.S_concave_past_root = false;
  }
  return sc;
}

// --- H vs grad comparison on K >= 0 ----------------------------------------

// C0' = max{ 4/(4 + d eps0), (d-2)/d }; on K(u) >= 0 the Hamiltonian
// controls the gradient: H(u) >= (1 - C0')/2 |grad u|^2.
inline double gradient_control_constant(const NonlinearitySpec& spec) {
  const double a = 4.0 / (4.0 + spec.d * spec.eps0());
  const double b = static_cast<double>(spec.d - 2) / spec.d;
  return std::max(a, b);
}

// --- ground state by radial shooting ---------------------------------------

struct ShootConfig {
  double r_max = 0.0;       // 0: auto, 50/sqrt(omega)
  double atol = 1e-12;      // RK step control on |u| + |u'|
  int max_bisect = 60;
  double decay_threshold = 1e-10;  // "converged" when u dips below this
  double a0_guess = 1.0;
};

struct GroundStateResult {
  RadialField Q;
  double a0 = 0.0;          // Q(0)
  double omega = 0.0;
  double K_residual = 0.0;  // |K(Q)| / |grad Q|^2
  double pde_residual = 0.0;
  double m_omega = 0.0;     // S_omega(Q)
  double sigma_pow = 0.0;   // sigma^{d/2} on the same grid
  double gap = 0.0;         // sigma^{d/2}/d - m_omega
  int iterations = 0;
  FunctionalReport report;
  // smooth profile (Hermite data + exponential tail), for resampling the
  // ground state onto other grids
  std::function<double(double)> profile;
};

namespace detail {

enum class Shot { Overshoot, Undershoot, Decayed };

struct Trajectory {
  std::vector<double> r, u, du;
  Shot shot = Shot::Undershoot;
};

// u'' + (d-1)/r u' = omega u - f(u) - |u|^{2^*-2} u, radial, u'(0) = 0.
// Adaptive classical RK4 with step doubling; the first step leaves r = 0 by
// the series u(h) = a0 + g(a0) h^2 / (2d), g = omega u - f(u) - |u|^{2^*-2}u.
class Shooter {
 public:
  Shooter(const NonlinearitySpec& spec, double omega, const ShootConfig& cfg)
      : spec_(spec), omega_(omega), cfg_(cfg) {
    crit_pow_ = spec.two_star_energy() - 1.0;
  }

  double rhs_g(double u) const {
    const double fu =
        (u >= 0.0 ? 1.0 : -1.0) *
        critnls::eval_f(spec_, Complex{std::abs(u), 0.0}).real();
    const double cu =
        (u >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(u), crit_pow_);
    return omega_ * u - fu - cu;
  }

  // keep_path: store the trajectory for interpolation
  Trajectory integrate(double a0, bool keep_path) const {
    Trajectory tr;
    const double g0 = rhs_g(a0);
    double h = 1e-4;
    double r = 16.0 * std::sqrt(cfg_.atol);  // series start
    double u = a0 + g0 * r * r / (2.0 * spec_.d);
    double du = g0 * r / spec_.d;
    if (keep_path) {
      tr.r.push_back(0.0);
      tr.u.push_back(a0);
      tr.du.push_back(0.0);
    }
    auto deriv = [&](double rr, double uu, double vv, double& fu,
                     double& fv) {
      fu = vv;
      fv = rhs_g(uu) - (spec_.d - 1) / rr * vv;
    };
    auto rk4 = [&](double rr, double uu, double vv, double hh, double& ou,
                   double& ov) {
      double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
      deriv(rr, uu, vv, k1u, k1v);
      deriv(rr + 0.5 * hh, uu + 0.5 * hh * k1u, vv + 0.5 * hh * k1v, k2u,
            k2v);
      deriv(rr + 0.5 * hh, uu + 0.5 * hh * k2u, vv + 0.5 * hh * k2v, k3u,
            k3v);
      deriv(rr + hh, uu + hh * k3u, vv + hh * k3v, k4u, k4v);
      ou = uu + hh / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
      ov = vv + hh / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    };

    const double r_end = cfg_.r_max;
    while (r < r_end) {
      if (r + h > r_end) h = r_end - r;
      // one full step vs two half steps
      double u1, v1, uh, vh, u2, v2;
      rk4(r, u, du, h, u1, v1);
      rk4(r, u, du, 0.5 * h, uh, vh);
      rk4(r + 0.5 * h, uh, vh, 0.5 * h, u2, v2);
      const double err =
          std::max(std::abs(u2 - u1), std::abs(v2 - v1)) / 15.0;
      const double tol = cfg_.atol * (1.0 + std::abs(u) + std::abs(du));
      if (err > tol) {
        h *= std::max(0.2, 0.9 * std::pow(tol / err, 0.2));
        continue;
      }
      r += h;
      u = u2 + (u2 - u1) / 15.0;
      du = v2 + (v2 - v1) / 15.0;
      if (keep_path) {
        tr.r.push_back(r);
        tr.u.push_back(u);
        tr.du.push_back(du);
      }
      if (err < 0.25 * tol) h *= std::min(2.0, 0.9 * std::pow(tol / err, 0.2));

      if (u < 0.0) {
        tr.shot = Shot::Overshoot;
        return tr;
      }
      if (du > 0.0 && u > 0.0) {
        tr.shot = Shot::Undershoot;
        return tr;
      }
      if (u < cfg_.decay_threshold && du < 0.0) {
        tr.shot = Shot::Decayed;
        return tr;
      }
    }
    tr.shot = Shot::Undershoot;  // never classified: treat as undershoot
    return tr;
  }

 private:
  const NonlinearitySpec& spec_;
  double omega_;
  ShootConfig cfg_;
  double crit_pow_;
};

// cubic Hermite interpolation through (r_i, u_i, u'_i)
inline double hermite_eval(const std::vector<double>& xs,
                           const std::vector<double>& ys,
                           const std::vector<double>& ds, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  std::size_t lo = 0, hi = xs.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (xs[mid] <= x)
      lo = mid;
    else
      hi = mid;
  }
  const double h = xs[hi] - xs[lo];
  const double t = (x - xs[lo]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * ys[lo] +
         (t3 - 2.0 * t2 + t) * h * ds[lo] +
         (-2.0 * t3 + 3.0 * t2) * ys[hi] + (t3 - t2) * h * ds[hi];
}

}  // namespace detail

// Ground state of -Delta u + omega u = f(u) + |u|^{2^*-2} u by amplitude
// bisection: trajectories crossing zero overshoot, trajectories turning
// upward undershoot; the solution sits between. The returned Q is sampled
// on `grid` with the tail A e^{-sqrt(omega) r} r^{-(d-1)/2} matched where
// the trajectory has decayed to ~1e-7 of the amplitude.
inline GroundStateResult shoot_ground_state(const NonlinearitySpec& spec,
                                            double omega, const GridPtr& grid,
                                            ShootConfig cfg = {}) {
  require_valid(spec, /*allow_diagnostic=*/false);
  if (spec.d < 4)
    throw Error(ErrorCode::DimensionTooSmall,
                "ground states need d >= 4");
  if (!(omega > 0.0))
    throw Error(ErrorCode::NonpositiveLambda, "omega must be positive");
  if (cfg.r_max <= 0.0) cfg.r_max = 50.0 / std::sqrt(omega);

  detail::Shooter shooter(spec, omega, cfg);

  // amplitude sweep for an overshoot/undershoot bracket
  double a_lo = 0.0, a_hi = 0.0;
  {
    double a = cfg.a0_guess;
    for (int i = 0; i < 64 && a_hi == 0.0; ++i) {
      const auto tr = shooter.integrate(a, false);
      if (tr.shot == detail::Shot::Overshoot)
        a_hi = a;
      else
        a_lo = std::max(a_lo, a);
      a *= 2.0;
      if (a > 1e8) break;
    }
    if (a_hi == 0.0)
      throw Error(ErrorCode::NoBracket, "no overshoot below amplitude 1e8");
    if (a_lo == 0.0) {
      double a2 = a_hi * 0.5;
      for (int i = 0; i < 64 && a_lo == 0.0; ++i) {
        const auto tr = shooter.integrate(a2, false);
        if (tr.shot != detail::Shot::Overshoot)
          a_lo = a2;
        else
          a_hi = a2;
        a2 *= 0.5;
        if (a2 < 1e-8) break;
      }
      if (a_lo == 0.0)
        throw Error(ErrorCode::NoBracket,
                    "no undershoot above amplitude 1e-8");
    }
  }

  GroundStateResult res;
  for (int it = 0; it < cfg.max_bisect; ++it) {
    const double mid = 0.5 * (a_lo + a_hi);
    const auto tr = shooter.integrate(mid, false);
    if (tr.shot == detail::Shot::Overshoot)
      a_hi = mid;
    else
      a_lo = mid;
    res.iterations = it + 1;
  }

  const double a0 = 0.5 * (a_lo + a_hi);
  auto path = shooter.integrate(a0, true);
  // Require the converged trajectory to have entered the decaying tail.
  double u_min = a0;
  for (double v : path.u) u_min = std::min(u_min, v);
  if (!(u_min < cfg.decay_threshold))
    throw Error(ErrorCode::NonconvergedODE,
                "trajectory never decayed below threshold; min u = " +
                    std::to_string(u_min));

  // matching radius for the exponential tail: u ~ 1e-7 a0, moving down
  const double match_level = std::max(1e-7 * a0, cfg.decay_threshold);
  double r_match = path.r.back();
  std::size_t i_match = path.r.size() - 1;
  for (std::size_t i = 1; i < path.r.size(); ++i) {
    if (path.u[i] <= match_level && path.du[i] < 0.0) {
      r_match = path.r[i];
      i_match = i;
      break;
    }
  }
  const double sq = std::sqrt(omega);
  const int d = spec.d;
  const double tail_amp = path.u[i_match] * std::exp(sq * r_match) *
                          std::pow(r_match, 0.5 * (d - 1));
  std::vector<double> rs(path.r.begin(), path.r.begin() + i_match + 1);
  std::vector<double> us(path.u.begin(), path.u.begin() + i_match + 1);
  std::vector<double> ds(path.du.begin(), path.du.begin() + i_match + 1);
  auto profile = [rs = std::move(rs), us = std::move(us), ds = std::move(ds),
                  tail_amp, sq, d, r_match](double r) -> double {
    if (r <= r_match) return detail::hermite_eval(rs, us, ds, r);
    return tail_amp * std::exp(-sq * r) * std::pow(r, -0.5 * (d - 1));
  };

  res.a0 = a0;
  res.omega = omega;
  res.profile = profile;
  res.Q = sample(grid, [&](double r) { return Complex{profile(r), 0.0}; });
  res.report = critnls::report(spec, omega, res.Q);
  res.m_omega = res.report.S_omega;
  res.K_residual = std::abs(res.report.K) / res.report.kinetic;
  res.sigma_pow = sigma_estimate(grid).sigma_pow;
  res.gap = res.sigma_pow / d - res.m_omega;

  // elliptic residual: Delta Q = omega Q - f(Q) - Q^{2^*-1} = g(Q) exactly
  {
    const auto lap = radial_laplacian(res.Q);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i + 1 < res.Q.size(); ++i) {
      const double q = res.Q.values[i].real();
      const double g = shooter.rhs_g(q);
      scale = std::max(scale, std::abs(g));
      worst = std::max(worst, std::abs(lap[i].real() - g));
    }
    res.pde_residual = worst / std::max(scale, 1e-300);
  }
  return res;
}

// --- Nehari upper bounds ----------------------------------------------------

struct NehariBound {
  double lambda_star = 0.0;
  double S_at_star = 0.0;  // = S_omega(T_{lambda(u)} u), an upper bound of m
  double I_at_star = 0.0;  // equals S_at_star on the manifold (K = 0 there)
};

// For each trial, project onto the Nehari-type manifold by the exact
// lambda-scaling and record S there; every value bounds m_omega from above.
// Trials are independent and run across the worker pool.
inline std::vector<NehariBound> m_omega_upper_bounds(
    const NonlinearitySpec& spec, double omega,
    const std::vector<RadialField>& trials) {
  std::vector<NehariBound> out(trials.size());
  parallel_for(static_cast<int>(trials.size()), [&](int i) {
    const auto base = report(spec, omega, trials[i]);
    NehariBound nb;
    nb.lambda_star = lambda_star(spec, omega, base);
    const auto at = scaled_report(spec, base, nb.lambda_star);
    nb.S_at_star = at.S_omega;
    nb.I_at_star = at.I_omega;
    out[i] = nb;
  });
  return out;
}

}  // namespace critnls

#endif  // CRITNLS_VARIATIONAL_HPP
