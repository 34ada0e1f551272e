#ifndef CRITNLS_EVOLUTION_HPP
#define CRITNLS_EVOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "critnls/functionals.hpp"

namespace critnls {

// --- membership classification ----------------------------------------------

// A_{omega,+} = { S_omega(u) < m_omega and K(u) > 0 } and
// A_0 = { H0(u) < sigma^{d/2}/d and |grad u|^2 < sigma^{d/2} }.
struct Classification {
  bool in_A_omega_plus = false;
  bool in_A0 = false;
  // signed gaps, positive inside the set
  double margin_S = 0.0;     // m_omega - S_omega(u)
  double margin_K = 0.0;     // K(u)
  double margin_H0 = 0.0;    // sigma^{d/2}/d - H0(u)
  double margin_grad = 0.0;  // sigma^{d/2} - |grad u|^2
};

inline Classification classify(const NonlinearitySpec& spec, double omega,
                               const RadialField& u, double m_omega,
                               double sigma_pow) {
  const auto rep = report(spec, omega, u);
  Classification c;
  c.margin_S = m_omega - rep.S_omega;
  c.margin_K = rep.K;
  c.margin_H0 = sigma_pow / spec.d - rep.H0;
  c.margin_grad = sigma_pow - rep.kinetic;
  c.in_A_omega_plus = c.margin_S > 0.0 && c.margin_K > 0.0;
  c.in_A0 = c.margin_H0 > 0.0 && c.margin_grad > 0.0;
  return c;
}

// --- time integration ---------------------------------------------------------
//
// Crank-Nicolson in time with the conservative radial Laplacian in flux form,
//   (L u)_i = [ c_d r_{i+1/2}^{d-1} (u_{i+1}-u_i)/h_i
//             - c_d r_{i-1/2}^{d-1} (u_i-u_{i-1})/h_{i-1} ] / V_i,
// V_i the cell volumes, Dirichlet at r_max, symmetry at r = 0 (the inner face
// has zero area, so no special casing). L is symmetric in the V-weighted
// inner product, with discrete kinetic energy
//   Kin = sum_faces c_d r_{i+1/2}^{d-1} |u_{i+1}-u_i|^2 / h_i.
//
// The nonlinearity enters through the difference quotient of
//   Phi(s) = (1/2) F(sqrt(s)) + (1/2^*) s^{2^*/2},  s = |u|^2:
//   i (u+ - u)/dt + L (u+ + u)/2 + chi (u+ + u) = 0,
//   chi = [Phi(|u+|^2) - Phi(|u|^2)] / (|u+|^2 - |u|^2),
// guarded by Phi' when |ds| < 1e-14. Multiplying by conj(u+ + u) resp.
// conj(u+ - u) shows the scheme conserves sum V |u|^2 and
// Kin/2 - sum V Phi(|u|^2) exactly, up to the inner fixed-point tolerance.

struct EvolveOptions {
  double dt = 1e-3;
  double t_end = 1.0;
  int sample_every = 10;          // sample stride, in steps
  bool include_critical = true;   // drop |u|^{2^*-2} u (linear/oracle runs)
  double fixed_point_tol = 1e-12;
  int max_fixed_point = 60;
  double cfl_bound = 1.0;         // warn when grad_max * dt exceeds this
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> mass_drift;  // |M(t)-M(0)| / M(0), discrete FV mass
  std::vector<double> H_drift;     // |H(t)-H(0)| / max(|H(0)|, 1e-12)
  std::vector<double> K_t;         // K of the sample, trapezoid report
  std::vector<double> potF_t;      // int F
  std::vector<double> crit_t;      // |u|_{2^*}^{2^*}
  std::vector<double> w_p1_accum;  // int_0^t ||psi||_{L^q}^q dt, q = (d+2)(p1-1)/2
  std::vector<double> w_accum;     // same with q = 2(d+2)/(d-2)
  std::vector<double> grad_max;    // running max of sqrt(Kin)
  std::vector<double> residual_t;  // discrete PDE residual (0 at ends)
  // audit extras (not part of the trace CSV)
  std::vector<double> S_t;
  std::vector<double> H1_sq_t;  // mass + kinetic of the sample
  double mass0 = 0.0;
  double H0_disc = 0.0;
  double valid_until = 0.0;  // wall-truncation validity estimate
  bool cfl_warning = false;
  RadialField final_state;
};

namespace detail {

// potential density Phi and its derivative in s = |u|^2
struct PhiEval {
  const NonlinearitySpec* spec;
  bool include_critical;
  double crit_half;  // 2^*/2

  double phi(double s) const {
    if (s <= 0.0) return 0.0;
    double v = 0.0;
    for (const auto& t : spec->terms)
      v += t.mu / (t.p + 1.0) * std::pow(s, 0.5 * (t.p + 1.0));
    if (include_critical) v += std::pow(s, crit_half) / (2.0 * crit_half);
    return v;
  }
  double dphi(double s) const {
    if (s <= 0.0) return 0.0;
    double v = 0.0;
    for (const auto& t : spec->terms)
      v += 0.5 * t.mu * std::pow(s, 0.5 * (t.p - 1.0));
    if (include_critical) v += 0.5 * std::pow(s, crit_half - 1.0);
    return v;
  }
  // (c s_new^q - c s_old^q) / (s_new - s_old) per monomial, evaluated without
  // cancellation: the naive difference loses all digits once the inner
  // iteration is nearly converged, which stalls it above its tolerance at
  // ground-state amplitudes. For nearby arguments use
  //   s^q ((1+x)^q - 1) = s^q expm1(q log1p(x)),  x = ds/s.
  static double power_quotient(double c, double q, double s_new,
                               double s_old) {
    if (s_new == s_old) {
      if (s_old <= 0.0) return 0.0;
      return c * q * std::pow(s_old, q - 1.0);
    }
    if (s_old <= 0.0) return c * std::pow(s_new, q - 1.0);
    if (s_new <= 0.0) return c * std::pow(s_old, q - 1.0);
    const double x = (s_new - s_old) / s_old;
    if (std::abs(x) <= 0.5)
      return c * std::pow(s_old, q - 1.0) * std::expm1(q * std::log1p(x)) / x;
    return c * (std::pow(s_new, q) - std::pow(s_old, q)) / (s_new - s_old);
  }
  double quotient(double s_new, double s_old) const {
    double v = 0.0;
    for (const auto& t : spec->terms)
      v += power_quotient(t.mu / (t.p + 1.0), 0.5 * (t.p + 1.0), s_new,
                          s_old);
    if (include_critical)
      v += power_quotient(1.0 / (2.0 * crit_half), crit_half, s_new, s_old);
    return v;
  }
};

// complex tridiagonal Thomas solve; diag/upper/lower are overwritten
inline void solve_tridiag(std::vector<Complex>& lower,
                          std::vector<Complex>& diag,
                          std::vector<Complex>& upper,
                          std::vector<Complex>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const Complex m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace detail

// One-instant discrete PDE residual from three consecutive stored states:
// e = i (u_next - u_prev)/(2 dt) + Delta u_mid + f(u_mid) + |u_mid|^{2^*-2} u_mid,
// returned as its L^2 norm over interior nodes.
inline double scheme_residual(const NonlinearitySpec& spec,
                              const RadialField& u_prev,
                              const RadialField& u_mid,
                              const RadialField& u_next, double dt,
                              bool include_critical = true) {
  require_same_grid(u_prev, u_mid);
  require_same_grid(u_mid, u_next);
  const auto lap = radial_laplacian(u_mid);
  const auto& w = u_mid.grid->weights();
  const double crit_pow = spec.two_star_energy() - 2.0;
  double acc = 0.0;
  for (int i = 0; i + 1 < u_mid.size(); ++i) {
    const Complex z = u_mid.values[i];
    Complex e = Complex{0.0, 1.0} *
                    (u_next.values[i] - u_prev.values[i]) / (2.0 * dt) +
                lap[i] + eval_f(spec, z);
    if (include_critical && std::abs(z) > 0.0)
      e += std::pow(std::abs(z), crit_pow) * z;
    acc += w[i] * std::norm(e);
  }
  return std::sqrt(acc);
}

// Residuals for a run of >= 3 consecutive states with uniform spacing dt.
inline std::vector<double> residuals(const NonlinearitySpec& spec,
                                     const std::vector<RadialField>& states,
                                     double dt, bool include_critical = true) {
  if (states.size() < 3)
    throw Error(ErrorCode::InsufficientStates,
                "residuals need at least 3 consecutive states");
  std::vector<double> out;
  out.reserve(states.size() - 2);
  for (std::size_t m = 1; m + 1 < states.size(); ++m)
    out.push_back(scheme_residual(spec, states[m - 1], states[m],
                                  states[m + 1], dt, include_critical));
  return out;
}

inline EvolutionTrace evolve(const NonlinearitySpec& spec, double omega,
                             const RadialField& psi0,
                             const EvolveOptions& opt) {
  require_valid(spec);
  if (!(opt.dt > 0.0))
    throw Error(ErrorCode::NonpositiveLambda, "dt must be positive");
  const GridPtr& grid = psi0.grid;
  const int n = grid->size();
  const int m = n - 1;  // unknowns 0..n-2, Dirichlet at the wall
  const auto& r = grid->nodes();
  const auto& vol = grid->cell_volumes();
  const auto& face = grid->faces();
  const double cd = grid->sphere_factor();
  const int d = grid->dim();

  // face conductances a_i = c_d r_{i+1/2}^{d-1} / h_i, i = 0..n-2
  std::vector<double> a(n - 1);
  for (int i = 0; i + 1 < n; ++i)
    a[i] = cd * std::pow(face[i], d - 1) / (r[i + 1] - r[i]);

  detail::PhiEval pe{&spec, opt.include_critical,
                     0.5 * spec.two_star_energy()};

  auto mass_of = [&](const std::vector<Complex>& u) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += vol[i] * std::norm(u[i]);
    return s;
  };
  auto kin_of = [&](const std::vector<Complex>& u) {
    double s = 0.0;
    for (int i = 0; i + 1 < n; ++i) s += a[i] * std::norm(u[i + 1] - u[i]);
    return s;
  };
  auto H_of = [&](const std::vector<Complex>& u) {
    double pot = 0.0;
    for (int i = 0; i < n; ++i) pot += vol[i] * pe.phi(std::norm(u[i]));
    return 0.5 * kin_of(u) - pot;
  };
  // (L u)_i for the stored state (interior rows only)
  auto apply_L = [&](const std::vector<Complex>& u, std::vector<Complex>& out) {
    for (int i = 0; i < m; ++i) {
      const Complex up = (i + 1 < n) ? u[i + 1] : Complex{0.0, 0.0};
      const Complex flux_hi = a[i] * (up - u[i]);
      const Complex flux_lo = (i > 0) ? a[i - 1] * (u[i] - u[i - 1])
                                      : Complex{0.0, 0.0};
      out[i] = (flux_hi - flux_lo) / vol[i];
    }
  };

  std::vector<Complex> u(psi0.values);
  u[n - 1] = {0.0, 0.0};

  const int total_steps = static_cast<int>(std::llround(opt.t_end / opt.dt));
  const int stride = std::max(1, opt.sample_every);

  EvolutionTrace tr;
  tr.mass0 = mass_of(u);
  tr.H0_disc = H_of(u);

  // wall validity: time for the bulk (99% mass radius) to reach r_max/2 at
  // group speed 2 k_rms
  {
    double r99 = r.back();
    if (tr.mass0 > 0.0) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += vol[i] * std::norm(u[i]);
        if (acc >= 0.99 * tr.mass0) {
          r99 = r[i];
          break;
        }
      }
      const double k_rms = std::sqrt(kin_of(u) / tr.mass0);
      tr.valid_until = (k_rms > 0.0)
                           ? std::max(0.0, (0.5 * r.back() - r99)) /
                                 (2.0 * k_rms)
                           : opt.t_end;
    } else {
      tr.valid_until = opt.t_end;
    }
  }

  const double q_w = spec.diagnostic()
                         ? 0.0
                         : 0.5 * (d + 2) * (spec.terms.front().p - 1.0);
  const double q_crit = 2.0 * (d + 2) / (d - 2.0);

  RadialField wrap{grid, u};
  double w_p1 = 0.0, w_cr = 0.0, gmax = 0.0;
  double prev_wp1_val = 0.0, prev_wcr_val = 0.0, prev_sample_t = 0.0;

  auto sample_state = [&](double t, double resid) {
    wrap.values = u;
    const auto rep = report(spec, omega, wrap);
    const double mass_d = mass_of(u);
    const double H_d = H_of(u);
    const double wp1_val = spec.diagnostic() ? 0.0 : lp_norm_pow(wrap, q_w);
    const double wcr_val = lp_norm_pow(wrap, q_crit);
    if (!tr.times.empty()) {
      const double dtau = t - prev_sample_t;
      w_p1 += 0.5 * (prev_wp1_val + wp1_val) * dtau;
      w_cr += 0.5 * (prev_wcr_val + wcr_val) * dtau;
    }
    prev_wp1_val = wp1_val;
    prev_wcr_val = wcr_val;
    prev_sample_t = t;
    gmax = std::max(gmax, std::sqrt(kin_of(u)));

    tr.times.push_back(t);
    tr.mass_drift.push_back(
        tr.mass0 > 0.0 ? std::abs(mass_d - tr.mass0) / tr.mass0 : 0.0);
    tr.H_drift.push_back(std::abs(H_d - tr.H0_disc) /
                         std::max(std::abs(tr.H0_disc), 1e-12));
    tr.K_t.push_back(rep.K);
    tr.potF_t.push_back(rep.potF);
    tr.crit_t.push_back(rep.pot_crit);
    tr.w_p1_accum.push_back(w_p1);
    tr.w_accum.push_back(w_cr);
    tr.grad_max.push_back(gmax);
    tr.residual_t.push_back(resid);
    tr.S_t.push_back(rep.S_omega);
    tr.H1_sq_t.push_back(rep.mass + rep.kinetic);
    if (gmax * opt.dt > opt.cfl_bound) tr.cfl_warning = true;
  };

  sample_state(0.0, 0.0);

  // states at the two previous steps, for the sampled residual
  std::vector<Complex> u_prev1, u_prev2;
  int prev1_step = -1, prev2_step = -1;

  std::vector<Complex> Lu(m), lower(m), diag(m), upper(m), rhs(m), iter(n);
  std::vector<double> chi(m);

  const Complex idt{0.0, 1.0 / opt.dt};

  for (int step = 1; step <= total_steps; ++step) {
    apply_L(u, Lu);
    // fixed-point on chi
    iter = u;
    double err = 1e300;
    const double scale = [&] {
      double s = 1.0;
      for (const auto& z : u) s = std::max(s, std::abs(z));
      return s;
    }();
    int k = 0;
    for (; k < opt.max_fixed_point; ++k) {
      for (int i = 0; i < m; ++i)
        chi[i] = pe.quotient(std::norm(iter[i]), std::norm(u[i]));
      // assemble [i/dt + L/2 + chi] u+ = [i/dt - L/2 - chi] u
      for (int i = 0; i < m; ++i) {
        const double diag_L = -(a[i] + (i > 0 ? a[i - 1] : 0.0)) / vol[i];
        diag[i] = idt + Complex{0.5 * diag_L + chi[i], 0.0};
        upper[i] = (i + 1 < m) ? Complex{0.5 * a[i] / vol[i], 0.0}
                               : Complex{0.0, 0.0};
        lower[i] = (i > 0) ? Complex{0.5 * a[i - 1] / vol[i], 0.0}
                           : Complex{0.0, 0.0};
        rhs[i] = idt * u[i] - 0.5 * Lu[i] - chi[i] * u[i];
      }
      detail::solve_tridiag(lower, diag, upper, rhs);
      double e = 0.0;
      for (int i = 0; i < m; ++i)
        e = std::max(e, std::abs(rhs[i] - iter[i]));
      for (int i = 0; i < m; ++i) iter[i] = rhs[i];
      err = e;
      if (err <= opt.fixed_point_tol * scale) break;
      if (!(err < 1e6 * scale))
        throw Error(ErrorCode::FixedPointDiverged,
                    "inner iteration diverged at t = " +
                        std::to_string(step * opt.dt) +
                        " (likely blow-up)");
    }
    if (err > opt.fixed_point_tol * scale)
      throw Error(ErrorCode::FixedPointDiverged,
                  "inner iteration did not reach tolerance at t = " +
                      std::to_string(step * opt.dt));

    u_prev2.swap(u_prev1);
    prev2_step = prev1_step;
    u_prev1 = u;
    prev1_step = step - 1;
    for (int i = 0; i < m; ++i) u[i] = iter[i];
    u[n - 1] = {0.0, 0.0};

    // ordinary samples; the residual of sample s is emitted at step s+1
    if ((step - 1) % stride == 0 && step - 1 > 0 && prev2_step == step - 2) {
      RadialField pm{grid, u_prev2}, mm{grid, u_prev1}, nm{grid, u};
      const double resid = scheme_residual(spec, pm, mm, nm, opt.dt,
                                           opt.include_critical);
      tr.residual_t.back() = resid;
    }
    if (step % stride == 0 || step == total_steps)
      sample_state(step * opt.dt, 0.0);
  }
  tr.final_state.grid = grid;
  tr.final_state.values = std::move(u);
  return tr;
}

// --- invariance audit ---------------------------------------------------------

struct AuditReport {
  bool all_in_set = true;
  int first_violation = -1;
  double inf_K = 0.0;
  double inf_margin_S = 0.0;  // inf over samples of m_omega - S_omega
  double sup_H1_sq = 0.0;
  double h1_bound = 0.0;  // C_cal (m_omega + m_omega/omega)
  bool h1_bounded = false;
};

// Desk-scale calibration of the H^1 bound: on K >= 0 with S <= m the proof
// chain gives |u|_2^2 <= 2m/w and |grad u|^2 <= d(m + absorbed lower-order
// terms); for the monomial class at the parameters exercised here the ratio
// (mass + kinetic)/(m + m/w) stays below ~17, so 20 flags genuine escape.
inline constexpr double kH1AuditConstant = 20.0;

inline AuditReport invariance_audit(const NonlinearitySpec& spec, double omega,
                                    const EvolutionTrace& tr, double m_omega) {
  (void)spec;
  AuditReport rep;
  if (tr.times.empty())
    throw Error(ErrorCode::InsufficientStates, "empty trace");
  rep.inf_K = tr.K_t.front();
  rep.inf_margin_S = m_omega - tr.S_t.front();
  rep.h1_bound = kH1AuditConstant * (m_omega + m_omega / omega);
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    rep.inf_K = std::min(rep.inf_K, tr.K_t[i]);
    rep.inf_margin_S = std::min(rep.inf_margin_S, m_omega - tr.S_t[i]);
    rep.sup_H1_sq = std::max(rep.sup_H1_sq, tr.H1_sq_t[i]);
    const bool inside = tr.K_t[i] > 0.0 && tr.S_t[i] < m_omega;
    if (!inside && rep.all_in_set) {
      rep.all_in_set = false;
      rep.first_violation = static_cast<int>(i);
    }
  }
  rep.h1_bounded = rep.sup_H1_sq <= rep.h1_bound;
  if (!rep.all_in_set)
    throw Error(ErrorCode::InvarianceViolated,
                "sample " + std::to_string(rep.first_violation) + " at t = " +
                    std::to_string(tr.times[rep.first_violation]) +
                    " left A_{omega,+}");
  return rep;
}

}  // namespace critnls

#endif  // CRITNLS_EVOLUTION_HPP
