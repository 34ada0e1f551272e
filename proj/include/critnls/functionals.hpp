#ifndef CRITNLS_FUNCTIONALS_HPP
#define CRITNLS_FUNCTIONALS_HPP

#include <cmath>
#include <vector>

#include "critnls/field.hpp"
#include "critnls/nonlinearity.hpp"

namespace critnls {

// Every scalar functional of one field:
//   H     = 1/2 |grad u|^2 - 1/2 int F(u) - (1/2^*) |u|_{2^*}^{2^*}
//   H0    = 1/2 |grad u|^2 - (1/2^*) |u|_{2^*}^{2^*}
//   S_w   = (w/2) M + H
//   K     = d/dl H(T_l u)|_{l=1}
//         = |grad u|^2 - (d/4) int (DF - 2F)(u) - |u|_{2^*}^{2^*}
//   I_w   = S_w - K/2
//         = (w/2) M + (d/8) int (DF - 2_* F)(u) + (1/d) |u|_{2^*}^{2^*}
// with T_l the L^2-scaling (T_l u)(x) = l^{d/2} u(l x).
//
// For monomial perturbations all perturbation integrals reduce to the
// per-term norms |u|_{p_k+1}^{p_k+1}, so a report can be rescaled in l
// without touching the grid (scaled_report below).
struct FunctionalReport {
  int d = 0;
  double omega = 0.0;
  double mass = 0.0;     // |u|_2^2
  double kinetic = 0.0;  // |grad u|_2^2
  double potF = 0.0;     // int F(u)
  double pot_crit = 0.0; // |u|_{2^*}^{2^*}
  std::vector<double> per_term;  // |u|_{p_k+1}^{p_k+1}
  double H = 0.0;
  double H0 = 0.0;
  double S_omega = 0.0;
  double I_omega = 0.0;
  double K = 0.0;
  std::vector<double> momentum;  // identically zero for radial fields
};

namespace detail {

// Assembles the derived scalars from the primitive norms. Weights:
//   int F        = sum_k 2 mu_k/(p_k+1)      |u|_{p_k+1}^{p_k+1}
//   int (DF-2F)  = sum_k 2 mu_k (p_k-1)/(p_k+1)   ...
//   int (DF-2_*F)= sum_k 2 mu_k (p_k+1-2_*)/(p_k+1) ...
inline void finish_report(const NonlinearitySpec& spec, FunctionalReport& rep) {
  const int d = spec.d;
  const double two_star = spec.two_star_energy();
  const double two_star_m = spec.two_star_mass();
  double potF = 0.0, df2 = 0.0, df2s = 0.0;
  for (std::size_t k = 0; k < spec.terms.size(); ++k) {
    const auto& t = spec.terms[k];
    const double nk = rep.per_term[k];
    potF += 2.0 * t.mu / (t.p + 1.0) * nk;
    df2 += 2.0 * t.mu * (t.p - 1.0) / (t.p + 1.0) * nk;
    df2s += 2.0 * t.mu * (t.p + 1.0 - two_star_m) / (t.p + 1.0) * nk;
  }
  rep.potF = potF;
  rep.H0 = 0.5 * rep.kinetic - rep.pot_crit / two_star;
  rep.H = rep.H0 - 0.5 * potF;
  rep.S_omega = 0.5 * rep.omega * rep.mass + rep.H;
  rep.K = rep.kinetic - 0.25 * d * df2 - rep.pot_crit;
  rep.I_omega = 0.5 * rep.omega * rep.mass + 0.125 * d * df2s +
                rep.pot_crit / d;
  rep.momentum.assign(d, 0.0);
}

}  // namespace detail

inline FunctionalReport report(const NonlinearitySpec& spec, double omega,
                               const RadialField& u) {
  require_valid(spec);
  FunctionalReport rep;
  rep.d = spec.d;
  rep.omega = omega;
  rep.mass = lp_norm_pow(u, 2.0);
  rep.kinetic = grad_norm_sq(u);
  rep.pot_crit = lp_norm_pow(u, spec.two_star_energy());
  rep.per_term.reserve(spec.terms.size());
  for (const auto& t : spec.terms)
    rep.per_term.push_back(lp_norm_pow(u, t.p + 1.0));
  detail::finish_report(spec, rep);
  return rep;
}

// Report of T_lambda u from the base report alone, using the exact scaling
// laws: mass invariant, kinetic ~ l^2, |u|_q^q ~ l^{qd/2 - d}. No grid
// resampling, hence no interpolation error in lambda scans.
inline FunctionalReport scaled_report(const NonlinearitySpec& spec,
                                      const FunctionalReport& base,
                                      double lambda) {
  if (!(lambda > 0.0))
    throw Error(ErrorCode::NonpositiveLambda,
                "lambda = " + std::to_string(lambda));
  const int d = spec.d;
  FunctionalReport rep;
  rep.d = base.d;
  rep.omega = base.omega;
  rep.mass = base.mass;
  rep.kinetic = lambda * lambda * base.kinetic;
  rep.pot_crit = std::pow(lambda, spec.two_star_energy()) * base.pot_crit;
  rep.per_term.resize(base.per_term.size());
  for (std::size_t k = 0; k < spec.terms.size(); ++k)
    rep.per_term[k] =
        std::pow(lambda, 0.5 * d * (spec.terms[k].p - 1.0)) *
        base.per_term[k];
  detail::finish_report(spec, rep);
  return rep;
}

// H^1-dot scaling (T'_l u)(x) = l^{(d-2)/2} u(l x), by resampling on the
// same grid (linear interpolation; zero beyond r_max).
inline RadialField hdot1_scale(const RadialField& u, double lambda) {
  if (!(lambda > 0.0))
    throw Error(ErrorCode::NonpositiveLambda,
                "lambda = " + std::to_string(lambda));
  const double amp = std::pow(lambda, 0.5 * (u.grid->dim() - 2));
  return sample(u.grid,
                [&](double r) { return amp * interp_linear(u, lambda * r); });
}

// L^2 scaling (T_l u)(x) = l^{d/2} u(l x) as an actual resampled field.
// Scans should use scaled_report instead; this exists for preparing
// initial data such as T_l Q.
inline RadialField l2_scale(const RadialField& u, double lambda) {
  if (!(lambda > 0.0))
    throw Error(ErrorCode::NonpositiveLambda,
                "lambda = " + std::to_string(lambda));
  const double amp = std::pow(lambda, 0.5 * u.grid->dim());
  return sample(u.grid,
                [&](double r) { return amp * interp_linear(u, lambda * r); });
}

// The static solution W(r) = (sqrt(d(d-2))/(1+r^2))^{(d-2)/2} of the
// unperturbed equation; it turns -Delta W = W^{2^*-1} into an identity and
// attains the sharp Sobolev constant.
inline double bubble_value(int d, double r) {
  return std::pow(std::sqrt(static_cast<double>(d) * (d - 2)) /
                      (1.0 + r * r),
                  0.5 * (d - 2));
}

inline RadialField bubble_W(const GridPtr& grid) {
  const int d = grid->dim();
  return sample(grid,
                [d](double r) { return Complex{bubble_value(d, r), 0.0}; });
}

struct SigmaEstimate {
  double grad_sq = 0.0;    // |grad W|^2 on the grid
  double crit_norm = 0.0;  // |W|_{2^*}^{2^*} on the grid
  double sigma_pow = 0.0;  // sigma^{d/2}, reported from |grad W|^2
  double sigma = 0.0;      // sigma_pow^{2/d}
  double rel_mismatch = 0.0;
};

inline SigmaEstimate sigma_estimate(const GridPtr& grid) {
  const int d = grid->dim();
  const RadialField W = bubble_W(grid);
  SigmaEstimate est;
  est.grad_sq = grad_norm_sq(W);
  est.crit_norm = lp_norm_pow(W, 2.0 + 4.0 / (d - 2));
  est.sigma_pow = est.grad_sq;
  est.sigma = std::pow(est.sigma_pow, 2.0 / d);
  est.rel_mismatch = std::abs(est.grad_sq - est.crit_norm) / est.grad_sq;
  return est;
}

// max over interior nodes of |Delta W + W^{2^*-1}| / max W^{2^*-1}
inline double bubble_pde_residual(const GridPtr& grid) {
  const int d = grid->dim();
  const double q = 1.0 + 4.0 / (d - 2);  // 2^* - 1
  const RadialField W = bubble_W(grid);
  const auto lap = radial_laplacian(W);
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i + 1 < W.size(); ++i) {
    const double rhs = std::pow(W.values[i].real(), q);
    scale = std::max(scale, rhs);
    worst = std::max(worst, std::abs(lap[i].real() + rhs));
  }
  return worst / scale;
}

}  // namespace critnls

#endif  // CRITNLS_FUNCTIONALS_HPP
