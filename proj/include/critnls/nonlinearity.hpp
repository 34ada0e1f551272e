#ifndef CRITNLS_NONLINEARITY_HPP
#define CRITNLS_NONLINEARITY_HPP

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "critnls/errors.hpp"

namespace critnls {

using Complex = std::complex<double>;

struct MonomialTerm {
  double mu;  // coefficient, > 0
  double p;   // power, strictly inside (2_* - 1, 2^* - 1)
};

// The perturbation f(z) = sum_k mu_k |z|^{p_k - 1} z together with its
// potential F(z) = sum_k 2 mu_k / (p_k + 1) |z|^{p_k + 1}, normalized so
// that dF/dzbar = f. The empty term list is the pure critical equation
// ("diagnostic mode"): functional identities still make sense, solvers
// that need a genuine perturbation reject it.
struct NonlinearitySpec {
  int d = 0;
  std::vector<MonomialTerm> terms;

  bool diagnostic() const { return terms.empty(); }

  double two_star_mass() const { return 2.0 + 4.0 / d; }
  double two_star_energy() const { return 2.0 + 4.0 / (d - 2); }

  // eps0 = (p_1 + 1) - 2_*, the maximal admissible choice.
  double eps0() const {
    if (terms.empty()) return 0.0;
    return (terms.front().p + 1.0) - two_star_mass();
  }
};

struct ValidationIssue {
  ErrorCode code;
  std::string message;
};

struct ValidationReport {
  bool ok = false;
  bool diagnostic_only = false;  // valid only as the unperturbed equation
  double eps0 = 0.0;
  std::vector<ValidationIssue> issues;
  // Facts that hold automatically for in-range monomials with positive
  // coefficients; recorded so callers can see which structure assumptions
  // the functional identities rely on.
  bool F_nonnegative = false;
  bool DF_identity = false;            // DF = sum_k (p_k + 1) F_k
  bool D_minus_growth_nonneg = false;  // (D - 2_* - eps0) F >= 0
  bool convexity_nonneg = false;       // (D - 2)(D - 2_* - eps0) F >= 0
};

inline ValidationReport validate(const NonlinearitySpec& spec) {
  ValidationReport rep;
  if (spec.d < 3) {
    rep.issues.push_back({ErrorCode::DimensionTooSmall,
                          "dimension " + std::to_string(spec.d) + " < 3"});
    return rep;
  }
  const double lo = spec.two_star_mass() - 1.0;
  const double hi = spec.two_star_energy() - 1.0;
  double prev = lo;
  bool first = true;
  for (const auto& t : spec.terms) {
    if (!(t.mu > 0.0))
      rep.issues.push_back({ErrorCode::NonpositiveCoefficient,
                            "mu = " + std::to_string(t.mu)});
    if (!(t.p > lo && t.p < hi))
      rep.issues.push_back(
          {ErrorCode::ExponentOutOfRange,
           "p = " + std::to_string(t.p) + " outside open (" +
               std::to_string(lo) + ", " + std::to_string(hi) + ")"});
    if (!first && !(t.p > prev))
      rep.issues.push_back({ErrorCode::NonincreasingExponents,
                            "p = " + std::to_string(t.p) +
                                " does not increase past " +
                                std::to_string(prev)});
    prev = t.p;
    first = false;
  }
  rep.ok = rep.issues.empty();
  if (rep.ok) {
    rep.diagnostic_only = spec.diagnostic();
    rep.eps0 = spec.eps0();
    rep.F_nonnegative = true;
    rep.DF_identity = true;
    // For monomials D F_k = (p_k + 1) F_k, so both operator inequalities
    // reduce to p_k + 1 >= 2_* + eps0, which eps0 = (p_1+1) - 2_* gives.
    rep.D_minus_growth_nonneg = true;
    rep.convexity_nonneg = true;
  }
  return rep;
}

// Throws on the first validation issue; used by solvers.
inline void require_valid(const NonlinearitySpec& spec,
                          bool allow_diagnostic = true) {
  ValidationReport rep = validate(spec);
  if (!rep.ok) throw Error(rep.issues.front().code, rep.issues.front().message);
  if (!allow_diagnostic && spec.diagnostic())
    throw Error(ErrorCode::EmptyPerturbation,
                "this solver needs at least one perturbation term");
}

// f(z) = sum mu_k |z|^{p_k - 1} z
inline Complex eval_f(const NonlinearitySpec& spec, Complex z) {
  const double a = std::abs(z);
  if (a == 0.0) return {0.0, 0.0};
  double s = 0.0;
  for (const auto& t : spec.terms) s += t.mu * std::pow(a, t.p - 1.0);
  return s * z;
}

// F(z) = sum 2 mu_k / (p_k + 1) |z|^{p_k + 1} >= 0
inline double eval_F(const NonlinearitySpec& spec, Complex z) {
  const double a = std::abs(z);
  if (a == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& t : spec.terms)
    s += 2.0 * t.mu / (t.p + 1.0) * std::pow(a, t.p + 1.0);
  return s;
}

// DF(z) = sum 2 mu_k |z|^{p_k + 1} with D = z d/dz + zbar d/dzbar
inline double eval_DF(const NonlinearitySpec& spec, Complex z) {
  const double a = std::abs(z);
  if (a == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& t : spec.terms) s += 2.0 * t.mu * std::pow(a, t.p + 1.0);
  return s;
}

// (D - c) F(z) = sum 2 mu_k (p_k + 1 - c)/(p_k + 1) |z|^{p_k + 1}
inline double eval_DF_minus_cF(const NonlinearitySpec& spec, Complex z,
                               double c) {
  const double a = std::abs(z);
  if (a == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& t : spec.terms)
    s += 2.0 * t.mu * (t.p + 1.0 - c) / (t.p + 1.0) * std::pow(a, t.p + 1.0);
  return s;
}

// D^2 F(z) = sum 2 mu_k (p_k + 1) |z|^{p_k + 1}
inline double eval_D2F(const NonlinearitySpec& spec, Complex z) {
  const double a = std::abs(z);
  if (a == 0.0) return 0.0;
  double s = 0.0;
  for (const auto& t : spec.terms)
    s += 2.0 * t.mu * (t.p + 1.0) * std::pow(a, t.p + 1.0);
  return s;
}

}  // namespace critnls

#endif  // CRITNLS_NONLINEARITY_HPP
