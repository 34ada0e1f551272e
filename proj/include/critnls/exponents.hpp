#ifndef CRITNLS_EXPONENTS_HPP
#define CRITNLS_EXPONENTS_HPP

#include <string>
#include <vector>

#include "critnls/errors.hpp"
#include "critnls/rational.hpp"

namespace critnls {
namespace exponents {

// Critical exponents 2_* = 2 + 4/d and 2^* = 2 + 4/(d-2).
inline Rational two_star_mass(int d) { return Rational(2) + Rational(4, d); }
inline Rational two_star_energy(int d) {
  return Rational(2) + Rational(4, d - 2);
}

// s_p = d/2 - 2/(p-1), the scaling regularity of the power p.
inline Rational s_p(int d, const Rational& p) {
  if (!(p > Rational(1)))
    throw Error(ErrorCode::POutOfRange, "s_p requires p > 1, got " + p.str());
  return Rational(d, 2) - Rational(2) / (p - Rational(1));
}

// Hoelder conjugate q' = q/(q-1), with 1' = inf and inf' = 1.
inline Rational conjugate(const Rational& q) {
  if (q.is_infinite()) return Rational(1);
  if (q == Rational(1)) return Rational::infinity();
  return q / (q - Rational(1));
}

// A space-time pair: q is the spatial Lebesgue exponent, r the time one,
// as in L^r_t L^q_x.
struct Pair {
  Rational q;
  Rational r;
};

inline bool in_admissible_range(const Rational& e) {
  return e.is_infinite() || e >= Rational(2);
}

// (q, r) is L^2-admissible iff 1/r = (d/2)(1/2 - 1/q) with q, r in [2, inf].
inline bool is_L2_admissible(int d, const Pair& pr) {
  if (!in_admissible_range(pr.q) || !in_admissible_range(pr.r)) return false;
  return pr.r.reciprocal() ==
         Rational(d, 2) * (Rational(1, 2) - pr.q.reciprocal());
}

// (q, r) is H^s-admissible iff 1/r = (d/2)(1/2 - 1/q - s/d).
inline bool is_Hs_admissible(int d, const Rational& s, const Pair& pr) {
  if (!in_admissible_range(pr.q) || !in_admissible_range(pr.r)) return false;
  return pr.r.reciprocal() ==
         Rational(d, 2) *
             (Rational(1, 2) - pr.q.reciprocal() - s / Rational(d));
}

struct NamedPair {
  std::string name;
  Pair pair;
  bool l2_admissible;
};

// The five standard L^2-admissible pairs, the fourth parametrized by the
// power p (it carries the L^r_t L^q_x home of the V_p space).
inline std::vector<NamedPair> named_pairs(int d, const Rational& p) {
  if (d < 3) throw Error(ErrorCode::DimensionTooSmall, "pairs need d >= 3");
  if (!(p > Rational(1)))
    throw Error(ErrorCode::POutOfRange, "pair family needs p > 1");
  const Rational m = Rational(d + 2) * (p - Rational(1));
  std::vector<NamedPair> out;
  auto push = [&](std::string name, Rational q, Rational r) {
    Pair pr{q, r};
    out.push_back({std::move(name), pr, is_L2_admissible(d, pr)});
  };
  push("L^inf_t L^2_x", Rational(2), Rational::infinity());
  push("diagonal", Rational(2 * (d + 2), d), Rational(2 * (d + 2), d));
  push("V-home", Rational(2 * d * (d + 2), d * d + 4),
       Rational(2 * (d + 2), d - 2));
  push("V_p-home", Rational(2 * d) * m / (Rational(d) * m - Rational(8)),
       m / Rational(2));
  push("endpoint", two_star_energy(d), Rational(2));
  return out;
}

// Exact record of the low-regularity exponents used to close perturbation
// estimates when the nonlinearity is merely Hoelder continuous (d >= 5).
struct ExoticExponents {
  int d = 0;
  Rational p1;
  Rational s_p1;
  Rational alpha;
  Rational s_alpha;
  Rational rho;
  Rational gamma;
  Rational rho_star;
  Rational gamma_star;
  // certificates
  bool alpha_in_interval = false;
  bool rho_gamma_hs_admissible = false;
  bool gamma_above_diagonal = false;
  bool s_alpha_consistent = false;

  bool all_certified() const {
    return alpha_in_interval && rho_gamma_hs_admissible &&
           gamma_above_diagonal && s_alpha_consistent;
  }
};

inline Rational alpha_interval_lo(int d) {
  return Rational(1) + Rational(4 * d, d * d - 2 * d + 8);
}
inline Rational alpha_interval_hi(int d) {
  return Rational(1) + Rational(4, d - 2);
}

inline ExoticExponents exotic(int d, const Rational& p1) {
  if (d < 5)
    throw Error(ErrorCode::DimensionTooSmall,
                "exotic exponents are defined for d >= 5");
  const Rational lo = two_star_mass(d) - Rational(1);
  const Rational hi = two_star_energy(d) - Rational(1);
  if (!(p1 > lo && p1 < hi))
    throw Error(ErrorCode::POutOfRange,
                "p1 = " + p1.str() + " outside (" + lo.str() + ", " +
                    hi.str() + ")");
  const Rational pm1 = p1 - Rational(1);
  const Rational denom = Rational(d * (d + 2)) * pm1 - Rational(16);
  if (denom == Rational(0))
    throw Error(ErrorCode::DegenerateDenominator,
                "d(d+2)(p1-1) = 16 at p1 = " + p1.str());

  ExoticExponents e;
  e.d = d;
  e.p1 = p1;
  e.s_p1 = s_p(d, p1);
  // alpha is defined through s_alpha = 1 - (4/d) s_p1
  e.alpha = Rational(1) + Rational(4 * d) * pm1 / denom;
  e.s_alpha = Rational(1) - Rational(4, d) * e.s_p1;
  e.rho = (e.alpha + Rational(1) + two_star_energy(d)) / Rational(2);
  const Rational inv_gamma =
      Rational(d, 2) *
      (Rational(1, 2) - e.rho.reciprocal() - e.s_alpha / Rational(d));
  e.gamma = inv_gamma.reciprocal();
  e.rho_star = conjugate(e.rho);
  const Rational inv_gamma_star =
      Rational(1) - Rational(d, 2) * (Rational(1, 2) - e.rho.reciprocal() +
                                      e.s_alpha / Rational(d));
  e.gamma_star = inv_gamma_star.reciprocal();

  e.alpha_in_interval =
      e.alpha > alpha_interval_lo(d) && e.alpha < alpha_interval_hi(d);
  e.rho_gamma_hs_admissible = is_Hs_admissible(d, e.s_alpha, {e.rho, e.gamma});
  e.gamma_above_diagonal = e.gamma > Rational(d + 2) * pm1 / Rational(2);
  e.s_alpha_consistent = s_p(d, e.alpha) == e.s_alpha;
  return e;
}

}  // namespace exponents
}  // namespace critnls

#endif  // CRITNLS_EXPONENTS_HPP
