#ifndef CRITNLS_FIELD_HPP
#define CRITNLS_FIELD_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "critnls/errors.hpp"

namespace critnls {

using Complex = std::complex<double>;

enum class GridKind { Uniform, Graded };

// Discretization of radially symmetric functions on R^d: strictly increasing
// nodes r_0 = 0 < ... < r_{n-1} = r_max with trapezoidal quadrature weights
// against the surface measure c_d r^{d-1} dr, c_d = 2 pi^{d/2} / Gamma(d/2).
// The graded variant stretches exponentially, r(s) = r_max (e^{as}-1)/(e^a-1),
// keeping the core fine while reaching large radii.
class RadialGrid {
 public:
  static std::shared_ptr<const RadialGrid> uniform(int d, int n, double r_max) {
    return build(d, n, r_max, 0.0, GridKind::Uniform);
  }

  static std::shared_ptr<const RadialGrid> graded(int d, int n, double r_max,
                                                  double stretch) {
    if (stretch <= 0.0) return uniform(d, n, r_max);
    return build(d, n, r_max, stretch, GridKind::Graded);
  }

  int dim() const { return d_; }
  int size() const { return static_cast<int>(r_.size()); }
  double r_max() const { return r_.back(); }
  GridKind kind() const { return kind_; }
  double sphere_factor() const { return c_d_; }

  const std::vector<double>& nodes() const { return r_; }
  const std::vector<double>& weights() const { return w_; }

  // Finite-volume cell volumes c_d (r_{i+1/2}^d - r_{i-1/2}^d)/d; these carry
  // the mass at r = 0 (where the trapezoidal weight vanishes) and are the
  // weights the conservative evolution scheme is symmetric against.
  const std::vector<double>& cell_volumes() const { return vol_; }
  // Face radii r_{i+1/2}, i = 0 .. n-2.
  const std::vector<double>& faces() const { return face_; }

  // sum of weights over r_i <= R, the quadrature of the ball indicator
  double enclosed_weight(double R) const {
    double s = 0.0;
    for (std::size_t i = 0; i < r_.size() && r_[i] <= R; ++i) s += w_[i];
    return s;
  }

  // relative quadrature error of the ball volume at radius R
  double volume_check(double R) const {
    const double exact = c_d_ * std::pow(R, d_) / d_;
    return std::abs(enclosed_weight(R) - exact) / exact;
  }

 private:
  static std::shared_ptr<const RadialGrid> build(int d, int n, double r_max,
                                                 double stretch,
                                                 GridKind kind) {
    if (d < 3) throw Error(ErrorCode::DimensionTooSmall, "grid needs d >= 3");
    if (n < 8) throw Error(ErrorCode::QOutOfRange, "grid needs n >= 8 nodes");
    if (!(r_max > 0.0))
      throw Error(ErrorCode::QOutOfRange, "grid needs r_max > 0");
    auto g = std::make_shared<RadialGrid>();
    g->d_ = d;
    g->kind_ = kind;
    g->c_d_ = 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
    g->r_.resize(n);
    for (int i = 0; i < n; ++i) {
      const double s = static_cast<double>(i) / (n - 1);
      g->r_[i] = (kind == GridKind::Uniform)
                     ? r_max * s
                     : r_max * std::expm1(stretch * s) / std::expm1(stretch);
    }
    g->r_.front() = 0.0;
    g->r_.back() = r_max;

    g->w_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double left = (i == 0) ? 0.0 : 0.5 * (g->r_[i] - g->r_[i - 1]);
      const double right =
          (i == n - 1) ? 0.0 : 0.5 * (g->r_[i + 1] - g->r_[i]);
      g->w_[i] = g->c_d_ * std::pow(g->r_[i], d - 1) * (left + right);
    }

    g->face_.resize(n - 1);
    for (int i = 0; i + 1 < n; ++i)
      g->face_[i] = 0.5 * (g->r_[i] + g->r_[i + 1]);
    g->vol_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double lo = (i == 0) ? 0.0 : g->face_[i - 1];
      const double hi = (i == n - 1) ? g->r_.back() : g->face_[i];
      g->vol_[i] = g->c_d_ * (std::pow(hi, d) - std::pow(lo, d)) / d;
    }
    return g;
  }

  int d_ = 0;
  GridKind kind_ = GridKind::Uniform;
  double c_d_ = 0.0;
  std::vector<double> r_;
  std::vector<double> w_;
  std::vector<double> face_;
  std::vector<double> vol_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

struct RadialField {
  GridPtr grid;
  std::vector<Complex> values;

  int size() const { return static_cast<int>(values.size()); }
};

inline void require_same_grid(const RadialField& a, const RadialField& b) {
  if (a.grid != b.grid)
    throw Error(ErrorCode::GridMismatch,
                "fields live on different grids");
}

inline RadialField sample(const GridPtr& grid,
                          const std::function<Complex(double)>& fn) {
  RadialField u;
  u.grid = grid;
  u.values.resize(grid->size());
  const auto& r = grid->nodes();
  for (int i = 0; i < grid->size(); ++i) u.values[i] = fn(r[i]);
  return u;
}

inline RadialField zero_field(const GridPtr& grid) {
  return sample(grid, [](double) { return Complex{0.0, 0.0}; });
}

// ||u||_{L^q}^q = sum w_i |u_i|^q
inline double lp_norm_pow(const RadialField& u, double q) {
  if (!(q >= 1.0))
    throw Error(ErrorCode::QOutOfRange, "L^q norm needs q >= 1");
  const auto& w = u.grid->weights();
  double s = 0.0;
  if (q == 2.0) {
    for (int i = 0; i < u.size(); ++i) s += w[i] * std::norm(u.values[i]);
  } else {
    for (int i = 0; i < u.size(); ++i)
      s += w[i] * std::pow(std::abs(u.values[i]), q);
  }
  return s;
}

// Nodal radial derivative: exact-on-quadratics three-point differences,
// u'(0) = 0 by symmetry, one-sided at the outer end.
inline std::vector<Complex> radial_derivative(const RadialField& u) {
  const auto& r = u.grid->nodes();
  const int n = u.size();
  std::vector<Complex> du(n);
  du[0] = {0.0, 0.0};
  for (int i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1];
    const double hp = r[i + 1] - r[i];
    du[i] = (hm * hm * u.values[i + 1] - hp * hp * u.values[i - 1] +
             (hp * hp - hm * hm) * u.values[i]) /
            (hm * hp * (hm + hp));
  }
  const double hm = r[n - 1] - r[n - 2];
  const double hmm = r[n - 2] - r[n - 3];
  // quadratic through the last three nodes
  du[n - 1] = (u.values[n - 1] - u.values[n - 2]) / hm +
              hm * ((u.values[n - 1] - u.values[n - 2]) / hm -
                    (u.values[n - 2] - u.values[n - 3]) / hmm) /
                  (hm + hmm);
  return du;
}

// ||grad u||_{L^2}^2 via the nodal radial derivative
inline double grad_norm_sq(const RadialField& u) {
  const auto du = radial_derivative(u);
  const auto& w = u.grid->weights();
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i) s += w[i] * std::norm(du[i]);
  return s;
}

// Nodal radial Laplacian u'' + (d-1)/r u'; at the origin the symmetric
// limit d * u''(0) with u''(0) from the parabola through r_0, r_1.
inline std::vector<Complex> radial_laplacian(const RadialField& u) {
  const auto& r = u.grid->nodes();
  const int d = u.grid->dim();
  const int n = u.size();
  std::vector<Complex> lap(n, Complex{0.0, 0.0});
  const double h0 = r[1] - r[0];
  lap[0] = static_cast<double>(d) * 2.0 * (u.values[1] - u.values[0]) /
           (h0 * h0);
  for (int i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1];
    const double hp = r[i + 1] - r[i];
    const Complex upp = 2.0 *
                        (hm * u.values[i + 1] - (hm + hp) * u.values[i] +
                         hp * u.values[i - 1]) /
                        (hm * hp * (hm + hp));
    const Complex up = (hm * hm * u.values[i + 1] - hp * hp * u.values[i - 1] +
                        (hp * hp - hm * hm) * u.values[i]) /
                       (hm * hp * (hm + hp));
    lap[i] = upp + static_cast<double>(d - 1) / r[i] * up;
  }
  return lap;  // outer endpoint left zero; callers treat it as boundary
}

inline RadialField axpy(Complex alpha, const RadialField& x, Complex beta,
                        const RadialField& y) {
  require_same_grid(x, y);
  RadialField out;
  out.grid = x.grid;
  out.values.resize(x.values.size());
  for (int i = 0; i < x.size(); ++i)
    out.values[i] = alpha * x.values[i] + beta * y.values[i];
  return out;
}

inline RadialField scale(Complex alpha, const RadialField& x) {
  RadialField out;
  out.grid = x.grid;
  out.values.resize(x.values.size());
  for (int i = 0; i < x.size(); ++i) out.values[i] = alpha * x.values[i];
  return out;
}

// <u, v> = sum w_i conj(u_i) v_i
inline Complex inner(const RadialField& u, const RadialField& v) {
  require_same_grid(u, v);
  const auto& w = u.grid->weights();
  Complex s{0.0, 0.0};
  for (int i = 0; i < u.size(); ++i)
    s += w[i] * std::conj(u.values[i]) * v.values[i];
  return s;
}

// Piecewise-linear evaluation of a sampled field. Beyond r_max the last
// value is continued with the (r_max/r)^{d-2} harmonic decay, which matches
// the bubble tail exactly and is negligible for exponentially decaying
// fields; a hard zero there would create a spurious gradient spike.
inline Complex interp_linear(const RadialField& u, double r) {
  const auto& x = u.grid->nodes();
  if (r <= 0.0) return u.values.front();
  if (r >= x.back())
    return u.values.back() *
           std::pow(x.back() / r, static_cast<double>(u.grid->dim() - 2));
  // binary search for the cell containing r
  int lo = 0, hi = u.size() - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (x[mid] <= r)
      lo = mid;
    else
      hi = mid;
  }
  const double t = (r - x[lo]) / (x[hi] - x[lo]);
  return (1.0 - t) * u.values[lo] + t * u.values[hi];
}

inline void dump_csv(const RadialField& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IOFailure, "cannot open " + path);
  out << "r,re,im\n";
  char buf[96];
  const auto& r = u.grid->nodes();
  for (int i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", r[i],
                  u.values[i].real(), u.values[i].imag());
    out << buf;
  }
}

// Loads r,re,im rows and resamples them onto the given grid.
inline RadialField load_csv(const GridPtr& grid, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOFailure, "cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> rr;
  std::vector<Complex> vv;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double r = 0.0, re = 0.0, im = 0.0;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg", &r, &re, &im) != 3)
      throw Error(ErrorCode::ConfigParse, "bad field row: " + line);
    rr.push_back(r);
    vv.push_back({re, im});
  }
  if (rr.size() < 2)
    throw Error(ErrorCode::ConfigParse, "field file has fewer than 2 rows");
  return sample(grid, [&](double r) -> Complex {
    if (r <= rr.front()) return vv.front();
    if (r == rr.back()) return vv.back();
    if (r > rr.back()) return {0.0, 0.0};
    int lo = 0, hi = static_cast<int>(rr.size()) - 1;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      if (rr[mid] <= r)
        lo = mid;
      else
        hi = mid;
    }
    const double t = (r - rr[lo]) / (rr[hi] - rr[lo]);
    return (1.0 - t) * vv[lo] + t * vv[hi];
  });
}

}  // namespace critnls

#endif  // CRITNLS_FIELD_HPP
