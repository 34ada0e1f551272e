#ifndef CRITNLS_RATIONAL_HPP
#define CRITNLS_RATIONAL_HPP

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

#include "critnls/errors.hpp"

namespace critnls {

// Exact rational arithmetic extended with a single +infinity element, used
// for Strichartz exponent bookkeeping where identities must hold bit-exactly.
// Finite values are kept normalized (gcd 1, positive denominator); products
// go through 128-bit intermediates so desk-scale exponent algebra cannot
// overflow silently.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  static constexpr Rational infinity() {
    Rational r;
    r.num_ = 1;
    r.den_ = 0;
    return r;
  }

  bool is_infinite() const { return den_ == 0; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    if (is_infinite()) return std::numeric_limits<double>::infinity();
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (is_infinite()) return "inf";
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.is_infinite() && b.is_infinite())
      throw Error(ErrorCode::DegenerateDenominator, "inf - inf");
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (a.is_infinite() && b.is_infinite())
      throw Error(ErrorCode::DegenerateDenominator, "inf / inf");
    if (a.is_infinite()) return infinity();
    if (b.is_infinite()) return Rational(0);
    if (b.num_ == 0) return infinity();
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const {
    if (is_infinite())
      throw Error(ErrorCode::DegenerateDenominator, "negating infinity");
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  // 1/x with the extended-value conventions 1/inf = 0 and 1/0 = inf.
  Rational reciprocal() const {
    if (is_infinite()) return Rational(0);
    if (num_ == 0) return infinity();
    return Rational(den_, num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    if (a.is_infinite()) return false;
    if (b.is_infinite()) return true;
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return !(b < a);
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return !(a < b);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  using i128 = __int128;

  static Rational make(i128 n, i128 d) {
    if (d == 0) return infinity();
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim)
      throw Error(ErrorCode::DegenerateDenominator, "rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    Rational r = make(num_, den_);
    num_ = r.num_;
    den_ = r.den_;
  }

  std::int64_t num_;
  std::int64_t den_;  // den_ == 0 encodes +infinity
};

}  // namespace critnls

#endif  // CRITNLS_RATIONAL_HPP
