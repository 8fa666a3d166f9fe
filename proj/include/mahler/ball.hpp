#ifndef MAHLER_BALL_HPP
#define MAHLER_BALL_HPP

#include <algorithm>
#include <string>
#include <utility>

#include <mpfr.h>

#include "mahler/errors.hpp"
#include "mahler/rational.hpp"
#include "mahler/real.hpp"

namespace mahler {

// Radii only need a few significant bits; they are always rounded upward.
inline constexpr mpfr_prec_t kRadiusPrecision = 64;

/// Midpoint-radius enclosure [mid - rad, mid + rad] of a real number.
///
/// Every operation returns a ball that contains the exact result of applying
/// the operation to any points of the operand balls. Midpoints are rounded to
/// nearest at the working precision; the rounding error, when the MPFR
/// ternary value reports one, is added to the radius as |mid| * 2^-prec.
class Ball {
 public:
  explicit Ball(mpfr_prec_t prec = kDefaultPrecision) : mid_(prec), rad_(kRadiusPrecision) {}

  Ball(const Rational& q, mpfr_prec_t prec) : mid_(prec), rad_(kRadiusPrecision) {
    int t = mpfr_set_q(mid_.get(), q.get_mpq_t(), MPFR_RNDN);
    if (t != 0) add_rounding_error();
  }

  static Ball from_mid_rad(Real mid, const Real& rad) {
    Ball b(mid.precision());
    b.mid_ = std::move(mid);
    mpfr_abs(b.rad_.get(), rad.get(), MPFR_RNDU);
    return b;
  }

  // Smallest ball (up to rounding) containing the closed interval [lo, hi].
  static Ball from_interval(const Real& lo, const Real& hi, mpfr_prec_t prec) {
    Ball b(prec);
    mpfr_add(b.mid_.get(), lo.get(), hi.get(), MPFR_RNDN);
    mpfr_div_2ui(b.mid_.get(), b.mid_.get(), 1, MPFR_RNDN);
    Real up = rnd::sub(hi, b.mid_, kRadiusPrecision, MPFR_RNDU);
    Real down = rnd::sub(b.mid_, lo, kRadiusPrecision, MPFR_RNDU);
    b.rad_ = rnd::max(up, down);
    if (b.rad_.sign() < 0) mpfr_set_zero(b.rad_.get(), 1);
    return b;
  }

  const Real& mid() const { return mid_; }
  const Real& rad() const { return rad_; }
  mpfr_prec_t precision() const { return mid_.precision(); }

  bool is_exact() const { return rad_.is_zero(); }
  bool is_finite() const { return mid_.is_finite() && rad_.is_finite(); }

  Real lower() const { return rnd::sub(mid_, rad_, precision(), MPFR_RNDD); }
  Real upper() const { return rnd::add(mid_, rad_, precision(), MPFR_RNDU); }

  // Upper bound on |x| over the ball.
  Real upper_abs() const {
    Real m = rnd::abs(mid_, precision(), MPFR_RNDU);
    return rnd::add(m, rad_, precision(), MPFR_RNDU);
  }
  // Lower bound on |x| over the ball; zero when the ball contains zero.
  Real lower_abs() const {
    Real m = rnd::abs(mid_, precision(), MPFR_RNDD);
    Real out = rnd::sub(m, rad_, precision(), MPFR_RNDD);
    if (out.sign() < 0) mpfr_set_zero(out.get(), 1);
    return out;
  }

  bool contains_zero() const {
    if (!is_finite()) return true;
    return mpfr_cmpabs(mid_.get(), rad_.get()) <= 0;
  }

  // Exact membership tests (rational comparisons, no rounding).
  bool contains(const Rational& q) const {
    if (!is_finite()) return true;
    return ::abs(q - mid_.to_rational()) <= rad_.to_rational();
  }
  bool contains(const Ball& inner) const {
    if (!is_finite()) return true;
    if (!inner.is_finite()) return false;
    return ::abs(inner.mid_.to_rational() - mid_.to_rational()) + inner.rad_.to_rational() <=
           rad_.to_rational();
  }
  bool overlaps(const Ball& other) const {
    if (!is_finite() || !other.is_finite()) return true;
    return ::abs(other.mid_.to_rational() - mid_.to_rational()) <=
           rad_.to_rational() + other.rad_.to_rational();
  }

  Ball with_precision(mpfr_prec_t prec) const {
    Ball b(prec);
    int t = mpfr_set(b.mid_.get(), mid_.get(), MPFR_RNDN);
    b.rad_ = rad_;
    if (t != 0) b.add_rounding_error();
    return b;
  }

  // Widens the radius by a nonnegative amount.
  void add_error(const Real& e) {
    Real a = rnd::abs(e, kRadiusPrecision, MPFR_RNDU);
    mpfr_add(rad_.get(), rad_.get(), a.get(), MPFR_RNDU);
  }
  void add_error(const Rational& e) { add_error(Real::from_rational(::abs(e), kRadiusPrecision, MPFR_RNDU)); }

  friend Ball operator-(const Ball& a) {
    Ball out = a;
    mpfr_neg(out.mid_.get(), out.mid_.get(), MPFR_RNDN);
    return out;
  }

  friend Ball operator+(const Ball& a, const Ball& b) {
    Ball out(std::max(a.precision(), b.precision()));
    int t = mpfr_add(out.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    mpfr_add(out.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    if (t != 0) out.add_rounding_error();
    return out;
  }

  friend Ball operator-(const Ball& a, const Ball& b) {
    Ball out(std::max(a.precision(), b.precision()));
    int t = mpfr_sub(out.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    mpfr_add(out.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
    if (t != 0) out.add_rounding_error();
    return out;
  }

  friend Ball operator*(const Ball& a, const Ball& b) {
    Ball out(std::max(a.precision(), b.precision()));
    int t = mpfr_mul(out.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
    // |a.m| b.r + |b.m| a.r + a.r b.r
    Real am = rnd::abs(a.mid_, kRadiusPrecision, MPFR_RNDU);
    Real bm = rnd::abs(b.mid_, kRadiusPrecision, MPFR_RNDU);
    Real r1 = rnd::mul(am, b.rad_, kRadiusPrecision, MPFR_RNDU);
    Real r2 = rnd::mul(bm, a.rad_, kRadiusPrecision, MPFR_RNDU);
    Real r3 = rnd::mul(a.rad_, b.rad_, kRadiusPrecision, MPFR_RNDU);
    mpfr_add(out.rad_.get(), r1.get(), r2.get(), MPFR_RNDU);
    mpfr_add(out.rad_.get(), out.rad_.get(), r3.get(), MPFR_RNDU);
    if (t != 0) out.add_rounding_error();
    return out;
  }

  // 1/x; requires the ball to exclude zero.
  Ball inverse() const {
    if (contains_zero()) throw DenominatorMayVanish("inverse of a ball containing zero");
    Ball out(precision());
    int t = mpfr_ui_div(out.mid_.get(), 1, mid_.get(), MPFR_RNDN);
    if (!rad_.is_zero()) {
      // |1/x - 1/m| <= r / (|m| (|m| - r)) for |x - m| <= r < |m|.
      Real am = rnd::abs(mid_, kRadiusPrecision, MPFR_RNDD);
      Real gap = rnd::sub(am, rad_, kRadiusPrecision, MPFR_RNDD);
      Real den = rnd::mul(am, gap, kRadiusPrecision, MPFR_RNDD);
      out.rad_ = rnd::div(rad_, den, kRadiusPrecision, MPFR_RNDU);
    }
    if (t != 0) out.add_rounding_error();
    return out;
  }

  friend Ball operator/(const Ball& a, const Ball& b) { return a * b.inverse(); }

  Ball& operator+=(const Ball& o) { return *this = *this + o; }
  Ball& operator-=(const Ball& o) { return *this = *this - o; }
  Ball& operator*=(const Ball& o) { return *this = *this * o; }

  std::string mid_string(int digits = 40) const { return mid_.to_decimal(digits); }
  std::string rad_string(int digits = 6) const { return rad_.to_decimal(digits); }

 private:
  void add_rounding_error() {
    Real e = rnd::abs(mid_, kRadiusPrecision, MPFR_RNDU);
    mpfr_mul_2si(e.get(), e.get(), -static_cast<long>(precision()), MPFR_RNDU);
    mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU);
  }

  Real mid_;
  Real rad_;
};

inline Ball pow(const Ball& base, unsigned long e) {
  Ball result(Rational(1), base.precision());
  Ball b = base;
  while (e > 0) {
    if (e & 1UL) result *= b;
    e >>= 1;
    if (e > 0) b *= b;
  }
  return result;
}

// Natural logarithm; the ball must lie in (0, inf).
inline Ball log(const Ball& x) {
  Real lo = x.lower();
  if (lo.sign() <= 0) throw InvalidArgument("log of a ball that is not strictly positive");
  Real hi = x.upper();
  Real llo(x.precision()), lhi(x.precision());
  mpfr_log(llo.get(), lo.get(), MPFR_RNDD);
  mpfr_log(lhi.get(), hi.get(), MPFR_RNDU);
  return Ball::from_interval(llo, lhi, x.precision());
}

inline Ball exp(const Ball& x) {
  Real lo = x.lower(), hi = x.upper();
  Real elo(x.precision()), ehi(x.precision());
  mpfr_exp(elo.get(), lo.get(), MPFR_RNDD);
  mpfr_exp(ehi.get(), hi.get(), MPFR_RNDU);
  return Ball::from_interval(elo, ehi, x.precision());
}

// base^expo for a strictly positive base.
inline Ball pow(const Ball& base, const Ball& expo) { return exp(expo * log(base)); }

inline Ball max_abs_ball(const Ball& a, const Ball& b) {
  // Enclosure of max(|a|, |b|).
  Real lo = rnd::max(a.lower_abs(), b.lower_abs());
  Real hi = rnd::max(a.upper_abs(), b.upper_abs());
  return Ball::from_interval(lo, hi, std::max(a.precision(), b.precision()));
}

/// Rectangular complex ball: independent enclosures of the real and
/// imaginary parts. Products are coarser than a disc enclosure but sound.
struct ComplexBall {
  Ball re;
  Ball im;

  explicit ComplexBall(mpfr_prec_t prec = kDefaultPrecision) : re(prec), im(prec) {}
  ComplexBall(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}

  friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }

  bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }

  // Upper bound on the modulus: |re| + |im| bounds would be too coarse, so
  // use sqrt(re^2 + im^2) with upward rounding.
  Real upper_abs() const {
    mpfr_prec_t p = std::max(re.precision(), im.precision());
    Real a = re.upper_abs(), b = im.upper_abs();
    Real s = rnd::add(rnd::mul(a, a, p, MPFR_RNDU), rnd::mul(b, b, p, MPFR_RNDU), p, MPFR_RNDU);
    mpfr_sqrt(s.get(), s.get(), MPFR_RNDU);
    return s;
  }
};

}  // namespace mahler

#endif  // MAHLER_BALL_HPP
