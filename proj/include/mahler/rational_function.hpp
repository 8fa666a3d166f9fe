#ifndef MAHLER_RATIONAL_FUNCTION_HPP
#define MAHLER_RATIONAL_FUNCTION_HPP

#include <algorithm>
#include <string>
#include <utility>

#include "mahler/ball.hpp"
#include "mahler/errors.hpp"
#include "mahler/polynomial.hpp"
#include "mahler/rational.hpp"

namespace mahler {

/// num/den in lowest terms, normalized so that den(0) = 1.
///
/// Construction rejects denominators vanishing at 0: every consumer needs
/// the map to be analytic at the origin.
class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Polynomial::constant(1)) {}
  RationalFunction(Polynomial num) : num_(std::move(num)), den_(Polynomial::constant(1)) {}  // NOLINT
  RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw InvalidArgument("rational function with zero denominator");
    Polynomial g = Polynomial::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = Polynomial::divmod(num_, g).first;
      den_ = Polynomial::divmod(den_, g).first;
    }
    Rational d0 = den_.coeff(0);
    if (d0 == 0)
      throw InvalidArgument("rational function " + to_string() + " has a pole at z = 0");
    if (d0 != 1) {
      Rational s = Rational(1) / d0;
      num_ = s * num_;
      den_ = s * den_;
    }
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  bool is_polynomial() const { return den_.degree() == 0; }

  // max(deg num, deg den)
  int degree() const { return std::max(num_.degree(), den_.degree()); }

  // Order of vanishing at 0; den(0) != 0 holds by construction. The zero
  // function has order -1.
  int ord_zero() const { return num_.ord(); }

  Rational operator()(const Rational& x) const {
    Rational d = den_(x);
    if (d == 0) throw DenominatorMayVanish("denominator vanishes at " + x.get_str());
    return num_(x) / d;
  }

  Ball eval(const Ball& x) const {
    Ball d = den_.eval(x);
    if (d.contains_zero())
      throw DenominatorMayVanish("denominator ball contains zero at the evaluation point");
    return num_.eval(x) / d;
  }

  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::string to_string(const std::string& var = "z") const {
    if (is_polynomial()) return num_.to_string(var);
    return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
  }

 private:
  Polynomial num_;
  Polynomial den_;
};

inline int degree(const RationalFunction& rf) { return rf.degree(); }
inline int ord_zero(const RationalFunction& rf) { return rf.ord_zero(); }

// Ball evaluation of num/den for denominators that need not be analytic at 0
// (so not representable as a normalized RationalFunction).
inline Ball ball_eval(const Polynomial& num, const Polynomial& den, const Ball& x) {
  Ball d = den.eval(x);
  if (d.contains_zero())
    throw DenominatorMayVanish("denominator ball contains zero at the evaluation point");
  return num.eval(x) / d;
}

inline Ball ball_eval(const Polynomial& p, const Ball& x) { return p.eval(x); }
inline Ball ball_eval(const RationalFunction& rf, const Ball& x) { return rf.eval(x); }

}  // namespace mahler

#endif  // MAHLER_RATIONAL_FUNCTION_HPP
