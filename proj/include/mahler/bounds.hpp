#ifndef MAHLER_BOUNDS_HPP
#define MAHLER_BOUNDS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mahler/ball.hpp"
#include "mahler/errors.hpp"
#include "mahler/evaluator.hpp"
#include "mahler/rational.hpp"

namespace mahler {

enum class Theorem { T1, T2, T3 };

inline const char* to_string(Theorem t) {
  switch (t) {
    case Theorem::T1: return "T1";
    case Theorem::T2: return "T2";
    case Theorem::T3: return "T3";
  }
  return "?";
}

/// rho = log d / log delta. When d = delta^t the value is the integer t and
/// `power` holds it; every comparison against rho is decided on integers.
struct Rho {
  Ball value;
  std::optional<unsigned long> power;
};

namespace detail {

inline void check_degrees(long d, long delta) {
  if (delta < 2) throw InvalidArgument("delta = ord p must be >= 2");
  if (d < delta) throw InvalidArgument("d = deg p must be >= delta = ord p");
}

inline Integer ipow(long base, long e) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return out;
}

// Largest t >= 0 with delta^t <= x (x >= 1).
inline long floor_log(const Integer& x, long delta) {
  long t = 0;
  Integer acc = delta;
  while (acc <= x) {
    acc *= delta;
    ++t;
  }
  return t;
}

// d^a < delta^b, exactly; false whenever b <= 0 since d^a >= 1.
inline bool pow_less(long d, long a, long delta, long b) {
  if (b <= 0) return false;
  return ipow(d, a) < ipow(delta, b);
}

}  // namespace detail

inline Rho rho(long d, long delta, mpfr_prec_t prec = kDefaultPrecision) {
  detail::check_degrees(d, delta);
  Rho r;
  Integer x = d;
  long t = detail::floor_log(x, delta);
  if (detail::ipow(delta, t) == x) {
    r.power = static_cast<unsigned long>(t);
    r.value = Ball(Rational(t), prec);
  } else {
    r.value = log(Ball(Rational(d), prec)) / log(Ball(Rational(delta), prec));
  }
  return r;
}

struct Thresholds {
  Ball t1, t2, t3;  // n+1-rho, n+1-2 rho, 2n+1-rho(n+1)
};

inline Thresholds thresholds(long n, long d, long delta, mpfr_prec_t prec = kDefaultPrecision) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  Ball r = rho(d, delta, prec).value;
  return {Ball(Rational(n + 1), prec) - r, Ball(Rational(n + 1), prec) - Ball(Rational(2), prec) * r,
          Ball(Rational(2 * n + 1), prec) - Ball(Rational(n + 1), prec) * r};
}

// k < threshold(theorem), decided on integers.
inline bool admissible(Theorem th, long n, long d, long delta, long k) {
  detail::check_degrees(d, delta);
  switch (th) {
    case Theorem::T1: return detail::pow_less(d, 1, delta, n + 1 - k);
    case Theorem::T2: return detail::pow_less(d, 2, delta, n + 1 - k);
    case Theorem::T3: return detail::pow_less(d, n + 1, delta, 2 * n + 1 - k);
  }
  return false;
}

struct ExponentReport {
  Theorem theorem = Theorem::T1;
  long n = 0, d = 0, delta = 0, k = 0;
  Rational epsilon;
  Ball rho;
  bool admissible = false;
  Ball inner_exp, bracket_exp, degree_exp;
};

/// Exponent triple of the measure -C (h + deg^inner)^bracket deg^degree_exp.
inline ExponentReport exponents(Theorem th, long n, long d, long delta, long k, const Rational& epsilon,
                                mpfr_prec_t prec = kDefaultPrecision) {
  if (n < 1) throw InvalidArgument("n must be >= 1");
  if (k < 0 || k > n - 1) throw InvalidArgument("k must satisfy 0 <= k <= n-1");
  if (th != Theorem::T3 && epsilon <= 0) throw InvalidArgument("epsilon must be positive");
  ExponentReport rep;
  rep.theorem = th;
  rep.n = n;
  rep.d = d;
  rep.delta = delta;
  rep.k = k;
  rep.epsilon = epsilon;
  rep.rho = rho(d, delta, prec).value;
  rep.admissible = admissible(th, n, d, delta, k);
  if (!rep.admissible)
    throw NotAdmissible(std::string(to_string(th)) + ": k = " + std::to_string(k) + " is not below the threshold for n = " +
                        std::to_string(n) + ", d = " + std::to_string(d) + ", delta = " + std::to_string(delta));

  auto B = [prec](const Rational& q) { return Ball(q, prec); };
  const Ball& r = rep.rho;
  const Ball inv_r = r.inverse();
  const Ball nk = B(Rational(n - k));
  const Ball lead = B(Rational(n + 1)) / nk;        // (n+1)/(n-k)
  const Ball ratio = inv_r * B(Rational(k + 1)) / nk;  // (1/rho)(k+1)/(n-k)
  const Ball m = B(Rational(n + 1 - k));
  try {
    switch (th) {
      case Theorem::T1:
        rep.bracket_exp = lead - ratio;
        rep.degree_exp = ratio;
        rep.inner_exp = (m + B(epsilon)) / (m - r);
        break;
      case Theorem::T2:
        rep.bracket_exp = B(Rational(2)) * lead - ratio;
        rep.degree_exp = ratio - lead;
        rep.inner_exp = (m - r + B(epsilon)) / (m - B(Rational(2)) * r);
        break;
      case Theorem::T3:
        rep.bracket_exp = lead - ratio;
        rep.degree_exp = B(Rational(k + 1)) / nk;
        rep.inner_exp = (B(Rational(1)) - r * B(Rational(n + 1)) / B(Rational(2 * n - k + 1))).inverse();
        break;
    }
  } catch (const DenominatorMayVanish&) {
    throw Inconclusive("exponent denominator not separated from 0 at " + std::to_string(prec) + " bits");
  }
  return rep;
}

/// Lower bounds on transcendence degrees. The integer-part bracket is floor.
struct TrdegBounds {
  long cor1 = 0;                  // n+1-floor(rho)
  std::optional<long> cor2;       // n, if rho < 2
  long cor3 = 0;                  // n+1-floor(2 rho), for (y, f_1(y), ..., f_n(y))
  std::optional<long> cor4;       // n-1, if rho < 3/2
  Ball thm3_real;                 // 2n+1-rho(n+1)
  long thm3_ceil = 0;
  long thm3_floor_plus_one = 0;
};

inline TrdegBounds trdeg_bounds(long n, long d, long delta, mpfr_prec_t prec = kDefaultPrecision) {
  detail::check_degrees(d, delta);
  if (n < 1) throw InvalidArgument("n must be >= 1");
  TrdegBounds b;
  Integer dd = d;
  b.cor1 = n + 1 - detail::floor_log(dd, delta);
  if (detail::pow_less(d, 1, delta, 2)) b.cor2 = n;
  b.cor3 = n + 1 - detail::floor_log(dd * dd, delta);
  if (detail::pow_less(d, 2, delta, 3)) b.cor4 = n - 1;
  b.thm3_real = thresholds(n, d, delta, prec).t3;
  // 2n+1 - rho(n+1) with rho(n+1) = log_delta(d^(n+1))
  Integer dn = detail::ipow(d, n + 1);
  long fl = detail::floor_log(dn, delta);
  bool integral = detail::ipow(delta, fl) == dn;
  b.thm3_ceil = 2 * n + 1 - fl;
  b.thm3_floor_plus_one = 2 * n + 1 - (integral ? fl : fl + 1) + 1;
  return b;
}

/// n+2 when the T1 bracket exponent at k = n-1 is 1, i.e. d = delta; the
/// exponent is then the eps -> 0 limit of inner + degree = 2 + n.
inline std::optional<Rational> dirichlet_exponent(long n, long d, long delta) {
  detail::check_degrees(d, delta);
  if (d != delta) return std::nullopt;
  return Rational(n + 2);
}

struct MeasureFloor {
  Ball log_dist;                  // -C (h + deg^inner)^bracket deg^degree_exp
  std::optional<Ball> log_p;      // log_dist + deg log||x|| + h, hypersurface case k = n-1
};

/// h is log||P|| (max-norm height) for a hypersurface P of degree deg.
inline MeasureFloor measure_floor(const ExponentReport& rep, const Rational& C, const Ball& h, long deg,
                                  const std::optional<EvaluatedPoint>& point = std::nullopt) {
  if (!rep.admissible) throw NotAdmissible("measure floor needs an admissible exponent report");
  if (C <= 0) throw InvalidArgument("C must be positive");
  if (deg < 1) throw InvalidArgument("deg must be >= 1");
  if (h.upper().sign() < 0) throw InvalidArgument("h must be nonnegative");
  const mpfr_prec_t prec = rep.rho.precision();
  Ball D(Rational(deg), prec);
  Ball base = h + pow(D, rep.inner_exp);
  MeasureFloor out;
  out.log_dist = -(Ball(C, prec) * pow(base, rep.bracket_exp) * pow(D, rep.degree_exp));
  if (point && rep.k == rep.n - 1) {
    Ball norm = point->coords.front();
    for (const auto& c : point->coords) norm = max_abs_ball(norm, c);
    out.log_p = out.log_dist + D * log(norm) + h;
  }
  return out;
}

}  // namespace mahler

#endif  // MAHLER_BOUNDS_HPP
