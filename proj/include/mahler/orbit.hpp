#ifndef MAHLER_ORBIT_HPP
#define MAHLER_ORBIT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mahler/ball.hpp"
#include "mahler/errors.hpp"
#include "mahler/linalg.hpp"
#include "mahler/mahler_system.hpp"
#include "mahler/polynomial.hpp"
#include "mahler/rational.hpp"
#include "mahler/rational_function.hpp"

namespace mahler {

inline constexpr int kDefaultMaxIter = 64;

/// One point of an orbit: exact while the rational stays small, otherwise
/// an enclosure. `ball` is always populated.
struct Iterate {
  std::optional<Rational> exact;
  Ball ball;

  static Iterate from_rational(const Rational& q, mpfr_prec_t prec) { return {q, Ball(q, prec)}; }
  static Iterate from_ball(Ball b) { return {std::nullopt, std::move(b)}; }

  bool is_exact_zero() const { return exact && *exact == 0; }
  Rational upper_abs() const { return exact ? Rational(::abs(*exact)) : ball.upper_abs().to_rational(); }
};

/// |p(z)| <= contraction * |z| on the closed disc |z| <= radius.
struct Basin {
  Rational radius;
  Rational contraction;
};

/// Writes p = z^delta u / v and halves r from 1 until
/// r^(delta-1) * sum|u_j| r^j / (|v_0| - sum_{j>=1} |v_j| r^j) <= 1/2.
inline Basin basin(const RationalFunction& p) {
  const int delta = p.ord_zero();
  if (delta < 2) throw InvalidArgument("basin requires ord p >= 2, got " + std::to_string(delta));
  const Polynomial u = p.num().shift_down(static_cast<std::size_t>(delta));
  const Polynomial& v = p.den();
  const Polynomial v_tail = v - Polynomial::constant(v.coeff(0));
  Rational r = 1;
  for (int halvings = 0; halvings < 4096; ++halvings, r /= 2) {
    Rational lower_v = ::abs(v.coeff(0)) - v_tail.abs_majorant(r);
    if (lower_v <= 0) continue;
    Rational lambda = pow(r, static_cast<unsigned long>(delta - 1)) * u.abs_majorant(r) / lower_v;
    if (lambda <= Rational(1, 2)) return {r, lambda};
  }
  throw InvalidArgument("could not certify a contraction disc for p = " + p.to_string());
}

/// The orbit w_0 = y, w_{m+1} = p(w_m) up to the first index M with
/// |w_M| <= basin radius. From there on |w_{M+j}| <= contraction^j |w_M|.
struct OrbitCertificate {
  RationalFunction p;
  std::vector<Iterate> iterates;  // w_0 .. w_M
  Basin basin;
  mpfr_prec_t precision = kDefaultPrecision;
  bool y_exact = false;  // y was given as a rational
  bool exact = false;    // y rational and every stored iterate exact

  std::size_t M() const { return iterates.size() - 1; }
  const Iterate& last() const { return iterates.back(); }
};

namespace detail {

// Exact iteration stops once numerator + denominator exceed this many bits.
inline std::size_t exact_bit_limit(mpfr_prec_t prec) { return 64 * static_cast<std::size_t>(prec); }

inline Iterate orbit_step(const RationalFunction& p, const Iterate& w, mpfr_prec_t prec) {
  if (w.exact && bit_size(*w.exact) <= exact_bit_limit(prec)) {
    Rational den = p.den()(*w.exact);
    if (den == 0) throw DivergenceNotRuledOut("orbit reaches a pole of p");
    return Iterate::from_rational(p.num()(*w.exact) / den, prec);
  }
  Ball x = w.exact ? Ball(*w.exact, prec) : w.ball;
  Ball next(prec);
  try {
    next = p.eval(x);
  } catch (const DenominatorMayVanish&) {
    throw DivergenceNotRuledOut("orbit enclosure meets a pole of p");
  }
  if (!next.is_finite()) throw DivergenceNotRuledOut("orbit enclosure overflowed");
  return Iterate::from_ball(std::move(next));
}

inline OrbitCertificate run_orbit(const RationalFunction& p, Iterate start, int max_iter,
                                  mpfr_prec_t prec) {
  OrbitCertificate cert{p, {}, basin(p), prec, start.exact.has_value(), start.exact.has_value()};
  const Rational& r = cert.basin.radius;
  Iterate w = std::move(start);
  for (int m = 0;; ++m) {
    if (w.is_exact_zero())
      throw OrbitHitsZero("iterate w_" + std::to_string(m) + " = 0: y is a preimage of 0");
    if (!w.exact && !w.ball.is_finite()) throw DivergenceNotRuledOut("orbit enclosure overflowed");
    bool inside = w.exact ? ::abs(*w.exact) <= r : mpfr_cmp_q(w.ball.upper_abs().get(), r.get_mpq_t()) <= 0;
    if (!w.exact) cert.exact = false;
    cert.iterates.push_back(w);
    if (inside) return cert;
    if (m >= max_iter)
      throw DivergenceNotRuledOut("no iterate up to index " + std::to_string(max_iter) +
                                  " entered the basin |z| <= " + r.get_str());
    w = orbit_step(p, w, prec);
  }
}

}  // namespace detail

inline OrbitCertificate compute_orbit(const RationalFunction& p, const Rational& y,
                                      int max_iter = kDefaultMaxIter,
                                      mpfr_prec_t precision_bits = kDefaultPrecision) {
  if (y == 0) throw InvalidArgument("orbit start y must be nonzero");
  return detail::run_orbit(p, Iterate::from_rational(y, precision_bits), max_iter, precision_bits);
}

// Non-rational y given as an enclosure; the certificate is numeric only.
inline OrbitCertificate compute_orbit(const RationalFunction& p, const Ball& y,
                                      int max_iter = kDefaultMaxIter,
                                      mpfr_prec_t precision_bits = kDefaultPrecision) {
  if (y.contains_zero()) throw InvalidArgument("orbit start y must be certified nonzero");
  return detail::run_orbit(p, Iterate::from_ball(y.with_precision(precision_bits)), max_iter,
                           precision_bits);
}

// Same orbit at a different working precision (exact starts only).
inline OrbitCertificate recompute_orbit(const OrbitCertificate& orbit, mpfr_prec_t precision_bits) {
  const Iterate& y = orbit.iterates.front();
  Iterate start = y.exact ? Iterate::from_rational(*y.exact, precision_bits)
                          : Iterate::from_ball(y.ball.with_precision(precision_bits));
  return detail::run_orbit(orbit.p, std::move(start), static_cast<int>(orbit.M()) + 1, precision_bits);
}

/// Lower bound on the modulus of every nonzero root of q:
/// |c_0| / (|c_0| + max_{j>=1} |c_j|) after stripping z-factors.
/// nullopt when q has no nonzero roots (q = c z^k).
inline std::optional<Rational> nonzero_root_lower_bound(const Polynomial& q) {
  if (q.is_zero()) throw InvalidArgument("root bound of the zero polynomial");
  Polynomial s = q.shift_down(static_cast<std::size_t>(q.ord()));
  if (s.degree() == 0) return std::nullopt;
  Rational c0 = ::abs(s.coeff(0));
  Rational mx = 0;
  for (int j = 1; j <= s.degree(); ++j) mx = std::max(mx, Rational(::abs(s.coeff(static_cast<std::size_t>(j)))));
  return c0 / (c0 + mx);
}

inline const Rational& tail_margin() {
  static const Rational margin = Rational(1) + Rational(1, 256);
  return margin;
}

struct HypothesisReport {
  OrbitCertificate orbit;
  bool nonzero_ok = true;
  bool detA_ok = true;
  bool a_ok = true;
  std::optional<std::size_t> failing_index;
  std::string failing_factor;              // "det A", "a" or "det A, a"
  std::size_t checked_through = 0;         // last iterate index checked explicitly
  bool tail_certified = false;
  Polynomial detA;
  std::optional<Rational> detA_root_bound; // nullopt: no nonzero roots
  std::optional<Rational> a_root_bound;

  // T1 and T2 need det A; T3 additionally needs a.
  bool ok() const { return detA_ok && a_ok; }
};

/// Checks det A(w_m) != 0 and a(w_m) != 0 along the orbit. Beyond index M
/// the orbit is extended step by step until |w_m| (1 + 2^-8) falls below the
/// smallest nonzero root modulus bound of det A and a; since the tail only
/// shrinks from there, every later iterate is certified at once.
inline HypothesisReport check_hypotheses(const MahlerSystem& ms, const OrbitCertificate& orbit,
                                         std::size_t max_extension = 100000) {
  if (!(ms.p() == orbit.p)) throw InvalidArgument("orbit was computed for a different map p");
  HypothesisReport rep;
  rep.orbit = orbit;
  rep.detA = determinant(ms.A());
  const Polynomial& a = ms.a();
  if (rep.detA.is_zero()) {
    rep.detA_ok = false;
    rep.failing_index = 0;
    rep.failing_factor = "det A";
    return rep;
  }
  rep.detA_root_bound = nonzero_root_lower_bound(rep.detA);
  rep.a_root_bound = nonzero_root_lower_bound(a);
  const Polynomial u = orbit.p.num().shift_down(static_cast<std::size_t>(orbit.p.ord_zero()));
  const std::optional<Rational> u_root_bound = nonzero_root_lower_bound(u);

  auto vanishes = [](const Polynomial& f, const Iterate& w, const char* what, std::size_t m) {
    if (w.exact) return f(*w.exact) == 0;
    if (f.eval(w.ball).contains_zero())
      throw Inconclusive(std::string(what) + "(w_" + std::to_string(m) +
                         ") cannot be separated from 0 at this precision");
    return false;
  };
  auto record = [&](std::size_t m, const char* factor) {
    if (!rep.failing_index) {
      rep.failing_index = m;
      rep.failing_factor = factor;
    } else if (*rep.failing_index == m) {
      rep.failing_factor += std::string(", ") + factor;
    }
  };
  auto clears = [](const std::optional<Rational>& bound, const Rational& scaled) {
    return !bound || scaled < *bound;
  };

  const std::size_t M = orbit.M();
  Iterate w = orbit.iterates.front();
  for (std::size_t m = 0;; ++m) {
    if (m > 0) w = m <= M ? orbit.iterates[m] : detail::orbit_step(orbit.p, w, orbit.precision);
    rep.checked_through = m;
    if (w.is_exact_zero()) {
      // Every later iterate is 0 as well.
      rep.nonzero_ok = false;
      rep.tail_certified = true;
      break;
    }
    if (!w.exact && w.ball.contains_zero())
      throw Inconclusive("iterate w_" + std::to_string(m) + " cannot be separated from 0");
    if (rep.detA_ok && vanishes(rep.detA, w, "det A", m)) {
      rep.detA_ok = false;
      record(m, "det A");
    }
    if (rep.a_ok && vanishes(a, w, "a", m)) {
      rep.a_ok = false;
      record(m, "a");
    }
    if (!rep.detA_ok && !rep.a_ok) break;
    if (m >= M) {
      Rational scaled = w.upper_abs() * tail_margin();
      bool det_clear = !rep.detA_ok || clears(rep.detA_root_bound, scaled);
      bool a_clear = !rep.a_ok || clears(rep.a_root_bound, scaled);
      if (det_clear && a_clear) {
        rep.tail_certified = true;
        rep.nonzero_ok = clears(u_root_bound, scaled);
        break;
      }
    }
    if (m >= M + max_extension)
      throw Inconclusive("tail not certified within " + std::to_string(max_extension) + " extra iterates");
  }
  return rep;
}

}  // namespace mahler

#endif  // MAHLER_ORBIT_HPP
