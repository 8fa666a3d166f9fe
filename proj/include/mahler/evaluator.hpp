#ifndef MAHLER_EVALUATOR_HPP
#define MAHLER_EVALUATOR_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mahler/ball.hpp"
#include "mahler/errors.hpp"
#include "mahler/mahler_system.hpp"
#include "mahler/orbit.hpp"
#include "mahler/polynomial.hpp"
#include "mahler/power_series.hpp"
#include "mahler/rational.hpp"

namespace mahler {

inline constexpr mpfr_prec_t kMaxEvalPrecision = 65536;
inline constexpr std::size_t kMaxTailSteps = 100000;
inline constexpr int kHeuristicSafetyBits = 10;
inline constexpr std::size_t kHeuristicExtraSteps = 16;

struct Evaluation {
  std::vector<Ball> values;
  bool certified = false;
  std::size_t last_index = 0;       // iterates w_0 .. w_K were used
  mpfr_prec_t precision = 0;
  Real tail_bound{kRadiusPrecision};  // bound (or estimate) added to the radii
};

/// max(256, 4 log2(1/tol)) bits.
inline mpfr_prec_t working_precision(const Rational& tol) {
  if (tol <= 0) throw InvalidArgument("tolerance must be positive");
  long bits = static_cast<long>(mpz_sizeinbase(tol.get_den_mpz_t(), 2)) -
              static_cast<long>(mpz_sizeinbase(tol.get_num_mpz_t(), 2)) + 1;
  return std::max<long>(kDefaultPrecision, 4 * bits);
}

namespace detail {

inline Ball ball_of(const Iterate& w, mpfr_prec_t prec) {
  return w.exact ? Ball(*w.exact, prec) : w.ball.with_precision(prec);
}

// w_0 .. w_M at precision `prec`; inexact orbits are recomputed.
inline std::vector<Iterate> iterates_at(const OrbitCertificate& orbit, mpfr_prec_t prec) {
  if (orbit.exact || prec <= orbit.precision) return orbit.iterates;
  return recompute_orbit(orbit, prec).iterates;
}

// f_i(y) = offset_i + sum_{m>=0} c_i^m g_i(w_m) with g_i(0) = 0.
//
// For m >= K >= M, |w_m| <= lambda^(m-K) |w_K| <= r and |g_i(w)| <= L_i |w| with
// L_i = sum_k |g_ik| r^(k-1), so the terms past K sum to at most
// L_i |w_K| |c_i|^K (|c_i| lambda) / (1 - |c_i| lambda).
inline Evaluation sum_along_orbit(const OrbitCertificate& orbit, const std::vector<Polynomial>& g,
                                  const std::vector<Rational>& c, const std::vector<Rational>& offset,
                                  const Rational& tol) {
  const std::size_t n = g.size();
  const Rational& r = orbit.basin.radius;
  const Rational& lambda = orbit.basin.contraction;
  std::vector<Rational> L(n), ratio(n);
  for (std::size_t i = 0; i < n; ++i) {
    L[i] = g[i].shift_down(1).abs_majorant(r);
    Rational cl = ::abs(c[i]) * lambda;
    if (cl >= 1) throw InvalidArgument("|c| lambda >= 1: the orbit sum is not certified to converge");
    ratio[i] = cl / (1 - cl);
  }
  const Rational half_tol = tol / 2;
  const std::size_t M = orbit.M();

  for (mpfr_prec_t prec = working_precision(tol);; prec *= 2) {
    if (prec > kMaxEvalPrecision)
      throw PrecisionExhausted("tolerance " + tol.get_str() + " not reached at " +
                               std::to_string(kMaxEvalPrecision) + " bits");
    std::vector<Iterate> its = iterates_at(orbit, prec);
    std::vector<Ball> acc(n, Ball(prec)), cpow;
    std::vector<Rational> cpow_exact(n, Rational(1));
    for (std::size_t i = 0; i < n; ++i) cpow.emplace_back(Rational(1), prec);
    std::vector<Rational> tail(n);
    Iterate w = its.front();
    std::size_t K = 0;
    for (std::size_t m = 0;; ++m) {
      if (m > 0) w = m < its.size() ? its[m] : orbit_step(orbit.p, w, prec);
      Ball x = ball_of(w, prec);
      for (std::size_t i = 0; i < n; ++i) {
        if (m > 0) {
          cpow[i] = cpow[i] * Ball(c[i], prec);
          cpow_exact[i] *= c[i];
        }
        acc[i] += cpow[i] * g[i].eval(x);
      }
      if (m >= M) {
        Rational wk = w.upper_abs();
        bool done = true;
        for (std::size_t i = 0; i < n; ++i) {
          tail[i] = L[i] * wk * ::abs(cpow_exact[i]) * ratio[i];
          if (tail[i] > half_tol) done = false;
        }
        if (done) {
          K = m;
          break;
        }
      }
      if (m > M + kMaxTailSteps) throw PrecisionExhausted("tail bound does not reach the tolerance");
    }
    Evaluation ev;
    ev.certified = true;
    ev.last_index = K;
    ev.precision = prec;
    bool within = true;
    for (std::size_t i = 0; i < n; ++i) {
      Ball v = acc[i] + Ball(offset[i], prec);
      v.add_error(tail[i]);
      ev.tail_bound = rnd::max(ev.tail_bound, Real::from_rational(tail[i], kRadiusPrecision, MPFR_RNDU));
      if (mpfr_cmp_q(v.rad().get(), tol.get_mpq_t()) > 0) within = false;
      ev.values.push_back(std::move(v));
    }
    if (within) return ev;
  }
}

}  // namespace detail

/// chi_i(y) = sum_{m>=0} q_i(w_m). K >= M is the smallest index whose tail
/// bound L_i |w_K| lambda/(1-lambda) is at most tol/2; precision doubles
/// until the rounding error also fits.
inline Evaluation eval_diagonal(const DiagonalSystem& ds, const OrbitCertificate& orbit, const Rational& tol) {
  if (!(ds.p() == orbit.p)) throw InvalidArgument("orbit was computed for a different map p");
  return detail::sum_along_orbit(orbit, ds.q(), std::vector<Rational>(ds.n(), Rational(1)),
                                 std::vector<Rational>(ds.n(), Rational(0)), tol);
}

// a constant and A constant diagonal: each equation is f_i = c_i f_i o p + B_i / a.
inline bool has_constant_diagonal_form(const MahlerSystem& ms) {
  if (ms.a().degree() != 0) return false;
  for (std::size_t i = 0; i < ms.n(); ++i)
    for (std::size_t j = 0; j < ms.n(); ++j) {
      const Polynomial& e = ms.A()[i][j];
      if (i != j ? !e.is_zero() : e.degree() > 0) return false;
    }
  return true;
}

/// Values f_i(y) of the series solution of a f = A (f o p) + B.
///
/// Constant-diagonal systems with |A_ii / a| lambda < 1 are summed along the
/// orbit with a rigorous tail (certified = true). Otherwise the equation is
/// unrolled backwards, f(w_m) = a(w_m)^-1 (A(w_m) f(w_{m+1}) + B(w_m)), from
/// the truncated series at w_K; the truncation error there is estimated as
/// 2^10 (|F_N(w_K) - F_2N(w_K)| + c |w_K|^(2N+1)), c the largest coefficient
/// magnitude of index in (N, 2N], and certified = false.
inline Evaluation eval_general(const MahlerSystem& ms, const OrbitCertificate& orbit, int N, const Rational& tol,
                               bool allow_certified = true) {
  if (!(ms.p() == orbit.p)) throw InvalidArgument("orbit was computed for a different map p");
  const std::size_t n = ms.n();
  const SeriesSolution sol = solve_series(ms, N);

  if (allow_certified && has_constant_diagonal_form(ms)) {
    const Rational a0 = ms.a().coeff(0);
    std::vector<Polynomial> g;
    std::vector<Rational> c, offset;
    bool convergent = true;
    for (std::size_t i = 0; i < n; ++i) {
      Rational ci = ms.A()[i][i].coeff(0) / a0;
      if (::abs(ci) * orbit.basin.contraction >= 1) convergent = false;
      Rational f0 = sol.series[i][0];
      g.push_back(Rational(1) / a0 * ms.B()[i] + Polynomial::constant((ci - 1) * f0));
      c.push_back(ci);
      offset.push_back(f0);
    }
    if (convergent) return detail::sum_along_orbit(orbit, g, c, offset, tol);
  }

  const mpfr_prec_t prec = working_precision(tol);
  const SeriesSolution sol2 = solve_series(ms, 2 * N);
  std::vector<Iterate> its = detail::iterates_at(orbit, prec);
  const std::size_t M = orbit.M();
  while (its.size() < M + kHeuristicExtraSteps + 1) its.push_back(detail::orbit_step(orbit.p, its.back(), prec));
  std::vector<Ball> xs;
  for (const auto& w : its) xs.push_back(detail::ball_of(w, prec));

  auto check_a = [&](std::size_t m) {
    if (its[m].exact) {
      if (ms.a()(*its[m].exact) == 0)
        throw HypothesisViolated("a(w_" + std::to_string(m) + ") = 0");
    } else if (ms.a().eval(xs[m]).contains_zero()) {
      throw HypothesisViolated("a(w_" + std::to_string(m) + ") cannot be separated from 0");
    }
  };

  // Largest |f_ik| for N < k <= 2N (or over all k if that range is empty):
  // a stand-in for the next unseen coefficient, so that lacunary series with
  // no terms between N and 2N still get a nonzero truncation estimate.
  std::vector<Real> next_term;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& cs = sol2.series[i].coefficients();
    Rational big = 0;
    for (std::size_t k = static_cast<std::size_t>(N) + 1; k < cs.size(); ++k) big = std::max(big, Rational(::abs(cs[k])));
    if (big == 0)
      for (const auto& x : cs) big = std::max(big, Rational(::abs(x)));
    next_term.push_back(Real::from_rational(big, kRadiusPrecision, MPFR_RNDU));
  }

  std::optional<Evaluation> best;
  Real best_rad(kRadiusPrecision);
  for (std::size_t K = M; K <= M + kHeuristicExtraSteps; ++K) {
    for (std::size_t m = best ? K - 1 : 0; m < K; ++m) check_a(m);
    Evaluation ev;
    ev.precision = prec;
    ev.last_index = K;
    std::vector<Ball> v;
    for (std::size_t i = 0; i < n; ++i) {
      Ball lo = sol.series[i].eval(xs[K]);
      Ball hi = sol2.series[i].eval(xs[K]);
      Real est(kRadiusPrecision);
      mpfr_pow_ui(est.get(), xs[K].upper_abs().get(), static_cast<unsigned long>(2 * N + 1), MPFR_RNDU);
      est = rnd::mul(est, next_term[i], kRadiusPrecision, MPFR_RNDU);
      est = rnd::add(est, (lo - hi).upper_abs(), kRadiusPrecision, MPFR_RNDU);
      mpfr_mul_2si(est.get(), est.get(), kHeuristicSafetyBits, MPFR_RNDU);
      ev.tail_bound = rnd::max(ev.tail_bound, est);
      hi.add_error(est);
      v.push_back(std::move(hi));
    }
    for (std::size_t m = K; m-- > 0;) {
      Ball inv(prec);
      try {
        inv = ms.a().eval(xs[m]).inverse();
      } catch (const DenominatorMayVanish&) {
        throw HypothesisViolated("a(w_" + std::to_string(m) + ") cannot be separated from 0");
      }
      std::vector<Ball> next;
      for (std::size_t i = 0; i < n; ++i) {
        Ball s = ms.B()[i].eval(xs[m]);
        for (std::size_t j = 0; j < n; ++j)
          if (!ms.A()[i][j].is_zero()) s += ms.A()[i][j].eval(xs[m]) * v[j];
        next.push_back(s * inv);
      }
      v = std::move(next);
    }
    Real rad(kRadiusPrecision);
    for (const auto& b : v) rad = rnd::max(rad, b.rad());
    ev.values = std::move(v);
    if (!best || rad < best_rad) {
      best = ev;
      best_rad = rad;
    }
    if (mpfr_cmp_q(rad.get(), tol.get_mpq_t()) <= 0) break;
  }
  return *best;
}

enum class PointStyle { THEOREM1, THEOREM2 };

/// THEOREM1: (1 : f_1(y) : ... : f_n(y)); THEOREM2: (1 : y : f_1(y) : ... : f_n(y)).
struct EvaluatedPoint {
  std::vector<Ball> coords;
  PointStyle style = PointStyle::THEOREM1;
  bool certified = false;
};

inline EvaluatedPoint make_point(const std::vector<Ball>& values, PointStyle style,
                                 const std::optional<Ball>& y = std::nullopt, bool certified = true) {
  if (values.empty()) throw InvalidArgument("make_point needs at least one value");
  EvaluatedPoint pt;
  pt.style = style;
  pt.certified = certified;
  pt.coords.emplace_back(Rational(1), values.front().precision());
  if (style == PointStyle::THEOREM2) {
    if (!y) throw InvalidArgument("THEOREM2 points need y");
    pt.coords.push_back(*y);
  }
  pt.coords.insert(pt.coords.end(), values.begin(), values.end());
  return pt;
}

}  // namespace mahler

#endif  // MAHLER_EVALUATOR_HPP
