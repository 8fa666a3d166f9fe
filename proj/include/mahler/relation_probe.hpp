#ifndef MAHLER_RELATION_PROBE_HPP
#define MAHLER_RELATION_PROBE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mahler/ball.hpp"
#include "mahler/bounds.hpp"
#include "mahler/errors.hpp"
#include "mahler/lll.hpp"
#include "mahler/rational.hpp"

namespace mahler {

using Exponents = std::vector<int>;

/// Monomials in `nvars` variables of total degree <= D, ordered by degree,
/// then reverse-lexicographically on the exponent vector (X1 before X2).
inline std::vector<Exponents> monomials(std::size_t nvars, int D) {
  std::vector<Exponents> out;
  for (int deg = 0; deg <= D; ++deg) {
    Exponents e(nvars, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i + 1 == nvars) {
        e[i] = left;
        out.push_back(e);
        return;
      }
      for (int a = left; a >= 0; --a) {
        e[i] = a;
        rec(i + 1, left - a);
      }
    };
    if (nvars == 0) {
      if (deg == 0) out.emplace_back();
      continue;
    }
    rec(0, deg);
  }
  return out;
}

/// Integer polynomial in X1..Xn; terms are kept in `monomials` order.
struct IntPolynomial {
  std::size_t nvars = 0;
  std::vector<std::pair<Exponents, Integer>> terms;  // nonzero coefficients only

  int degree() const {
    int d = -1;
    for (const auto& [e, c] : terms) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }
  Integer height() const {
    Integer h = 0;
    for (const auto& t : terms) h = std::max(h, Integer(::abs(t.second)));
    return h;
  }
  bool is_zero() const { return terms.empty(); }

  Ball eval(const std::vector<Ball>& x) const {
    if (x.size() != nvars) throw InvalidArgument("polynomial evaluated at a point of the wrong dimension");
    mpfr_prec_t prec = x.empty() ? kDefaultPrecision : x.front().precision();
    Ball acc(prec);
    for (const auto& [e, c] : terms) {
      Ball term(Rational(c), prec);
      for (std::size_t i = 0; i < nvars; ++i)
        if (e[i] > 0) term *= pow(x[i], static_cast<unsigned long>(e[i]));
      acc += term;
    }
    return acc;
  }

  // "X" for one variable, "X1", "X2", ... otherwise; terms in descending
  // lex order with Xn > ... > X1, so the leading term comes first.
  std::string to_string() const;
};

// Lex order on exponent vectors with the last variable most significant.
inline bool lex_less(const Exponents& a, const Exponents& b) {
  return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

inline std::vector<std::pair<Exponents, Integer>> lex_sorted(std::vector<std::pair<Exponents, Integer>> t) {
  std::sort(t.begin(), t.end(), [](const auto& x, const auto& y) { return lex_less(y.first, x.first); });
  return t;
}

inline std::string IntPolynomial::to_string() const {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : lex_sorted(terms)) {
    std::string mono;
    for (std::size_t i = 0; i < nvars; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += nvars == 1 ? "X" : "X" + std::to_string(i + 1);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    Integer a = ::abs(c);
    std::string coef = (a == 1 && !mono.empty()) ? "" : a.get_str() + (mono.empty() ? "" : "*");
    if (out.empty()) out = c < 0 ? "-" : "";
    else out += c < 0 ? " - " : " + ";
    out += coef + mono;
  }
  return out;
}

// Divides out the content and makes the lex-leading coefficient positive.
inline IntPolynomial normalize(IntPolynomial p) {
  if (p.terms.empty()) return p;
  Integer g = 0;
  for (const auto& t : p.terms) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.second.get_mpz_t());
  if (lex_sorted(p.terms).front().second < 0) g = -g;
  for (auto& t : p.terms) mpz_divexact(t.second.get_mpz_t(), t.second.get_mpz_t(), g.get_mpz_t());
  return p;
}

// Values at a requested precision, for verifying candidates at twice the
// search precision.
using ValueRefiner = std::function<std::vector<Ball>(mpfr_prec_t)>;

struct RelationQuery {
  std::vector<Ball> values;
  int max_degree = 4;
  Integer max_height = 1000000;
  mpfr_prec_t precision_bits = kDefaultPrecision;
  ValueRefiner refine;  // optional
};

struct RelationDiagnostics {
  std::size_t lattice_dimension = 0;   // for the last degree tried
  int degrees_tried = 0;
  std::size_t candidates_examined = 0;
  std::size_t lll_swaps = 0;
  double first_row_log2_norm = 0;
};

struct RelationResult {
  std::optional<IntPolynomial> found;
  std::optional<Ball> value_at_point;   // |P(x)| at doubled precision, if found
  std::optional<Real> best_log_abs;     // min over candidates of log|P(x)| (upper bound)
  std::optional<IntPolynomial> best_candidate;
  RelationDiagnostics diagnostics;
};

inline constexpr std::size_t kCandidateRows = 5;

namespace detail {

inline IntPolynomial from_row(const IntegerVector& row, const std::vector<Exponents>& mons, std::size_t nvars) {
  IntPolynomial p;
  p.nvars = nvars;
  for (std::size_t i = 0; i < mons.size(); ++i)
    if (row[i] != 0) p.terms.emplace_back(mons[i], row[i]);
  return p;
}

// 2^-e as a Real
inline Real pow2(long e, mpfr_prec_t prec = kRadiusPrecision) {
  Real out(prec);
  mpfr_set_ui_2exp(out.get(), 1, e, MPFR_RNDN);
  return out;
}

inline double log2_norm(const IntegerVector& row) {
  Integer s = detail::dot(row, row);
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, s.get_mpz_t());
  return (std::log2(mant) + static_cast<double>(exp)) / 2;
}

}  // namespace detail

/// Integer relation search among real values by lattice reduction.
///
/// Degrees D' = 1..D are tried in turn, each with the lattice
/// [I | round(2^b m(x))] over all monomials m of degree <= D'. The first
/// kCandidateRows reduced rows are candidates; a candidate is accepted when
/// its height is <= H and |P(x)| < 2^(-b/4) at precision 2b. The accepted
/// relation of least degree, then least height, is returned primitive with a
/// positive leading coefficient.
inline RelationResult find_relation(const RelationQuery& q) {
  const std::size_t n = q.values.size();
  const mpfr_prec_t b = q.precision_bits;
  if (n == 0) throw InvalidArgument("find_relation needs at least one value");
  if (q.max_degree < 1) throw InvalidArgument("max_degree must be >= 1");
  if (q.max_height < 1) throw InvalidArgument("max_height must be >= 1");
  if (b < 16) throw InvalidArgument("precision_bits must be >= 16");
  const Real sharp = detail::pow2(-static_cast<long>(b / 2));
  for (std::size_t i = 0; i < n; ++i)
    if (!(q.values[i].rad() < sharp))
      throw PrecisionTooLow("value " + std::to_string(i + 1) + " has radius " + q.values[i].rad_string() +
                            ", not below 2^-" + std::to_string(b / 2));

  std::vector<Ball> work;
  for (const auto& v : q.values) work.push_back(v.with_precision(b + 64));
  std::vector<Ball> fine = q.refine ? q.refine(2 * b) : q.values;
  if (fine.size() != n) throw InvalidArgument("refined values have the wrong dimension");
  const Real accept = detail::pow2(-static_cast<long>(b / 4));

  RelationResult res;
  for (int D = 1; D <= q.max_degree; ++D) {
    std::vector<Exponents> mons = monomials(n, D);
    const std::size_t m = mons.size();
    IntegerMatrix lattice(m, IntegerVector(m + 1));
    for (std::size_t i = 0; i < m; ++i) {
      lattice[i][i] = 1;
      IntPolynomial mono{n, {{mons[i], Integer(1)}}};
      Real scaled = mono.eval(work).mid();
      mpfr_mul_2si(scaled.get(), scaled.get(), static_cast<long>(b), MPFR_RNDN);
      mpfr_round(scaled.get(), scaled.get());
      lattice[i][m] = scaled.to_rational().get_num();
    }
    LllStats stats;
    IntegerMatrix reduced = lll_reduce(std::move(lattice), &stats);
    res.diagnostics.lattice_dimension = m;
    res.diagnostics.degrees_tried = D;
    res.diagnostics.lll_swaps += stats.swaps;
    res.diagnostics.first_row_log2_norm = detail::log2_norm(reduced.front());

    std::optional<IntPolynomial> best;
    std::optional<Ball> best_value;
    for (std::size_t r = 0; r < std::min(kCandidateRows, m); ++r) {
      IntPolynomial cand = normalize(detail::from_row(reduced[r], mons, n));
      if (cand.is_zero()) continue;
      ++res.diagnostics.candidates_examined;
      Ball val = cand.eval(fine);
      Ball absval = Ball::from_interval(val.lower_abs(), val.upper_abs(), val.precision());
      Real upper = val.upper_abs();
      if (upper.is_zero()) upper = detail::pow2(-(1L << 30));
      Real lg(kRadiusPrecision);
      mpfr_log(lg.get(), upper.get(), MPFR_RNDU);
      if (!res.best_log_abs || lg < *res.best_log_abs) {
        res.best_log_abs = lg;
        res.best_candidate = cand;
      }
      if (cand.height() > q.max_height || !(upper < accept)) continue;
      bool better = !best || cand.degree() < best->degree() ||
                    (cand.degree() == best->degree() && cand.height() < best->height());
      if (better) {
        best = cand;
        best_value = absval;
      }
    }
    if (best) {
      res.found = best;
      res.value_at_point = best_value;
      return res;
    }
  }
  return res;
}

// --- measure consistency ----------------------------------------------------

struct ConsistencySample {
  IntPolynomial P;
  Ball log_abs;      // log|P(x)|
  Ball shape;        // (h + deg^inner)^bracket deg^degree_exp
  Ball needed_C;     // (deg log||x|| + h - log|P(x)|) / shape
  bool violation = false;  // |P(x)| not separated from 0
};

struct ConsistencyReport {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  bool exhaustive = false;
  std::vector<ConsistencySample> samples;  // sorted by (deg, height, string)
  std::optional<Real> fitted_C;            // none when there are no samples or C diverges
  bool diverged = false;                   // some |P(x)| may be 0: no finite C
  std::size_t shape_violations = 0;
};

namespace detail {

inline Integer count_polynomials(std::size_t monomial_count, const Integer& H) {
  Integer per = 2 * H + 1, total;
  mpz_pow_ui(total.get_mpz_t(), per.get_mpz_t(), static_cast<unsigned long>(monomial_count));
  return total;
}

}  // namespace detail

/// Fits the least C >= 0 with log|P(x)| >= -C shape(P) + deg P log||x|| + h(P)
/// over nonconstant integer P of degree <= D and height <= H, h(P) = log of
/// the height. x = (1 : values...). When the polynomial space has at most
/// `trials` members it is enumerated completely, otherwise `trials`
/// polynomials are drawn with the given seed.
inline ConsistencyReport measure_consistency(const std::vector<Ball>& values, const ExponentReport& rep, int D,
                                             const Integer& H, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = values.size();
  if (n == 0) throw InvalidArgument("measure_consistency needs at least one value");
  if (!rep.admissible) throw NotAdmissible("exponent report is not admissible");
  if (rep.n != static_cast<long>(n) || rep.k != rep.n - 1)
    throw InvalidArgument("measure_consistency needs a report with n = number of values and k = n-1");
  if (D < 1 || H < 1) throw InvalidArgument("D and H must be >= 1");

  ConsistencyReport out;
  out.seed = seed;
  out.trials = trials;
  if (trials == 0) return out;

  const mpfr_prec_t prec = values.front().precision();
  std::vector<Exponents> mons = monomials(n, D);
  const std::size_t m = mons.size();
  std::vector<IntPolynomial> polys;

  out.exhaustive = detail::count_polynomials(m, H) <= Integer(static_cast<unsigned long>(trials));
  if (out.exhaustive) {
    const long h = H.get_si();
    std::vector<long> c(m, -h);
    while (true) {
      IntPolynomial P{n, {}};
      for (std::size_t i = 0; i < m; ++i)
        if (c[i] != 0) P.terms.emplace_back(mons[i], Integer(c[i]));
      if (P.degree() >= 1) polys.push_back(std::move(P));
      std::size_t i = 0;
      while (i < m && c[i] == h) c[i++] = -h;
      if (i == m) break;
      ++c[i];
    }
  } else {
    std::mt19937_64 rng(seed);
    // coefficients uniform in [-H, H]; H may exceed 64 bits
    gmp_randclass gmp_rng(gmp_randinit_default);
    gmp_rng.seed(static_cast<unsigned long>(rng()));
    const Integer span = 2 * H + 1;
    while (polys.size() < trials) {
      IntPolynomial P{n, {}};
      for (std::size_t i = 0; i < m; ++i) {
        Integer c = gmp_rng.get_z_range(span) - H;
        if (c != 0) P.terms.emplace_back(mons[i], c);
      }
      if (P.degree() >= 1) polys.push_back(std::move(P));
    }
  }

  Ball norm(Rational(1), prec);
  for (const auto& v : values) norm = max_abs_ball(norm, v);
  const Ball lognorm = log(norm);
  std::optional<Ball> worst;
  for (auto& P : polys) {
    ConsistencySample s;
    s.P = std::move(P);
    const long deg = s.P.degree();
    Ball h = log(Ball(Rational(s.P.height()), prec));
    Ball D_ball(Rational(deg), prec);
    s.shape = pow(h + pow(D_ball, rep.inner_exp), rep.bracket_exp) * pow(D_ball, rep.degree_exp);
    Ball val = s.P.eval(values);
    if (val.contains_zero()) {
      s.violation = true;
      ++out.shape_violations;
      s.log_abs = Ball(prec);
      s.needed_C = Ball(prec);
    } else {
      s.log_abs = log(Ball::from_interval(val.lower_abs(), val.upper_abs(), prec));
      s.needed_C = (D_ball * lognorm + h - s.log_abs) / s.shape;
      if (!worst || worst->upper() < s.needed_C.upper()) worst = s.needed_C;
    }
    out.samples.push_back(std::move(s));
  }
  std::stable_sort(out.samples.begin(), out.samples.end(), [](const ConsistencySample& a, const ConsistencySample& b) {
    if (a.P.degree() != b.P.degree()) return a.P.degree() < b.P.degree();
    if (a.P.height() != b.P.height()) return a.P.height() < b.P.height();
    return a.P.to_string() < b.P.to_string();
  });
  out.diverged = out.shape_violations > 0;
  if (!out.diverged && worst) {
    Real c = worst->upper();
    if (c.sign() < 0) mpfr_set_zero(c.get(), 1);
    out.fitted_C = c;
  }
  return out;
}

}  // namespace mahler

#endif  // MAHLER_RELATION_PROBE_HPP
