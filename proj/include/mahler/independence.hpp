#ifndef MAHLER_INDEPENDENCE_HPP
#define MAHLER_INDEPENDENCE_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include "mahler/errors.hpp"
#include "mahler/linalg.hpp"
#include "mahler/mahler_system.hpp"
#include "mahler/polynomial.hpp"
#include "mahler/rational.hpp"

// Criteria for algebraic independence of the solutions chi_i of
// chi_i(z) = chi_i(p(z)) + q_i(z) over C(z), p a polynomial.
//
// Both conditions quantify over complex vectors s. Every constraint system
// below has rational coefficients, and a linear system with rational
// coefficients has a nonzero complex solution iff it has a nonzero rational
// one; so the rational linear algebra here decides the complex statements.

namespace mahler {

enum class Verdict { HOLDS, FAILS, NOT_ATTEMPTED };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::HOLDS: return "holds";
    case Verdict::FAILS: return "fails";
    case Verdict::NOT_ATTEMPTED: return "not_attempted";
  }
  return "?";
}

struct ConditionA {
  bool holds = false;
  std::vector<int> pivot_degrees;    // every degree deg(sum s_i q_i), s != 0, descending
  std::vector<int> witness_degrees;  // pivot degrees divisible by deg p
};

struct ConditionB {
  Verdict verdict = Verdict::NOT_ATTEMPTED;
  std::vector<Rational> s;  // witness when FAILS: sum s_i chi_i = g
  Polynomial g;
};

struct IndependenceCertificate {
  bool linear_ok = false;
  ConditionA condition_a;
  ConditionB condition_b;
  bool conclusion = false;
};

namespace detail {

inline int max_degree(const std::vector<Polynomial>& q) {
  int d = 0;
  for (const auto& x : q) d = std::max(d, x.degree());
  return d;
}

inline RationalMatrix coefficient_rows(const std::vector<Polynomial>& q, int maxdeg) {
  RationalMatrix m;
  for (const auto& x : q) {
    RationalVector row(static_cast<std::size_t>(maxdeg) + 1);
    for (int k = 0; k <= x.degree(); ++k) row[static_cast<std::size_t>(k)] = x.coeff(static_cast<std::size_t>(k));
    m.push_back(std::move(row));
  }
  return m;
}

inline int polynomial_degree_of_map(const DiagonalSystem& ds) {
  if (!ds.p().is_polynomial()) throw InvalidArgument("the independence criteria need p to be a polynomial");
  return ds.p().num().degree();
}

}  // namespace detail

/// 1, q_1, ..., q_n linearly independent over Q (equivalently over C).
inline bool check_linear_independence(const std::vector<Polynomial>& q) {
  std::vector<Polynomial> rows{Polynomial::constant(1)};
  rows.insert(rows.end(), q.begin(), q.end());
  return linalg::rank(detail::coefficient_rows(rows, detail::max_degree(rows))) == rows.size();
}

/// deg p divides no deg(sum s_i q_i), s != 0. Reducing the coefficient rows
/// with highest-degree columns first gives a basis with distinct leading
/// degrees; any nonzero combination has one of those as its degree.
inline ConditionA check_condition_a(const DiagonalSystem& ds) {
  const int d = detail::polynomial_degree_of_map(ds);
  const int maxdeg = detail::max_degree(ds.q());
  std::vector<std::size_t> order;
  for (int k = maxdeg; k >= 0; --k) order.push_back(static_cast<std::size_t>(k));
  linalg::Echelon e = linalg::rref(detail::coefficient_rows(ds.q(), maxdeg), order);
  ConditionA out;
  for (std::size_t piv : e.pivots) {
    int deg = static_cast<int>(piv);
    out.pivot_degrees.push_back(deg);
    if (deg % d == 0) out.witness_degrees.push_back(deg);
  }
  out.holds = out.witness_degrees.empty();
  return out;
}

/// sum s_i chi_i is a polynomial for no s != 0.
///
/// If g = sum s_i chi_i is a polynomial then g - g(p) = sum s_i q_i, and
/// deg g <= e = floor(max deg q_i / deg p). Conversely such a g with
/// g(0) = 0 equals sum s_i chi_i, since the only series phi with
/// phi = phi(p), phi(0) = 0 and ord p >= 2 is 0. The unknowns are
/// (s_1..s_n, g_1..g_e); the condition fails iff the kernel has s != 0.
/// A constant g forces sum s_i q_i = 0, excluded by linear independence.
inline ConditionB check_condition_b(const DiagonalSystem& ds) {
  const int d = detail::polynomial_degree_of_map(ds);
  const std::size_t n = ds.n();
  const int e = detail::max_degree(ds.q()) / d;
  const int top = std::max(detail::max_degree(ds.q()), d * e);
  const std::size_t cols = n + static_cast<std::size_t>(e);
  RationalMatrix m(static_cast<std::size_t>(top) + 1, RationalVector(cols));
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k <= ds.q()[i].degree(); ++k)
      m[static_cast<std::size_t>(k)][i] = -ds.q()[i].coeff(static_cast<std::size_t>(k));
  const Polynomial& p = ds.p().num();
  Polynomial pj = Polynomial::constant(1);
  for (int j = 1; j <= e; ++j) {
    pj = pj * p;
    Polynomial col = Polynomial::monomial(static_cast<std::size_t>(j), Rational(1)) - pj;
    for (int k = 0; k <= col.degree(); ++k)
      m[static_cast<std::size_t>(k)][n + static_cast<std::size_t>(j - 1)] = col.coeff(static_cast<std::size_t>(k));
  }
  ConditionB out;
  out.verdict = Verdict::HOLDS;
  for (const auto& v : linalg::nullspace(m, cols)) {
    if (std::all_of(v.begin(), v.begin() + static_cast<long>(n), [](const Rational& x) { return x == 0; })) continue;
    out.verdict = Verdict::FAILS;
    out.s.assign(v.begin(), v.begin() + static_cast<long>(n));
    std::vector<Rational> g(static_cast<std::size_t>(e) + 1);
    for (int j = 1; j <= e; ++j) g[static_cast<std::size_t>(j)] = v[n + static_cast<std::size_t>(j - 1)];
    out.g = Polynomial(std::move(g));
    break;
  }
  return out;
}

/// Linear independence plus condition (a) or (b). Condition (b) is only
/// attempted when 1, q_1, ..., q_n are linearly independent.
inline IndependenceCertificate certify(const DiagonalSystem& ds) {
  IndependenceCertificate c;
  c.linear_ok = check_linear_independence(ds.q());
  c.condition_a = check_condition_a(ds);
  if (c.linear_ok) c.condition_b = check_condition_b(ds);
  c.conclusion = c.linear_ok && (c.condition_a.holds || c.condition_b.verdict == Verdict::HOLDS);
  return c;
}

}  // namespace mahler

#endif  // MAHLER_INDEPENDENCE_HPP
