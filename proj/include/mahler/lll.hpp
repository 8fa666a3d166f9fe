#ifndef MAHLER_LLL_HPP
#define MAHLER_LLL_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "mahler/errors.hpp"
#include "mahler/rational.hpp"

namespace mahler {

using IntegerVector = std::vector<Integer>;
using IntegerMatrix = std::vector<IntegerVector>;  // rows are basis vectors

struct LllStats {
  std::size_t swaps = 0;
  std::size_t reductions = 0;
};

namespace detail {

inline Integer dot(const IntegerVector& a, const IntegerVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return s;
}

// round(a / b) for b > 0, halves rounded up
inline Integer round_div(const Integer& a, const Integer& b) {
  Integer num = 2 * a + b, den = 2 * b, q;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

}  // namespace detail

/// LLL reduction with parameter 99/100 in exact integer arithmetic (integral
/// variant: the Gram-Schmidt data is kept as the integers d_i = det of the
/// leading i x i Gram matrix and lambda_ij = d_j mu_ij).
inline IntegerMatrix lll_reduce(IntegerMatrix b, LllStats* stats = nullptr) {
  const std::size_t m = b.size();
  if (m == 0) return b;
  const std::size_t dim = b.front().size();
  for (const auto& row : b)
    if (row.size() != dim) throw InvalidArgument("lll_reduce: rows of different length");

  // d[0] = 1, d[i+1] belongs to row i.
  std::vector<Integer> d(m + 1);
  std::vector<IntegerVector> lam(m, IntegerVector(m));
  d[0] = 1;
  LllStats local;

  auto add_row = [&](std::size_t k) {
    for (std::size_t j = 0; j <= k; ++j) {
      Integer u = detail::dot(b[k], b[j]);
      for (std::size_t i = 0; i < j; ++i) {
        u = d[i + 1] * u - lam[k][i] * lam[j][i];
        mpz_divexact(u.get_mpz_t(), u.get_mpz_t(), d[i].get_mpz_t());
      }
      if (j < k) {
        lam[k][j] = u;
      } else {
        if (u == 0) throw DependentRows("lll_reduce: basis rows are linearly dependent");
        d[k + 1] = u;
      }
    }
  };
  // size-reduce row k against row l
  auto reduce = [&](std::size_t k, std::size_t l) {
    Integer twice = 2 * lam[k][l];
    if (::abs(twice) <= d[l + 1]) return;
    Integer q = detail::round_div(lam[k][l], d[l + 1]);
    for (std::size_t c = 0; c < dim; ++c) b[k][c] -= q * b[l][c];
    lam[k][l] -= q * d[l + 1];
    for (std::size_t i = 0; i < l; ++i) lam[k][i] -= q * lam[l][i];
    ++local.reductions;
  };
  auto swap_rows = [&](std::size_t k, std::size_t kmax) {
    std::swap(b[k], b[k - 1]);
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    Integer l = lam[k][k - 1];
    Integer B = d[k - 1] * d[k + 1] + l * l;
    mpz_divexact(B.get_mpz_t(), B.get_mpz_t(), d[k].get_mpz_t());
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      Integer t = lam[i][k];
      Integer nk = d[k + 1] * lam[i][k - 1] - l * t;
      mpz_divexact(nk.get_mpz_t(), nk.get_mpz_t(), d[k].get_mpz_t());
      lam[i][k] = nk;
      Integer nk1 = B * t + l * lam[i][k];
      mpz_divexact(nk1.get_mpz_t(), nk1.get_mpz_t(), d[k + 1].get_mpz_t());
      lam[i][k - 1] = nk1;
    }
    d[k] = B;
    ++local.swaps;
  };

  add_row(0);
  std::size_t k = 1, kmax = 0;
  while (k < m) {
    if (k > kmax) {
      kmax = k;
      add_row(k);
    }
    reduce(k, k - 1);
    // Lovasz test: d_k d_{k-2} + lambda^2 >= (99/100) d_{k-1}^2
    const Integer& l = lam[k][k - 1];
    if (100 * (d[k + 1] * d[k - 1] + l * l) < 99 * d[k] * d[k]) {
      swap_rows(k, kmax);
      if (k > 1) --k;
    } else {
      for (std::size_t j = k - 1; j-- > 0;) reduce(k, j);
      ++k;
    }
  }
  if (stats) *stats = local;
  return b;
}

// Absolute determinant of the Gram matrix, sqrt of which is the lattice
// covolume; used to check that reduction preserved the lattice.
inline Integer gram_determinant(const IntegerMatrix& b) {
  const std::size_t m = b.size();
  std::vector<IntegerVector> g(m, IntegerVector(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g[i][j] = detail::dot(b[i], b[j]);
  // Bareiss elimination
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    // leading minors of a Gram matrix vanish only for dependent rows
    if (g[k][k] == 0) return 0;
    for (std::size_t i = k + 1; i < m; ++i)
      for (std::size_t j = k + 1; j < m; ++j) {
        Integer t = g[k][k] * g[i][j] - g[i][k] * g[k][j];
        mpz_divexact(g[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = g[k][k];
  }
  return g[m - 1][m - 1];
}

}  // namespace mahler

#endif  // MAHLER_LLL_HPP
