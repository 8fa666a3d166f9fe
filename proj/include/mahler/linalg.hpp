#ifndef MAHLER_LINALG_HPP
#define MAHLER_LINALG_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mahler/errors.hpp"
#include "mahler/polynomial.hpp"
#include "mahler/rational.hpp"

namespace mahler {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;  // row-major

namespace linalg {

struct Echelon {
  RationalMatrix rows;               // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;   // pivot column of each row
};

// Reduced row echelon form over Q. Columns are scanned in the given order,
// which lets callers choose e.g. highest-degree-first pivoting.
inline Echelon rref(RationalMatrix m, const std::vector<std::size_t>& column_order) {
  Echelon out;
  std::size_t rank = 0;
  for (std::size_t col : column_order) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[rank], m[piv]);
    Rational inv = Rational(1) / m[rank][col];
    for (auto& x : m[rank]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = 0; c < m[r].size(); ++c)
        if (m[rank][c] != 0) m[r][c] -= f * m[rank][c];
    }
    out.pivots.push_back(col);
    ++rank;
    if (rank == m.size()) break;
  }
  m.resize(rank);
  out.rows = std::move(m);
  return out;
}

inline std::vector<std::size_t> natural_order(std::size_t cols) {
  std::vector<std::size_t> order(cols);
  for (std::size_t i = 0; i < cols; ++i) order[i] = i;
  return order;
}

inline std::size_t columns(const RationalMatrix& m) { return m.empty() ? 0 : m.front().size(); }

inline Echelon rref(const RationalMatrix& m) { return rref(m, natural_order(columns(m))); }

inline std::size_t rank(const RationalMatrix& m) { return rref(m).rows.size(); }

// Basis of {x : m x = 0}.
inline std::vector<RationalVector> nullspace(const RationalMatrix& m, std::size_t cols) {
  Echelon e = rref(m, natural_order(cols));
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols);
    v[free] = 1;
    for (std::size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = -e.rows[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Unique solution of the square system m x = b, or nullopt when singular.
inline std::optional<RationalVector> solve(const RationalMatrix& m, const RationalVector& b) {
  std::size_t n = m.size();
  RationalMatrix aug(n, RationalVector(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw InvalidArgument("solve: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n] = b[i];
  }
  Echelon e = rref(aug, natural_order(n));
  if (e.rows.size() != n) return std::nullopt;
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[e.pivots[i]] = e.rows[i][n];
  return x;
}

// Some solution of m x = b (free variables set to 0), or nullopt when the
// system is inconsistent.
inline std::optional<RationalVector> solve_particular(const RationalMatrix& m, const RationalVector& b) {
  std::size_t cols = columns(m);
  RationalMatrix aug = m;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  Echelon e = rref(aug, natural_order(cols + 1));
  RationalVector x(cols);
  for (std::size_t r = 0; r < e.rows.size(); ++r) {
    if (e.pivots[r] == cols) return std::nullopt;
    x[e.pivots[r]] = e.rows[r][cols];
  }
  return x;
}

inline Rational determinant(RationalMatrix m) {
  std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

}  // namespace linalg

using PolynomialMatrix = std::vector<std::vector<Polynomial>>;

// Fraction-free (Bareiss) determinant over Q[z]; every division is exact.
inline Polynomial determinant(PolynomialMatrix m) {
  std::size_t n = m.size();
  if (n == 0) return Polynomial::constant(1);
  Polynomial prev = Polynomial::constant(1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k].is_zero()) ++piv;
      if (piv == n) return {};
      std::swap(m[piv], m[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Polynomial t = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        m[i][j] = Polynomial::divmod(t, prev).first;
      }
    }
    prev = m[k][k];
  }
  Polynomial det = m[n - 1][n - 1];
  return negate ? -det : det;
}

}  // namespace mahler

#endif  // MAHLER_LINALG_HPP
