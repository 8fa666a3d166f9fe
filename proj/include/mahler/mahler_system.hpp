#ifndef MAHLER_MAHLER_SYSTEM_HPP
#define MAHLER_MAHLER_SYSTEM_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mahler/errors.hpp"
#include "mahler/linalg.hpp"
#include "mahler/polynomial.hpp"
#include "mahler/power_series.hpp"
#include "mahler/rational.hpp"
#include "mahler/rational_function.hpp"

namespace mahler {

/// a(z) f(z) = A(z) f(p(z)) + B(z) for a vector f of n power series.
///
/// Construction checks shapes, a != 0 and p(0) = 0. The solvability
/// requirement ord p >= 2 is deliberately left to solve_series.
class MahlerSystem {
 public:
  MahlerSystem(RationalFunction p, Polynomial a, PolynomialMatrix A, std::vector<Polynomial> B)
      : p_(std::move(p)), a_(std::move(a)), A_(std::move(A)), B_(std::move(B)) {
    std::size_t n = B_.size();
    if (n == 0) throw InvalidArgument("system dimension n must be positive");
    if (A_.size() != n) throw InvalidArgument("A must have n rows");
    for (const auto& row : A_)
      if (row.size() != n) throw InvalidArgument("A must be n x n");
    if (a_.is_zero()) throw InvalidArgument("a(z) must be nonzero");
    if (p_.degree() < 1) throw InvalidArgument("p must be nonconstant");
    if (p_.num().coeff(0) != 0) throw InvalidArgument("p must satisfy p(0) = 0");
  }

  std::size_t n() const { return B_.size(); }
  const RationalFunction& p() const { return p_; }
  const Polynomial& a() const { return a_; }
  const PolynomialMatrix& A() const { return A_; }
  const std::vector<Polynomial>& B() const { return B_; }

  // delta = ord_{z=0} p
  int delta() const { return p_.ord_zero(); }
  bool solvable_order() const { return delta() >= 2; }

 private:
  RationalFunction p_;
  Polynomial a_;
  PolynomialMatrix A_;
  std::vector<Polynomial> B_;
};

/// chi_i(z) = chi_i(p(z)) + q_i(z), i = 1..n, with q_i(0) = 0, deg q_i >= 1,
/// p(0) = 0 and ord p >= 2.
class DiagonalSystem {
 public:
  DiagonalSystem(RationalFunction p, std::vector<Polynomial> q) : p_(std::move(p)), q_(std::move(q)) {
    if (q_.empty()) throw InvalidArgument("diagonal system needs at least one q_i");
    for (std::size_t i = 0; i < q_.size(); ++i) {
      if (q_[i].degree() < 1)
        throw InvalidArgument("q_" + std::to_string(i + 1) + " must have degree >= 1");
      if (q_[i].coeff(0) != 0)
        throw InvalidArgument("q_" + std::to_string(i + 1) + " must vanish at 0");
    }
    if (p_.ord_zero() < 2) throw InvalidArgument("diagonal system requires ord p >= 2");
  }

  std::size_t n() const { return q_.size(); }
  const RationalFunction& p() const { return p_; }
  const std::vector<Polynomial>& q() const { return q_; }
  int delta() const { return p_.ord_zero(); }

 private:
  RationalFunction p_;
  std::vector<Polynomial> q_;
};

struct SeriesSolution {
  std::vector<PowerSeries> series;
  int truncation_order = 0;
};

inline MahlerSystem to_mahler_system(const DiagonalSystem& ds) {
  std::size_t n = ds.n();
  PolynomialMatrix identity(n, std::vector<Polynomial>(n));
  for (std::size_t i = 0; i < n; ++i) identity[i][i] = Polynomial::constant(1);
  return MahlerSystem(ds.p(), Polynomial::constant(1), std::move(identity), ds.q());
}

/// Coefficientwise solution of the system modulo z^(N+1).
///
/// Order 0 solves (a(0) I - A(0)) f_0 = B(0). For k >= 1 the z^k coefficient
/// of (f o p) involves only f_j with j <= k / delta < k, so
///   a(0) f_k = B_k - sum_{l>=1} a_l f_{k-l} + sum_l A_l (f o p)_{k-l}
/// determines f_k from earlier coefficients.
inline SeriesSolution solve_series(const MahlerSystem& ms, int N) {
  if (N < 0) throw InvalidArgument("truncation order must be nonnegative");
  const std::size_t n = ms.n();
  const int delta = ms.delta();
  if (delta < 2)
    throw NotSolvable("ord p = " + std::to_string(delta) + " < 2: the coefficient recursion is circular");
  const Rational a0 = ms.a().coeff(0);
  if (a0 == 0) throw NotSolvable("a(0) = 0");

  RationalMatrix m0(n, RationalVector(n));
  RationalVector b0(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m0[i][j] = (i == j ? a0 : Rational(0)) - ms.A()[i][j].coeff(0);
    b0[i] = ms.B()[i].coeff(0);
  }
  // A singular but consistent order-0 system (every diagonal system, where
  // a(0) = A(0) = 1) leaves f(0) free; the free components are set to 0.
  auto f0 = linalg::solve_particular(m0, b0);
  if (!f0) throw NotSolvable("a(0) I - A(0) is singular and B(0) is not in its range");

  // Powers of p modulo z^(N+1); p^j has valuation j * delta.
  const PowerSeries pser = series_expand(ms.p(), N);
  const int jmax = N / delta;
  std::vector<PowerSeries> powers;
  powers.reserve(static_cast<std::size_t>(jmax) + 1);
  powers.emplace_back(N);
  powers[0][0] = 1;
  for (int j = 1; j <= jmax; ++j) powers.push_back(PowerSeries::mul_truncated(powers.back(), pser, N));

  // coeffs[k][i] = [z^k] f_i, comp[k][i] = [z^k] f_i(p(z))
  std::vector<RationalVector> coeffs(static_cast<std::size_t>(N) + 1, RationalVector(n));
  std::vector<RationalVector> comp(static_cast<std::size_t>(N) + 1, RationalVector(n));
  coeffs[0] = *f0;
  comp[0] = *f0;

  int deg_a = ms.a().degree();
  int deg_A = -1;
  for (const auto& row : ms.A())
    for (const auto& e : row) deg_A = std::max(deg_A, e.degree());

  for (int k = 1; k <= N; ++k) {
    auto uk = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < n; ++i) {
      Rational acc = 0;
      for (int j = 1; j <= k / delta; ++j) {
        const Rational& c = powers[static_cast<std::size_t>(j)][uk];
        if (c != 0) acc += coeffs[static_cast<std::size_t>(j)][i] * c;
      }
      comp[uk][i] = acc;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Rational rhs = ms.B()[i].coeff(uk);
      for (int l = 1; l <= std::min(k, deg_a); ++l) {
        const Rational& al = ms.a().coefficients()[static_cast<std::size_t>(l)];
        if (al != 0) rhs -= al * coeffs[uk - static_cast<std::size_t>(l)][i];
      }
      for (int l = 0; l <= std::min(k, deg_A); ++l) {
        auto lk = uk - static_cast<std::size_t>(l);
        for (std::size_t j = 0; j < n; ++j) {
          Rational c = ms.A()[i][j].coeff(static_cast<std::size_t>(l));
          if (c != 0 && comp[lk][j] != 0) rhs += c * comp[lk][j];
        }
      }
      coeffs[uk][i] = rhs / a0;
    }
  }

  SeriesSolution sol;
  sol.truncation_order = N;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> c(static_cast<std::size_t>(N) + 1);
    for (int k = 0; k <= N; ++k) c[static_cast<std::size_t>(k)] = coeffs[static_cast<std::size_t>(k)][i];
    sol.series.emplace_back(std::move(c), N);
  }
  return sol;
}

/// chi_i = sum_{m>=0} q_i(p^[m](z)) modulo z^(N+1). The m-th iterate has
/// valuation delta^m, so only iterates with delta^m <= N contribute.
inline SeriesSolution explicit_diagonal_series(const DiagonalSystem& ds, int N) {
  if (N < 0) throw InvalidArgument("truncation order must be nonnegative");
  const std::size_t n = ds.n();
  SeriesSolution sol;
  sol.truncation_order = N;
  sol.series.assign(n, PowerSeries(N));

  const PowerSeries pser = series_expand(ds.p(), N);
  PowerSeries iterate(N);
  if (N >= 1) iterate[1] = 1;  // p^[0](z) = z
  while (true) {
    int v = iterate.valuation();
    if (v < 0 || v > N) break;
    for (std::size_t i = 0; i < n; ++i) sol.series[i] = sol.series[i] + series_compose(ds.q()[i], iterate);
    iterate = series_compose(pser, iterate);
  }
  return sol;
}

/// a f - A (f o p) - B modulo z^(N+1).
inline std::vector<PowerSeries> residual(const MahlerSystem& ms, const SeriesSolution& sol, int N) {
  if (sol.truncation_order < N || sol.series.size() != ms.n())
    throw InvalidArgument("solution is truncated below the requested order or has wrong size");
  const std::size_t n = ms.n();
  const PowerSeries pser = series_expand(ms.p(), N);
  std::vector<PowerSeries> f, fp;
  for (const auto& s : sol.series) {
    f.push_back(s.truncate(N));
    fp.push_back(series_compose(f.back(), pser));
  }
  const PowerSeries aser = PowerSeries::from_polynomial(ms.a(), N);
  std::vector<PowerSeries> out;
  for (std::size_t i = 0; i < n; ++i) {
    PowerSeries r = aser * f[i] - PowerSeries::from_polynomial(ms.B()[i], N);
    for (std::size_t j = 0; j < n; ++j) {
      if (ms.A()[i][j].is_zero()) continue;
      r = r - PowerSeries::from_polynomial(ms.A()[i][j], N) * fp[j];
    }
    out.push_back(r.truncate(N));
  }
  return out;
}

inline bool residual_is_zero(const std::vector<PowerSeries>& r) {
  for (const auto& s : r)
    if (!s.is_zero()) return false;
  return true;
}

}  // namespace mahler

#endif  // MAHLER_MAHLER_SYSTEM_HPP
