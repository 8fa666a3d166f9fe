#ifndef MAHLER_POWER_SERIES_HPP
#define MAHLER_POWER_SERIES_HPP

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "mahler/ball.hpp"
#include "mahler/errors.hpp"
#include "mahler/polynomial.hpp"
#include "mahler/rational.hpp"
#include "mahler/rational_function.hpp"

namespace mahler {

/// Power series known modulo z^(N+1): exactly N+1 stored coefficients.
class PowerSeries {
 public:
  PowerSeries() : c_(1) {}
  explicit PowerSeries(int order) : c_(check_order(order) + 1) {}
  PowerSeries(std::vector<Rational> coeffs, int order) : c_(std::move(coeffs)) {
    c_.resize(static_cast<std::size_t>(check_order(order)) + 1);
  }
  static PowerSeries from_polynomial(const Polynomial& p, int order) {
    return PowerSeries(p.coefficients(), order);
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Rational>& coefficients() const { return c_; }
  const Rational& operator[](std::size_t k) const { return c_[k]; }
  Rational& operator[](std::size_t k) { return c_[k]; }

  // Lowest index with a nonzero coefficient; -1 if every known coefficient is 0.
  int valuation() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (c_[k] != 0) return static_cast<int>(k);
    return -1;
  }
  bool is_zero() const { return valuation() < 0; }

  PowerSeries truncate(int order) const {
    if (order > this->order()) throw InvalidArgument("cannot extend a truncated series");
    return PowerSeries(std::vector<Rational>(c_.begin(), c_.begin() + order + 1), order);
  }

  // Truncated polynomial part (drops the O(z^(N+1)) marker).
  Polynomial to_polynomial() const { return Polynomial(c_); }

  friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    int n = std::min(a.order(), b.order());
    PowerSeries out(n);
    for (int k = 0; k <= n; ++k) out.c_[k] = a.c_[k] + b.c_[k];
    return out;
  }
  friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
    int n = std::min(a.order(), b.order());
    PowerSeries out(n);
    for (int k = 0; k <= n; ++k) out.c_[k] = a.c_[k] - b.c_[k];
    return out;
  }
  friend PowerSeries operator*(const Rational& s, const PowerSeries& a) {
    PowerSeries out = a;
    for (auto& x : out.c_) x *= s;
    return out;
  }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    int n = std::min(a.order(), b.order());
    return mul_truncated(a, b, n);
  }
  friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.c_ == b.c_; }

  // Product modulo z^(n+1). Both factors are brought to a common
  // denominator so the O(n^2) convolution runs on integers; only the n+1
  // outputs are canonicalized.
  static PowerSeries mul_truncated(const PowerSeries& a, const PowerSeries& b, int n) {
    PowerSeries out(n);
    int va = a.valuation(), vb = b.valuation();
    if (va < 0 || vb < 0 || va + vb > n) return out;
    int amax = std::min(a.order(), n - vb);
    int bmax = std::min(b.order(), n - va);
    Integer la, lb;
    std::vector<Integer> ai = a.scaled_numerators(va, amax, la);
    std::vector<Integer> bi = b.scaled_numerators(vb, bmax, lb);
    std::vector<Integer> acc(static_cast<std::size_t>(n) + 1);
    for (int i = va; i <= amax; ++i) {
      const Integer& x = ai[static_cast<std::size_t>(i - va)];
      if (x == 0) continue;
      int jmax = std::min(bmax, n - i);
      for (int j = vb; j <= jmax; ++j) {
        const Integer& y = bi[static_cast<std::size_t>(j - vb)];
        if (y != 0) mpz_addmul(acc[static_cast<std::size_t>(i + j)].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
      }
    }
    Integer den = la * lb;
    for (int k = va + vb; k <= n; ++k) {
      auto uk = static_cast<std::size_t>(k);
      if (acc[uk] == 0) continue;
      mpz_set(out.c_[uk].get_num_mpz_t(), acc[uk].get_mpz_t());
      mpz_set(out.c_[uk].get_den_mpz_t(), den.get_mpz_t());
      out.c_[uk].canonicalize();
    }
    return out;
  }

  Ball eval(const Ball& x) const {
    Ball acc(x.precision());
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Ball(*it, x.precision());
    return acc;
  }

 private:
  // Numerators of c_lo..c_hi over their least common denominator `lcm`.
  std::vector<Integer> scaled_numerators(int lo, int hi, Integer& lcm) const {
    lcm = 1;
    for (int k = lo; k <= hi; ++k)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c_[static_cast<std::size_t>(k)].get_den_mpz_t());
    std::vector<Integer> out(static_cast<std::size_t>(hi - lo + 1));
    for (int k = lo; k <= hi; ++k) {
      const Rational& c = c_[static_cast<std::size_t>(k)];
      if (c == 0) continue;
      Integer& o = out[static_cast<std::size_t>(k - lo)];
      mpz_divexact(o.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
      o *= c.get_num();
    }
    return out;
  }

  static int check_order(int order) {
    if (order < 0) throw InvalidArgument("truncation order must be nonnegative");
    return order;
  }

  std::vector<Rational> c_;
};

/// Taylor expansion of num/den at 0 through z^order. den(0) = 1 holds for a
/// normalized RationalFunction, so the recurrence needs no division.
inline PowerSeries series_expand(const RationalFunction& rf, int order) {
  PowerSeries out(order);
  const Polynomial& num = rf.num();
  const Polynomial& den = rf.den();
  const Rational& d0 = den.coeff(0);
  for (int k = 0; k <= order; ++k) {
    Rational acc = num.coeff(static_cast<std::size_t>(k));
    int jmax = std::min(k, den.degree());
    for (int j = 1; j <= jmax; ++j) acc -= den.coefficients()[j] * out[static_cast<std::size_t>(k - j)];
    out[static_cast<std::size_t>(k)] = acc / d0;
  }
  return out;
}

/// f(g(z)) for g(0) = 0.
///
/// The result is known modulo z^(M+1) with
/// M = min(order(g), (order(f)+1) * val(g) - 1), since the unknown tail of f
/// contributes only from z^((order(f)+1) val(g)) on. Only the coefficients
/// f_0..f_floor(M/val(g)) are used.
inline PowerSeries series_compose(const PowerSeries& f, const PowerSeries& g) {
  if (g[0] != 0) throw InvalidArgument("series_compose requires g(0) = 0");
  int v = g.valuation();
  if (v < 0) {
    // g vanishes identically to the known order.
    PowerSeries out(g.order());
    out[0] = f[0];
    return out;
  }
  long bound = static_cast<long>(f.order() + 1) * v - 1;
  int n = static_cast<int>(std::min<long>(g.order(), bound));
  int top = std::min(f.order(), n / v);
  // sum_j f_j g^j; the powers of g keep small coefficients, so this is much
  // cheaper than Horner's scheme when f carries large rationals.
  PowerSeries acc(n);
  acc[0] = f[0];
  PowerSeries power(n);
  power[0] = 1;
  for (int j = 1; j <= top; ++j) {
    power = PowerSeries::mul_truncated(power, g, n);
    const Rational& fj = f[static_cast<std::size_t>(j)];
    if (fj == 0) continue;
    for (int k = j * v; k <= n; ++k) {
      const Rational& c = power[static_cast<std::size_t>(k)];
      if (c != 0) acc[static_cast<std::size_t>(k)] += fj * c;
    }
  }
  return acc;
}

// Polynomial evaluated at a series (no g(0) restriction; exact to g's order).
inline PowerSeries series_compose(const Polynomial& p, const PowerSeries& g) {
  int n = g.order();
  PowerSeries acc(n);
  for (int j = p.degree(); j >= 0; --j) {
    acc = PowerSeries::mul_truncated(acc, g, n);
    acc[0] += p.coeff(static_cast<std::size_t>(j));
  }
  return acc;
}

}  // namespace mahler

#endif  // MAHLER_POWER_SERIES_HPP
