#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

namespace mahler {
namespace {

double mid(const Ball& b) { return b.mid().to_double(); }

// Independent long double transcription of the displayed formulas.
struct Triple {
  long double inner, bracket, degree;
};
Triple formula(Theorem th, long n, long d, long delta, long k, long double eps) {
  long double r = std::log(static_cast<long double>(d)) / std::log(static_cast<long double>(delta));
  long double nk = n - k;
  switch (th) {
    case Theorem::T1:
      return {(n + 1 - k + eps) / (n + 1 - k - r), (n + 1) / nk - (k + 1) / (r * nk), (k + 1) / (r * nk)};
    case Theorem::T2:
      return {(n + 1 - k - r + eps) / (n + 1 - k - 2 * r), 2 * (n + 1) / nk - (k + 1) / (r * nk),
              (k + 1) / (r * nk) - (n + 1) / nk};
    case Theorem::T3:
      return {1 / (1 - r * (n + 1) / (2 * n - k + 1)), (n + 1) / nk - (k + 1) / (r * nk), (k + 1) / nk};
  }
  return {};
}
long double threshold(Theorem th, long n, long d, long delta) {
  long double r = std::log(static_cast<long double>(d)) / std::log(static_cast<long double>(delta));
  switch (th) {
    case Theorem::T1: return n + 1 - r;
    case Theorem::T2: return n + 1 - 2 * r;
    case Theorem::T3: return 2 * n + 1 - r * (n + 1);
  }
  return 0;
}

TEST(Thresholds, Examples) {
  // n+1-rho, n+1-2rho, 2n+1-rho(n+1) at rho = 1
  auto a = thresholds(3, 2, 2);
  EXPECT_TRUE(a.t1.contains(Rational(3)));
  EXPECT_TRUE(a.t2.contains(Rational(2)));
  EXPECT_TRUE(a.t3.contains(Rational(3)));
  auto b = thresholds(1, 4, 2);
  EXPECT_TRUE(b.t1.contains(Rational(0)));
  EXPECT_TRUE(b.t2.contains(Rational(-2)));
  EXPECT_TRUE(b.t3.contains(Rational(-1)));
  for (long k = 0; k <= 0; ++k)
    for (Theorem th : {Theorem::T1, Theorem::T2, Theorem::T3}) EXPECT_FALSE(admissible(th, 1, 4, 2, k));
  auto c = thresholds(2, 3, 3);
  EXPECT_TRUE(c.t1.contains(Rational(2)));
  EXPECT_TRUE(c.t2.contains(Rational(1)));
  EXPECT_TRUE(c.t3.contains(Rational(2)));
  EXPECT_THROW(thresholds(2, 3, 1), InvalidArgument);
  EXPECT_THROW(thresholds(2, 2, 3), InvalidArgument);
}

TEST(Rho, ExactPowers) {
  EXPECT_EQ(rho(8, 2).power, 3u);
  EXPECT_TRUE(rho(8, 2).value.is_exact());
  EXPECT_FALSE(rho(8, 4).power);  // 3/2
  EXPECT_NEAR(mid(rho(8, 4).value), 1.5, 1e-60);
  EXPECT_NEAR(mid(rho(3, 2).value), std::log(3.0) / std::log(2.0), 1e-15);
}

TEST(Exponents, Examples) {
  auto t1 = exponents(Theorem::T1, 3, 2, 2, 2, Rational(1, 10));
  EXPECT_TRUE(t1.bracket_exp.contains(Rational(1)));
  EXPECT_TRUE(t1.degree_exp.contains(Rational(3)));
  EXPECT_TRUE(t1.inner_exp.contains(Rational(21, 10)));

  auto t1b = exponents(Theorem::T1, 1, 2, 2, 0, Rational(1, 10));
  EXPECT_TRUE(t1b.bracket_exp.contains(Rational(1)));
  EXPECT_TRUE(t1b.degree_exp.contains(Rational(1)));
  EXPECT_TRUE(t1b.inner_exp.contains(Rational(21, 10)));

  auto t3 = exponents(Theorem::T3, 3, 2, 2, 2, Rational(1, 10));
  EXPECT_TRUE(t3.inner_exp.contains(Rational(5)));
  EXPECT_TRUE(t3.bracket_exp.contains(Rational(1)));
  EXPECT_TRUE(t3.degree_exp.contains(Rational(3)));

  EXPECT_THROW(exponents(Theorem::T2, 3, 2, 2, 3, Rational(1, 10)), InvalidArgument);
  EXPECT_THROW(exponents(Theorem::T2, 2, 4, 2, 1, Rational(1, 10)), NotAdmissible);
  EXPECT_THROW(exponents(Theorem::T1, 2, 2, 2, 1, Rational(0)), InvalidArgument);
}

TEST(Exponents, GridMatchesIndependentFormula) {
  int checked = 0;
  for (long n = 1; n <= 6; ++n)
    for (long delta = 2; delta <= 4; ++delta)
      for (long d = delta; d <= 16; ++d)
        for (long k = 0; k <= n - 1; ++k)
          for (Theorem th : {Theorem::T1, Theorem::T2, Theorem::T3}) {
            long double t = threshold(th, n, d, delta);
            bool oracle_ok = k < t - 1e-12L;
            if (!oracle_ok) {
              EXPECT_THROW(exponents(th, n, d, delta, k, Rational(1, 10)), NotAdmissible)
                  << to_string(th) << " n=" << n << " d=" << d << " delta=" << delta << " k=" << k;
              continue;
            }
            auto rep = exponents(th, n, d, delta, k, Rational(1, 10));
            Triple f = formula(th, n, d, delta, k, 0.1L);
            auto close = [](const Ball& b, long double x) {
              return std::fabs(static_cast<long double>(mid(b)) - x) <= 1e-9L * std::max(1.0L, std::fabs(x));
            };
            EXPECT_TRUE(close(rep.inner_exp, f.inner)) << n << d << delta << k;
            EXPECT_TRUE(close(rep.bracket_exp, f.bracket)) << n << d << delta << k;
            EXPECT_TRUE(close(rep.degree_exp, f.degree)) << n << d << delta << k;
            ++checked;
          }
  EXPECT_GT(checked, 100);
}

TEST(Exponents, LowAndHighPrecisionAgree) {
  const Rational tol(1, Integer(1) << 100);
  for (long n = 1; n <= 6; ++n)
    for (long delta = 2; delta <= 4; ++delta)
      for (long d = delta; d <= 16; ++d)
        for (long k = 0; k <= n - 1; ++k)
          for (Theorem th : {Theorem::T1, Theorem::T2, Theorem::T3}) {
            if (!admissible(th, n, d, delta, k)) continue;
            auto lo = exponents(th, n, d, delta, k, Rational(1, 10), 128);
            auto hi = exponents(th, n, d, delta, k, Rational(1, 10), 512);
            for (auto [a, b] : {std::pair{&lo.inner_exp, &hi.inner_exp}, std::pair{&lo.bracket_exp, &hi.bracket_exp},
                                std::pair{&lo.degree_exp, &hi.degree_exp}}) {
              Rational x = a->mid().to_rational(), y = b->mid().to_rational();
              EXPECT_LE(::abs(x - y), tol * std::max(Rational(1), Rational(::abs(y))));
              EXPECT_TRUE(a->overlaps(*b));
            }
          }
}

TEST(TrdegBounds, Examples) {
  auto b = trdeg_bounds(3, 2, 2);
  EXPECT_EQ(b.cor1, 3);
  EXPECT_EQ(b.cor2, 3);
  EXPECT_EQ(b.cor3, 2);  // n+1-[2 rho] = 4-2
  EXPECT_EQ(b.cor4, 2);
  EXPECT_TRUE(b.thm3_real.contains(Rational(3)));
  EXPECT_EQ(b.thm3_ceil, 3);
  EXPECT_EQ(b.thm3_floor_plus_one, 4);

  EXPECT_EQ(trdeg_bounds(1, 2, 2).cor2, 1);

  auto c = trdeg_bounds(2, 8, 2);
  EXPECT_EQ(c.cor1, 0);
  EXPECT_FALSE(c.cor2);
  EXPECT_FALSE(c.cor4);

  auto e = trdeg_bounds(2, 3, 2);  // rho = 1.58..
  EXPECT_EQ(e.cor1, 2);
  EXPECT_EQ(e.cor2, 2);
  EXPECT_FALSE(e.cor4);
  EXPECT_EQ(e.thm3_ceil, 1);          // 5 - 4.75 = 0.25
  EXPECT_EQ(e.thm3_floor_plus_one, 1);
}

long max_admissible_k(Theorem th, long n, long d, long delta) {
  long best = -1;
  for (long k = 0; k <= n - 1; ++k)
    if (threshold(th, n, d, delta) - k > 1e-12L) best = k;
  return best;
}

TEST(TrdegBounds, CorollariesMatchLargestAdmissibleK) {
  for (long n = 1; n <= 6; ++n)
    for (long delta = 2; delta <= 4; ++delta)
      for (long d = delta; d <= 16; ++d) {
        auto b = trdeg_bounds(n, d, delta);
        long k1 = max_admissible_k(Theorem::T1, n, d, delta);
        if (k1 >= 0) EXPECT_EQ(b.cor1, k1 + 1) << n << " " << d << " " << delta;
        else EXPECT_LE(b.cor1, 0);
        long k2 = max_admissible_k(Theorem::T2, n, d, delta);
        if (k2 >= 0) EXPECT_EQ(b.cor3, k2 + 1) << n << " " << d << " " << delta;
        else EXPECT_LE(b.cor3, 0);
      }
}

TEST(Dirichlet, Exponent) {
  EXPECT_EQ(dirichlet_exponent(3, 2, 2), Rational(5));
  EXPECT_EQ(dirichlet_exponent(1, 2, 2), Rational(3));
  EXPECT_FALSE(dirichlet_exponent(2, 4, 2));
  for (long d = 2; d <= 16; ++d)
    for (long n = 1; n <= 8; ++n) {
      EXPECT_EQ(dirichlet_exponent(n, d, d), Rational(n + 2));
      // the limit inner + degree at k = n-1 as eps -> 0
      auto rep = exponents(Theorem::T1, n, d, d, n - 1, Rational(1, Integer(1) << 200));
      EXPECT_TRUE(rep.bracket_exp.contains(Rational(1)));
      Ball s = rep.inner_exp + rep.degree_exp;
      EXPECT_NEAR(mid(s), static_cast<double>(n + 2), 1e-12);
    }
}

TEST(MeasureFloor, Examples) {
  auto rep = exponents(Theorem::T1, 1, 2, 2, 0, Rational(1, 10));
  auto unit = measure_floor(rep, Rational(1), Ball(Rational(0), 256), 1);
  EXPECT_TRUE(unit.log_dist.contains(Rational(-1)));

  auto f = measure_floor(rep, Rational(1), Ball(Rational(10), 256), 2);
  long double oracle = -(10 + std::pow(2.0L, 2.1L)) * 2;
  EXPECT_NEAR(mid(f.log_dist), static_cast<double>(oracle), 1e-12);
  EXPECT_NEAR(mid(f.log_dist), -28.574, 1e-3);

  EXPECT_THROW(measure_floor(rep, Rational(0), Ball(Rational(0), 256), 1), InvalidArgument);
}

// T2's degree exponent is negative, so only the height direction holds there.
TEST(MeasureFloor, MonotoneInHeightAndDegree) {
  for (Theorem th : {Theorem::T1, Theorem::T2, Theorem::T3}) {
    long n = 3;
    long k = th == Theorem::T1 ? 2 : 1;
    auto rep = exponents(th, n, 2, 2, k, Rational(1, 10));
    for (long deg = 1; deg <= 8; ++deg) {
      Rational h = 1;
      for (int s = 0; s < 6; ++s, h *= 2) {
        Ball a = measure_floor(rep, Rational(1), Ball(h, 256), deg).log_dist;
        Ball b = measure_floor(rep, Rational(1), Ball(2 * h, 256), deg).log_dist;
        Ball c = measure_floor(rep, Rational(1), Ball(h, 256), deg + 1).log_dist;
        EXPECT_LE(mid(b), mid(a));
        if (th != Theorem::T2) {
          EXPECT_LE(mid(c), mid(a));
        }
        EXPECT_LT(mid(a), 0);
      }
    }
  }
}

TEST(MeasureFloor, HypersurfaceConversion) {
  auto rep = exponents(Theorem::T1, 1, 2, 2, 0, Rational(1, 10));
  auto pt = make_point({Ball(Rational(3), 256)}, PointStyle::THEOREM1);
  auto f = measure_floor(rep, Rational(1), Ball(Rational(0), 256), 1, pt);
  ASSERT_TRUE(f.log_p);
  EXPECT_NEAR(mid(*f.log_p), -1 + std::log(3.0), 1e-12);
  auto rep2 = exponents(Theorem::T1, 3, 2, 2, 1, Rational(1, 10));
  EXPECT_FALSE(measure_floor(rep2, Rational(1), Ball(Rational(0), 256), 1, pt).log_p);
}

}  // namespace
}  // namespace mahler
