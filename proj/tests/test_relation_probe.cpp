#include <gtest/gtest.h>

#include "test_support.hpp"

namespace mahler {
namespace {

using testing::Gen;

Polynomial Z(std::size_t k, const Rational& c = 1) { return Polynomial::monomial(k, c); }

IntegerMatrix M(std::initializer_list<std::initializer_list<long>> rows) {
  IntegerMatrix out;
  for (auto r : rows) {
    IntegerVector v;
    for (long x : r) v.emplace_back(x);
    out.push_back(std::move(v));
  }
  return out;
}

Ball ball(const Rational& q, mpfr_prec_t prec) { return Ball(q, prec); }

// sum of x^(2^m), the solution of chi(z) = chi(z^2) + z, at precision prec
std::vector<Ball> chi_half(mpfr_prec_t prec) {
  DiagonalSystem ds(RationalFunction(Z(2)), {Z(1)});
  auto orbit = compute_orbit(ds.p(), Rational(1, 2), kDefaultMaxIter, prec);
  Rational tol(1, Integer(1) << static_cast<unsigned long>(prec - 8));
  return eval_diagonal(ds, orbit, tol).values;
}

// --- LLL ---------------------------------------------------------------------

TEST(Lll, IdentityIsReduced) {
  LllStats st;
  auto r = lll_reduce(M({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), &st);
  EXPECT_EQ(r, M({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_EQ(st.swaps, 0u);
}

TEST(Lll, ShearIsUndone) {
  auto in = M({{1, 0}, {1000000, 1}});
  auto r = lll_reduce(in);
  EXPECT_EQ(gram_determinant(r), gram_determinant(in));
  for (const auto& row : r) EXPECT_EQ(detail::dot(row, row), 1);
}

TEST(Lll, PlantedRelationComesFirst) {
  // 2 * 1 - 1 * 2 + 0 * sqrt2 = 0 hidden in the last column
  const Integer scale = Integer(1) << 60;
  Integer s2 = 1630477228166597776;  // floor(sqrt(2) * 2^60)
  IntegerMatrix in = {{1, 0, 0, scale}, {0, 1, 0, 2 * scale}, {0, 0, 1, s2}};
  auto r = lll_reduce(in);
  IntegerVector first = r.front();
  if (first[0] < 0) {
    for (auto& x : first) x = -x;
  }
  EXPECT_EQ(first, (IntegerVector{2, -1, 0, 0}));
  EXPECT_EQ(gram_determinant(r), gram_determinant(in));
}

TEST(Lll, DependentRowsThrow) {
  EXPECT_THROW(lll_reduce(M({{1, 2}, {2, 4}})), DependentRows);
  EXPECT_THROW(lll_reduce(M({{1, 2}, {2}})), InvalidArgument);
}

TEST(Lll, RandomBasesSatisfyLovaszAndKeepVolume) {
  Gen g(71);
  for (int t = 0; t < 30; ++t) {
    std::size_t m = 2 + static_cast<std::size_t>(t % 5);
    IntegerMatrix in(m, IntegerVector(m));
    for (auto& row : in)
      for (auto& x : row) x = g.integer(-1000, 1000);
    if (gram_determinant(in) == 0) continue;
    auto r = lll_reduce(in);
    EXPECT_EQ(gram_determinant(r), gram_determinant(in));
    // Gram-Schmidt over Q, independent of the integral bookkeeping
    std::vector<std::vector<Rational>> bs;
    std::vector<Rational> nrm;
    std::vector<std::vector<Rational>> mu(m, std::vector<Rational>(m));
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Rational> v(r[i].begin(), r[i].end());
      for (std::size_t j = 0; j < i; ++j) {
        Rational dotp = 0;
        for (std::size_t c = 0; c < m; ++c) dotp += Rational(r[i][c]) * bs[j][c];
        mu[i][j] = dotp / nrm[j];
        for (std::size_t c = 0; c < m; ++c) v[c] -= mu[i][j] * bs[j][c];
      }
      Rational n2 = 0;
      for (auto& x : v) n2 += x * x;
      bs.push_back(v);
      nrm.push_back(n2);
    }
    for (std::size_t i = 1; i < m; ++i) {
      for (std::size_t j = 0; j < i; ++j) EXPECT_LE(::abs(mu[i][j]), Rational(1, 2));
      EXPECT_GE(nrm[i], (Rational(99, 100) - mu[i][i - 1] * mu[i][i - 1]) * nrm[i - 1]);
    }
  }
}

// --- polynomials ----------------------------------------------------------------

TEST(IntPolynomial, MonomialsAndPrinting) {
  EXPECT_EQ(monomials(2, 2).size(), 6u);
  EXPECT_EQ(monomials(3, 4).size(), 35u);
  IntPolynomial p{2, {{{0, 0}, Integer(-3)}, {{2, 0}, Integer(-2)}, {{0, 1}, Integer(1)}}};
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.height(), 3);
  // X2 leads X1^2 in lex order
  EXPECT_EQ(normalize(p).to_string(), "X2 - 2*X1^2 - 3");
  EXPECT_EQ(p.to_string(), "X2 - 2*X1^2 - 3");
  IntPolynomial q{1, {{{0}, Integer(-4)}, {{1}, Integer(2)}}};
  EXPECT_EQ(normalize(q).to_string(), "X - 2");
}

// --- find_relation -----------------------------------------------------------

TEST(FindRelation, SquareOfRationalPoint) {
  // x = (1/3, 1/9) satisfies X2 - X1^2 = 0 and also 9 X2 - 1 = 0; degree 1 wins.
  RelationQuery q;
  q.values = {ball(Rational(1, 3), 256), ball(Rational(1, 9), 256)};
  q.max_degree = 2;
  q.max_height = 10;
  auto r = find_relation(q);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.found->degree(), 1);
  EXPECT_TRUE(r.found->eval(q.values).contains_zero());
}

TEST(FindRelation, ParabolaThroughTranscendentalPoint) {
  auto x = chi_half(256)[0];
  RelationQuery q;
  q.values = {x, x * x};
  q.max_degree = 2;
  q.max_height = 10;
  q.refine = [](mpfr_prec_t p) {
    auto v = chi_half(p)[0];
    return std::vector<Ball>{v, v * v};
  };
  auto r = find_relation(q);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.found->to_string(), "X2 - X1^2");
  EXPECT_TRUE(r.value_at_point->upper() < detail::pow2(-64));
}

TEST(FindRelation, LinearRelationOneValue) {
  RelationQuery q;
  q.values = {ball(Rational(1, 2), 256)};
  q.max_degree = 3;
  q.max_height = 10;
  auto r = find_relation(q);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.found->to_string(), "2*X - 1");
}

TEST(FindRelation, NoneForChiHalf) {
  RelationQuery q;
  q.values = chi_half(512);
  q.max_degree = 8;
  q.max_height = 1000000;
  q.precision_bits = 512;
  q.refine = chi_half;
  auto r = find_relation(q);
  EXPECT_FALSE(r.found);
  ASSERT_TRUE(r.best_log_abs);
  EXPECT_EQ(r.diagnostics.degrees_tried, 8);
  EXPECT_EQ(r.diagnostics.lattice_dimension, 9u);
}

TEST(FindRelation, HeightCapRejects) {
  // 1/1000003 needs a coefficient above H
  RelationQuery q;
  q.values = {ball(Rational(1, 1000003), 256)};
  q.max_degree = 1;
  q.max_height = 1000;
  EXPECT_FALSE(find_relation(q).found);
  q.max_height = 2000000;
  auto r = find_relation(q);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.found->to_string(), "1000003*X - 1");
}

TEST(FindRelation, RandomAlgebraicPlantsAreFound) {
  // X2 = c X1 + e with X1 transcendental
  Gen g(72);
  for (int t = 0; t < 10; ++t) {
    Rational c = g.nonzero_rational(5, 5), e = g.rational(5, 5);
    auto x = chi_half(256)[0];
    Ball y = Ball(c, 256) * x + Ball(e, 256);
    RelationQuery q;
    q.values = {x, y};
    q.max_degree = 2;
    q.max_height = 100000;
    q.refine = [c, e](mpfr_prec_t p) {
      auto v = chi_half(p)[0];
      return std::vector<Ball>{v, Ball(c, p) * v + Ball(e, p)};
    };
    auto r = find_relation(q);
    ASSERT_TRUE(r.found) << t;
    EXPECT_EQ(r.found->degree(), 1);
    EXPECT_TRUE(r.found->eval(q.refine(512)).contains_zero());
  }
}

TEST(FindRelation, StableUnderPrecisionIncrease) {
  auto make = [](mpfr_prec_t p) {
    auto v = chi_half(p)[0];
    return std::vector<Ball>{v, v * v * v - Ball(Rational(2), p) * v};
  };
  std::string prev;
  for (mpfr_prec_t p : {128, 256, 512}) {
    RelationQuery q;
    q.values = make(p);
    q.max_degree = 3;
    q.max_height = 100;
    q.precision_bits = p;
    q.refine = make;
    auto r = find_relation(q);
    ASSERT_TRUE(r.found) << p;
    if (!prev.empty()) {
      EXPECT_EQ(r.found->to_string(), prev);
    }
    prev = r.found->to_string();
  }
  EXPECT_EQ(prev, "X2 - X1^3 + 2*X1");
}

TEST(FindRelation, Preconditions) {
  RelationQuery q;
  EXPECT_THROW(find_relation(q), InvalidArgument);
  Ball wide = Ball::from_interval(Real::from_rational(Rational(1, 3) - Rational(1, 1000), 256),
                                  Real::from_rational(Rational(1, 3) + Rational(1, 1000), 256), 256);
  q.values = {wide};
  EXPECT_THROW(find_relation(q), PrecisionTooLow);
  q.values = {ball(Rational(1, 3), 256)};
  q.max_degree = 0;
  EXPECT_THROW(find_relation(q), InvalidArgument);
}

// --- measure_consistency -------------------------------------------------------

TEST(MeasureConsistency, ZeroTrialsIsEmpty) {
  auto rep = exponents(Theorem::T1, 1, 2, 2, 0, Rational(1, 10));
  auto c = measure_consistency(chi_half(256), rep, 2, 10, 0, 5);
  EXPECT_TRUE(c.samples.empty());
  EXPECT_FALSE(c.fitted_C);
  EXPECT_EQ(c.seed, 5u);
}

TEST(MeasureConsistency, ChiHalfHasFiniteC) {
  auto rep = exponents(Theorem::T1, 1, 2, 2, 0, Rational(1, 10));
  auto c = measure_consistency(chi_half(256), rep, 3, 1000, 500, 7);
  EXPECT_EQ(c.samples.size(), 500u);
  EXPECT_FALSE(c.exhaustive);
  EXPECT_FALSE(c.diverged);
  ASSERT_TRUE(c.fitted_C);
  EXPECT_TRUE(c.fitted_C->is_finite());
  EXPECT_GE(c.fitted_C->sign(), 0);
  // deterministic for a fixed seed
  auto again = measure_consistency(chi_half(256), rep, 3, 1000, 500, 7);
  EXPECT_EQ(mpfr_cmp(again.fitted_C->get(), c.fitted_C->get()), 0);
  for (std::size_t i = 1; i < c.samples.size(); ++i)
    EXPECT_LE(c.samples[i - 1].P.degree(), c.samples[i].P.degree());
}

TEST(MeasureConsistency, PlantedRelationDiverges) {
  // x = (1/2, 1/4) lies on X2 - X1^2 = 0; exhaustive search over H = 1 finds it
  auto rep = exponents(Theorem::T1, 2, 2, 2, 1, Rational(1, 10));
  std::vector<Ball> x{ball(Rational(1, 2), 256), ball(Rational(1, 4), 256)};
  auto c = measure_consistency(x, rep, 2, 1, 1000, 1);
  EXPECT_TRUE(c.exhaustive);
  EXPECT_TRUE(c.diverged);
  EXPECT_GT(c.shape_violations, 0u);
  EXPECT_FALSE(c.fitted_C);
}

TEST(MeasureConsistency, MonotoneInHeightUnderEnumeration) {
  auto rep = exponents(Theorem::T1, 1, 2, 2, 0, Rational(1, 10));
  auto x = chi_half(256);
  std::optional<Real> prev;
  for (long H = 1; H <= 6; ++H) {
    auto c = measure_consistency(x, rep, 2, H, 100000, 3);
    ASSERT_TRUE(c.exhaustive);
    ASSERT_TRUE(c.fitted_C);
    if (prev) {
      EXPECT_TRUE(*prev <= *c.fitted_C) << H;
    }
    prev = c.fitted_C;
  }
}

TEST(MeasureConsistency, Preconditions) {
  auto rep = exponents(Theorem::T1, 2, 2, 2, 0, Rational(1, 10));
  EXPECT_THROW(measure_consistency(chi_half(256), rep, 2, 10, 10, 1), InvalidArgument);
  auto rep1 = exponents(Theorem::T1, 1, 2, 2, 0, Rational(1, 10));
  EXPECT_THROW(measure_consistency(chi_half(256), rep1, 0, 10, 10, 1), InvalidArgument);
}

}  // namespace
}  // namespace mahler
