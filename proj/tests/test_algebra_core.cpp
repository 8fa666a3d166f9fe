#include <gtest/gtest.h>

#include "test_support.hpp"

namespace mahler {
namespace {

using testing::Gen;

Polynomial Z(std::size_t k, const Rational& c = 1) { return Polynomial::monomial(k, c); }

TEST(Rational, ParsesFractionsIntegersAndDecimals) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational("0.125"), Rational(1, 8));
  EXPECT_EQ(parse_rational("-1.5e2"), Rational(-150));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(parse_rational(" 4/-8 "), Rational(-1, 2));
  EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
  EXPECT_THROW(parse_rational("abc"), InvalidArgument);
  EXPECT_THROW(parse_rational(""), InvalidArgument);
  EXPECT_THROW(parse_rational("1.2.3"), InvalidArgument);
}

TEST(Polynomial, TrimsAndReportsDegreeAndOrder) {
  Polynomial p({0, 0, 3, 0});
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.ord(), 2);
  EXPECT_EQ(Polynomial({0, 0}).degree(), -1);
  EXPECT_TRUE(Polynomial({0}).is_zero());
}

TEST(Polynomial, DivmodAndGcd) {
  Polynomial a = (Z(1) - Polynomial::constant(1)) * (Z(2) + Polynomial::constant(2));
  Polynomial b = (Z(1) - Polynomial::constant(1)) * (Z(1) + Polynomial::constant(3));
  auto [q, r] = Polynomial::divmod(a, b);
  EXPECT_EQ(q * b + r, a);
  EXPECT_LT(r.degree(), b.degree());
  EXPECT_EQ(Polynomial::gcd(a, b), Z(1) - Polynomial::constant(1));
}

TEST(RationalFunction, Degree) {
  EXPECT_EQ(degree(RationalFunction(Z(2))), 2);
  EXPECT_EQ(degree(RationalFunction(Z(2), Polynomial({1, 1}))), 2);
  EXPECT_EQ(degree(RationalFunction(Z(3) + Z(2), Polynomial({1, 2}))), 3);
}

TEST(RationalFunction, OrdZero) {
  EXPECT_EQ(ord_zero(RationalFunction(Z(2))), 2);
  EXPECT_EQ(ord_zero(RationalFunction(Z(3), Polynomial({1, 1}))), 3);
  EXPECT_EQ(ord_zero(RationalFunction(Polynomial({1, 1}))), 0);
}

TEST(RationalFunction, RejectsPoleAtZeroAndCancelsCommonFactors) {
  EXPECT_THROW(RationalFunction(Polynomial({1}), Z(1)), InvalidArgument);
  // z^3 / (z + z^2) cancels to z^2 / (1 + z), which is analytic at 0
  EXPECT_EQ(RationalFunction(Z(3), Z(1) + Z(2)), RationalFunction(Z(2), Polynomial({1, 1})));
  // z^2 (1+z) / (1+z) reduces to z^2
  RationalFunction rf(Z(2) * Polynomial({1, 1}), Polynomial({1, 1}));
  EXPECT_TRUE(rf.is_polynomial());
  EXPECT_EQ(rf.num(), Z(2));
  // den(0) is normalized to 1
  RationalFunction s(Z(2, 4), Polynomial({2, 6}));
  EXPECT_EQ(s.den().coeff(0), 1);
  EXPECT_EQ(s.num(), Z(2, 2));
}

TEST(RationalFunction, DegreeAndOrderInvariantUnderCommonScaling) {
  Gen g(11);
  for (int t = 0; t < 100; ++t) {
    Polynomial num = g.polynomial(static_cast<int>(g.integer(1, 6)), static_cast<int>(g.integer(0, 3)));
    std::vector<Rational> dc = g.polynomial(static_cast<int>(g.integer(0, 4))).coefficients();
    dc[0] = g.nonzero_rational();
    Polynomial den(dc);
    Rational c = g.nonzero_rational();
    RationalFunction a(num, den), b(c * num, c * den);
    EXPECT_EQ(a.degree(), b.degree());
    EXPECT_EQ(a.ord_zero(), b.ord_zero());
  }
}

TEST(SeriesExpand, Examples) {
  // 1/(1-z) -> 1 + z + z^2 + z^3
  auto s = series_expand(RationalFunction(Polynomial({1}), Polynomial({1, -1})), 3);
  EXPECT_EQ(s, PowerSeries({1, 1, 1, 1}, 3));
  EXPECT_EQ(series_expand(RationalFunction(Z(2)), 5), PowerSeries({0, 0, 1, 0, 0, 0}, 5));
  // z/(1-2z); frozen from the linear-system oracle
  RationalFunction rf(Z(1), Polynomial({1, -2}));
  auto oracle = testing::taylor_by_linear_system(rf.num(), rf.den(), 3);
  ASSERT_EQ(oracle, (std::vector<Rational>{0, 1, 2, 4}));
  EXPECT_EQ(series_expand(rf, 3), PowerSeries({0, 1, 2, 4}, 3));
}

TEST(SeriesExpand, MatchesLinearSystemOracleAndClearsDenominator) {
  Gen g(5);
  for (int t = 0; t < 40; ++t) {
    RationalFunction rf = g.mahler_map(static_cast<int>(g.integer(0, 3)), 5, true);
    int N = static_cast<int>(g.integer(0, 20));
    auto s = series_expand(rf, N);
    EXPECT_EQ(s.coefficients(), testing::taylor_by_linear_system(rf.num(), rf.den(), N));
    // den * s - num has order > N
    Polynomial diff = testing::truncate(rf.den() * s.to_polynomial() - rf.num(), N);
    EXPECT_TRUE(diff.is_zero());
  }
}

TEST(SeriesCompose, Examples) {
  PowerSeries f({0, 1}, 4), g({0, 0, 1}, 4);
  EXPECT_EQ(series_compose(f, g), PowerSeries({0, 0, 1, 0, 0}, 4));
  PowerSeries f2({0, 1, 1}, 4);
  EXPECT_EQ(series_compose(f2, g), PowerSeries({0, 0, 1, 0, 1}, 4));

  // 1/(1-z) o (z^2 + z^3): substitute-and-expand oracle sum_k g^k.
  Polynomial gp({0, 0, 1, 1});
  Polynomial oracle, power = Polynomial::constant(1);
  for (int k = 0; k <= 4; ++k) {
    oracle = oracle + power;
    power = testing::truncate(power * gp, 4);
  }
  oracle = testing::truncate(oracle, 4);
  ASSERT_EQ(oracle, Polynomial({1, 0, 1, 1, 1}));
  auto geo = series_expand(RationalFunction(Polynomial({1}), Polynomial({1, -1})), 4);
  EXPECT_EQ(series_compose(geo, PowerSeries::from_polynomial(gp, 4)), PowerSeries({1, 0, 1, 1, 1}, 4));
}

TEST(SeriesCompose, RejectsNonzeroConstantTerm) {
  EXPECT_THROW(series_compose(PowerSeries({1, 1}, 3), PowerSeries({1, 1}, 3)), InvalidArgument);
}

TEST(SeriesCompose, DeepCoefficientsDependOnlyOnEarlyTerms) {
  // ord g = 3: [z^N] (f o g) only sees f_0..f_floor(N/3).
  Gen g(3);
  const int N = 20;
  PowerSeries gs = PowerSeries::from_polynomial(g.polynomial(6, 3), N);
  std::vector<Rational> fc(N + 1);
  for (auto& c : fc) c = g.rational();
  PowerSeries f(fc, N);
  auto base = series_compose(f, gs);
  for (int j = N / 3 + 1; j <= N; ++j) fc[static_cast<std::size_t>(j)] += 17;
  EXPECT_EQ(series_compose(PowerSeries(fc, N), gs), base);
}

TEST(SeriesCompose, TruncationOrderIsConsistent) {
  // f known to order 2, g = z^2 known to order 10 -> result known to order 5.
  auto r = series_compose(PowerSeries({1, 1, 1}, 2), PowerSeries({0, 0, 1}, 10));
  EXPECT_EQ(r.order(), 5);
  EXPECT_EQ(r, PowerSeries({1, 0, 1, 0, 1, 0}, 5));
}

// expand(p o p) = compose(expand p, expand p) for random rational p, p(0) = 0.
TEST(SeriesCompose, AgreesWithExpansionOfExactSelfComposition) {
  Gen g(2024);
  for (int t = 0; t < 40; ++t) {
    RationalFunction p = g.mahler_map(static_cast<int>(g.integer(1, 3)), 4, true);
    int N = static_cast<int>(g.integer(1, 64));
    auto [num, den] = testing::self_compose(p);
    RationalFunction pp(num, den);
    auto ps = series_expand(p, N);
    EXPECT_EQ(series_expand(pp, N), series_compose(ps, ps)) << p.to_string() << " N=" << N;
  }
}

TEST(BallEval, Examples) {
  Ball half(Rational(1, 2), 256);
  Ball r = ball_eval(Z(1), half);
  EXPECT_TRUE(r.contains(Rational(1, 2)));
  EXPECT_TRUE(r.is_exact());

  Ball x = Ball::from_mid_rad(Real::from_si(1, 256), Real::from_rational(Rational(1, 10000000000), 64, MPFR_RNDU));
  Ball v = ball_eval(Polynomial({1, 0, 1}), x);
  EXPECT_TRUE(v.contains(Rational(2)));
  // interval oracle: range is [(1-r)^2+1, (1+r)^2+1], half-width 2r
  Rational r0(1, 10000000000);
  Rational lo = (1 - r0) * (1 - r0) + 1, hi = (1 + r0) * (1 + r0) + 1;
  EXPECT_TRUE(v.contains(lo));
  EXPECT_TRUE(v.contains(hi));
  EXPECT_LE(v.rad().to_rational(), Rational(3, 10000000000) + Rational(1, 1000000000000000000));

  Ball unit = Ball::from_mid_rad(Real(256), Real::from_si(1, 64));
  EXPECT_THROW(ball_eval(Polynomial({1}), Z(1), unit), DenominatorMayVanish);
  EXPECT_THROW(ball_eval(RationalFunction(Polynomial({1}), Polynomial({1, 1})),
                         Ball(Rational(-1), 256)),
               DenominatorMayVanish);
}

// Enclosure soundness over random exact-rational inputs. Low precision makes
// every rounding path active.
TEST(Ball, EnclosureSoundnessProperty) {
  Gen g(99);
  for (int t = 0; t < 1000; ++t) {
    mpfr_prec_t prec = 24 + 8 * g.integer(0, 8);
    Rational a = g.rational(1000000, 999983), b = g.nonzero_rational(1000000, 999979);
    Ball A(a, prec), B(b, prec);
    if (g.coin()) A.add_error(Rational(g.integer(0, 3), 1000000));
    Rational exact;
    Ball got(prec);
    switch (g.integer(0, 5)) {
      case 0: exact = a + b; got = A + B; break;
      case 1: exact = a - b; got = A - B; break;
      case 2: exact = a * b; got = A * B; break;
      case 3: exact = a / b; got = A / B; break;
      case 4: {
        Polynomial p = g.polynomial(static_cast<int>(g.integer(0, 6)));
        exact = p(a);
        got = p.eval(A);
        break;
      }
      default: exact = pow(a, 5); got = pow(A, 5UL); break;
    }
    EXPECT_TRUE(got.contains(exact)) << "trial " << t;
  }
}

TEST(Ball, LogAndExpEnclose) {
  Ball two(Rational(2), 128);
  Ball l = log(two);
  EXPECT_NEAR(l.mid().to_double(), 0.6931471805599453, 1e-15);
  EXPECT_LT(l.rad().to_double(), 1e-35);
  Ball e = exp(l);
  EXPECT_TRUE(e.contains(Rational(2)));
  EXPECT_THROW(log(Ball(Rational(0), 128)), InvalidArgument);
}

TEST(ComplexBall, PolynomialEvaluationEncloses) {
  // (1 + i)^2 + 1 = 1 + 2i
  ComplexBall x(Ball(Rational(1), 64), Ball(Rational(1), 64));
  ComplexBall v = Polynomial({1, 0, 1}).eval(x);
  EXPECT_TRUE(v.re.contains(Rational(1)));
  EXPECT_TRUE(v.im.contains(Rational(2)));
  EXPECT_FALSE(v.contains_zero());
}

}  // namespace
}  // namespace mahler
