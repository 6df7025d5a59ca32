#include <gtest/gtest.h>

#include "midhyp/charpoly.hpp"
#include "midhyp/ffcount.hpp"
#include "midhyp/golden.hpp"

using namespace midhyp;

namespace {

// Independent interpolation oracle: solve the Vandermonde system exactly.
std::vector<Rational> vandermonde_solve(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  const std::size_t n = xs.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    Rational p = 1;
    for (std::size_t j = n; j-- > 0;) {
      a[i][j] = p;
      p *= xs[i];
    }
    a[i][n] = ys[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (a[piv][c] == 0)
      ++piv;
    std::swap(a[piv], a[c]);
    for (std::size_t r = 0; r < n; ++r)
      if (r != c && a[r][c] != 0) {
        const Rational f = a[r][c] / a[c][c];
        for (std::size_t k = c; k <= n; ++k)
          a[r][k] -= f * a[c][k];
      }
  }
  std::vector<Rational> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = a[i][n] / a[i][i];
  return out;
}

std::vector<CountSample> counted(int m) {
  std::vector<CountSample> out;
  for (auto q : select_primes(m, m - 2).primes) {
    CountJob j;
    j.m = m;
    j.q = q;
    out.push_back({q, count_points(j).count});
  }
  return out;
}

IntPoly from_roots(std::initializer_list<int> roots) {
  IntPoly p{{1}};
  for (int r : roots)
    p = p * IntPoly::linear(r);
  return p;
}

} // namespace

TEST(Newton, MatchesVandermondeOracle) {
  const std::vector<Rational> xs = {Rational(2), Rational(3), Rational(5), Rational(7), Rational(-4)};
  const std::vector<Rational> ys = {Rational(1, 3), Rational(-2), Rational(17), Rational(0), Rational(9, 7)};
  EXPECT_EQ(detail::newton_interpolate(xs, ys), vandermonde_solve(xs, ys));
}

TEST(Interpolate, M4FromTwoCounts) {
  const CharPoly cp = interpolate_charpoly(4, {{5, 0}, {7, 8}});
  EXPECT_EQ(cp.chi, from_roots({0, 1, 3, 5}));
  EXPECT_EQ(format_factored(factor_over_Z(cp)), "t(t - 1)(t - 3)(t - 5)");
}

TEST(Interpolate, TableRowsM3ToM6) {
  for (int m = 3; m <= 6; ++m) {
    const CharPoly cp = interpolate_charpoly(m, counted(m));
    EXPECT_EQ(cp.chi, golden::charpoly(m).chi) << m;
    const auto rc = chambers_and_r(cp);
    EXPECT_EQ(rc.chambers, golden::row(m)->chambers) << m;
    EXPECT_EQ(rc.r, golden::row(m)->r) << m;
    EXPECT_TRUE(charpoly_invariant_failures(cp).empty()) << m;
  }
}

TEST(Interpolate, ExtraCountsMustAgree) {
  EXPECT_NO_THROW(interpolate_charpoly(5, {{11, 24}, {13, 120}, {17, 720}, {19, 1320}}));
  EXPECT_THROW(interpolate_charpoly(5, {{11, 24}, {13, 120}, {17, 720}, {19, 1321}}), InconsistentCounts);
}

TEST(Interpolate, Errors) {
  EXPECT_THROW(interpolate_charpoly(5, {{11, 24}, {13, 120}}), InvalidParameter);
  EXPECT_THROW(interpolate_charpoly(5, {{11, 24}, {11, 24}, {17, 720}}), InvalidParameter);
  EXPECT_THROW(interpolate_charpoly(2, {}), InvalidParameter);
  // Values not coming from any monic integer polynomial of this shape.
  EXPECT_THROW(interpolate_charpoly(4, {{5, 1}, {7, 8}}), InconsistentCounts);
}

TEST(Invariants, HoldForEveryReferenceRow) {
  for (int m = 3; m <= 8; ++m) {
    const CharPoly cp = golden::charpoly(m);
    EXPECT_TRUE(charpoly_invariant_failures(cp).empty()) << m;
    EXPECT_EQ(cp.mu(0), 1);
    EXPECT_EQ(cp.mu(1), -BigInt(binomial(m, 2) + 3 * binomial(m, 4)));
    EXPECT_EQ(cp.mu(2), mu2_formula(m)) << m;
  }
}

TEST(Invariants, DetectCorruption) {
  CharPoly cp = golden::charpoly(5);
  cp.chi.c[1] += 1;
  EXPECT_FALSE(charpoly_invariant_failures(cp).empty());
  CharPoly bad = interpolate_charpoly(5, {{11, 24}, {13, 120}, {17, 720}});
  bad.provenance[0].count = 25;
  EXPECT_FALSE(charpoly_invariant_failures(bad).empty());
}

TEST(Chambers, M8FromInjectedPolynomial) {
  const CharPoly cp = golden::charpoly(8);
  const auto rc = chambers_and_r(cp);
  EXPECT_EQ(rc.chambers, BigInt(9248117760ull));
  EXPECT_EQ(rc.r, BigInt(golden::r8_derived));
  EXPECT_EQ(rc.r * factorial(8), rc.chambers);
  EXPECT_EQ(cp.mu(1), -BigInt(238));
}

TEST(Factor, M8HasExactlyOneQuadratic) {
  const FactorReport f = factor_over_Z(golden::charpoly(8));
  EXPECT_EQ(f.roots, (std::vector<BigInt>{0, 1, 35, 37, 39, 41}));
  EXPECT_EQ(f.remainder, (IntPoly{{1, -85, 1926}}));
  EXPECT_FALSE(f.fully_linear());
  EXPECT_EQ(format_factored(f), "t(t - 1)(t - 35)(t - 37)(t - 39)(t - 41)(t^2 - 85t + 1926)");
}

TEST(Factor, LinearCasesAndMultiplicity) {
  for (int m = 3; m <= 7; ++m)
    EXPECT_TRUE(factor_over_Z(golden::charpoly(m)).fully_linear()) << m;
  const FactorReport f = factor_over_Z(from_roots({2, 2, -3, 0}));
  EXPECT_EQ(f.roots, (std::vector<BigInt>{-3, 0, 2, 2}));
  EXPECT_EQ(format_factored(f), "(t + 3)t(t - 2)(t - 2)");
  EXPECT_EQ(format_expanded(IntPoly{{1, 0, -1}}), "t^2 - 1");
}

TEST(HFunction, TwoFormulasAgree) {
  for (int m = 3; m <= 20; ++m)
    EXPECT_EQ(h_poly(m), h_from_mu(m)) << m;
}

TEST(HFunction, SignPattern) {
  EXPECT_GE(h_poly(7), 0);
  for (int m = 8; m <= 20; ++m)
    EXPECT_LT(h_poly(m), 0) << m;
}

TEST(ASequence, Values) {
  EXPECT_EQ(a_sequence(2), 2);
  EXPECT_EQ(a_sequence(3), 12);
  EXPECT_EQ(a_sequence(4), 168);
  EXPECT_EQ(a_sequence(5), 4680);
  EXPECT_EQ(a_sequence(6), golden::a6);
  EXPECT_NE(a_sequence(6), BigInt(golden::r8_derived));
  EXPECT_EQ(a_sequence(1), 1);
  EXPECT_THROW(a_sequence(0), InvalidParameter);
}

TEST(Mu2, MatchesCountedPolynomials) {
  for (int m = 3; m <= 6; ++m)
    EXPECT_EQ(interpolate_charpoly(m, counted(m)).mu(2), mu2_formula(m)) << m;
}
