#include <gtest/gtest.h>

#include <set>

#include "midhyp/arrangement.hpp"

using namespace midhyp;

namespace {

// Brute force over all ordered 4-tuples, keeping one representative per set
// {{p,q},{r,s}} of disjoint pairs with p the overall minimum.
std::size_t brute_i4(int m) {
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> seen;
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b)
      for (int c = 1; c <= m; ++c)
        for (int d = 1; d <= m; ++d) {
          if (std::set<int>{a, b, c, d}.size() != 4)
            continue;
          std::pair<int, int> x{std::min(a, b), std::max(a, b)}, y{std::min(c, d), std::max(c, d)};
          if (y < x)
            std::swap(x, y);
          seen.insert({x, y});
        }
  return seen.size();
}

} // namespace

TEST(Arrangement, SizesMatchFormulaAndBruteForce) {
  EXPECT_EQ(build_arrangement(3, Variant::Mid).size(), 3u);
  EXPECT_EQ(build_arrangement(4, Variant::Mid).size(), 9u);
  EXPECT_EQ(build_arrangement(5, Variant::Mid).size(), 25u);
  for (int m = 3; m <= 9; ++m) {
    const auto mid = build_arrangement(m, Variant::Mid);
    EXPECT_EQ(mid.size(), binomial(m, 2) + 3 * binomial(m, 4)) << m;
    EXPECT_EQ(index_set_i4(m).size(), brute_i4(m)) << m;
    EXPECT_EQ(build_arrangement(m, Variant::Braid).size(), binomial(m, 2));
    EXPECT_EQ(build_arrangement(m, Variant::MidStar).size(), mid.size() + 1);
    EXPECT_EQ(expected_size(m, Variant::Mid), mid.size());
  }
}

TEST(Arrangement, I4TuplesSatisfyInvariantsInLexOrder) {
  for (int m = 4; m <= 8; ++m) {
    const auto t = index_set_i4(m);
    EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
    for (const auto& x : t) {
      EXPECT_LT(x.p, x.q);
      EXPECT_LT(x.p, x.r);
      EXPECT_LT(x.r, x.s);
      EXPECT_LE(x.s, m);
      EXPECT_EQ((std::set<int>{x.p, x.q, x.r, x.s}.size()), 4u);
    }
  }
  const auto t4 = index_set_i4(4);
  ASSERT_EQ(t4.size(), 3u);
  EXPECT_EQ(t4[0], (IndexTuple4{1, 2, 3, 4}));
  EXPECT_EQ(t4[1], (IndexTuple4{1, 3, 2, 4}));
  EXPECT_EQ(t4[2], (IndexTuple4{1, 4, 2, 3}));
}

TEST(Arrangement, NormalsAreSumZeroAndDistinctUpToSign) {
  for (int m = 3; m <= 8; ++m) {
    std::set<std::vector<int>> seen;
    for (const auto& h : build_arrangement(m, Variant::Mid).hyperplanes) {
      int sum = 0, plus = 0, minus = 0;
      for (int c : h.coeffs) {
        sum += c;
        plus += c == 1;
        minus += c == -1;
      }
      EXPECT_EQ(sum, 0);
      EXPECT_LE(plus, 2);
      EXPECT_LE(minus, 2);
      std::vector<int> neg = h.coeffs;
      for (int& c : neg)
        c = -c;
      EXPECT_TRUE(seen.insert(h.coeffs).second) << h.label();
      EXPECT_EQ(seen.count(neg), 0u) << h.label();
    }
  }
}

TEST(Arrangement, HyperplaneKindsAndLabels) {
  const auto h = braid_hyperplane(4, 1, 3);
  EXPECT_EQ(h.coeffs, (std::vector<int>{1, 0, -1, 0}));
  EXPECT_EQ(h.label(), "H13");
  EXPECT_EQ(h.max_index(), 3);
  const auto g = mid_hyperplane(5, {1, 4, 2, 3});
  EXPECT_EQ(g.coeffs, (std::vector<int>{1, -1, -1, 1, 0}));
  EXPECT_EQ(g.label(), "H1423");
  const auto star = build_arrangement(4, Variant::MidStar);
  EXPECT_EQ(star.hyperplanes.front().kind, HyperplaneKind::Origin);
  EXPECT_EQ(star.hyperplanes.front().coeffs, (std::vector<int>{1, 0, 0, 0}));
}

TEST(Arrangement, CoefficientMatrix) {
  const IntMatrix c3 = coefficient_matrix(3);
  EXPECT_EQ(c3.rows, 3);
  EXPECT_EQ(c3.cols, 4);
  const IntMatrix c4 = coefficient_matrix(4);
  EXPECT_EQ(c4.rows, 4);
  EXPECT_EQ(c4.cols, 10);
  EXPECT_EQ(c4(0, 0), 1);
  for (int r = 1; r < 4; ++r)
    EXPECT_EQ(c4(r, 0), 0);
  for (int col = 1; col < c4.cols; ++col) {
    int s = 0;
    for (int r = 0; r < 4; ++r)
      s += c4(r, col);
    EXPECT_EQ(s, 0) << col;
  }
  EXPECT_THROW(coefficient_matrix(2), InvalidParameter);
}

TEST(Arrangement, RejectsSmallM) {
  EXPECT_THROW(build_arrangement(2, Variant::Mid), InvalidParameter);
  EXPECT_THROW(prime_threshold(2), InvalidParameter);
}

TEST(Arrangement, PrimeThreshold) {
  EXPECT_EQ(prime_threshold(3), 2u);
  EXPECT_EQ(prime_threshold(4), 4u);
  EXPECT_EQ(prime_threshold(5), 8u);
  EXPECT_EQ(prime_threshold(6), 24u);
  EXPECT_EQ(prime_threshold(7), 72u);
  EXPECT_EQ(prime_threshold(8), 216u);
}

TEST(Arrangement, SelectPrimes) {
  EXPECT_EQ(select_primes(4, 2).primes, (std::vector<std::uint64_t>{5, 7}));
  EXPECT_EQ(select_primes(5, 3).primes, (std::vector<std::uint64_t>{11, 13, 17}));
  EXPECT_EQ(select_primes(8, 6).primes, (std::vector<std::uint64_t>{223, 227, 229, 233, 239, 241}));
  for (int m = 3; m <= 10; ++m) {
    const auto sel = select_primes(m, m - 2);
    EXPECT_TRUE(sel.safe);
    EXPECT_TRUE(std::is_sorted(sel.primes.begin(), sel.primes.end()));
    for (auto q : sel.primes) {
      EXPECT_GT(q, prime_threshold(m));
      EXPECT_TRUE(is_prime(q));
    }
  }
  const auto unsafe = select_primes(5, 3, 2);
  EXPECT_FALSE(unsafe.safe);
  EXPECT_EQ(unsafe.primes, (std::vector<std::uint64_t>{3, 5, 7}));
  EXPECT_THROW(select_primes(5, 0), InvalidParameter);
}
