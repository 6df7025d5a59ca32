#ifndef MIDHYP_CHARPOLY_HPP
#define MIDHYP_CHARPOLY_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arrangement.hpp"
#include "common.hpp"

namespace midhyp {

class InconsistentCounts : public Error {
public:
  using Error::Error;
};

// Dense polynomial with coefficients in descending powers: c[0] t^n + ... + c[n].
struct IntPoly {
  std::vector<BigInt> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }

  BigInt operator()(const BigInt& t) const {
    BigInt v = 0;
    for (const auto& k : c)
      v = v * t + k;
    return v;
  }

  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j)
        r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

  static IntPoly linear(const BigInt& root) { return IntPoly{{1, -root}}; }
};

inline std::string format_expanded(const IntPoly& p, const std::string& var = "t") {
  std::string s;
  const int n = p.degree();
  for (int i = 0; i <= n; ++i) {
    const BigInt& a = p.c[i];
    if (a == 0)
      continue;
    const int e = n - i;
    const BigInt mag = a < 0 ? BigInt(-a) : a;
    if (s.empty())
      s += a < 0 ? "-" : "";
    else
      s += a < 0 ? " - " : " + ";
    if (mag != 1 || e == 0)
      s += mag.str();
    if (e >= 1)
      s += var;
    if (e >= 2)
      s += "^" + std::to_string(e);
  }
  return s.empty() ? "0" : s;
}

struct CountSample {
  std::uint64_t q = 0;
  std::uint64_t count = 0;
};

struct CharPoly {
  int m = 0;
  IntPoly chi;                        // mu_0 t^m + mu_1 t^(m-1) + ... + mu_m
  std::vector<CountSample> provenance; // empty when injected

  const BigInt& mu(int k) const { return chi.c.at(static_cast<std::size_t>(k)); }
  BigInt operator()(const BigInt& t) const { return chi(t); }
};

namespace detail {

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

// Newton divided differences through (xs[i], ys[i]); returns monomial coefficients
// in descending powers, degree xs.size()-1.
inline std::vector<Rational> newton_interpolate(const std::vector<Rational>& xs, std::vector<Rational> ys) {
  const std::size_t n = xs.size();
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i)
      ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - level]);
  // Horner on the Newton form, ascending-power work array.
  std::vector<Rational> asc(1, ys[n - 1]);
  for (std::size_t k = n - 1; k-- > 0;) {
    std::vector<Rational> next(asc.size() + 1, Rational(0));
    for (std::size_t j = 0; j < asc.size(); ++j) {
      next[j + 1] += asc[j];
      next[j] -= asc[j] * xs[k];
    }
    next[0] += ys[k];
    asc = std::move(next);
  }
  return {asc.rbegin(), asc.rend()};
}

} // namespace detail

// chi(A_m, t) = t (t - 1) p(t) with p monic of degree m-2 and p(q) = |M1(m,q)|.
// The first m-2 samples determine p; further samples must agree with it.
inline CharPoly interpolate_charpoly(int m, const std::vector<CountSample>& counts) {
  if (m < 3)
    throw InvalidParameter("interpolate_charpoly requires m >= 3");
  const std::size_t need = static_cast<std::size_t>(m - 2);
  if (counts.size() < need)
    throw InvalidParameter("underdetermined: m = " + std::to_string(m) + " needs " + std::to_string(need) +
                           " counts, got " + std::to_string(counts.size()));
  std::set<std::uint64_t> distinct;
  for (const auto& s : counts)
    if (!distinct.insert(s.q).second)
      throw InvalidParameter("duplicate prime " + std::to_string(s.q) + " in counts");

  std::vector<Rational> xs, ys;
  for (std::size_t i = 0; i < need; ++i) {
    const BigInt q = counts[i].q;
    xs.emplace_back(q);
    ys.emplace_back(BigInt(counts[i].count) - boost::multiprecision::pow(q, static_cast<unsigned>(need)));
  }
  const std::vector<Rational> rest = detail::newton_interpolate(xs, ys);

  IntPoly p;
  p.c.push_back(1);
  for (const auto& r : rest) {
    if (!detail::is_integer(r))
      throw InconsistentCounts("interpolated coefficient " + r.str() +
                               " is not an integer; a prime is likely inadmissible");
    p.c.push_back(numerator(r));
  }
  for (std::size_t i = need; i < counts.size(); ++i) {
    const BigInt v = p(BigInt(counts[i].q));
    if (v != BigInt(counts[i].count))
      throw InconsistentCounts("count at q = " + std::to_string(counts[i].q) + " is " +
                               std::to_string(counts[i].count) + " but the interpolant predicts " + v.str());
  }

  CharPoly cp;
  cp.m = m;
  cp.chi = IntPoly{{1, 0}} * IntPoly::linear(1) * p;
  cp.provenance = counts;
  return cp;
}

inline CharPoly charpoly_from_factors(int m, const std::vector<IntPoly>& factors) {
  CharPoly cp;
  cp.m = m;
  cp.chi = IntPoly{{1}};
  for (const auto& f : factors)
    cp.chi = cp.chi * f;
  if (cp.chi.degree() != m)
    throw InvalidParameter("factors do not multiply to degree m");
  return cp;
}

// Values violating the structural invariants of chi(A_m, t), if any.
inline std::vector<std::string> charpoly_invariant_failures(const CharPoly& cp) {
  std::vector<std::string> bad;
  const int m = cp.m;
  if (cp.chi.degree() != m)
    bad.push_back("degree != m");
  if (cp.mu(0) != 1)
    bad.push_back("mu_0 != 1");
  if (cp.mu(1) != -BigInt(expected_size(m, Variant::Mid)))
    bad.push_back("mu_1 != -|A_m|");
  if (cp.mu(m) != 0)
    bad.push_back("mu_m != 0");
  if (cp(BigInt(0)) != 0)
    bad.push_back("chi(0) != 0");
  if (cp(BigInt(1)) != 0)
    bad.push_back("chi(1) != 0");
  if (cp(BigInt(-1)) % factorial(m) != 0)
    bad.push_back("m! does not divide chi(-1)");
  for (const auto& s : cp.provenance) {
    const BigInt q = s.q;
    if (cp(q) != q * (q - 1) * BigInt(s.count))
      bad.push_back("chi(q) != q(q-1)|M1| at q = " + std::to_string(s.q));
  }
  return bad;
}

struct RankingCount {
  int m = 0;
  BigInt chambers;
  BigInt r;
};

// Zaslavsky: |Ch| = |chi(-1)|; each braid chamber holds r(m) chambers.
inline RankingCount chambers_and_r(const CharPoly& cp) {
  RankingCount rc;
  rc.m = cp.m;
  rc.chambers = abs(cp(BigInt(-1)));
  const BigInt f = factorial(cp.m);
  if (rc.chambers % f != 0)
    throw InvariantViolation("|chi(-1)| = " + rc.chambers.str() + " is not divisible by " +
                             std::to_string(cp.m) + "!");
  rc.r = rc.chambers / f;
  return rc;
}

inline BigInt mu2_formula(int m) {
  require(m >= 3, "mu2_formula requires m >= 3");
  auto b = [m](int k) { return BigInt(binomial(m, k)); };
  return 2 * b(3) + 15 * b(4) + 120 * b(5) + 375 * b(6) + 630 * b(7) + 315 * b(8);
}

struct FactorReport {
  std::vector<BigInt> roots; // integer roots with multiplicity, ascending
  IntPoly remainder;         // monic cofactor with no integer roots ({1} when fully linear)
  bool fully_linear() const { return remainder.degree() == 0; }
};

namespace detail {

// Synthetic division by (t - r); returns true and replaces p when r is a root.
inline bool divide_root(IntPoly& p, const BigInt& r) {
  if (p.degree() < 1)
    return false;
  std::vector<BigInt> q;
  BigInt acc = 0;
  for (const auto& k : p.c) {
    acc = acc * r + k;
    q.push_back(acc);
  }
  if (q.back() != 0)
    return false;
  q.pop_back();
  p.c = std::move(q);
  return true;
}

inline std::vector<BigInt> divisors(BigInt n) {
  n = abs(n);
  std::vector<BigInt> small, large;
  for (BigInt d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n)
        large.push_back(n / d);
    }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

} // namespace detail

// Integer roots by trial of the divisors of the lowest nonzero coefficient.
inline FactorReport factor_over_Z(const IntPoly& poly) {
  FactorReport rep;
  IntPoly p = poly;
  while (p.degree() >= 1 && p.c.back() == 0) {
    p.c.pop_back();
    rep.roots.push_back(0);
  }
  if (p.degree() >= 1) {
    for (const auto& d : detail::divisors(p.c.back()))
      for (const BigInt& cand : {d, BigInt(-d)})
        while (detail::divide_root(p, cand))
          rep.roots.push_back(cand);
  }
  std::sort(rep.roots.begin(), rep.roots.end());
  rep.remainder = p;
  return rep;
}

inline FactorReport factor_over_Z(const CharPoly& cp) { return factor_over_Z(cp.chi); }

inline std::string format_factored(const FactorReport& rep, const std::string& var = "t") {
  std::string s;
  for (const auto& r : rep.roots) {
    if (r == 0)
      s += var;
    else
      s += "(" + var + (r < 0 ? " + " + BigInt(-r).str() : " - " + r.str()) + ")";
  }
  if (!rep.fully_linear())
    s += "(" + format_expanded(rep.remainder, var) + ")";
  return s;
}

// Closed form of (m-2) * sum_i (b_i - mean b)^2 for a hypothetical split
// chi = t(t-1)prod(t - b_i); negative values rule the split out.
inline Rational h_poly(int m) {
  require(m >= 3, "h_poly requires m >= 3");
  const Rational x(m);
  const Rational terms[] = {Rational(1),        Rational(98, 3),   Rational(-1573, 16),
                            Rational(5423, 48), Rational(-12787, 192), Rational(527, 24),
                            Rational(-391, 96), Rational(19, 48),  Rational(-1, 64)};
  Rational v = 0;
  Rational pw = 1;
  for (const auto& c : terms) {
    v += c * pw;
    pw *= x;
  }
  return v;
}

// Same quantity from |A_m| and mu_2: (m-3)(sum b)^2 - 2(m-2) e2(b), where
// sum b = |A_m| - 1 and e2(b) = mu_2 - sum b.
inline Rational h_from_mu(int m) {
  require(m >= 3, "h_from_mu requires m >= 3");
  const BigInt sum_b = BigInt(expected_size(m, Variant::Mid)) - 1;
  const BigInt e2 = mu2_formula(m) - sum_b;
  return Rational((m - 3) * sum_b * sum_b - 2 * (m - 2) * e2);
}

// a_1 is 0/0 as written; its limit as n -> 1 is 1.
inline BigInt a_sequence(int n) {
  require(n >= 1, "a_sequence requires n >= 1");
  if (n == 1)
    return 1;
  const BigInt num = BigInt(n) * (boost::multiprecision::pow(BigInt(n), static_cast<unsigned>(n - 1)) - 1) *
                     factorial(n - 2);
  if (num % (n - 1) != 0)
    throw InvariantViolation("a_n is not an integer for n = " + std::to_string(n));
  return num / (n - 1);
}

} // namespace midhyp

#endif // MIDHYP_CHARPOLY_HPP
