#ifndef MIDHYP_RANKING_HPP
#define MIDHYP_RANKING_HPP

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace midhyp {

// Comparison policy per scalar type. Exact types compare exactly; doubles
// treat differences within 1e-12 as ties, which the ranking code rejects.
template <class T>
struct ScalarTraits {
  static int compare(const T& a, const T& b) { return a < b ? -1 : (b < a ? 1 : 0); }
  static std::string str(const T& v) { return v.str(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr double tie_tolerance = 1e-12;
  static int compare(double a, double b) {
    if (std::abs(a - b) <= tie_tolerance)
      return 0;
    return a < b ? -1 : 1;
  }
  static std::string str(double v) { return std::to_string(v); }
};

template <class T>
struct ObjectConfig {
  std::vector<T> points;

  int m() const { return static_cast<int>(points.size()); }
};

// Best-to-worst list of 1-based object labels.
struct Ranking {
  std::vector<int> order;

  friend bool operator==(const Ranking&, const Ranking&) = default;
  friend auto operator<=>(const Ranking&, const Ranking&) = default;

  std::string str() const {
    std::string s = "(";
    const bool wide = order.size() >= 10;
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (wide && k > 0)
        s += ' ';
      s += std::to_string(order[k]);
    }
    return s + ")";
  }
};

using LabelPair = std::pair<int, int>;

struct MidpointOrder {
  std::vector<LabelPair> pairs; // ascending midpoint value

  friend bool operator==(const MidpointOrder&, const MidpointOrder&) = default;
  friend auto operator<=>(const MidpointOrder&, const MidpointOrder&) = default;

  std::string str() const {
    std::string s;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (k > 0)
        s += '<';
      s += "x" + std::to_string(pairs[k].first) + std::to_string(pairs[k].second);
    }
    return s;
  }
};

struct RankingPattern {
  std::vector<Ranking> rankings; // ideal point from -inf to +inf

  friend bool operator==(const RankingPattern&, const RankingPattern&) = default;
};

// sigma[k-1] = sigma(k); a bijection of {1..m}.
using Permutation = std::vector<int>;

inline Permutation identity_permutation(int m) {
  Permutation p(m);
  std::iota(p.begin(), p.end(), 1);
  return p;
}

inline Permutation inverse(const Permutation& sigma) {
  Permutation inv(sigma.size());
  for (std::size_t k = 0; k < sigma.size(); ++k)
    inv[sigma[k] - 1] = static_cast<int>(k) + 1;
  return inv;
}

inline bool is_permutation_of_labels(const std::vector<int>& v) {
  std::vector<char> seen(v.size(), 0);
  for (int x : v) {
    if (x < 1 || x > static_cast<int>(v.size()) || seen[x - 1])
      return false;
    seen[x - 1] = 1;
  }
  return true;
}

inline Ranking apply_sigma(const Permutation& sigma, const Ranking& r) {
  if (sigma.size() != r.order.size())
    throw InvalidParameter("permutation and ranking sizes differ");
  Ranking out;
  out.order.reserve(r.order.size());
  for (int label : r.order)
    out.order.push_back(sigma[label - 1]);
  return out;
}

// (sigma x)_i = x_{sigma^{-1}(i)}
template <class T>
ObjectConfig<T> act_on_config(const Permutation& sigma, const ObjectConfig<T>& x) {
  const Permutation inv = inverse(sigma);
  ObjectConfig<T> out;
  out.points.reserve(x.points.size());
  for (std::size_t i = 0; i < x.points.size(); ++i)
    out.points.push_back(x.points[inv[i] - 1]);
  return out;
}

inline long inversions(const Ranking& r) {
  long n = 0;
  for (std::size_t a = 0; a < r.order.size(); ++a)
    for (std::size_t b = a + 1; b < r.order.size(); ++b)
      if (r.order[a] > r.order[b])
        ++n;
  return n;
}

namespace detail {

template <class T>
std::string pair_str(int i, int j) {
  return "x" + std::to_string(i) + std::to_string(j);
}

template <class T>
struct PairSum {
  T sum; // 2 * midpoint
  int i, j;
};

template <class T>
std::vector<PairSum<T>> sorted_pair_sums(const ObjectConfig<T>& x) {
  using Tr = ScalarTraits<T>;
  const int m = x.m();
  std::vector<PairSum<T>> sums;
  sums.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      sums.push_back({x.points[i - 1] + x.points[j - 1], i, j});
  std::stable_sort(sums.begin(), sums.end(),
                   [](const PairSum<T>& a, const PairSum<T>& b) { return Tr::compare(a.sum, b.sum) < 0; });
  for (std::size_t k = 1; k < sums.size(); ++k)
    if (Tr::compare(sums[k - 1].sum, sums[k].sum) == 0)
      throw DegenerateInput("midpoints " + pair_str<T>(sums[k - 1].i, sums[k - 1].j) + " and " +
                            pair_str<T>(sums[k].i, sums[k].j) + " coincide");
  return sums;
}

} // namespace detail

template <class T>
void check_general_position(const ObjectConfig<T>& x) {
  using Tr = ScalarTraits<T>;
  if (x.m() < 2)
    throw InvalidParameter("configuration needs at least two objects");
  for (int i = 0; i < x.m(); ++i)
    for (int j = i + 1; j < x.m(); ++j)
      if (Tr::compare(x.points[i], x.points[j]) == 0)
        throw DegenerateInput("objects " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                              " coincide");
  detail::sorted_pair_sums(x);
}

template <class T>
bool is_ascending(const ObjectConfig<T>& x) {
  for (int i = 1; i < x.m(); ++i)
    if (ScalarTraits<T>::compare(x.points[i - 1], x.points[i]) >= 0)
      return false;
  return true;
}

template <class T>
Ranking rank_at(const ObjectConfig<T>& x, const T& y) {
  using Tr = ScalarTraits<T>;
  check_general_position(x);
  const int m = x.m();
  const T two_y = y + y;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      if (Tr::compare(two_y, x.points[i - 1] + x.points[j - 1]) == 0)
        throw DegenerateInput("ideal point lies on midpoint " + detail::pair_str<T>(i, j));
  std::vector<T> dist;
  dist.reserve(m);
  for (const T& p : x.points)
    dist.push_back(p < y ? T(y - p) : T(p - y));
  Ranking r;
  r.order = identity_permutation(m);
  std::sort(r.order.begin(), r.order.end(),
            [&](int a, int b) { return Tr::compare(dist[a - 1], dist[b - 1]) < 0; });
  return r;
}

template <class T>
MidpointOrder midpoint_order(const ObjectConfig<T>& x) {
  MidpointOrder o;
  for (const auto& s : detail::sorted_pair_sums(x))
    o.pairs.emplace_back(s.i, s.j);
  return o;
}

// Walk from (1 2 ... m), applying the transposition of each midpoint pair in
// midpoint order. Each swapped pair must be adjacent in the current ranking.
inline RankingPattern pattern_from_midpoint_order(int m, const MidpointOrder& order) {
  RankingPattern pat;
  Ranking cur{identity_permutation(m)};
  std::vector<int> pos(m);
  std::iota(pos.begin(), pos.end(), 0);
  pat.rankings.reserve(order.pairs.size() + 1);
  pat.rankings.push_back(cur);
  for (const auto& [i, j] : order.pairs) {
    const int pi = pos[i - 1], pj = pos[j - 1];
    if (pi + 1 != pj)
      throw InvariantViolation("midpoint order is not realizable: " + detail::pair_str<int>(i, j) +
                               " swaps non-adjacent or reversed objects");
    std::swap(cur.order[pi], cur.order[pj]);
    pos[i - 1] = pj;
    pos[j - 1] = pi;
    pat.rankings.push_back(cur);
  }
  return pat;
}

// Ranks sampled at one ideal point per cell between consecutive midpoints.
template <class T>
RankingPattern ranking_pattern_sampled(const ObjectConfig<T>& x) {
  const auto sums = detail::sorted_pair_sums(x);
  RankingPattern pat;
  const T one(1);
  auto half = [](const T& v) { return T(v / 2); };
  pat.rankings.push_back(rank_at(x, T(half(sums.front().sum) - one)));
  for (std::size_t k = 1; k < sums.size(); ++k)
    pat.rankings.push_back(rank_at(x, T((sums[k - 1].sum + sums[k].sum) / 4)));
  pat.rankings.push_back(rank_at(x, T(half(sums.back().sum) + one)));
  return pat;
}

// Requires ascending input. With cross_check, the transposition walk is
// compared against direct sampling of the ranking map.
template <class T>
RankingPattern ranking_pattern(const ObjectConfig<T>& x, bool cross_check = false) {
  if (!is_ascending(x))
    throw InvalidParameter("ranking_pattern requires strictly ascending objects; use normalize_config");
  RankingPattern pat = pattern_from_midpoint_order(x.m(), midpoint_order(x));
  if (cross_check && !(pat == ranking_pattern_sampled(x)))
    throw InvariantViolation("transposition walk disagrees with sampled ranking map");
  return pat;
}

template <class T>
struct NormalizedConfig {
  ObjectConfig<T> ascending;
  Permutation sigma; // original = sigma * ascending
};

template <class T>
NormalizedConfig<T> normalize_config(const ObjectConfig<T>& x) {
  NormalizedConfig<T> n;
  n.sigma = identity_permutation(x.m());
  std::sort(n.sigma.begin(), n.sigma.end(), [&](int a, int b) {
    return ScalarTraits<T>::compare(x.points[a - 1], x.points[b - 1]) < 0;
  });
  for (int label : n.sigma)
    n.ascending.points.push_back(x.points[label - 1]);
  return n;
}

// x'_i = -x_{m+1-i}; maps ascending configurations to ascending ones.
template <class T>
ObjectConfig<T> negate_reverse(const ObjectConfig<T>& x) {
  ObjectConfig<T> out;
  for (auto it = x.points.rbegin(); it != x.points.rend(); ++it)
    out.points.push_back(T(-*it));
  return out;
}

// Pairwise simple majority over the individuals at `ideals`.
template <class T>
Ranking majority_ranking(const ObjectConfig<T>& x, const std::vector<T>& ideals) {
  if (ideals.empty() || ideals.size() % 2 == 0)
    throw InvalidParameter("majority_ranking needs an odd number of ideal points");
  const int m = x.m();
  std::vector<int> prefer(static_cast<std::size_t>(m) * m, 0); // prefer[a*m+b]: #voters a over b
  for (const T& y : ideals) {
    const Ranking r = rank_at(x, y);
    for (int u = 0; u < m; ++u)
      for (int v = u + 1; v < m; ++v)
        ++prefer[static_cast<std::size_t>(r.order[u] - 1) * m + (r.order[v] - 1)];
  }
  const int half = static_cast<int>(ideals.size()) / 2;
  std::vector<int> wins(m, 0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && prefer[static_cast<std::size_t>(a) * m + b] > half)
        ++wins[a];
  Ranking out;
  out.order = identity_permutation(m);
  std::sort(out.order.begin(), out.order.end(), [&](int a, int b) { return wins[a - 1] > wins[b - 1]; });
  // A strict total order has win counts m-1, m-2, ..., 0 and agrees with every pairwise majority.
  for (int k = 0; k < m; ++k)
    if (wins[out.order[k] - 1] != m - 1 - k)
      throw InvariantViolation("majority relation is not a total order");
  return out;
}

namespace detail {

// cpp_int's string constructor reads a leading 0 as octal.
inline BigInt parse_decimal_integer(const std::string& digits) {
  BigInt v = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::runtime_error("not a digit");
    v = v * 10 + (c - '0');
  }
  return v;
}

inline BigInt parse_signed_integer(const std::string& s) {
  if (s.empty())
    throw std::runtime_error("empty");
  const bool neg = s[0] == '-';
  const std::string body = (s[0] == '-' || s[0] == '+') ? s.substr(1) : s;
  if (body.empty())
    throw std::runtime_error("empty");
  const BigInt v = parse_decimal_integer(body);
  return neg ? BigInt(-v) : v;
}

} // namespace detail

inline Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty())
    throw InvalidParameter("empty number");
  try {
    if (s.find('/') != std::string::npos) {
      const auto slash = s.find('/');
      const BigInt num = detail::parse_signed_integer(s.substr(0, slash));
      const BigInt den = detail::parse_signed_integer(s.substr(slash + 1));
      if (den == 0)
        throw InvalidParameter("zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    bool neg = false;
    std::size_t k = 0;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      k = 1;
    }
    std::string digits;
    int frac_digits = 0;
    bool seen_dot = false;
    for (; k < s.size(); ++k) {
      if (s[k] == '.' && !seen_dot) {
        seen_dot = true;
      } else if (std::isdigit(static_cast<unsigned char>(s[k]))) {
        digits += s[k];
        if (seen_dot)
          ++frac_digits;
      } else {
        throw InvalidParameter("not a decimal or fraction: '" + text + "'");
      }
    }
    if (digits.empty())
      throw InvalidParameter("not a decimal or fraction: '" + text + "'");
    const BigInt num = detail::parse_decimal_integer(digits);
    BigInt den = boost::multiprecision::pow(BigInt(10), frac_digits);
    return Rational(neg ? BigInt(-num) : num, den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const InvalidParameter*>(&e))
      throw;
    throw InvalidParameter("not a decimal or fraction: '" + text + "'");
  }
}

inline std::vector<Rational> parse_rational_list(const std::string& csv) {
  std::vector<Rational> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto end = comma == std::string::npos ? csv.size() : comma;
    out.push_back(parse_rational(csv.substr(start, end - start)));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

} // namespace midhyp

#endif // MIDHYP_RANKING_HPP
