#ifndef MIDHYP_ARRANGEMENT_HPP
#define MIDHYP_ARRANGEMENT_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace midhyp {

// Object labels are 1-based throughout the public interface.
struct IndexTuple4 {
  int p, q, r, s;

  friend bool operator==(const IndexTuple4&, const IndexTuple4&) = default;
  friend auto operator<=>(const IndexTuple4&, const IndexTuple4&) = default;
};

enum class HyperplaneKind { Braid, Mid, Origin };

struct Hyperplane {
  HyperplaneKind kind = HyperplaneKind::Braid;
  // Braid(i,j) uses tuple.p = i, tuple.q = j; Mid uses all four.
  IndexTuple4 tuple{0, 0, 0, 0};
  std::vector<int> coeffs;

  // Largest 1-based coordinate index with a nonzero coefficient.
  int max_index() const {
    for (int k = static_cast<int>(coeffs.size()); k >= 1; --k)
      if (coeffs[k - 1] != 0)
        return k;
    return 0;
  }

  std::string label() const {
    switch (kind) {
    case HyperplaneKind::Braid:
      return "H" + std::to_string(tuple.p) + std::to_string(tuple.q);
    case HyperplaneKind::Mid:
      return "H" + std::to_string(tuple.p) + std::to_string(tuple.q) + std::to_string(tuple.r) +
             std::to_string(tuple.s);
    case HyperplaneKind::Origin:
      return "H0";
    }
    return "?";
  }
};

enum class Variant { Braid, Mid, MidStar };

struct Arrangement {
  int m = 0;
  Variant variant = Variant::Mid;
  std::vector<Hyperplane> hyperplanes;

  std::size_t size() const { return hyperplanes.size(); }
};

inline Hyperplane braid_hyperplane(int m, int i, int j) {
  Hyperplane h;
  h.kind = HyperplaneKind::Braid;
  h.tuple = {i, j, 0, 0};
  h.coeffs.assign(m, 0);
  h.coeffs[i - 1] = 1;
  h.coeffs[j - 1] = -1;
  return h;
}

inline Hyperplane mid_hyperplane(int m, const IndexTuple4& t) {
  Hyperplane h;
  h.kind = HyperplaneKind::Mid;
  h.tuple = t;
  h.coeffs.assign(m, 0);
  h.coeffs[t.p - 1] += 1;
  h.coeffs[t.q - 1] += 1;
  h.coeffs[t.r - 1] -= 1;
  h.coeffs[t.s - 1] -= 1;
  return h;
}

// I4 = {(p,q,r,s) : p < q, p < r < s, all distinct}, lexicographic.
inline std::vector<IndexTuple4> index_set_i4(int m) {
  std::vector<IndexTuple4> out;
  for (int p = 1; p <= m; ++p)
    for (int q = p + 1; q <= m; ++q)
      for (int r = p + 1; r <= m; ++r)
        for (int s = r + 1; s <= m; ++s)
          if (q != r && q != s)
            out.push_back({p, q, r, s});
  return out;
}

inline Arrangement build_arrangement(int m, Variant variant) {
  if (m < 3)
    throw InvalidParameter("arrangement requires m >= 3, got " + std::to_string(m));
  Arrangement a;
  a.m = m;
  a.variant = variant;
  if (variant == Variant::MidStar) {
    Hyperplane h0;
    h0.kind = HyperplaneKind::Origin;
    h0.coeffs.assign(m, 0);
    h0.coeffs[0] = 1;
    a.hyperplanes.push_back(std::move(h0));
  }
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      a.hyperplanes.push_back(braid_hyperplane(m, i, j));
  if (variant != Variant::Braid)
    for (const auto& t : index_set_i4(m))
      a.hyperplanes.push_back(mid_hyperplane(m, t));
  return a;
}

inline std::size_t expected_size(int m, Variant variant) {
  std::size_t n = binomial(m, 2);
  if (variant != Variant::Braid)
    n += 3 * binomial(m, 4);
  if (variant == Variant::MidStar)
    n += 1;
  return n;
}

// Row-major m x (|A_m|+1); column 0 is the origin hyperplane x1 = 0.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> data;

  int operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  int& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
};

inline IntMatrix coefficient_matrix(int m) {
  const Arrangement star = build_arrangement(m, Variant::MidStar);
  IntMatrix c;
  c.rows = m;
  c.cols = static_cast<int>(star.size());
  c.data.assign(static_cast<std::size_t>(c.rows) * c.cols, 0);
  for (int col = 0; col < c.cols; ++col)
    for (int row = 0; row < m; ++row)
      c(row, col) = star.hyperplanes[col].coeffs[row];
  return c;
}

// Strict lower bound admissible primes must exceed: the determinant bound
// 2^(m-2) for m <= 5 and 8*3^(m-5) beyond.
inline std::uint64_t prime_threshold(int m) {
  if (m < 3)
    throw InvalidParameter("prime_threshold requires m >= 3");
  std::uint64_t v = 1;
  if (m <= 5) {
    for (int i = 0; i < m - 2; ++i)
      v *= 2;
  } else {
    v = 8;
    for (int i = 0; i < m - 5; ++i)
      v *= 3;
  }
  return v;
}

struct PrimeSelection {
  std::vector<std::uint64_t> primes;
  std::uint64_t threshold = 0;
  bool safe = true; // false when the threshold was overridden below the proven bound
};

inline PrimeSelection select_primes(int m, int count,
                                    std::optional<std::uint64_t> override_threshold = std::nullopt) {
  require(count >= 1, "select_primes requires count >= 1");
  PrimeSelection sel;
  const std::uint64_t proven = prime_threshold(m);
  sel.threshold = override_threshold.value_or(proven);
  sel.safe = sel.threshold >= proven;
  for (std::uint64_t n = sel.threshold + 1; static_cast<int>(sel.primes.size()) < count; ++n)
    if (is_prime(n))
      sel.primes.push_back(n);
  return sel;
}

inline bool prime_is_safe(int m, std::uint64_t q) { return q > prime_threshold(m); }

} // namespace midhyp

#endif // MIDHYP_ARRANGEMENT_HPP
