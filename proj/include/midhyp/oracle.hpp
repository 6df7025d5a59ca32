#ifndef MIDHYP_ORACLE_HPP
#define MIDHYP_ORACLE_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <boost/rational.hpp>

#include "arrangement.hpp"
#include "charpoly.hpp"
#include "common.hpp"
#include "ranking.hpp"

namespace midhyp {

// Small-scale verifiers that share no code path with the finite-field counter.

// ---------------------------------------------------------------------------
// Intersection lattice over Q

struct LatticeEdge {
  std::uint64_t hyperplanes = 0; // bit h set iff hyperplane h contains the edge
  int rank = 0;                  // codimension
  std::int64_t mobius = 0;
};

struct IntersectionLattice {
  int m = 0;
  std::vector<LatticeEdge> edges; // sorted by rank; edges[0] is the ambient space
};

namespace detail {

using Q = boost::rational<std::int64_t>;
using QRow = std::vector<Q>;

// Reduces `v` against an echelon basis (pivot columns in `pivots`).
inline QRow reduce(QRow v, const std::vector<QRow>& basis, const std::vector<int>& pivots) {
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Q f = v[pivots[k]];
    if (f != Q(0))
      for (std::size_t c = 0; c < v.size(); ++c)
        v[c] -= f * basis[k][c];
  }
  return v;
}

struct Span {
  std::vector<QRow> basis; // each row has pivot entry 1, zeros at other pivots
  std::vector<int> pivots;

  bool contains(const QRow& v) const {
    const QRow r = reduce(v, basis, pivots);
    return std::all_of(r.begin(), r.end(), [](const Q& x) { return x == Q(0); });
  }

  bool add(const QRow& v) {
    QRow r = reduce(v, basis, pivots);
    int piv = -1;
    for (std::size_t c = 0; c < r.size(); ++c)
      if (r[c] != Q(0)) {
        piv = static_cast<int>(c);
        break;
      }
    if (piv < 0)
      return false;
    const Q lead = r[piv];
    for (auto& x : r)
      x /= lead;
    for (auto& b : basis) {
      const Q f = b[piv];
      if (f != Q(0))
        for (std::size_t c = 0; c < b.size(); ++c)
          b[c] -= f * r[c];
    }
    basis.push_back(std::move(r));
    pivots.push_back(piv);
    return true;
  }
};

} // namespace detail

inline IntersectionLattice build_lattice(int m) {
  if (m < 3 || m > 5)
    throw Refused("lattice construction is limited to 3 <= m <= 5");
  const Arrangement a = build_arrangement(m, Variant::Mid);
  const std::size_t n = a.size();
  std::vector<detail::QRow> normals;
  for (const auto& h : a.hyperplanes) {
    detail::QRow row;
    for (int c : h.coeffs)
      row.emplace_back(c);
    normals.push_back(std::move(row));
  }

  IntersectionLattice lat;
  lat.m = m;
  lat.edges.push_back({0, 0, 1});
  std::set<std::uint64_t> seen{0};
  std::vector<std::uint64_t> frontier{0};
  for (int rank = 1; !frontier.empty(); ++rank) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t mask : frontier) {
      detail::Span span;
      for (std::size_t h = 0; h < n; ++h)
        if (mask >> h & 1)
          span.add(normals[h]);
      for (std::size_t h = 0; h < n; ++h) {
        if (mask >> h & 1)
          continue;
        detail::Span grown = span;
        grown.add(normals[h]);
        std::uint64_t closure = 0;
        for (std::size_t g = 0; g < n; ++g)
          if (grown.contains(normals[g]))
            closure |= std::uint64_t{1} << g;
        if (seen.insert(closure).second) {
          next.push_back(closure);
          lat.edges.push_back({closure, rank, 0});
        }
      }
    }
    frontier = std::move(next);
  }

  // mu(X) = -sum over edges strictly below X (hyperplane set a proper subset).
  for (std::size_t i = 1; i < lat.edges.size(); ++i) {
    std::int64_t s = 0;
    const std::uint64_t x = lat.edges[i].hyperplanes;
    for (std::size_t j = 0; j < lat.edges.size(); ++j) {
      if (lat.edges[j].rank >= lat.edges[i].rank)
        break;
      const std::uint64_t y = lat.edges[j].hyperplanes;
      if ((y & x) == y)
        s += lat.edges[j].mobius;
    }
    lat.edges[i].mobius = -s;
  }
  return lat;
}

inline CharPoly lattice_charpoly(int m) {
  const IntersectionLattice lat = build_lattice(m);
  CharPoly cp;
  cp.m = m;
  cp.chi.c.assign(m + 1, 0);
  for (const auto& e : lat.edges)
    cp.chi.c[e.rank] += e.mobius; // coefficient of t^(m - rank)
  return cp;
}

// ---------------------------------------------------------------------------
// Sampling midpoint orders

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  return splitmix64(splitmix64(seed) ^ (block * 0xd1b54a32d192ed03ull));
}

// rank d(i,j) increasing in i for fixed j and in j for fixed i
inline bool is_monotone_midpoint_order(int m, const MidpointOrder& order) {
  std::vector<int> rank(static_cast<std::size_t>(m + 1) * (m + 1), -1);
  for (std::size_t k = 0; k < order.pairs.size(); ++k)
    rank[order.pairs[k].first * (m + 1) + order.pairs[k].second] = static_cast<int>(k);
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) {
      const int d = rank[i * (m + 1) + j];
      if (d < 0)
        return false;
      if (i + 1 < j && d >= rank[(i + 1) * (m + 1) + j])
        return false;
      if (j + 1 <= m && d >= rank[i * (m + 1) + j + 1])
        return false;
    }
  return true;
}

struct PatternSample {
  std::set<MidpointOrder> orders;
  std::uint64_t draws = 0;     // accepted configurations
  std::uint64_t rejected = 0;  // redrawn for near-ties
  std::uint64_t last_new = 0;  // draw index at which the newest order appeared
  bool saturated = false;
};

namespace detail {

inline constexpr std::uint64_t sample_block = 1u << 14;
inline constexpr double sample_min_gap = 1e-9;

struct BlockOrders {
  std::vector<std::pair<std::uint64_t, std::string>> first_seen; // (index in block, encoded order)
  std::uint64_t rejected = 0;
};

// Encoded as one byte per midpoint: index of pair (i,j) in lexicographic order.
inline BlockOrders sample_block_orders(int m, std::uint64_t seed, std::uint64_t block, std::uint64_t count) {
  std::mt19937_64 gen(block_seed(seed, block));
  std::normal_distribution<double> normal;
  BlockOrders out;
  std::unordered_set<std::string> local;
  std::vector<double> x(m);
  struct Mid {
    double v;
    std::uint8_t id;
  };
  std::vector<Mid> mids;
  std::string key;
  for (std::uint64_t k = 0; k < count;) {
    for (auto& v : x)
      v = normal(gen);
    std::sort(x.begin(), x.end());
    mids.clear();
    std::uint8_t id = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        mids.push_back({x[i] + x[j], id++});
    std::sort(mids.begin(), mids.end(), [](const Mid& a, const Mid& b) { return a.v < b.v; });
    bool ok = true;
    for (int i = 1; i < m && ok; ++i)
      ok = x[i] - x[i - 1] >= sample_min_gap;
    for (std::size_t i = 1; i < mids.size() && ok; ++i)
      ok = mids[i].v - mids[i - 1].v >= 2 * sample_min_gap;
    if (!ok) {
      ++out.rejected;
      continue;
    }
    key.clear();
    for (const auto& md : mids)
      key.push_back(static_cast<char>(md.id));
    if (local.insert(key).second)
      out.first_seen.emplace_back(k, key);
    ++k;
  }
  return out;
}

inline MidpointOrder decode_order(int m, const std::string& key) {
  std::vector<LabelPair> lex;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      lex.emplace_back(i, j);
  MidpointOrder o;
  for (char c : key)
    o.pairs.push_back(lex[static_cast<unsigned char>(c)]);
  return o;
}

} // namespace detail

// Distinct midpoint orders of `samples` sorted standard-normal configurations.
// Deterministic in (m, samples, seed); thread count only affects speed.
inline PatternSample sample_patterns(int m, std::uint64_t samples, std::uint64_t seed, int threads = 1) {
  if (m < 3 || m > 12)
    throw InvalidParameter("sample_patterns supports 3 <= m <= 12");
  const std::uint64_t nblocks = (samples + detail::sample_block - 1) / detail::sample_block;
  std::vector<detail::BlockOrders> blocks(nblocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) {
      const std::uint64_t count = std::min(detail::sample_block, samples - b * detail::sample_block);
      blocks[b] = detail::sample_block_orders(m, seed, b, count);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t)
      pool.emplace_back(worker);
    worker();
  }
  PatternSample res;
  std::unordered_set<std::string> all;
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    res.rejected += blocks[b].rejected;
    for (const auto& [idx, key] : blocks[b].first_seen)
      if (all.insert(key).second) {
        res.orders.insert(detail::decode_order(m, key));
        res.last_new = b * detail::sample_block + idx;
      }
  }
  res.draws = samples;
  return res;
}

// Doubles the sample size until no new order appeared in the last
// 10x(current count) draws, up to `max_samples`.
inline PatternSample sample_until_saturated(int m, std::uint64_t seed, std::uint64_t max_samples,
                                            int threads = 1, std::uint64_t initial = 1u << 16) {
  std::uint64_t n = std::min(initial, max_samples);
  for (;;) {
    PatternSample s = sample_patterns(m, n, seed, threads);
    const std::uint64_t quiet = s.draws - 1 - s.last_new;
    if (quiet >= 10 * s.orders.size()) {
      s.saturated = true;
      return s;
    }
    if (n >= max_samples)
      return s;
    n = std::min(2 * n, max_samples);
  }
}

// ---------------------------------------------------------------------------
// Thrall count: linear extensions of the midpoint poset

inline std::uint64_t thrall_count(int m) {
  if (m < 2 || m > 7)
    throw Refused("thrall_count is limited to 2 <= m <= 7");
  std::vector<LabelPair> elems;
  for (int i = 1; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      elems.emplace_back(i, j);
  const int n = static_cast<int>(elems.size());
  auto index_of = [&](int i, int j) {
    for (int k = 0; k < n; ++k)
      if (elems[k] == LabelPair{i, j})
        return k;
    return -1;
  };
  // (i,j) must precede (i+1,j) and (i,j+1).
  std::vector<std::uint32_t> preds(n, 0);
  for (int k = 0; k < n; ++k) {
    const auto [i, j] = elems[k];
    if (i + 1 < j)
      preds[index_of(i + 1, j)] |= 1u << k;
    if (j + 1 <= m)
      preds[index_of(i, j + 1)] |= 1u << k;
  }
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  std::unordered_map<std::uint32_t, std::uint64_t> memo;
  auto count = [&](auto&& self, std::uint32_t placed) -> std::uint64_t {
    if (placed == full)
      return 1;
    if (auto it = memo.find(placed); it != memo.end())
      return it->second;
    std::uint64_t total = 0;
    for (int k = 0; k < n; ++k)
      if (!(placed >> k & 1) && (preds[k] & placed) == preds[k])
        total += self(self, placed | (1u << k));
    memo.emplace(placed, total);
    return total;
  };
  return count(count, 0);
}

} // namespace midhyp

#endif // MIDHYP_ORACLE_HPP
