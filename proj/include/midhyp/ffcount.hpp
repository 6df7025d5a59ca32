#ifndef MIDHYP_FFCOUNT_HPP
#define MIDHYP_FFCOUNT_HPP

#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "arrangement.hpp"
#include "common.hpp"

namespace midhyp {

// Counting |M1(m,q)|: points (0, 1, x3, ..., xm) of (Z_q)^m off every
// hyperplane of A_m. Each hyperplane is checked at the depth of its largest
// coordinate index, where it forbids exactly one residue of that coordinate.

inline constexpr int max_count_m = 12;
inline constexpr std::uint64_t max_count_q = 1024;

// Forbidden residue for the coordinate being assigned: x[a] + x[b] - x[c].
// Braid constraints use b = c = 0 (x1 = 0).
struct Constraint {
  std::uint8_t a, b, c;
};

struct Schedule {
  int m = 0;
  std::vector<std::vector<Constraint>> by_depth; // indexed by 0-based coordinate
  std::uint64_t hash = 0;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& d : by_depth)
      n += d.size();
    return n;
  }
};

inline Schedule build_schedule(int m) {
  if (m < 3 || m > max_count_m)
    throw InvalidParameter("counting supports 3 <= m <= " + std::to_string(max_count_m));
  const Arrangement a = build_arrangement(m, Variant::Mid);
  Schedule s;
  s.m = m;
  s.by_depth.resize(m);
  auto u8 = [](int v) { return static_cast<std::uint8_t>(v); };
  for (const auto& h : a.hyperplanes) {
    const int k = h.max_index();
    const auto& t = h.tuple;
    Constraint c{};
    if (h.kind == HyperplaneKind::Braid) {
      c = {u8(t.p - 1), 0, 0};
    } else if (k == t.q) {
      c = {u8(t.r - 1), u8(t.s - 1), u8(t.p - 1)}; // x_q = x_r + x_s - x_p
    } else {
      c = {u8(t.p - 1), u8(t.q - 1), u8(t.r - 1)}; // x_s = x_p + x_q - x_r
    }
    s.by_depth[k - 1].push_back(c);
  }
  // FNV-1a over (m, depth, a, b, c)
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint64_t>(m));
  for (std::size_t d = 0; d < s.by_depth.size(); ++d)
    for (const auto& c : s.by_depth[d]) {
      mix(d);
      mix(c.a);
      mix(c.b);
      mix(c.c);
    }
  s.hash = h;
  return s;
}

struct CountJob {
  int m = 0;
  std::uint64_t q = 0;
  int threads = 1;
  // Permit primes at or below the proven threshold; the result is flagged unsafe.
  bool allow_unsafe = false;
};

struct CountResult {
  int m = 0;
  std::uint64_t q = 0;
  std::uint64_t count = 0;
  double elapsed_s = 0;
  std::uint64_t nodes_visited = 0;
  bool safe = true;
};

namespace detail {

template <int W>
class SubtreeCounter {
public:
  SubtreeCounter(const Schedule& s, std::uint32_t q) : sched_(s), q_(q) {
    x_.fill(0);
    x_[1] = 1;
    for (int w = 0; w < W; ++w) {
      const std::uint32_t lo = static_cast<std::uint32_t>(w) * 64;
      if (lo + 64 <= q)
        valid_[w] = ~0ull;
      else if (lo < q)
        valid_[w] = (1ull << (q - lo)) - 1;
      else
        valid_[w] = 0;
    }
  }

  // Total over all completions with x3 fixed to `x3`.
  std::uint64_t count_partition(std::uint32_t x3) {
    Bits forbidden = forbidden_at(2);
    if (test(forbidden, x3))
      return 0;
    if (sched_.m == 3)
      return 1;
    x_[2] = x3;
    return descend(3);
  }

  std::uint64_t nodes() const { return nodes_; }

private:
  using Bits = std::array<std::uint64_t, W>;

  static bool test(const Bits& b, std::uint32_t v) { return (b[v >> 6] >> (v & 63)) & 1u; }

  Bits forbidden_at(int depth) const {
    Bits b{};
    const std::uint32_t q = q_;
    for (const Constraint& c : sched_.by_depth[depth]) {
      std::uint32_t v = x_[c.a] + x_[c.b] + q - x_[c.c];
      if (v >= q)
        v -= q;
      if (v >= q)
        v -= q;
      b[v >> 6] |= 1ull << (v & 63);
    }
    return b;
  }

  std::uint64_t descend(int depth) {
    ++nodes_;
    const Bits forbidden = forbidden_at(depth);
    if (depth == sched_.m - 1) {
      unsigned used = 0;
      for (int w = 0; w < W; ++w)
        used += static_cast<unsigned>(std::popcount(forbidden[w]));
      return q_ - used;
    }
    std::uint64_t total = 0;
    for (int w = 0; w < W; ++w) {
      std::uint64_t allowed = ~forbidden[w] & valid_[w];
      while (allowed) {
        const int bit = std::countr_zero(allowed);
        allowed &= allowed - 1;
        x_[depth] = static_cast<std::uint32_t>(w * 64 + bit);
        total += descend(depth + 1);
      }
    }
    return total;
  }

  const Schedule& sched_;
  std::uint32_t q_;
  Bits valid_{};
  std::array<std::uint32_t, max_count_m> x_{};
  std::uint64_t nodes_ = 0;
};

struct PartitionResult {
  std::uint64_t count = 0;
  std::uint64_t nodes = 0;
};

template <int W>
PartitionResult run_partition(const Schedule& s, std::uint32_t q, std::uint32_t x3) {
  SubtreeCounter<W> c(s, q);
  PartitionResult r;
  r.count = c.count_partition(x3);
  r.nodes = c.nodes();
  return r;
}

inline PartitionResult count_one_partition(const Schedule& s, std::uint64_t q, std::uint32_t x3) {
  const auto qq = static_cast<std::uint32_t>(q);
  if (q <= 64)
    return run_partition<1>(s, qq, x3);
  if (q <= 128)
    return run_partition<2>(s, qq, x3);
  if (q <= 256)
    return run_partition<4>(s, qq, x3);
  if (q <= 512)
    return run_partition<8>(s, qq, x3);
  return run_partition<16>(s, qq, x3);
}

inline bool validate_job(const CountJob& job) {
  if (job.m < 3 || job.m > max_count_m)
    throw InvalidParameter("counting supports 3 <= m <= " + std::to_string(max_count_m));
  if (!is_prime(job.q))
    throw InvalidParameter("q = " + std::to_string(job.q) + " is not prime");
  if (job.q > max_count_q)
    throw InvalidParameter("q must not exceed " + std::to_string(max_count_q));
  const bool safe = prime_is_safe(job.m, job.q);
  if (!safe && !job.allow_unsafe)
    throw Refused("q = " + std::to_string(job.q) + " does not exceed the admissibility threshold " +
                  std::to_string(prime_threshold(job.m)) + " for m = " + std::to_string(job.m));
  return safe;
}

// Runs `work(index)` for every index in `todo` on up to `threads` workers.
template <class F>
void parallel_over(const std::vector<std::uint32_t>& todo, int threads, F&& work) {
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(todo.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < todo.size(); i = next.fetch_add(1))
      work(i);
  };
  if (n == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (int t = 0; t < n; ++t)
    pool.emplace_back(worker);
}

inline int default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

} // namespace detail

// Partitions are the x3 values 2..q-1 (x3 is distinct from x1 = 0 and x2 = 1).
inline CountResult count_points(const CountJob& job) {
  const auto start = std::chrono::steady_clock::now();
  CountResult res;
  res.m = job.m;
  res.q = job.q;
  res.safe = detail::validate_job(job);
  const Schedule sched = build_schedule(job.m);
  std::vector<std::uint32_t> parts;
  for (std::uint32_t v = 2; v < job.q; ++v)
    parts.push_back(v);
  std::vector<detail::PartitionResult> sub(parts.size());
  detail::parallel_over(parts, job.threads, [&](std::size_t i) {
    sub[i] = detail::count_one_partition(sched, job.q, parts[i]);
  });
  for (const auto& s : sub) {
    res.count += s.count;
    res.nodes_visited += s.nodes;
  }
  res.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

// Unpruned enumeration of (0, 1, x3..xm) testing every hyperplane; a test oracle.
inline std::uint64_t count_points_naive(int m, std::uint64_t q) {
  if (m < 3)
    throw InvalidParameter("count_points_naive requires m >= 3");
  if (q < 2)
    throw InvalidParameter("count_points_naive requires q >= 2");
  double space = 1;
  for (int k = 0; k < m - 2; ++k)
    space *= static_cast<double>(q);
  if (space > 1e8)
    throw Refused("naive enumeration of q^(m-2) points exceeds the 1e8 guard");
  const Arrangement a = build_arrangement(m, Variant::Mid);
  std::vector<std::int64_t> x(m, 0);
  x[1] = 1;
  const auto n = static_cast<std::uint64_t>(space);
  std::uint64_t count = 0;
  const auto qi = static_cast<std::int64_t>(q);
  for (std::uint64_t code = 0; code < n; ++code) {
    std::uint64_t c = code;
    for (int k = 2; k < m; ++k) {
      x[k] = static_cast<std::int64_t>(c % q);
      c /= q;
    }
    bool off_all = true;
    for (const auto& h : a.hyperplanes) {
      std::int64_t dot = 0;
      for (int k = 0; k < m; ++k)
        dot += h.coeffs[k] * x[k];
      if (((dot % qi) + qi) % qi == 0) {
        off_all = false;
        break;
      }
    }
    if (off_all)
      ++count;
  }
  return count;
}

// Upper bound on internal search nodes: distinctness alone leaves q-(k-1)
// choices for x_k.
inline double estimate_nodes(int m, std::uint64_t q) {
  double total = 0, level = 1;
  for (int k = 3; k <= m - 1; ++k) {
    level *= static_cast<double>(q) - (k - 1);
    total += level;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Checkpointed counting

class CheckpointError : public Error {
public:
  using Error::Error;
};

struct CheckpointOptions {
  std::filesystem::path path;
  // Stop after this many newly completed partitions (simulated interruption).
  std::optional<std::size_t> stop_after;
};

struct CheckpointOutcome {
  CountResult result; // count is the partial sum when !complete
  bool complete = false;
  std::size_t partitions_total = 0;
  std::size_t partitions_done = 0;
  std::size_t partitions_resumed = 0; // done before this call
};

namespace detail {

struct CheckpointState {
  int m = 0;
  std::uint64_t q = 0;
  std::uint64_t hash = 0;
  std::vector<std::uint64_t> subtotal; // index x3 - 2
  std::vector<char> done;
};

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

inline void write_checkpoint(const std::filesystem::path& path, const CheckpointState& st) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out)
      throw CheckpointError("cannot write checkpoint " + tmp.string());
    out << "#midhyp-checkpoint\tv1\tm=" << st.m << "\tq=" << st.q << "\tschedule=" << hex64(st.hash) << "\n";
    for (std::size_t i = 0; i < st.done.size(); ++i)
      out << (i + 2) << '\t' << st.subtotal[i] << '\t' << (st.done[i] ? 1 : 0) << '\n';
    out.flush();
    if (!out)
      throw CheckpointError("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos)
      return out;
    start = tab + 1;
  }
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& where) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw CheckpointError("corrupt checkpoint: bad integer '" + s + "' in " + where);
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw CheckpointError("corrupt checkpoint: integer out of range in " + where);
  }
}

inline CheckpointState read_checkpoint(const std::filesystem::path& path, int m, std::uint64_t q,
                                       std::uint64_t hash) {
  std::ifstream in(path);
  if (!in)
    throw CheckpointError("cannot read checkpoint " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw CheckpointError("corrupt checkpoint: empty file " + path.string());
  const std::string expect = "#midhyp-checkpoint\tv1\tm=" + std::to_string(m) + "\tq=" + std::to_string(q) +
                             "\tschedule=" + hex64(hash);
  if (line != expect)
    throw CheckpointError("checkpoint header mismatch in " + path.string() + ": found '" + line +
                          "', expected '" + expect + "'");
  CheckpointState st;
  st.m = m;
  st.q = q;
  st.hash = hash;
  const std::size_t n = q - 2;
  st.subtotal.assign(n, 0);
  st.done.assign(n, 0);
  std::vector<char> seen(n, 0);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto f = split_tabs(line);
    if (f.size() != 3)
      throw CheckpointError("corrupt checkpoint: expected 3 fields at " + where);
    const std::uint64_t x3 = parse_u64(f[0], where);
    const std::uint64_t sub = parse_u64(f[1], where);
    const std::uint64_t flag = parse_u64(f[2], where);
    if (x3 < 2 || x3 >= q)
      throw CheckpointError("corrupt checkpoint: x3 out of range at " + where);
    if (flag > 1)
      throw CheckpointError("corrupt checkpoint: done flag must be 0 or 1 at " + where);
    if (seen[x3 - 2])
      throw CheckpointError("corrupt checkpoint: duplicate x3 at " + where);
    if (flag == 0 && sub != 0)
      throw CheckpointError("corrupt checkpoint: unfinished partition carries a subtotal at " + where);
    seen[x3 - 2] = 1;
    st.subtotal[x3 - 2] = sub;
    st.done[x3 - 2] = static_cast<char>(flag);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i])
      throw CheckpointError("corrupt checkpoint: missing partition x3=" + std::to_string(i + 2) + " in " +
                            path.string());
  return st;
}

} // namespace detail

inline CheckpointOutcome checkpointed_count(const CountJob& job, const CheckpointOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  CheckpointOutcome out;
  out.result.m = job.m;
  out.result.q = job.q;
  out.result.safe = detail::validate_job(job);
  const Schedule sched = build_schedule(job.m);
  const std::size_t n = job.q - 2;
  out.partitions_total = n;

  detail::CheckpointState st;
  if (std::filesystem::exists(opt.path)) {
    st = detail::read_checkpoint(opt.path, job.m, job.q, sched.hash);
  } else {
    st.m = job.m;
    st.q = job.q;
    st.hash = sched.hash;
    st.subtotal.assign(n, 0);
    st.done.assign(n, 0);
    detail::write_checkpoint(opt.path, st);
  }

  std::vector<std::uint32_t> todo;
  for (std::size_t i = 0; i < n; ++i) {
    if (st.done[i])
      ++out.partitions_resumed;
    else
      todo.push_back(static_cast<std::uint32_t>(i + 2));
  }
  if (opt.stop_after && todo.size() > *opt.stop_after)
    todo.resize(*opt.stop_after);

  std::mutex mu;
  std::uint64_t nodes = 0;
  detail::parallel_over(todo, job.threads, [&](std::size_t i) {
    const auto r = detail::count_one_partition(sched, job.q, todo[i]);
    std::lock_guard lock(mu);
    st.subtotal[todo[i] - 2] = r.count;
    st.done[todo[i] - 2] = 1;
    nodes += r.nodes;
    detail::write_checkpoint(opt.path, st);
  });

  for (std::size_t i = 0; i < n; ++i)
    if (st.done[i]) {
      ++out.partitions_done;
      out.result.count += st.subtotal[i];
    }
  out.complete = out.partitions_done == n;
  out.result.nodes_visited = nodes;
  out.result.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

} // namespace midhyp

#endif // MIDHYP_FFCOUNT_HPP
