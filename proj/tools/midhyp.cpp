#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "midhyp/midhyp.hpp"

using namespace midhyp;

namespace {

enum class Format { Human, Json, Tsv };

struct Output {
  RunRecord rec;
  std::vector<std::string> lines;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool ok = true;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

void add_checks(Output& out, const std::vector<Check>& checks) {
  Json arr = Json::array();
  out.header = {"check", "result", "detail"};
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    out.rows.push_back({c.name, c.pass ? "PASS" : "FAIL", c.detail});
    out.ok = out.ok && c.pass;
  }
  out.rec.results["checks"] = arr;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::fixed << v;
  return os.str();
}

void emit(const Output& out, Format fmt) {
  if (fmt == Format::Json) {
    std::cout << out.rec.dump();
    return;
  }
  if (fmt == Format::Tsv) {
    if (!out.header.empty()) {
      for (std::size_t i = 0; i < out.header.size(); ++i)
        std::cout << (i ? "\t" : "") << out.header[i];
      std::cout << "\n";
    }
    for (const auto& r : out.rows) {
      for (std::size_t i = 0; i < r.size(); ++i)
        std::cout << (i ? "\t" : "") << r[i];
      std::cout << "\n";
    }
    return;
  }
  for (const auto& l : out.lines)
    std::cout << l << "\n";
  if (out.rows.empty())
    return;
  std::vector<std::size_t> w(out.header.size(), 0);
  for (std::size_t i = 0; i < out.header.size(); ++i)
    w[i] = out.header[i].size();
  for (const auto& r : out.rows)
    for (std::size_t i = 0; i < r.size() && i < w.size(); ++i)
      w[i] = std::max(w[i], r[i].size());
  auto print_row = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i)
      std::cout << (i ? "  " : "") << std::left << std::setw(static_cast<int>(w[i])) << r[i];
    std::cout << "\n";
  };
  std::cout << "\n";
  print_row(out.header);
  for (const auto& r : out.rows)
    print_row(r);
}

std::vector<std::uint64_t> parse_u64_list(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size())
      throw InvalidParameter("not a positive integer: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty())
    throw InvalidParameter("empty prime list");
  return out;
}

// Accepts plain integers and scientific notation such as 1e8.
std::uint64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || v < 1 || v > 1e15 || std::floor(v) != v)
    throw InvalidParameter("not a positive integer count: '" + s + "'");
  return static_cast<std::uint64_t>(v);
}

std::filesystem::path resolve_checkpoint(const std::string& arg, int m, std::uint64_t q) {
  const char* env = std::getenv("MIDHYP_CHECKPOINT_DIR");
  const std::filesystem::path dir = env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
  if (arg == "auto")
    return dir / ("midhyp_m" + std::to_string(m) + "_q" + std::to_string(q) + ".ckpt");
  std::filesystem::path p(arg);
  if (p.is_relative() && env && *env)
    return dir / p;
  return p;
}

Json counts_json(const std::vector<CountSample>& counts) {
  Json a = Json::array();
  for (const auto& s : counts)
    a.push_back({{"q", s.q}, {"count", s.count}});
  return a;
}

// ---------------------------------------------------------------------------

struct CharpolyArgs {
  int m = 0;
  std::string primes;
  bool inject = false;
  bool allow_long = false;
  std::optional<std::uint64_t> unsafe_threshold;
};

constexpr double long_run_nodes = 1e10;

std::vector<CountSample> count_at_primes(int m, const std::vector<std::uint64_t>& primes, int threads,
                                         bool allow_unsafe) {
  std::vector<CountSample> counts;
  for (auto q : primes) {
    CountJob job;
    job.m = m;
    job.q = q;
    job.threads = threads;
    job.allow_unsafe = allow_unsafe;
    counts.push_back({q, count_points(job).count});
  }
  return counts;
}

Output cmd_charpoly(const CharpolyArgs& a, int threads) {
  if (a.m < 3 || a.m > 8)
    throw InvalidParameter("charpoly supports 3 <= m <= 8");
  Output out;
  out.rec.command = "charpoly";
  out.rec.m = a.m;
  out.rec.threads = threads;
  CharPoly cp;
  if (a.inject) {
    cp = golden::charpoly(a.m);
    out.rec.results["source"] = "reference";
    out.lines.push_back("source: published characteristic polynomial (no counting)");
  } else {
    std::vector<std::uint64_t> primes;
    bool safe = true;
    if (!a.primes.empty()) {
      primes = parse_u64_list(a.primes);
      for (auto q : primes) {
        if (!is_prime(q))
          throw InvalidParameter(std::to_string(q) + " is not prime");
        if (!prime_is_safe(a.m, q)) {
          if (!a.unsafe_threshold)
            throw Refused("prime " + std::to_string(q) + " is not above the admissibility threshold " +
                          std::to_string(prime_threshold(a.m)) + "; pass --unsafe-threshold to force");
          safe = false;
        }
      }
    } else {
      const PrimeSelection sel = select_primes(a.m, a.m - 2, a.unsafe_threshold);
      primes = sel.primes;
      safe = sel.safe;
    }
    double nodes = 0;
    for (auto q : primes)
      nodes += estimate_nodes(a.m, q);
    out.rec.results["estimated_nodes"] = nodes;
    if (nodes > long_run_nodes && !a.allow_long)
      throw Refused("estimated " + fixed(nodes, 0) + " search nodes exceeds 1e10; pass --allow-long or use --inject-paper");
    const auto counts = count_at_primes(a.m, primes, threads, !safe);
    cp = interpolate_charpoly(a.m, counts);
    out.rec.safe = safe;
    out.rec.results["source"] = "counted";
    out.rec.results["primes"] = primes;
    out.rec.results["counts"] = counts_json(counts);
    std::string ps;
    for (const auto& s : counts)
      ps += (ps.empty() ? "" : ", ") + std::to_string(s.count) + " at q=" + std::to_string(s.q);
    out.lines.push_back("|M1(m,q)|: " + ps + (safe ? "" : "  [UNSAFE primes]"));
  }
  put_charpoly(out.rec, cp);
  const RankingCount rc = chambers_and_r(cp);
  out.lines.push_back("m = " + std::to_string(a.m));
  out.lines.push_back("chi(t) = " + format_expanded(cp.chi));
  out.lines.push_back("       = " + format_factored(factor_over_Z(cp)));
  out.lines.push_back("chambers = " + rc.chambers.str());
  out.lines.push_back("r(m) = " + rc.r.str());

  std::vector<Check> checks;
  const auto failures = charpoly_invariant_failures(cp);
  std::string fs;
  for (const auto& f : failures)
    fs += (fs.empty() ? "" : "; ") + f;
  checks.push_back({"invariants", failures.empty(), fs});
  if (out.rec.safe) {
    if (const auto row = golden::row(a.m)) {
      const bool match = cp.chi == golden::charpoly(a.m).chi && rc.chambers == row->chambers;
      checks.push_back({"reference_table", match, match ? "" : "differs from the published row"});
      if (rc.r != row->r)
        out.lines.push_back("note: published r(m) = " + std::to_string(row->r) + " disagrees with chambers/m! = " +
                            rc.r.str());
    }
  }
  add_checks(out, checks);
  if (!out.ok)
    for (const auto& c : checks)
      if (!c.pass)
        out.lines.push_back("FAIL " + c.name + ": " + c.detail);
  out.header = {"k", "mu_k"};
  out.rows.clear();
  for (int k = 0; k <= cp.m; ++k)
    out.rows.push_back({std::to_string(k), cp.mu(k).str()});
  return out;
}

struct CountArgs {
  int m = 0;
  std::uint64_t q = 0;
  std::string checkpoint;
  std::optional<std::size_t> stop_after;
  bool unsafe = false;
};

Output cmd_count(const CountArgs& a, int threads) {
  Output out;
  out.rec.command = "count";
  out.rec.m = a.m;
  out.rec.q = a.q;
  out.rec.threads = threads;
  CountJob job;
  job.m = a.m;
  job.q = a.q;
  job.threads = threads;
  job.allow_unsafe = a.unsafe;
  if (a.checkpoint.empty()) {
    const CountResult r = count_points(job);
    out.rec.safe = r.safe;
    out.rec.results["count"] = r.count;
    out.rec.results["nodes_visited"] = r.nodes_visited;
    out.lines.push_back("|M1(" + std::to_string(a.m) + "," + std::to_string(a.q) + ")| = " + std::to_string(r.count) +
                        (r.safe ? "" : "  [UNSAFE prime]"));
    out.header = {"m", "q", "count"};
    out.rows.push_back({std::to_string(a.m), std::to_string(a.q), std::to_string(r.count)});
    return out;
  }
  CheckpointOptions opt;
  opt.path = resolve_checkpoint(a.checkpoint, a.m, a.q);
  opt.stop_after = a.stop_after;
  const CheckpointOutcome o = checkpointed_count(job, opt);
  out.rec.safe = o.result.safe;
  out.rec.results["checkpoint"] = opt.path.string();
  out.rec.results["complete"] = o.complete;
  out.rec.results["partitions_total"] = o.partitions_total;
  out.rec.results["partitions_done"] = o.partitions_done;
  out.rec.results["partitions_resumed"] = o.partitions_resumed;
  out.lines.push_back("checkpoint: " + opt.path.string());
  out.lines.push_back("partitions: " + std::to_string(o.partitions_done) + "/" + std::to_string(o.partitions_total) +
                      " (" + std::to_string(o.partitions_resumed) + " resumed)");
  out.header = {"m", "q", "count", "complete"};
  if (o.complete) {
    out.rec.results["count"] = o.result.count;
    out.lines.push_back("|M1(" + std::to_string(a.m) + "," + std::to_string(a.q) + ")| = " +
                        std::to_string(o.result.count));
    out.rows.push_back({std::to_string(a.m), std::to_string(a.q), std::to_string(o.result.count), "1"});
  } else {
    out.lines.push_back("incomplete; rerun the same command to resume");
    out.rows.push_back({std::to_string(a.m), std::to_string(a.q), "", "0"});
  }
  return out;
}

ObjectConfig<Rational> parse_points(const std::string& csv) {
  ObjectConfig<Rational> x;
  x.points = parse_rational_list(csv);
  if (x.m() < 2)
    throw InvalidParameter("need at least two points");
  return x;
}

Output cmd_rank(const std::string& points, const std::string& ideal) {
  const auto x = parse_points(points);
  const Rational y = parse_rational(ideal);
  const Ranking r = rank_at(x, y);
  Output out;
  out.rec.command = "rank";
  out.rec.m = x.m();
  out.rec.threads = 1;
  out.rec.results["ranking"] = r.str();
  out.rec.results["order"] = r.order;
  out.lines.push_back("ranking at y = " + y.str() + ": " + r.str());
  out.header = {"ranking"};
  out.rows.push_back({r.str()});
  return out;
}

Output cmd_pattern(const std::string& points) {
  const auto x = parse_points(points);
  check_general_position(x);
  const auto norm = normalize_config(x);
  const RankingPattern pat = ranking_pattern(norm.ascending, true);
  const MidpointOrder mo = midpoint_order(norm.ascending);
  Output out;
  out.rec.command = "pattern";
  out.rec.m = x.m();
  out.rec.threads = 1;
  Json rankings = Json::array();
  out.header = {"cell", "ranking"};
  for (std::size_t k = 0; k < pat.rankings.size(); ++k) {
    const Ranking r = apply_sigma(norm.sigma, pat.rankings[k]);
    rankings.push_back(r.str());
    out.rows.push_back({std::to_string(k), r.str()});
  }
  Json mids = Json::array();
  std::string ms;
  for (const auto& [i, j] : mo.pairs) {
    const int a = std::min(norm.sigma[i - 1], norm.sigma[j - 1]);
    const int b = std::max(norm.sigma[i - 1], norm.sigma[j - 1]);
    const std::string s = "x" + std::to_string(a) + std::to_string(b);
    mids.push_back(s);
    ms += (ms.empty() ? "" : " < ") + s;
  }
  out.rec.results["rankings"] = rankings;
  out.rec.results["midpoint_order"] = mids;
  out.rec.results["size"] = pat.rankings.size();
  out.lines.push_back("midpoints: " + ms);
  out.lines.push_back(std::to_string(pat.rankings.size()) + " admissible rankings");
  const std::size_t expect = binomial(x.m(), 2) + 1;
  if (pat.rankings.size() != expect) {
    out.ok = false;
    out.lines.push_back("FAIL pattern size differs from C(m,2)+1 = " + std::to_string(expect));
  }
  return out;
}

struct VerifyArgs {
  int m = 0;
  std::uint64_t seed = 1;
  std::uint64_t max_samples = 1ull << 26;
};

Output cmd_verify(const VerifyArgs& a, int threads) {
  if (a.m < 3 || a.m > 7)
    throw InvalidParameter("verify supports 3 <= m <= 7");
  Output out;
  out.rec.command = "verify";
  out.rec.m = a.m;
  out.rec.seed = a.seed;
  out.rec.threads = threads;
  std::vector<Check> checks;

  const PrimeSelection sel = select_primes(a.m, a.m - 2);
  const auto counts = count_at_primes(a.m, sel.primes, threads, false);
  const CharPoly cp = interpolate_charpoly(a.m, counts);
  put_charpoly(out.rec, cp);
  out.rec.results["primes"] = sel.primes;
  out.rec.results["counts"] = counts_json(counts);
  const RankingCount rc = chambers_and_r(cp);
  const auto row = golden::row(a.m);
  const BigInt r_ref = row->r;

  const auto failures = charpoly_invariant_failures(cp);
  checks.push_back({"charpoly_invariants", failures.empty(), failures.empty() ? "" : failures.front()});
  checks.push_back({"reference_table", cp.chi == golden::charpoly(a.m).chi && rc.r == r_ref,
                    "r = " + rc.r.str() + ", published " + r_ref.str()});

  if (a.m <= 5) {
    const CharPoly lat = lattice_charpoly(a.m);
    checks.push_back({"lattice_charpoly", lat.chi == cp.chi, "lattice chi = " + format_expanded(lat.chi)});
  }
  if (a.m <= 6) {
    const PatternSample s = sample_until_saturated(a.m, a.seed, a.max_samples, threads);
    checks.push_back({"sampling_saturation", s.saturated && BigInt(s.orders.size()) == rc.r,
                      std::to_string(s.orders.size()) + " orders in " + std::to_string(s.draws) + " draws" +
                          (s.saturated ? "" : " (not saturated)")});
    out.rec.results["sampled_orders"] = s.orders.size();
  }
  const std::uint64_t thrall = thrall_count(a.m);
  const bool thrall_ok = a.m <= 4 ? BigInt(thrall) == rc.r : BigInt(thrall) >= rc.r;
  checks.push_back({"thrall_bound", thrall_ok, "thrall = " + std::to_string(thrall)});
  out.rec.results["thrall"] = thrall;
  if (a.m <= 5) {
    bool agree = true;
    std::string detail;
    for (std::uint64_t q = 3; q <= 17; ++q) {
      if (!is_prime(q))
        continue;
      CountJob job;
      job.m = a.m;
      job.q = q;
      job.threads = threads;
      job.allow_unsafe = true;
      const auto fast = count_points(job).count;
      const auto slow = count_points_naive(a.m, q);
      if (fast != slow) {
        agree = false;
        detail += "q=" + std::to_string(q) + ": " + std::to_string(fast) + " vs " + std::to_string(slow) + "; ";
      }
    }
    checks.push_back({"naive_vs_fast", agree, agree ? "primes 3..17" : detail});
  }
  {
    const BigInt an = a_sequence(a.m - 2);
    checks.push_back({"a_sequence", an == rc.r, "a_" + std::to_string(a.m - 2) + " = " + an.str()});
  }
  out.lines.push_back("m = " + std::to_string(a.m) + ", chi = " + format_factored(factor_over_Z(cp)));
  out.lines.push_back("r(m) = " + rc.r.str() + " (published " + r_ref.str() + ")");
  add_checks(out, checks);
  return out;
}

struct Prob5Args {
  std::string method = "schlafli";
  std::string samples = "1e8";
  std::uint64_t seed = 42;
  std::string generator = "gaussian";
};

Output cmd_prob5(const Prob5Args& a, int threads) {
  const bool do_s = a.method == "schlafli" || a.method == "both";
  const bool do_mc = a.method == "mc" || a.method == "both";
  if (!do_s && !do_mc)
    throw InvalidParameter("method must be schlafli, mc or both");
  using namespace spherical;
  const SphereGenerator gen = a.generator == "marsaglia" ? SphereGenerator::Marsaglia : SphereGenerator::Gaussian;
  if (a.generator != "marsaglia" && a.generator != "gaussian")
    throw InvalidParameter("generator must be gaussian or marsaglia");
  Output out;
  out.rec.command = "prob5";
  out.rec.m = 5;
  out.rec.threads = threads;
  std::vector<Check> checks;

  std::optional<ProbabilityTable> table;
  if (do_s)
    table = pattern_probabilities_m5();

  // Seven tetrahedra, then chambers I..VI and I'..VI'.
  std::vector<SphericalCone> cones;
  for (const auto& t : tetrahedra())
    cones.push_back(tetra_cone(t.name));
  for (const auto& l : chamber_labels())
    cones.push_back(chamber_cone(l));
  for (const auto& l : chamber_labels())
    cones.push_back(primed_cone(chamber_cone(l)));
  std::vector<MonteCarloResult> mc;
  std::uint64_t samples = 0;
  if (do_mc) {
    samples = parse_count(a.samples);
    out.rec.seed = a.seed;
    out.rec.results["samples"] = samples;
    out.rec.results["generator"] = a.generator;
    mc = solid_angle_mc_multi(cones, samples, a.seed, threads, gen);
  }

  Json volumes = Json::array();
  out.header = {"region", "chamber", "volume_schlafli", "volume_mc", "mc_se", "probability", "reference"};
  for (std::size_t i = 0; i < tetrahedra().size(); ++i) {
    const auto& t = tetrahedra()[i];
    const double ref = golden::tetra_volumes[i].volume;
    Json v = {{"tetrahedron", t.name}, {"chamber", t.chamber}, {"reference", ref}};
    std::vector<std::string> row = {t.name, t.chamber, "", "", "", "", fixed(ref, 8)};
    if (do_s) {
      const double vs = table->tetrahedra[i].volume;
      v["schlafli"] = vs;
      row[2] = fixed(vs, 8);
      const double tol = t.name == "FBGH" ? 5e-5 : 1e-4;
      checks.push_back({"volume_" + t.name, std::abs(vs - ref) < tol, fixed(vs - ref, 9)});
    }
    if (do_mc) {
      v["mc"] = mc[i].volume();
      v["mc_se"] = mc[i].volume_std_error();
      row[3] = fixed(mc[i].volume(), 8);
      row[4] = fixed(mc[i].volume_std_error(), 8);
      if (do_s) {
        const double diff = std::abs(mc[i].volume() - table->tetrahedra[i].volume);
        checks.push_back({"mc_vs_schlafli_" + t.name, diff < 3 * mc[i].volume_std_error(),
                          fixed(diff / mc[i].volume_std_error(), 2) + " s.e."});
      }
    }
    volumes.push_back(v);
    out.rows.push_back(row);
  }
  Json probs = Json::array();
  const std::size_t nt = tetrahedra().size();
  const double vol_s = 2 * volume_T;
  for (std::size_t k = 0; k < 12; ++k) {
    const std::string label = k < 6 ? chamber_labels()[k] : chamber_labels()[k - 6] + "'";
    const double ref = golden::probabilities[k % 6].probability;
    Json p = {{"chamber", label}, {"reference", ref}};
    std::vector<std::string> row = {"chamber", label, "", "", "", "", fixed(ref, 7)};
    if (do_s) {
      p["probability"] = table->probabilities[k];
      p["volume"] = table->chamber_volumes[k];
      row[2] = fixed(table->chamber_volumes[k], 8);
      row[5] = fixed(table->probabilities[k], 7);
      if (k < 6)
        checks.push_back({"probability_" + label, std::abs(table->probabilities[k] - ref) < 1e-3,
                          fixed(table->probabilities[k] - ref, 8)});
    }
    if (do_mc) {
      const auto& r = mc[nt + k];
      p["mc_volume"] = r.volume();
      p["mc_se"] = r.volume_std_error();
      p["mc_probability"] = r.volume() / vol_s;
      row[3] = fixed(r.volume(), 8);
      row[4] = fixed(r.volume_std_error(), 8);
      if (!do_s)
        row[5] = fixed(r.volume() / vol_s, 7);
      if (k >= 6) {
        const auto& base = mc[nt + k - 6];
        const double se = std::hypot(base.std_error, r.std_error);
        checks.push_back({"symmetry_" + label, std::abs(base.fraction - r.fraction) < 3 * se,
                          fixed(std::abs(base.fraction - r.fraction) / se, 2) + " s.e."});
      }
    }
    probs.push_back(p);
    out.rows.push_back(row);
  }
  out.rec.results["volumes"] = volumes;
  out.rec.results["probabilities"] = probs;
  if (do_s) {
    double sum = 0;
    for (const auto& t : table->tetrahedra)
      sum += t.volume;
    out.rec.results["volume_sum"] = sum;
    out.rec.results["probability_sum"] = table->probability_sum;
    checks.push_back({"volume_sum", std::abs(sum - golden::volume_T) < 1e-4, fixed(sum, 8)});
    checks.push_back({"probability_sum", std::abs(table->probability_sum - 1) < 1e-3, fixed(table->probability_sum, 8)});
  }
  out.lines.push_back("Vol(T) = 2 pi^2 / 240 = " + fixed(volume_T, 7));
  if (do_mc)
    out.lines.push_back("Monte Carlo: " + std::to_string(samples) + " shared samples, seed " + std::to_string(a.seed) +
                        ", " + a.generator);
  std::vector<std::string> fails;
  for (const auto& c : checks)
    if (!c.pass)
      fails.push_back("FAIL " + c.name + ": " + c.detail);
  Json arr = Json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    out.ok = out.ok && c.pass;
  }
  out.rec.results["checks"] = arr;
  out.lines.push_back(std::to_string(checks.size() - fails.size()) + "/" + std::to_string(checks.size()) +
                      " checks passed");
  out.lines.insert(out.lines.end(), fails.begin(), fails.end());
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ranking patterns of the unfolding model via the mid-hyperplane arrangement"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(version));
  bool json = false, tsv = false, no_timing = false;
  int threads = detail::default_threads();
  app.add_flag("--json", json, "machine-readable JSON output");
  app.add_flag("--tsv", tsv, "tab-separated output");
  app.add_flag("--no-timing", no_timing, "report elapsed_s as 0 for byte-identical output");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));

  CharpolyArgs cpa;
  auto* sc = app.add_subcommand("charpoly", "characteristic polynomial of A_m by finite-field counting");
  sc->add_option("--m", cpa.m, "number of objects")->required();
  sc->add_option("--primes", cpa.primes, "comma-separated primes (default: the first m-2 admissible)");
  sc->add_flag("--inject-paper", cpa.inject, "use the published polynomial instead of counting");
  sc->add_flag("--allow-long", cpa.allow_long, "permit jobs above 1e10 estimated search nodes");
  sc->add_option("--unsafe-threshold", cpa.unsafe_threshold, "select primes above this bound instead");
  sc->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));

  CountArgs ca;
  auto* cc = app.add_subcommand("count", "count |M1(m,q)|");
  cc->add_option("--m", ca.m, "number of objects")->required();
  cc->add_option("--q", ca.q, "prime")->required();
  cc->add_option("--checkpoint", ca.checkpoint, "checkpoint file, or 'auto'");
  cc->add_option("--stop-after", ca.stop_after, "stop after this many partitions (checkpoint mode)");
  cc->add_flag("--unsafe", ca.unsafe, "allow primes at or below the admissibility threshold");
  cc->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));

  std::string points, ideal;
  auto* rc = app.add_subcommand("rank", "ranking of the objects from one ideal point");
  rc->add_option("--points", points, "object positions, e.g. 0,1,3 or 1/2,2")->required();
  rc->add_option("--ideal", ideal, "ideal point")->required();

  auto* pc = app.add_subcommand("pattern", "ranking pattern of a configuration");
  pc->add_option("--points", points, "object positions")->required();

  VerifyArgs va;
  auto* vc = app.add_subcommand("verify", "cross-check the pipeline against independent oracles");
  vc->add_option("--m", va.m, "number of objects")->required();
  vc->add_option("--seed", va.seed, "sampling seed");
  vc->add_option("--max-samples", va.max_samples, "sampling budget");
  vc->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));

  Prob5Args pa;
  auto* p5 = app.add_subcommand("prob5", "ranking-pattern probabilities for five objects");
  p5->add_option("--method", pa.method, "schlafli, mc or both")->check(CLI::IsMember({"schlafli", "mc", "both"}));
  p5->add_option("--samples", pa.samples, "Monte Carlo samples (e.g. 1e8)");
  p5->add_option("--seed", pa.seed, "Monte Carlo seed");
  p5->add_option("--generator", pa.generator, "gaussian or marsaglia")
      ->check(CLI::IsMember({"gaussian", "marsaglia"}));
  p5->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 1024));

  CLI11_PARSE(app, argc, argv);
  const Format fmt = json ? Format::Json : (tsv ? Format::Tsv : Format::Human);

  const auto start = std::chrono::steady_clock::now();
  try {
    Output out;
    if (*sc)
      out = cmd_charpoly(cpa, threads);
    else if (*cc)
      out = cmd_count(ca, threads);
    else if (*rc)
      out = cmd_rank(points, ideal);
    else if (*pc)
      out = cmd_pattern(points);
    else if (*vc)
      out = cmd_verify(va, threads);
    else
      out = cmd_prob5(pa, threads);
    out.rec.elapsed_s =
        no_timing ? 0.0 : std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(out, fmt);
    return out.ok ? 0 : 1;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Refused& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
