#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "midhyp/ffcount.hpp"

using namespace midhyp;

namespace {

CountJob job(int m, std::uint64_t q, int threads = 1, bool unsafe = false) {
  CountJob j;
  j.m = m;
  j.q = q;
  j.threads = threads;
  j.allow_unsafe = unsafe;
  return j;
}

std::uint64_t fast(int m, std::uint64_t q, int threads = 1) { return count_points(job(m, q, threads, true)).count; }

class TempDir {
public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("midhyp_ff_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::trunc);
  out << s;
}

} // namespace

TEST(FfCount, PublishedSmallCounts) {
  EXPECT_EQ(count_points(job(4, 5)).count, 0u);
  EXPECT_EQ(count_points(job(4, 7)).count, 8u);
  EXPECT_EQ(count_points(job(5, 11)).count, 24u);
}

TEST(FfCount, FastMatchesNaiveSmall) {
  for (int m = 3; m <= 5; ++m)
    for (std::uint64_t q = 2; q <= 17; ++q)
      if (is_prime(q)) {
        EXPECT_EQ(fast(m, q), count_points_naive(m, q)) << "m=" << m << " q=" << q;
      }
}

TEST(FfCount, FastMatchesNaiveAcrossBitmapWidths) {
  for (std::uint64_t q : {61ull, 67ull, 127ull, 131ull, 251ull, 257ull, 509ull, 521ull, 1021ull})
    EXPECT_EQ(fast(4, q), count_points_naive(4, q)) << q;
  for (std::uint64_t q : {67ull, 131ull, 257ull})
    EXPECT_EQ(fast(5, q), count_points_naive(5, q)) << q;
  for (std::uint64_t q : {11ull, 13ull, 29ull})
    EXPECT_EQ(fast(6, q), count_points_naive(6, q)) << q;
  EXPECT_EQ(fast(7, 11), count_points_naive(7, 11));
}

TEST(FfCount, MatchesFactoredPolynomialForM5) {
  // chi(A_5, q) / (q(q-1)) = (q-7)(q-8)(q-9) for admissible q.
  for (std::uint64_t q = 11; q < 200; ++q)
    if (is_prime(q)) {
      EXPECT_EQ(count_points(job(5, q)).count, (q - 7) * (q - 8) * (q - 9)) << q;
    }
}

TEST(FfCount, ThreadCountIndependence) {
  const auto one = count_points(job(5, 13, 1));
  const auto two = count_points(job(5, 13, 2));
  const auto eight = count_points(job(5, 13, 8));
  EXPECT_EQ(one.count, two.count);
  EXPECT_EQ(one.count, eight.count);
  EXPECT_EQ(one.nodes_visited, eight.nodes_visited);
  EXPECT_EQ(count_points(job(6, 29, 1)).count, count_points(job(6, 29, 3)).count);
}

TEST(FfCount, Validation) {
  EXPECT_THROW(count_points(job(5, 7)), Refused);
  EXPECT_THROW(count_points(job(5, 8)), InvalidParameter);
  EXPECT_THROW(count_points(job(5, 15, 1, true)), InvalidParameter);
  EXPECT_THROW(count_points(job(2, 11)), InvalidParameter);
  EXPECT_THROW(count_points(job(5, 1031)), InvalidParameter);
  const auto r = count_points(job(5, 7, 1, true));
  EXPECT_FALSE(r.safe);
  EXPECT_TRUE(count_points(job(5, 11)).safe);
  EXPECT_THROW(count_points_naive(8, 223), Refused);
}

TEST(FfCount, ScheduleStableAndComplete) {
  for (int m = 3; m <= 8; ++m) {
    const Schedule a = build_schedule(m), b = build_schedule(m);
    EXPECT_EQ(a.hash, b.hash);
    std::size_t total = 0;
    for (const auto& d : a.by_depth)
      total += d.size();
    EXPECT_EQ(total, expected_size(m, Variant::Mid)) << m;
    EXPECT_EQ(a.by_depth[0].size(), 0u);
  }
  EXPECT_NE(build_schedule(5).hash, build_schedule(6).hash);
}

TEST(FfCount, NodeEstimateIsAnUpperBound) {
  for (int m = 4; m <= 6; ++m) {
    const auto r = count_points(job(m, 31));
    EXPECT_LE(static_cast<double>(r.nodes_visited), estimate_nodes(m, 31)) << m;
  }
  EXPECT_GT(estimate_nodes(8, 223), 1e10);
  EXPECT_LT(estimate_nodes(6, 29), 1e10);
}

TEST(Checkpoint, InterruptAndResumeMatchesFullCount) {
  TempDir dir;
  const auto path = dir.path() / "m6_q29.ckpt";
  const auto full = count_points(job(6, 29));
  CheckpointOptions opt{path, 7};
  const auto first = checkpointed_count(job(6, 29), opt);
  EXPECT_FALSE(first.complete);
  EXPECT_EQ(first.partitions_done, 7u);
  EXPECT_EQ(first.partitions_total, 27u);
  const auto second = checkpointed_count(job(6, 29, 2), opt);
  EXPECT_FALSE(second.complete);
  EXPECT_EQ(second.partitions_resumed, 7u);
  EXPECT_EQ(second.partitions_done, 14u);
  opt.stop_after.reset();
  const auto done = checkpointed_count(job(6, 29, 3), opt);
  EXPECT_TRUE(done.complete);
  EXPECT_EQ(done.partitions_resumed, 14u);
  EXPECT_EQ(done.result.count, full.count);
  const auto again = checkpointed_count(job(6, 29), opt);
  EXPECT_TRUE(again.complete);
  EXPECT_EQ(again.partitions_resumed, 27u);
  EXPECT_EQ(again.result.count, full.count);
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST(Checkpoint, FileFormat) {
  TempDir dir;
  const auto path = dir.path() / "c.ckpt";
  checkpointed_count(job(5, 11), {path, 2});
  const std::string text = slurp(path);
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "#midhyp-checkpoint\tv1\tm=5\tq=11\tschedule=" + detail::hex64(build_schedule(5).hash));
  int lines = 0, done = 0;
  for (std::string l; std::getline(in, l); ++lines)
    done += l.back() == '1';
  EXPECT_EQ(lines, 9);
  EXPECT_EQ(done, 2);
}

TEST(Checkpoint, RejectsCorruptOrForeignFiles) {
  TempDir dir;
  const auto path = dir.path() / "c.ckpt";
  checkpointed_count(job(5, 13), {path, 3});
  const std::string good = slurp(path);
  const auto nl = good.find('\n');
  const std::string header = good.substr(0, nl + 1);
  const std::string body = good.substr(nl + 1);
  auto expect_reject = [&](const std::string& content, const char* what) {
    spit(path, content);
    EXPECT_THROW(checkpointed_count(job(5, 13), {path, std::nullopt}), CheckpointError) << what;
  };
  expect_reject("", "empty");
  expect_reject("garbage\n" + body, "bad header");
  spit(path, good);
  EXPECT_THROW(checkpointed_count(job(5, 17), {path, std::nullopt}), CheckpointError);
  std::string other_m = header;
  other_m.replace(other_m.find("m=5"), 3, "m=6");
  expect_reject(other_m + body, "wrong m");
  std::string bad_hash = header;
  bad_hash[bad_hash.size() - 2] = bad_hash[bad_hash.size() - 2] == '0' ? '1' : '0';
  expect_reject(bad_hash + body, "schedule mismatch");
  expect_reject(header + body.substr(0, body.rfind('\n', body.size() - 2) + 1), "missing partition");
  expect_reject(good + "2\t0\t0\n", "duplicate partition");
  expect_reject(header + "2\t5\t0\n" + body.substr(body.find('\n') + 1), "subtotal on unfinished");
  expect_reject(header + "2\t0\t2\n" + body.substr(body.find('\n') + 1), "bad flag");
  expect_reject(header + "2\tx\t1\n" + body.substr(body.find('\n') + 1), "non-numeric");
  expect_reject(header + "2\t0\n" + body.substr(body.find('\n') + 1), "field count");
  expect_reject(header + "99\t0\t0\n" + body.substr(body.find('\n') + 1), "x3 out of range");
}
