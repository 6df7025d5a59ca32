#ifndef MIDHYP_RECORD_HPP
#define MIDHYP_RECORD_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "charpoly.hpp"
#include "common.hpp"

namespace midhyp {

using Json = nlohmann::json; // std::map-backed objects: keys serialize sorted

// Integers that fit in int64 are numbers, larger ones are decimal strings.
inline Json big_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

struct RunRecord {
  std::string command;
  std::optional<int> m;
  std::optional<std::uint64_t> q;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  double elapsed_s = 0;
  bool safe = true;
  // Command-specific results keyed by schema name (coeffs, roots, chambers, ...).
  Json results = Json::object();

  Json to_json() const {
    Json j = results;
    j["command"] = command;
    if (m)
      j["m"] = *m;
    if (q)
      j["q"] = *q;
    if (seed)
      j["seed"] = *seed;
    j["threads"] = threads;
    j["elapsed_s"] = elapsed_s;
    j["safe"] = safe;
    j["version"] = version;
    return j;
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }
};

inline Json coeffs_json(const IntPoly& p) {
  Json a = Json::array();
  for (const auto& c : p.c)
    a.push_back(big_json(c));
  return a;
}

inline void put_charpoly(RunRecord& rec, const CharPoly& cp) {
  rec.results["coeffs"] = coeffs_json(cp.chi);
  const FactorReport f = factor_over_Z(cp);
  Json roots = Json::array();
  for (const auto& r : f.roots)
    roots.push_back(big_json(r));
  rec.results["roots"] = roots;
  if (!f.fully_linear())
    rec.results["irreducible_factor"] = coeffs_json(f.remainder);
  rec.results["factored"] = format_factored(f);
  const RankingCount rc = chambers_and_r(cp);
  rec.results["chambers"] = big_json(rc.chambers);
  rec.results["r"] = big_json(rc.r);
}

} // namespace midhyp

#endif // MIDHYP_RECORD_HPP
