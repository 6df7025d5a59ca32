#ifndef MIDHYP_GOLDEN_HPP
#define MIDHYP_GOLDEN_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "charpoly.hpp"

// Published reference values the verify and prob5 commands diff against.
namespace midhyp::golden {

inline constexpr int data_version = 1;

struct CharPolyRow {
  int m;
  std::vector<std::int64_t> roots;     // integer roots including 0 and 1
  std::vector<std::int64_t> quadratic; // irreducible monic cofactor, empty if none
  std::uint64_t chambers;
  std::uint64_t r; // as published
};

inline const std::vector<CharPolyRow>& charpoly_table() {
  static const std::vector<CharPolyRow> rows = {
      {3, {0, 1, 2}, {}, 6, 1},
      {4, {0, 1, 3, 5}, {}, 48, 2},
      {5, {0, 1, 7, 8, 9}, {}, 1440, 12},
      {6, {0, 1, 13, 14, 15, 17}, {}, 120960, 168},
      {7, {0, 1, 23, 24, 25, 26, 27}, {}, 23587200, 4680},
      {8, {0, 1, 35, 37, 39, 41}, {1, -85, 1926}, 9248117760ull, 229386},
  };
  return rows;
}

inline std::optional<CharPolyRow> row(int m) {
  for (const auto& r : charpoly_table())
    if (r.m == m)
      return r;
  return std::nullopt;
}

inline CharPoly charpoly(int m) {
  const auto r = row(m);
  if (!r)
    throw InvalidParameter("no reference characteristic polynomial for m = " + std::to_string(m));
  std::vector<IntPoly> factors;
  for (auto root : r->roots)
    factors.push_back(IntPoly::linear(BigInt(root)));
  if (!r->quadratic.empty()) {
    IntPoly q;
    for (auto c : r->quadratic)
      q.c.emplace_back(c);
    factors.push_back(q);
  }
  return charpoly_from_factors(m, factors);
}

// The published r(8) is not |Ch(A_8)|/8! = 229368; the digits 6 and 8 are swapped.
inline constexpr std::uint64_t r8_published = 229386;
inline constexpr std::uint64_t r8_derived = 229368;

inline constexpr std::int64_t a6 = 223920;

// |M1(4,5)| and |M1(4,7)|
inline constexpr std::uint64_t m1_4_5 = 0;
inline constexpr std::uint64_t m1_4_7 = 8;

inline constexpr std::array<std::uint64_t, 6> m8_primes = {223, 227, 229, 233, 239, 241};

struct TetraVolume {
  std::string_view name;
  std::string_view chamber;
  double volume;
};

inline constexpr std::array<TetraVolume, 7> tetra_volumes = {{
    {"FBGH", "I", 0.00628091},
    {"FEDG", "II", 0.00486715},
    {"FDGH", "II", 0.00481365},
    {"AFED", "III", 0.0189182},
    {"FBGC", "IV", 0.0146084},
    {"CGFE", "V", 0.00650684},
    {"AFCE", "VI", 0.0262516},
}};

struct ChamberProbability {
  std::string_view chamber;
  double probability;
};

inline constexpr std::array<ChamberProbability, 6> probabilities = {{
    {"I", 0.0381834},
    {"II", 0.0588522},
    {"III", 0.1150086},
    {"IV", 0.0888085},
    {"V", 0.0395569},
    {"VI", 0.1595905},
}};

inline constexpr double volume_T = 0.0822467;

// Partial Schlafli integrals for FBGH along edges 12 and 14 (before halving).
inline constexpr double fbgh_integral_12 = -0.0810845;
inline constexpr double fbgh_integral_14 = -0.306702;

} // namespace midhyp::golden

#endif // MIDHYP_GOLDEN_HPP
