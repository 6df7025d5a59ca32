#ifndef MIDHYP_SPHERICAL_HPP
#define MIDHYP_SPHERICAL_HPP

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "common.hpp"
#include "oracle.hpp"

namespace midhyp::spherical {

// Ranking-pattern probabilities for five objects. Chambers of A_5 inside
// x1 < ... < x5 are cones in the sum-zero hyperplane; their traces on the
// unit 3-sphere are spherical tetrahedra (one is a square pyramid).

using Vec4 = std::array<double, 4>;
using Vec5 = std::array<double, 5>;

class DegenerateCone : public Error {
public:
  using Error::Error;
};

class PathError : public Error {
public:
  using Error::Error;
};

class ToleranceError : public Error {
public:
  using Error::Error;
};

inline double dot(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

inline Vec4 scaled(const Vec4& a, double s) { return {a[0] * s, a[1] * s, a[2] * s, a[3] * s}; }

inline Vec4 normalized(const Vec4& a) {
  const double n = norm(a);
  if (n == 0)
    throw DegenerateInput("cannot normalize the zero vector");
  return scaled(a, 1 / n);
}

// Angle between two nonzero vectors via atan2(|a ^ b|, a.b), accurate near 0 and pi.
inline double angle_between(const Vec4& a, const Vec4& b) {
  double wedge2 = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double w = a[i] * b[j] - a[j] * b[i];
      wedge2 += w * w;
    }
  return std::atan2(std::sqrt(wedge2), dot(a, b));
}

// Vector orthogonal to a, b and c (4D generalized cross product).
inline Vec4 cross3(const Vec4& a, const Vec4& b, const Vec4& c) {
  auto det3 = [&](int i, int j, int k) {
    return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) +
           a[k] * (b[i] * c[j] - b[j] * c[i]);
  };
  return {det3(1, 2, 3), -det3(0, 2, 3), det3(0, 1, 3), -det3(0, 1, 2)};
}

// Orthonormal basis of {x in R^5 : sum x = 0}.
inline const std::array<Vec5, 4>& sum_zero_basis() {
  static const std::array<Vec5, 4> e = [] {
    const double r2 = std::sqrt(2.0), r6 = std::sqrt(6.0), r12 = std::sqrt(12.0), r20 = std::sqrt(20.0);
    return std::array<Vec5, 4>{{
        {1 / r2, -1 / r2, 0, 0, 0},
        {1 / r6, 1 / r6, -2 / r6, 0, 0},
        {1 / r12, 1 / r12, 1 / r12, -3 / r12, 0},
        {1 / r20, 1 / r20, 1 / r20, 1 / r20, -4 / r20},
    }};
  }();
  return e;
}

inline Vec4 coordinates(const Vec5& x) {
  const auto& e = sum_zero_basis();
  Vec4 z{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 5; ++i)
      z[k] += e[k][i] * x[i];
  return z;
}

inline Vec5 embed(const Vec4& z) {
  const auto& e = sum_zero_basis();
  Vec5 x{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 5; ++i)
      x[i] += z[k] * e[k][i];
  return x;
}

// Centers x, expresses it in the sum-zero basis and normalizes.
inline Vec4 project_to_sphere(const Vec5& x) {
  double mean = 0;
  for (double v : x)
    mean += v / 5;
  Vec5 c{};
  double scale = 0;
  for (int i = 0; i < 5; ++i) {
    c[i] = x[i] - mean;
    scale = std::max(scale, std::abs(x[i]));
  }
  const Vec4 z = coordinates(c);
  if (norm(z) <= 1e-14 * std::max(1.0, scale))
    throw DegenerateInput("point is proportional to the all-ones vector");
  return normalized(z);
}

// Linear form c.x > 0 on R^5, written from the 1-based relations used below.
using Form5 = std::array<int, 5>;

// x_{ab} < x_{cd}
inline Form5 mid_less(int a, int b, int c, int d) {
  Form5 f{};
  f[c - 1] += 1;
  f[d - 1] += 1;
  f[a - 1] -= 1;
  f[b - 1] -= 1;
  return f;
}

// x_i < x_j
inline Form5 point_less(int i, int j) {
  Form5 f{};
  f[j - 1] += 1;
  f[i - 1] -= 1;
  return f;
}

inline Vec4 form_normal(const Form5& f) {
  Vec5 c{};
  for (int i = 0; i < 5; ++i)
    c[i] = f[i];
  return coordinates(c);
}

struct SphericalCone {
  std::vector<Vec4> normals; // unit, inward: n.z >= 0 inside
  std::string label;

  bool contains(const Vec4& z, double tol = 0) const {
    for (const auto& n : normals)
      if (dot(n, z) < -tol)
        return false;
    return true;
  }
};

inline SphericalCone cone_from_normals(const std::vector<Vec4>& raw, std::string label) {
  SphericalCone c;
  c.label = std::move(label);
  for (const auto& n : raw)
    c.normals.push_back(normalized(n));
  return c;
}

inline const std::vector<std::string>& chamber_labels() {
  static const std::vector<std::string> l = {"I", "II", "III", "IV", "V", "VI"};
  return l;
}

// Binding inequalities of the six chambers with x1<...<x5 and x24<x15.
inline std::vector<Form5> chamber_inequalities(const std::string& label) {
  if (label == "I")
    return {mid_less(1, 4, 2, 3), mid_less(2, 5, 3, 4), point_less(3, 4), mid_less(2, 4, 1, 5)};
  if (label == "II")
    return {mid_less(1, 5, 3, 4), mid_less(1, 4, 2, 3), mid_less(2, 4, 1, 5), point_less(3, 4),
            mid_less(3, 4, 2, 5)};
  if (label == "III")
    return {mid_less(1, 4, 2, 3), point_less(2, 3), point_less(3, 4), mid_less(3, 4, 1, 5)};
  if (label == "IV")
    return {point_less(1, 2), mid_less(2, 5, 3, 4), mid_less(2, 3, 1, 4), mid_less(2, 4, 1, 5)};
  if (label == "V")
    return {mid_less(1, 5, 3, 4), mid_less(2, 3, 1, 4), mid_less(2, 4, 1, 5), mid_less(3, 4, 2, 5)};
  if (label == "VI")
    return {point_less(1, 2), point_less(2, 3), mid_less(2, 3, 1, 4), mid_less(3, 4, 1, 5)};
  throw InvalidParameter("unknown chamber label '" + label + "'");
}

inline SphericalCone chamber_cone(const std::string& label) {
  std::vector<Vec4> raw;
  for (const auto& f : chamber_inequalities(label))
    raw.push_back(form_normal(f));
  return cone_from_normals(raw, label);
}

// Midpoint orders of the six chambers over x14, x15, x23, x24, x25, x34, and
// their images under x -> -x (primed chambers).
inline std::vector<LabelPair> chamber_midpoint_order(const std::string& label) {
  using P = LabelPair;
  if (label == "I")
    return {P{1, 4}, P{2, 3}, P{2, 4}, P{1, 5}, P{2, 5}, P{3, 4}};
  if (label == "II")
    return {P{1, 4}, P{2, 3}, P{2, 4}, P{1, 5}, P{3, 4}, P{2, 5}};
  if (label == "III")
    return {P{1, 4}, P{2, 3}, P{2, 4}, P{3, 4}, P{1, 5}, P{2, 5}};
  if (label == "IV")
    return {P{2, 3}, P{1, 4}, P{2, 4}, P{1, 5}, P{2, 5}, P{3, 4}};
  if (label == "V")
    return {P{2, 3}, P{1, 4}, P{2, 4}, P{1, 5}, P{3, 4}, P{2, 5}};
  if (label == "VI")
    return {P{2, 3}, P{1, 4}, P{2, 4}, P{3, 4}, P{1, 5}, P{2, 5}};
  if (label == "I'")
    return {P{2, 3}, P{1, 4}, P{1, 5}, P{2, 4}, P{3, 4}, P{2, 5}};
  if (label == "II'")
    return {P{1, 4}, P{2, 3}, P{1, 5}, P{2, 4}, P{3, 4}, P{2, 5}};
  if (label == "III'")
    return {P{1, 4}, P{1, 5}, P{2, 3}, P{2, 4}, P{3, 4}, P{2, 5}};
  if (label == "IV'")
    return {P{2, 3}, P{1, 4}, P{1, 5}, P{2, 4}, P{2, 5}, P{3, 4}};
  if (label == "V'")
    return {P{1, 4}, P{2, 3}, P{1, 5}, P{2, 4}, P{2, 5}, P{3, 4}};
  if (label == "VI'")
    return {P{1, 4}, P{1, 5}, P{2, 3}, P{2, 4}, P{2, 5}, P{3, 4}};
  throw InvalidParameter("unknown chamber label '" + label + "'");
}

// The orthogonal map on sum-zero coordinates induced by x_i -> -x_{6-i}.
inline std::array<Vec4, 4> negate_reverse_matrix() {
  std::array<Vec4, 4> r{};
  for (int l = 0; l < 4; ++l) {
    Vec4 unit{};
    unit[l] = 1;
    const Vec5 x = embed(unit);
    Vec5 y{};
    for (int i = 0; i < 5; ++i)
      y[i] = -x[4 - i];
    const Vec4 col = coordinates(y);
    for (int k = 0; k < 4; ++k)
      r[k][l] = col[k];
  }
  return r;
}

inline Vec4 apply(const std::array<Vec4, 4>& mat, const Vec4& v) {
  Vec4 out{};
  for (int k = 0; k < 4; ++k)
    out[k] = dot(mat[k], v);
  return out;
}

inline SphericalCone primed_cone(const SphericalCone& c) {
  const auto r = negate_reverse_matrix();
  SphericalCone out;
  out.label = c.label + "'";
  for (const auto& n : c.normals)
    out.normals.push_back(apply(r, n));
  return out;
}

// Named vertices of the chamber decomposition, as unit points of R^5.
inline Vec5 named_vertex(char name) {
  auto v = [](std::array<double, 5> x, double d) {
    Vec5 out{};
    for (int i = 0; i < 5; ++i)
      out[i] = x[i] / std::sqrt(d);
    return out;
  };
  switch (name) {
  case 'A': return v({-1, -1, -1, -1, 4}, 20);
  case 'B': return v({-3, -3, 2, 2, 2}, 30);
  case 'C': return v({-2, -2, -2, 3, 3}, 30);
  case 'D': return v({-1, 0, 0, 0, 1}, 2);
  case 'E': return v({-7, -2, -2, 3, 8}, 130);
  case 'F': return v({-4, -4, 1, 1, 6}, 70);
  case 'G': return v({-2, -1, 0, 1, 2}, 10);
  case 'H': return v({-8, -3, 2, 2, 7}, 130);
  default: throw InvalidParameter(std::string("unknown vertex '") + name + "'");
  }
}

struct TetraSpec {
  std::string name; // four vertex letters
  std::string chamber;
};

inline const std::vector<TetraSpec>& tetrahedra() {
  static const std::vector<TetraSpec> t = {
      {"FBGH", "I"}, {"FEDG", "II"}, {"FDGH", "II"}, {"AFED", "III"},
      {"FBGC", "IV"}, {"CGFE", "V"},  {"AFCE", "VI"},
  };
  return t;
}

// ---------------------------------------------------------------------------
// Tetrahedron geometry

// Facet i has unit inward normal normals[i]; vertices[l] is the vertex not on
// facet l. lambda/theta are indexed by edge_index(i, j) for the edge shared by
// facets i and j.
struct TetraGeometry {
  std::array<Vec4, 4> normals{};
  std::array<Vec4, 4> vertices{};
  std::array<double, 6> lambda{}; // dihedral angles
  std::array<double, 6> theta{};  // edge lengths
};

inline constexpr std::array<std::pair<int, int>, 6> edge_pairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline void fill_angles(TetraGeometry& g) {
  for (std::size_t e = 0; e < edge_pairs.size(); ++e) {
    const auto [i, j] = edge_pairs[e];
    int k = -1, l = -1;
    for (int t = 0; t < 4; ++t)
      if (t != i && t != j)
        (k < 0 ? k : l) = t;
    g.lambda[e] = std::numbers::pi - angle_between(g.normals[i], g.normals[j]);
    g.theta[e] = angle_between(g.vertices[k], g.vertices[l]);
  }
}

// Vertices from four inward facet normals.
inline TetraGeometry tetra_geometry(const std::array<Vec4, 4>& raw_normals) {
  TetraGeometry g;
  for (int i = 0; i < 4; ++i)
    g.normals[i] = normalized(raw_normals[i]);
  for (int l = 0; l < 4; ++l) {
    std::array<Vec4, 3> others{};
    int t = 0;
    for (int i = 0; i < 4; ++i)
      if (i != l)
        others[t++] = g.normals[i];
    Vec4 v = cross3(others[0], others[1], others[2]);
    const double n = norm(v);
    if (n < 1e-13)
      throw DegenerateCone("facet normals are rank-deficient");
    v = scaled(v, 1 / n);
    const double side = dot(g.normals[l], v);
    if (std::abs(side) < 1e-14)
      throw DegenerateCone("empty tetrahedron: vertex lies on the opposite facet");
    g.vertices[l] = side > 0 ? v : scaled(v, -1);
  }
  fill_angles(g);
  return g;
}

inline TetraGeometry tetra_geometry(const SphericalCone& cone) {
  if (cone.normals.size() != 4)
    throw InvalidParameter("tetra_geometry needs exactly four facets");
  return tetra_geometry(std::array<Vec4, 4>{cone.normals[0], cone.normals[1], cone.normals[2], cone.normals[3]});
}

// Facets from four vertices; facet l is opposite vertices[l].
inline TetraGeometry tetra_from_vertices(const std::array<Vec4, 4>& raw_vertices) {
  TetraGeometry g;
  for (int l = 0; l < 4; ++l)
    g.vertices[l] = normalized(raw_vertices[l]);
  for (int l = 0; l < 4; ++l) {
    std::array<Vec4, 3> others{};
    int t = 0;
    for (int i = 0; i < 4; ++i)
      if (i != l)
        others[t++] = g.vertices[i];
    Vec4 n = cross3(others[0], others[1], others[2]);
    const double len = norm(n);
    if (len < 1e-15)
      throw DegenerateCone("vertices are linearly dependent");
    n = scaled(n, 1 / len);
    g.normals[l] = dot(n, g.vertices[l]) >= 0 ? n : scaled(n, -1);
  }
  fill_angles(g);
  return g;
}

inline std::array<Vec4, 4> tetra_vertices(const std::string& name) {
  if (name.size() != 4)
    throw InvalidParameter("tetrahedron name needs four vertex letters");
  std::array<Vec4, 4> v{};
  for (int i = 0; i < 4; ++i)
    v[i] = coordinates(named_vertex(name[i]));
  return v;
}

inline SphericalCone tetra_cone(const std::string& name) {
  const TetraGeometry g = tetra_from_vertices(tetra_vertices(name));
  SphericalCone c;
  c.label = name;
  c.normals.assign(g.normals.begin(), g.normals.end());
  return c;
}

// ---------------------------------------------------------------------------
// Volumes by Schlafli's formula dVol = 1/2 sum theta_ij dlambda_ij

struct DeformationPath {
  std::string description;
  std::function<TetraGeometry(double)> at;
  // Closed-form dlambda/da, when known.
  std::function<std::array<double, 6>(double)> dlambda;
  double volume_at_0 = 0;
};

// The FBGH family T(a): the first facet's z1 coefficient scaled by a. At a=0
// the first and third facets are opposite, so T(0) has volume zero.
inline std::array<Vec4, 4> fbgh_normals(double a) {
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r5 = std::sqrt(5.0), r6 = std::sqrt(6.0);
  return {{
      {-a * r3, -1, r2, 0},
      {r2, -r6, -r3, r5},
      {0, 1, -r2, 0},
      {2 * r2, 0, r3, -r5},
  }};
}

inline DeformationPath fbgh_path() {
  DeformationPath p;
  p.description = "FBGH: scale z1 coefficient of the first facet";
  p.at = [](double a) { return tetra_geometry(fbgh_normals(a)); };
  p.dlambda = [](double a) {
    std::array<double, 6> d{};
    d[0] = -std::sqrt(2.0) / ((a * a + 1) * std::sqrt(14 * a * a + 16)); // lambda_12
    d[1] = 1 / (a * a + 1);                                               // lambda_13
    d[2] = (-a - 2) / ((a * a + 1) * std::sqrt(4 * a * a + 4 * a + 7));   // lambda_14
    return d;
  };
  return p;
}

// Collapses vertex `apex` onto the normalized centroid of the opposite face.
// T(0) is flat; T(1) is the given tetrahedron.
inline DeformationPath collapse_path(const std::array<Vec4, 4>& vertices, int apex = 3) {
  if (apex < 0 || apex > 3)
    throw InvalidParameter("apex index must be in 0..3");
  std::array<Vec4, 4> v{};
  for (int i = 0; i < 4; ++i)
    v[i] = normalized(vertices[i]);
  Vec4 base{};
  for (int i = 0; i < 4; ++i)
    if (i != apex)
      for (int k = 0; k < 4; ++k)
        base[k] += v[i][k];
  base = normalized(base);
  DeformationPath p;
  p.description = "collapse vertex " + std::to_string(apex) + " onto the opposite face";
  p.at = [v, base, apex](double a) {
    std::array<Vec4, 4> w = v;
    for (int k = 0; k < 4; ++k)
      w[apex][k] = (1 - a) * base[k] + a * v[apex][k];
    return tetra_from_vertices(w);
  };
  return p;
}

// Richardson-extrapolated finite differences of lambda(a); central in the
// interior, second-order one-sided stencils near the endpoints of [0, 1].
inline std::array<double, 6> dlambda_numeric(const DeformationPath& path, double a, double h = 1e-3) {
  if (a < 0 || a > 1)
    throw PathError("derivative requested outside [0, 1]");
  const int dir = a < 2 * h ? 1 : (a > 1 - 2 * h ? -1 : 0);
  auto stencil = [&](double step) {
    std::array<double, 6> d{};
    if (dir == 0) {
      const auto up = path.at(a + step).lambda;
      const auto dn = path.at(a - step).lambda;
      for (int e = 0; e < 6; ++e)
        d[e] = (up[e] - dn[e]) / (2 * step);
    } else {
      const double s = dir * step;
      const auto f0 = path.at(a).lambda;
      const auto f1 = path.at(a + s).lambda;
      const auto f2 = path.at(a + 2 * s).lambda;
      for (int e = 0; e < 6; ++e)
        d[e] = (-3 * f0[e] + 4 * f1[e] - f2[e]) / (2 * s);
    }
    return d;
  };
  // Error expansions: h^2, h^4 (central) and h^2, h^3 (one-sided).
  const std::array<int, 2> orders = dir == 0 ? std::array<int, 2>{2, 4} : std::array<int, 2>{2, 3};
  std::array<std::array<double, 6>, 3> t = {stencil(h), stencil(h / 2), stencil(h / 4)};
  for (int level = 0; level < 2; ++level) {
    const double f = std::pow(2.0, orders[level]);
    for (int i = 0; i + level + 1 < 3; ++i)
      for (int e = 0; e < 6; ++e)
        t[i][e] = (f * t[i + 1][e] - t[i][e]) / (f - 1);
  }
  return t[0];
}

struct SchlafliResult {
  double volume = 0;
  std::array<double, 6> edge_integrals{}; // integral of theta_ij dlambda_ij/da
  double error_estimate = 0;
};

inline constexpr double schlafli_abs_tolerance = 1e-8;

namespace detail {

inline TetraGeometry geometry_at(const DeformationPath& path, double a) {
  try {
    return path.at(a);
  } catch (const PathError&) {
    throw;
  } catch (const Error& err) {
    throw PathError("geometry degenerates at a = " + std::to_string(a) + ": " + err.what());
  }
}

} // namespace detail

inline SchlafliResult schlafli_volume(const DeformationPath& path, bool use_closed_form = true) {
  SchlafliResult res;
  res.volume = path.volume_at_0;
  const bool closed = use_closed_form && static_cast<bool>(path.dlambda);
  const DeformationPath guarded{path.description, [&path](double a) { return detail::geometry_at(path, a); },
                                path.dlambda, path.volume_at_0};
  for (int e = 0; e < 6; ++e) {
    // Skip edges whose dihedral angle is constant along the path.
    const double l0 = guarded.at(0.25).lambda[e], lm = guarded.at(0.5).lambda[e], l1 = guarded.at(0.75).lambda[e];
    if (std::abs(l0 - l1) < 1e-15 && std::abs(l0 - lm) < 1e-15)
      continue;
    auto integrand = [&](double a) {
      const double dl = closed ? guarded.dlambda(a)[e] : dlambda_numeric(guarded, a)[e];
      return guarded.at(a).theta[e] * dl;
    };
    double err = 0;
    const double val =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, 0.0, 1.0, 12, 1e-10, &err);
    if (!(err <= schlafli_abs_tolerance / 6))
      throw ToleranceError("quadrature did not converge on edge " + std::to_string(e) + " (error estimate " +
                           std::to_string(err) + ")");
    res.edge_integrals[e] = val;
    res.error_estimate += err / 2;
    res.volume += val / 2;
  }
  return res;
}

inline constexpr double sphere_volume = 2 * std::numbers::pi * std::numbers::pi; // Vol(S^3)
inline constexpr double volume_T = sphere_volume / 240;                          // 1/(5! * 2) of S^3

struct TetraVolumeResult {
  std::string name;
  std::string chamber;
  double volume = 0;
  SchlafliResult detail;
};

struct ProbabilityTable {
  std::vector<TetraVolumeResult> tetrahedra;  // seven
  std::vector<std::string> chambers;          // I..VI, I'..VI'
  std::vector<double> chamber_volumes;        // twelve
  std::vector<double> probabilities;          // twelve, conditional on x1<...<x5
  double volume_T = spherical::volume_T;
  double volume_S = 2 * spherical::volume_T;
  double probability_sum = 0;
};

inline TetraVolumeResult tetra_volume(const std::string& name, const std::string& chamber) {
  TetraVolumeResult r;
  r.name = name;
  r.chamber = chamber;
  r.detail = name == "FBGH" ? schlafli_volume(fbgh_path()) : schlafli_volume(collapse_path(tetra_vertices(name)));
  r.volume = r.detail.volume;
  return r;
}

inline ProbabilityTable pattern_probabilities_m5() {
  ProbabilityTable t;
  for (const auto& spec : tetrahedra())
    t.tetrahedra.push_back(tetra_volume(spec.name, spec.chamber));
  for (const auto& label : chamber_labels()) {
    double v = 0;
    for (const auto& tv : t.tetrahedra)
      if (tv.chamber == label)
        v += tv.volume;
    t.chambers.push_back(label);
    t.chamber_volumes.push_back(v);
  }
  for (std::size_t i = 0; i < chamber_labels().size(); ++i) {
    t.chambers.push_back(chamber_labels()[i] + "'");
    t.chamber_volumes.push_back(t.chamber_volumes[i]);
  }
  for (double v : t.chamber_volumes) {
    t.probabilities.push_back(v / t.volume_S);
    t.probability_sum += v / t.volume_S;
  }
  if (std::abs(t.probability_sum - 1) > 1e-3)
    throw InvariantViolation("chamber probabilities sum to " + std::to_string(t.probability_sum));
  return t;
}

// ---------------------------------------------------------------------------
// Monte Carlo solid angles

enum class SphereGenerator { Gaussian, Marsaglia };

struct MonteCarloResult {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double fraction = 0;
  double std_error = 0;

  double volume() const { return fraction * sphere_volume; }
  double volume_std_error() const { return std_error * sphere_volume; }
};

inline constexpr std::uint64_t mc_block = 1u << 20;

namespace detail {

template <class Gen>
Vec4 draw_sphere_direction(Gen& gen, SphereGenerator kind) {
  if (kind == SphereGenerator::Gaussian) {
    std::normal_distribution<double> normal;
    Vec4 z{normal(gen), normal(gen), normal(gen), normal(gen)};
    return z;
  }
  // Marsaglia (1972): two points uniform in the unit disk.
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double x1, x2, s1, x3, x4, s2;
  do {
    x1 = u(gen);
    x2 = u(gen);
    s1 = x1 * x1 + x2 * x2;
  } while (s1 >= 1);
  do {
    x3 = u(gen);
    x4 = u(gen);
    s2 = x3 * x3 + x4 * x4;
  } while (s2 >= 1 || s2 == 0);
  const double f = std::sqrt((1 - s1) / s2);
  return {x1, x2, x3 * f, x4 * f};
}

} // namespace detail

// Hit fractions of several cones on one shared stream of uniform sphere points.
// Blocks of mc_block samples use independent derived seeds, so results depend
// only on (samples, seed, generator), not on the thread count.
inline std::vector<MonteCarloResult> solid_angle_mc_multi(const std::vector<SphericalCone>& cones,
                                                          std::uint64_t samples, std::uint64_t seed,
                                                          int threads = 1,
                                                          SphereGenerator kind = SphereGenerator::Gaussian) {
  require(samples >= 1, "solid_angle_mc requires samples >= 1");
  const std::uint64_t nblocks = (samples + mc_block - 1) / mc_block;
  const std::size_t nc = cones.size();
  std::vector<std::uint64_t> hits(nblocks * nc, 0);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next.fetch_add(1); b < nblocks; b = next.fetch_add(1)) {
      std::mt19937_64 gen(block_seed(seed ^ (kind == SphereGenerator::Gaussian ? 0 : 0x5bd1e995ull), b));
      const std::uint64_t count = std::min(mc_block, samples - b * mc_block);
      std::uint64_t* h = &hits[b * nc];
      for (std::uint64_t k = 0; k < count; ++k) {
        const Vec4 z = detail::draw_sphere_direction(gen, kind);
        for (std::size_t c = 0; c < nc; ++c)
          if (cones[c].contains(z))
            ++h[c];
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < threads; ++t)
      pool.emplace_back(worker);
    worker();
  }
  std::vector<MonteCarloResult> out(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    auto& r = out[c];
    r.samples = samples;
    for (std::uint64_t b = 0; b < nblocks; ++b)
      r.hits += hits[b * nc + c];
    r.fraction = static_cast<double>(r.hits) / static_cast<double>(samples);
    r.std_error = std::sqrt(r.fraction * (1 - r.fraction) / static_cast<double>(samples));
  }
  return out;
}

inline MonteCarloResult solid_angle_mc(const SphericalCone& cone, std::uint64_t samples, std::uint64_t seed,
                                       int threads = 1, SphereGenerator kind = SphereGenerator::Gaussian) {
  return solid_angle_mc_multi({cone}, samples, seed, threads, kind).front();
}

// Direct simulation of x ~ N5(0, I): sort, then classify by the midpoint order
// of x14, x15, x23, x24, x25, x34. Returns counts per label I..VI, I'..VI'.
struct OrderSimulation {
  std::vector<std::string> labels;
  std::vector<std::uint64_t> counts;
  std::uint64_t samples = 0;
  std::uint64_t unclassified = 0;
};

inline OrderSimulation simulate_midpoint_orders_m5(std::uint64_t samples, std::uint64_t seed) {
  OrderSimulation sim;
  for (const auto& l : chamber_labels())
    sim.labels.push_back(l);
  for (const auto& l : chamber_labels())
    sim.labels.push_back(l + "'");
  std::vector<std::vector<LabelPair>> orders;
  for (const auto& l : sim.labels)
    orders.push_back(chamber_midpoint_order(l));
  sim.counts.assign(sim.labels.size(), 0);
  sim.samples = samples;
  std::mt19937_64 gen(block_seed(seed, 0x6d5f));
  std::normal_distribution<double> normal;
  const std::array<LabelPair, 6> tracked = {{{1, 4}, {1, 5}, {2, 3}, {2, 4}, {2, 5}, {3, 4}}};
  for (std::uint64_t k = 0; k < samples; ++k) {
    std::array<double, 5> x{};
    for (auto& v : x)
      v = normal(gen);
    std::sort(x.begin(), x.end());
    std::array<LabelPair, 6> got = tracked;
    std::sort(got.begin(), got.end(), [&](const LabelPair& a, const LabelPair& b) {
      return x[a.first - 1] + x[a.second - 1] < x[b.first - 1] + x[b.second - 1];
    });
    bool found = false;
    for (std::size_t c = 0; c < orders.size() && !found; ++c)
      if (std::equal(got.begin(), got.end(), orders[c].begin())) {
        ++sim.counts[c];
        found = true;
      }
    if (!found)
      ++sim.unclassified;
  }
  return sim;
}

} // namespace midhyp::spherical

#endif // MIDHYP_SPHERICAL_HPP
