#pragma once

// Half-open decomposition of a pointed polyhedron into cells
// (simplex) + (simple cone), from a pulling triangulation of its homogenization.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/polyhedra.hpp"
#include "semilin/vrep.hpp"

namespace semilin {

/// conv(vertices) + cone(rays) written in barycentric/conic coordinates.
/// A strict flag excludes the face where that coordinate vanishes.
struct Cell {
  std::size_t dim = 0;
  std::vector<RatVec> vertices;
  std::vector<bool> vertex_strict;
  std::vector<IntVec> rays;
  std::vector<bool> ray_strict;
  std::vector<AffineFn> vertex_weight;  // barycentric weight of each vertex at x
  std::vector<AffineFn> ray_weight;     // conic coefficient of each ray at x
  std::vector<LinIneq> span_rows;       // affine hull of the cell

  CoPolyhedron base() const {
    std::vector<LinIneq> rows = span_rows;
    add_vertex_rows(rows);
    for (const auto& f : ray_weight) {
      rows.push_back(nonpositive(f, false));
      rows.push_back(nonpositive(negate(f), false));
    }
    return CoPolyhedron(dim, std::move(rows));
  }

  CoPolyhedron region() const {
    std::vector<LinIneq> rows = span_rows;
    add_vertex_rows(rows);
    for (std::size_t j = 0; j < rays.size(); ++j) rows.push_back(nonpositive(negate(ray_weight[j]), ray_strict[j]));
    return CoPolyhedron(dim, std::move(rows));
  }

  /// base + {sum mu_j rays_j : 0 <= mu_j < mult_j}, or 0 < mu_j <= mult_j for
  /// strict rays. Translating by N-combinations of mult_j * rays_j tiles region().
  CoPolyhedron parallelepiped(std::span<const Int> mult) const {
    if (mult.size() != rays.size()) throw DimensionError("parallelepiped: one multiplier per ray");
    std::vector<LinIneq> rows = span_rows;
    add_vertex_rows(rows);
    for (std::size_t j = 0; j < rays.size(); ++j) {
      AffineFn upper = ray_weight[j];
      upper.constant -= mult[j];
      rows.push_back(nonpositive(negate(ray_weight[j]), ray_strict[j]));
      rows.push_back(nonpositive(upper, !ray_strict[j]));
    }
    return CoPolyhedron(dim, std::move(rows));
  }

private:
  static AffineFn negate(const AffineFn& f) {
    AffineFn g = f;
    for (auto& x : g.linear) x = -x;
    g.constant = -g.constant;
    return g;
  }
  void add_vertex_rows(std::vector<LinIneq>& rows) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      rows.push_back(nonpositive(negate(vertex_weight[i]), vertex_strict[i]));
  }
};

namespace detail {

inline std::vector<std::vector<std::size_t>> pulling_triangulation(
    const std::vector<IntVec>& gens, const std::vector<IntVec>& rows, const std::vector<std::size_t>& face,
    std::size_t face_dim) {
  if (face.size() == face_dim) return {face};
  const std::size_t apex = face.front();
  std::set<std::vector<std::size_t>> facets;
  for (const auto& m : rows) {
    std::vector<std::size_t> tight;
    for (std::size_t g : face)
      if (dot<Int>(m, gens[g]) == 0) tight.push_back(g);
    if (tight.size() == face.size() || tight.empty()) continue;
    if (std::find(tight.begin(), tight.end(), apex) != tight.end()) continue;
    std::vector<IntVec> vs;
    for (auto g : tight) vs.push_back(gens[g]);
    if (rank(vs, gens[0].size()) + 1 != face_dim) continue;
    facets.insert(tight);
  }
  std::vector<std::vector<std::size_t>> out;
  for (const auto& f : facets)
    for (auto& simplex : pulling_triangulation(gens, rows, f, face_dim - 1)) {
      simplex.insert(simplex.begin(), apex);
      out.push_back(std::move(simplex));
    }
  return out;
}

}  // namespace detail

/// Disjoint cells whose union is exactly R (closure of R if it has strict rows).
/// Throws NotPointedError when R contains a line.
inline std::vector<Cell> cell_decompose(const CoPolyhedron& R) {
  if (R.is_empty()) return {};
  if (!lineality_space(R).empty()) throw NotPointedError("not pointed: polyhedron contains a line");
  const std::size_t d = R.dim();
  const auto rows = detail::homogenized_rows(R);
  const auto gens = detail::extreme_rays(rows, d + 1);
  const std::size_t k = rank(gens, d + 1);
  std::vector<std::size_t> all(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) all[i] = i;
  const auto simplices = detail::pulling_triangulation(gens, rows, all, k);

  // Coordinates of a reference point q in every simplex; q must avoid all
  // simplex facets, which a pseudo-random positive combination does generically.
  std::vector<std::vector<Rat>> coords;
  for (std::uint64_t seed = 1;; ++seed) {
    if (seed > 64) throw Error("cell_decompose: no generic reference point found");
    IntVec q(d + 1, Int(0));
    std::uint64_t state = seed * 0x9E3779B97F4A7C15ull;
    for (const auto& g : gens) {
      state ^= state >> 33;
      state *= 0xff51afd7ed558ccdull;
      state ^= state >> 29;
      Int w = static_cast<unsigned long>(1 + state % 997);
      for (std::size_t j = 0; j <= d; ++j) q[j] += w * g[j];
    }
    coords.clear();
    bool generic = true;
    for (const auto& s : simplices) {
      std::vector<IntVec> cols;
      for (auto g : s) cols.push_back(gens[g]);
      auto c = solve_any(to_rat(IntMat::from_columns(cols, d + 1)), to_rat(q));
      if (!c || std::any_of(c->begin(), c->end(), [](const Rat& x) { return x == 0; })) {
        generic = false;
        break;
      }
      coords.push_back(*c);
    }
    if (generic) break;
  }

  std::vector<Cell> cells;
  for (std::size_t si = 0; si < simplices.size(); ++si) {
    const auto& s = simplices[si];
    std::vector<IntVec> cols;
    for (auto g : s) cols.push_back(gens[g]);
    IntMat G = IntMat::from_columns(cols, d + 1);
    RatMat Gr = to_rat(G);
    // Left inverse (G^T G)^{-1} G^T.
    RatMat Gt = Gr.transpose();
    RatMat GtG = Gt * Gr;
    Cell cell;
    cell.dim = d;
    std::vector<RatVec> left(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      RatVec e(s.size(), Rat(0));
      e[i] = 1;
      RatVec y = *solve_square(GtG, e);  // row i of (G^T G)^{-1}
      RatVec l(d + 1, Rat(0));
      for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t j = 0; j <= d; ++j) l[j] += y[a] * Gt(a, j);
      left[i] = std::move(l);
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      const IntVec& g = gens[s[i]];
      AffineFn f{RatVec(left[i].begin(), left[i].begin() + static_cast<std::ptrdiff_t>(d)), left[i][d]};
      bool strict = coords[si][i] < 0;
      if (g[d] > 0) {
        // barycentric weight = homogeneous coefficient * t-component
        for (auto& x : f.linear) x *= g[d];
        f.constant *= g[d];
        RatVec v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = make_rat(g[j], g[d]);
        cell.vertices.push_back(std::move(v));
        cell.vertex_strict.push_back(strict);
        cell.vertex_weight.push_back(std::move(f));
      } else {
        cell.rays.push_back(IntVec(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(d)));
        cell.ray_strict.push_back(strict);
        cell.ray_weight.push_back(std::move(f));
      }
    }
    // (x, 1) must lie in the column span of G.
    for (const auto& w : nullspace(Gt)) {
      IntVec a(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
      Int b = -w[d];
      cell.span_rows.emplace_back(a, b, false);
      IntVec na(d);
      for (std::size_t j = 0; j < d; ++j) na[j] = -a[j];
      cell.span_rows.emplace_back(na, -b, false);
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace semilin
