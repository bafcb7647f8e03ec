#pragma once

// Vertex/ray enumeration by the double description method.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/polyhedra.hpp"

namespace semilin {

struct VRep {
  std::vector<RatVec> vertices;
  std::vector<IntVec> rays;
  bool operator==(const VRep&) const = default;
};

namespace detail {

/// Extreme rays of the pointed cone {y : M y <= 0}, as primitive integer
/// vectors in canonical sorted order. `dim` is the ambient dimension.
inline std::vector<IntVec> extreme_rays(const std::vector<IntVec>& M, std::size_t dim) {
  if (dim == 0) return {};
  // Initial simplicial cone from a maximal independent row subset.
  std::vector<std::size_t> basis_rows, rest;
  {
    std::vector<IntVec> chosen;
    for (std::size_t i = 0; i < M.size(); ++i) {
      chosen.push_back(M[i]);
      if (rank(chosen, dim) == chosen.size()) {
        basis_rows.push_back(i);
      } else {
        chosen.pop_back();
        rest.push_back(i);
      }
    }
  }
  if (basis_rows.size() < dim) throw NotPointedError("not pointed: cone contains a line");

  RatMat B(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) B(i, j) = M[basis_rows[i]][j];

  std::vector<IntVec> rays;
  for (std::size_t k = 0; k < dim; ++k) {
    RatVec e(dim, Rat(0));
    e[k] = -1;
    auto r = solve_square(B, e);
    rays.push_back(primitive(clear_denominators(*r)));
  }

  std::vector<std::size_t> processed = basis_rows;
  auto tight_set = [&](const IntVec& r) {
    std::vector<bool> z(M.size(), false);
    for (std::size_t i : processed) z[i] = dot<Int>(M[i], r) == 0;
    return z;
  };

  for (std::size_t idx : rest) {
    const IntVec& m = M[idx];
    std::vector<IntVec> pos, neg, zero;
    std::vector<Int> pv, nv;
    for (auto& r : rays) {
      Int s = dot<Int>(m, r);
      if (s > 0) {
        pos.push_back(r);
        pv.push_back(s);
      } else if (s < 0) {
        neg.push_back(r);
        nv.push_back(s);
      } else {
        zero.push_back(r);
      }
    }
    if (pos.empty()) {
      processed.push_back(idx);
      continue;
    }
    std::vector<std::vector<bool>> zsets;
    for (auto& r : rays) zsets.push_back(tight_set(r));
    auto index_of = [&](const IntVec& r) {
      return static_cast<std::size_t>(std::find(rays.begin(), rays.end(), r) - rays.begin());
    };
    std::vector<IntVec> next = neg;
    next.insert(next.end(), zero.begin(), zero.end());
    for (std::size_t p = 0; p < pos.size(); ++p)
      for (std::size_t q = 0; q < neg.size(); ++q) {
        std::size_t ip = index_of(pos[p]), iq = index_of(neg[q]);
        std::vector<bool> common(M.size(), false);
        std::size_t count = 0;
        for (std::size_t i : processed)
          if (zsets[ip][i] && zsets[iq][i]) {
            common[i] = true;
            ++count;
          }
        if (count + 2 < dim) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == ip || o == iq) continue;
          bool superset = true;
          for (std::size_t i : processed)
            if (common[i] && !zsets[o][i]) {
              superset = false;
              break;
            }
          if (superset) adjacent = false;
        }
        if (!adjacent) continue;
        IntVec r(dim);
        for (std::size_t j = 0; j < dim; ++j) r[j] = pv[p] * neg[q][j] - nv[q] * pos[p][j];
        next.push_back(primitive(std::move(r)));
      }
    rays = std::move(next);
    processed.push_back(idx);
  }
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

/// Rows of the homogenized cone {(x, t) : a.x - b t <= 0, -t <= 0}.
inline std::vector<IntVec> homogenized_rows(const CoPolyhedron& Q) {
  std::vector<IntVec> M;
  for (const auto& r : Q.ineqs()) {
    IntVec row = r.a;
    row.push_back(-r.b);
    M.push_back(std::move(row));
  }
  IntVec t(Q.dim() + 1, Int(0));
  t[Q.dim()] = -1;
  M.push_back(std::move(t));
  return M;
}

}  // namespace detail

/// Basis of the lineality space {x : A x = 0} of Q's closure.
inline std::vector<IntVec> lineality_space(const CoPolyhedron& Q) {
  RatMat A(Q.size(), Q.dim());
  for (std::size_t i = 0; i < Q.size(); ++i)
    for (std::size_t j = 0; j < Q.dim(); ++j) A(i, j) = Q.ineqs()[i].a[j];
  return nullspace(A);
}

/// Vertices and extreme rays of the closure of Q; empty for empty Q.
/// Throws NotPointedError when Q contains a line.
inline VRep vrep(const CoPolyhedron& Q) {
  if (Q.is_empty()) return {};
  if (!lineality_space(Q).empty()) throw NotPointedError("not pointed: polyhedron contains a line");
  const std::size_t d = Q.dim();
  VRep out;
  for (auto& g : detail::extreme_rays(detail::homogenized_rows(Q), d + 1)) {
    if (g[d] > 0) {
      RatVec v(d);
      for (std::size_t j = 0; j < d; ++j) v[j] = make_rat(g[j], g[d]);
      out.vertices.push_back(std::move(v));
    } else {
      out.rays.push_back(primitive(IntVec(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(d))));
    }
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  std::sort(out.rays.begin(), out.rays.end());
  return out;
}

}  // namespace semilin
