#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"

namespace semilin {

/// Integer lattice in Z^n stored by its canonical column HNF basis.
///
/// Two lattices compare equal exactly when they have the same point set.
class Lattice {
public:
  Lattice() = default;

  /// Lattice generated by the columns of `generators` (any rank, any count).
  explicit Lattice(const IntMat& generators) : dim_(generators.rows()) {
    auto r = hnf(generators);
    std::vector<std::size_t> idx(r.rank);
    for (std::size_t j = 0; j < r.rank; ++j) idx[j] = j;
    basis_ = r.H.select_columns(idx);
    pivots_ = std::move(r.pivot_rows);
  }

  static Lattice from_columns(const std::vector<IntVec>& cols, std::size_t dim) {
    return Lattice(IntMat::from_columns(cols, dim));
  }

  /// Z^n.
  static Lattice integer(std::size_t n) { return Lattice(IntMat::identity(n)); }

  /// d_1 Z x ... x d_n Z.
  static Lattice diagonal(const IntVec& d) {
    IntMat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return Lattice(m);
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rank() const noexcept { return basis_.cols(); }
  bool full_rank() const noexcept { return rank() == dim_; }
  const IntMat& basis() const noexcept { return basis_; }
  std::vector<IntVec> generators() const { return basis_.columns(); }

  /// Index [Z^n : L]; requires full rank.
  Int index() const {
    require_full_rank("index");
    Int d = 1;
    for (std::size_t i = 0; i < dim_; ++i) d *= basis_(i, i);
    return d;
  }

  bool contains(std::span<const Int> v) const {
    if (v.size() != dim_) throw DimensionError("lattice membership: dimension mismatch");
    IntVec r(v.begin(), v.end());
    for (std::size_t j = 0; j < rank(); ++j) {
      std::size_t p = pivots_[j];
      const Int& piv = basis_(p, j);
      if (r[p] % piv != 0) return false;
      Int q = r[p] / piv;
      for (std::size_t i = p; i < dim_; ++i) r[i] -= q * basis_(i, j);
    }
    return is_zero(r);
  }

  /// Canonical representative of v + L: the unique point of the coset with
  /// 0 <= r_i < H_ii in every coordinate. Requires full rank.
  IntVec reduce(std::span<const Int> v) const {
    require_full_rank("reduce");
    if (v.size() != dim_) throw DimensionError("lattice reduce: dimension mismatch");
    IntVec r(v.begin(), v.end());
    for (std::size_t j = 0; j < dim_; ++j) {
      Int q = floor_div(r[j], basis_(j, j));
      if (q == 0) continue;
      for (std::size_t i = j; i < dim_; ++i) r[i] -= q * basis_(i, j);
    }
    return r;
  }

  /// Visits every canonical coset representative in lexicographic order.
  /// The visitor returns false to stop early.
  void for_each_coset(const std::function<bool(const IntVec&)>& visit) const {
    require_full_rank("for_each_coset");
    IntVec cur(dim_, Int(0));
    if (dim_ == 0) {
      visit(cur);
      return;
    }
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
      if (i == dim_) return visit(cur);
      for (Int x = 0; x < basis_(i, i); ++x) {
        cur[i] = x;
        if (!rec(i + 1)) return false;
      }
      return true;
    };
    rec(0);
  }

  std::vector<IntVec> coset_representatives() const {
    std::vector<IntVec> out;
    for_each_coset([&](const IntVec& c) {
      out.push_back(c);
      return true;
    });
    return out;
  }

  /// Rational coordinates z with basis * z = v; v must lie in the span.
  RatVec coordinates(std::span<const Rat> v) const {
    auto z = solve_any(to_rat(basis_), v);
    if (!z) throw DimensionError("vector not in the span of the lattice");
    return *z;
  }

  Lattice permuted(std::span<const std::size_t> order) const {
    // new coordinate i is old coordinate order[i]
    return Lattice(basis_.select_rows(order));
  }

  bool operator==(const Lattice& o) const { return dim_ == o.dim_ && basis_ == o.basis_; }

private:
  void require_full_rank(const char* op) const {
    if (!full_rank()) throw DimensionError(std::string(op) + ": full-rank required");
  }

  std::size_t dim_ = 0;
  IntMat basis_;
  std::vector<std::size_t> pivots_;
};

inline bool lattice_member(const Lattice& L, std::span<const Int> v) { return L.contains(v); }

/// L1 ∩ L2 via the integer kernel of [B1 | -B2].
inline Lattice lattice_intersect(const Lattice& a, const Lattice& b) {
  if (a.dim() != b.dim()) throw DimensionError("lattice_intersect: dimension mismatch");
  if (!a.full_rank() || !b.full_rank())
    throw DimensionError("lattice_intersect: full-rank required");
  const std::size_t n = a.dim();
  if (a == b) return a;
  IntMat stacked(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      stacked(i, j) = a.basis()(i, j);
      stacked(i, n + j) = -b.basis()(i, j);
    }
  IntMat K = integer_kernel(stacked);
  IntMat top(n, K.cols());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < K.cols(); ++j) top(i, j) = K(i, j);
  return Lattice(a.basis() * top);
}

/// Image of L under the map dropping the first coordinate.
inline Lattice lattice_project_drop_first(const Lattice& L) {
  if (L.dim() == 0) throw DimensionError("cannot project a 0-dimensional lattice");
  const IntMat& B = L.basis();
  IntMat g(L.dim() - 1, B.cols());
  for (std::size_t i = 1; i < L.dim(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) g(i - 1, j) = B(i, j);
  return Lattice(g);
}

/// Least n >= 1 with n*v in L (L full rank, v nonzero).
inline Int minimal_ray_multiple(const Lattice& L, std::span<const Int> v) {
  if (!L.full_rank()) throw DimensionError("minimal_ray_multiple: full-rank required");
  if (v.size() != L.dim()) throw DimensionError("minimal_ray_multiple: dimension mismatch");
  if (is_zero(v)) throw DimensionError("minimal_ray_multiple: zero vector");
  RatVec z = L.coordinates(to_rat(v));
  Int n = 1;
  for (const auto& c : z) n = lcm(n, c.get_den());
  return n;
}

/// Smallest t >= 1 with (t, 0, ..., 0) in L.
inline Int ell(const Lattice& L) {
  if (L.dim() == 0) throw DimensionError("ell: empty ambient space");
  IntVec e(L.dim(), Int(0));
  e[0] = 1;
  return minimal_ray_multiple(L, e);
}

inline Lattice lattice_direct_sum(const Lattice& a, const Lattice& b) {
  IntMat m(a.dim() + b.dim(), a.rank() + b.rank());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.rank(); ++j) m(i, j) = a.basis()(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.rank(); ++j) m(a.dim() + i, a.rank() + j) = b.basis()(i, j);
  return Lattice(m);
}

/// L ∩ V where V = {x : N x = 0} is a rational subspace given by its equations.
inline Lattice lattice_intersect_subspace(const Lattice& L, const IntMat& equations) {
  if (equations.rows() == 0) return L;
  IntMat K = integer_kernel(equations * L.basis());
  return Lattice(L.basis() * K);
}

}  // namespace semilin
