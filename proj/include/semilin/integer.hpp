#pragma once

// Integer points of copolyhedra: bounded enumeration and integer feasibility.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "semilin/context.hpp"
#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/polyhedra.hpp"

namespace semilin {

namespace detail {

/// levels[k] is the real projection of P onto coordinates 0..k.
struct FmChain {
  std::vector<CoPolyhedron> levels;

  explicit FmChain(const CoPolyhedron& P) {
    const std::size_t d = P.dim();
    levels.resize(d);
    if (d == 0) return;
    levels[d - 1] = P;
    for (std::size_t k = d - 1; k > 0; --k) levels[k - 1] = tighten(eliminate_coordinate(levels[k], k));
  }

  /// Integer range of coordinate k given the earlier coordinates; nullopt
  /// bounds mean unbounded, an empty range is reported as lo > hi.
  std::pair<std::optional<Int>, std::optional<Int>> range(std::size_t k, std::span<const Int> prefix) const {
    std::optional<Int> lo, hi;
    for (const auto& r : levels[k].ineqs()) {
      Int rhs = r.b;
      for (std::size_t i = 0; i < k; ++i) rhs -= r.a[i] * prefix[i];
      const Int& c = r.a[k];
      if (c == 0) {
        if (r.strict ? !(0 < rhs) : !(0 <= rhs)) return {Int(1), Int(0)};
        continue;
      }
      if (c > 0) {
        Int u = r.strict ? Int(ceil_div(rhs, c) - 1) : floor_div(rhs, c);
        if (!hi || u < *hi) hi = u;
      } else {
        Int l = r.strict ? Int(floor_div(rhs, c) + 1) : ceil_div(rhs, c);
        if (!lo || l > *lo) lo = l;
      }
    }
    return {lo, hi};
  }
};

/// Depth-first search over the chain; the visitor returns false to stop.
/// Values are tried outward from the middle of each range.
inline bool chain_search(const FmChain& chain, std::size_t d, const Options& opts,
                         const std::function<bool(const IntVec&)>& visit, bool lexicographic) {
  IntVec cur(d);
  std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
    if (k == d) return visit(cur);
    opts.check_deadline();
    auto [lo, hi] = chain.range(k, std::span<const Int>(cur.data(), k));
    if (!lo || !hi) throw Error("integer search: unbounded coordinate range");
    if (*lo > *hi) return true;
    if (lexicographic) {
      for (Int v = *lo; v <= *hi; ++v) {
        cur[k] = v;
        if (!rec(k + 1)) return false;
      }
      return true;
    }
    Int mid = floor_div(*lo + *hi, Int(2));
    for (Int step = 0;; ++step) {
      bool any = false;
      Int a = mid + step;
      if (a <= *hi) {
        any = true;
        cur[k] = a;
        if (!rec(k + 1)) return false;
      }
      Int b = mid - step - 1;
      if (b >= *lo) {
        any = true;
        cur[k] = b;
        if (!rec(k + 1)) return false;
      }
      if (!any) break;
    }
    return true;
  };
  return rec(0);
}

inline Int ceil_sqrt(const Int& x) {
  Int r;
  mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
  if (r * r < x) ++r;
  return r;
}

}  // namespace detail

/// Calls visit on every integer point of the bounded copolyhedron P in
/// lexicographic order; visit returns false to stop early.
inline void for_each_integer_point(const CoPolyhedron& P, const std::function<bool(const IntVec&)>& visit,
                                   const Options& opts = default_options()) {
  CoPolyhedron Q = tighten(P);
  if (Q.is_empty()) return;
  if (Q.dim() == 0) {
    visit(IntVec{});
    return;
  }
  if (!Q.is_bounded()) throw Error("integer_points: unbounded polyhedron");
  detail::FmChain chain(Q);
  detail::chain_search(chain, Q.dim(), opts, visit, true);
}

inline std::vector<IntVec> integer_points(const CoPolyhedron& P, const Options& opts = default_options()) {
  std::vector<IntVec> out;
  for_each_integer_point(P, [&](const IntVec& x) {
    out.push_back(x);
    return true;
  }, opts);
  return out;
}

/// Bound on the coordinates of some integer point of {A x <= b}, when one exists.
inline Int ilp_search_bound(const CoPolyhedron& P) {
  std::vector<Int> norms;
  for (const auto& r : P.ineqs()) {
    Int s = r.b * r.b;
    for (const auto& a : r.a) s += a * a;
    norms.push_back(detail::ceil_sqrt(s));
  }
  std::sort(norms.begin(), norms.end(), [](const Int& a, const Int& b) { return a > b; });
  const std::size_t k = std::min(norms.size(), P.dim() + 1);
  Int h = 1;
  for (std::size_t i = 0; i < k; ++i) h *= norms[i];
  return Int(static_cast<unsigned long>(P.dim() + 1)) * h;
}

/// Some integer point of P, or nullopt when P has none.
inline std::optional<IntVec> ilp_feasible(const CoPolyhedron& P, const Options& opts = default_options()) {
  CoPolyhedron Q = tighten(P);
  if (Q.is_empty()) return std::nullopt;
  const std::size_t d = Q.dim();
  if (d == 0) return IntVec{};

  auto eq = implicit_equalities(Q);
  if (!eq.empty()) {
    IntMat M(eq.size(), d);
    IntVec v(eq.size());
    for (std::size_t i = 0; i < eq.size(); ++i) {
      for (std::size_t j = 0; j < d; ++j) M(i, j) = eq[i].a[j];
      v[i] = eq[i].b;
    }
    auto x0 = solve_integer(M, v);
    if (!x0) return std::nullopt;
    IntMat K = integer_kernel(M);
    if (K.cols() == 0) {
      if (Q.contains(*x0)) return x0;
      return std::nullopt;
    }
    std::vector<LinIneq> rows;
    for (const auto& r : Q.ineqs()) {
      IntVec a(K.cols(), Int(0));
      for (std::size_t c = 0; c < K.cols(); ++c)
        for (std::size_t j = 0; j < d; ++j) a[c] += r.a[j] * K(j, c);
      rows.emplace_back(std::move(a), r.b - dot<Int>(r.a, *x0), r.strict);
    }
    auto z = ilp_feasible(CoPolyhedron(K.cols(), std::move(rows)), opts);
    if (!z) return std::nullopt;
    IntVec x = *x0;
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t c = 0; c < K.cols(); ++c) x[j] += K(j, c) * (*z)[c];
    return x;
  }

  const Int delta = ilp_search_bound(Q);
  std::vector<LinIneq> box;
  for (std::size_t i = 0; i < d; ++i) {
    IntVec e(d, Int(0));
    e[i] = 1;
    box.emplace_back(e, delta);
    e[i] = -1;
    box.emplace_back(e, delta);
  }
  CoPolyhedron B = Q.with(std::span<const LinIneq>(box));
  detail::FmChain chain(B);
  std::optional<IntVec> found;
  detail::chain_search(chain, d, opts, [&](const IntVec& x) {
    found = x;
    return false;
  }, false);
  return found;
}

}  // namespace semilin
