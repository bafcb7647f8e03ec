#pragma once

// Rational copolyhedra (polyhedra with some open facets) in H-representation.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/lp.hpp"

namespace semilin {

/// a.x <= b, or a.x < b when strict. Stored with coprime integer entries.
struct LinIneq {
  IntVec a;
  Int b;
  bool strict = false;

  LinIneq() = default;
  LinIneq(IntVec a_, Int b_, bool strict_ = false)
      : a(std::move(a_)), b(std::move(b_)), strict(strict_) {
    normalize();
  }

  /// Builds a row from rational data by clearing denominators.
  static LinIneq from_rational(std::span<const Rat> a, const Rat& b, bool strict = false) {
    RatVec all(a.begin(), a.end());
    all.push_back(b);
    IntVec ints = clear_denominators(all);
    Int rhs = ints.back();
    ints.pop_back();
    return LinIneq(std::move(ints), std::move(rhs), strict);
  }

  std::size_t dim() const noexcept { return a.size(); }
  bool is_constant() const { return is_zero(a); }
  /// For a constant row: whether 0 <= b (or 0 < b) holds.
  bool constant_truth() const { return strict ? b > 0 : b >= 0; }

  bool satisfied_by(std::span<const Int> x) const {
    Int s = dot<Int>(a, x);
    return strict ? s < b : s <= b;
  }
  bool satisfied_by(std::span<const Rat> x) const {
    Rat s = dot(std::span<const Int>(a), x);
    return strict ? s < b : s <= b;
  }

  /// Complement over the reals: not(a.x <= b) is -a.x < -b.
  LinIneq negated() const {
    IntVec na(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) na[i] = -a[i];
    return LinIneq(std::move(na), -b, !strict);
  }

  /// Complement over the integers, always weak: not(a.x <= b) is -a.x <= -b-1.
  LinIneq negated_integral() const {
    LinIneq w = floored();
    IntVec na(w.a.size());
    for (std::size_t i = 0; i < w.a.size(); ++i) na[i] = -w.a[i];
    return LinIneq(std::move(na), -w.b - 1, false);
  }

  /// Strict row a.x < b sharpened to a.x <= b - 1 (same integer points).
  LinIneq floored() const {
    if (!strict) return *this;
    return LinIneq(a, b - 1, false);
  }

  /// a.x <= b replaced by (a/g).x <= floor(b/g): the integer hull of one row.
  LinIneq tightened() const {
    LinIneq w = floored();
    Int g = content(w.a);
    if (g <= 1) return w;
    IntVec na(w.a.size());
    for (std::size_t i = 0; i < w.a.size(); ++i) na[i] = w.a[i] / g;
    return LinIneq(std::move(na), floor_div(w.b, g), false);
  }

  /// Row describing {x : (x - v) satisfies this}.
  LinIneq translated(std::span<const Int> v) const { return LinIneq(a, b + dot<Int>(a, v), strict); }

  auto key() const { return std::tie(a, b, strict); }
  bool operator==(const LinIneq& o) const { return key() == o.key(); }
  bool operator<(const LinIneq& o) const { return key() < o.key(); }

private:
  void normalize() {
    Int g = gcd(content(a), b);
    if (g > 1) {
      for (auto& x : a) x /= g;
      b /= g;
    }
    if (is_zero(a)) {
      b = constant_truth() ? Int(0) : Int(-1);
      strict = false;
    }
  }
};

/// Affine map y -> linear.y + constant with rational coefficients.
struct AffineFn {
  RatVec linear;
  Rat constant;

  Rat operator()(std::span<const Rat> y) const {
    Rat s = constant;
    for (std::size_t i = 0; i < linear.size(); ++i) s += linear[i] * y[i];
    return s;
  }
  Rat operator()(std::span<const Int> y) const {
    Rat s = constant;
    for (std::size_t i = 0; i < linear.size(); ++i) s += linear[i] * y[i];
    return s;
  }
  AffineFn operator-(const AffineFn& o) const {
    AffineFn r{linear, constant - o.constant};
    for (std::size_t i = 0; i < linear.size(); ++i) r.linear[i] -= o.linear[i];
    return r;
  }
  bool operator==(const AffineFn&) const = default;
};

/// Row for f(y) <= 0 (or < 0).
inline LinIneq nonpositive(const AffineFn& f, bool strict) {
  return LinIneq::from_rational(f.linear, -f.constant, strict);
}

/// Finite list of weak/strict integer inequalities over R^dim.
///
/// Rows are kept in a canonical sorted order without duplicates or true
/// constant rows; an infeasible constant row collapses the whole system to
/// the single row 0 <= -1.
class CoPolyhedron {
public:
  CoPolyhedron() = default;
  explicit CoPolyhedron(std::size_t dim) : dim_(dim) {}
  CoPolyhedron(std::size_t dim, std::vector<LinIneq> rows) : dim_(dim), rows_(std::move(rows)) {
    normalize();
  }

  static CoPolyhedron whole(std::size_t dim) { return CoPolyhedron(dim); }
  static CoPolyhedron empty(std::size_t dim) {
    return CoPolyhedron(dim, {LinIneq(IntVec(dim, Int(0)), Int(-1))});
  }
  /// The single integer point p as a closed polytope.
  static CoPolyhedron point(std::span<const Int> p) {
    std::vector<LinIneq> rows;
    for (std::size_t i = 0; i < p.size(); ++i) {
      IntVec e(p.size(), Int(0));
      e[i] = 1;
      rows.emplace_back(e, p[i]);
      e[i] = -1;
      rows.emplace_back(e, -p[i]);
    }
    return CoPolyhedron(p.size(), std::move(rows));
  }
  /// lo <= x <= hi componentwise.
  static CoPolyhedron box(std::span<const Int> lo, std::span<const Int> hi) {
    std::vector<LinIneq> rows;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      IntVec e(lo.size(), Int(0));
      e[i] = 1;
      rows.emplace_back(e, hi[i]);
      e[i] = -1;
      rows.emplace_back(e, -lo[i]);
    }
    return CoPolyhedron(lo.size(), std::move(rows));
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<LinIneq>& ineqs() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  bool trivially_empty() const { return rows_.size() == 1 && rows_[0].is_constant(); }

  bool weak_only() const {
    return std::none_of(rows_.begin(), rows_.end(), [](const LinIneq& r) { return r.strict; });
  }

  bool contains(std::span<const Int> x) const {
    check_dim(x.size());
    return std::all_of(rows_.begin(), rows_.end(), [&](const LinIneq& r) { return r.satisfied_by(x); });
  }
  bool contains(std::span<const Rat> x) const {
    check_dim(x.size());
    return std::all_of(rows_.begin(), rows_.end(), [&](const LinIneq& r) { return r.satisfied_by(x); });
  }

  /// Some real point of the set, honoring strict rows.
  std::optional<RatVec> feasible_point() const {
    if (trivially_empty()) return std::nullopt;
    auto [A, b] = lp_rows();
    std::vector<bool> strict;
    for (const auto& r : rows_) strict.push_back(r.strict);
    return lp_feasible_point(A, b, strict, dim_);
  }

  bool is_empty() const { return !feasible_point().has_value(); }

  /// Closure rows as rational LP data.
  std::pair<std::vector<RatVec>, RatVec> lp_rows() const {
    std::vector<RatVec> A;
    RatVec b;
    A.reserve(rows_.size());
    for (const auto& r : rows_) {
      A.push_back(to_rat(r.a));
      b.push_back(r.b);
    }
    return {std::move(A), std::move(b)};
  }

  /// Maximum of c.x over the closure.
  LpResult maximize(std::span<const Rat> c) const {
    auto [A, b] = lp_rows();
    return lp_maximize(A, b, RatVec(c.begin(), c.end()));
  }
  LpResult minimize(std::span<const Rat> c) const {
    auto [A, b] = lp_rows();
    return lp_minimize(A, b, RatVec(c.begin(), c.end()));
  }

  /// Whether the closure is bounded (empty sets count as bounded).
  bool is_bounded() const {
    if (is_empty()) return true;
    for (std::size_t i = 0; i < dim_; ++i)
      for (int s : {1, -1}) {
        RatVec c(dim_, Rat(0));
        c[i] = s;
        if (maximize(c).status == LpStatus::unbounded) return false;
      }
    return true;
  }

  CoPolyhedron with(LinIneq row) const {
    auto rows = rows_;
    rows.push_back(std::move(row));
    return CoPolyhedron(dim_, std::move(rows));
  }

  CoPolyhedron with(std::span<const LinIneq> more) const {
    auto rows = rows_;
    rows.insert(rows.end(), more.begin(), more.end());
    return CoPolyhedron(dim_, std::move(rows));
  }

  /// Image under the coordinate permutation (new coordinate i = old order[i]).
  CoPolyhedron permuted(std::span<const std::size_t> order) const {
    std::vector<LinIneq> rows;
    for (const auto& r : rows_) {
      IntVec a(dim_);
      for (std::size_t i = 0; i < dim_; ++i) a[i] = r.a[order[i]];
      rows.emplace_back(std::move(a), r.b, r.strict);
    }
    return CoPolyhedron(dim_, std::move(rows));
  }

  bool operator==(const CoPolyhedron& o) const = default;

private:
  void check_dim(std::size_t n) const {
    if (n != dim_) throw DimensionError("point dimension does not match polyhedron");
  }

  void normalize() {
    // Keep only the tightest row per primitive direction.
    std::map<IntVec, std::pair<Rat, std::size_t>> best;
    std::vector<LinIneq> kept;
    for (auto& r : rows_) {
      if (r.a.size() != dim_) throw DimensionError("inequality dimension does not match polyhedron");
      if (r.is_constant()) {
        if (r.constant_truth()) continue;
        rows_ = {LinIneq(IntVec(dim_, Int(0)), Int(-1))};
        return;
      }
      Int g = content(r.a);
      IntVec dir = r.a;
      for (auto& x : dir) x /= g;
      Rat bound = make_rat(r.b, g);
      auto it = best.find(dir);
      if (it == best.end()) {
        best.emplace(dir, std::make_pair(bound, kept.size()));
        kept.push_back(r);
        continue;
      }
      auto& [old_bound, idx] = it->second;
      if (bound < old_bound || (bound == old_bound && r.strict && !kept[idx].strict)) {
        old_bound = bound;
        kept[idx] = r;
      }
    }
    // Opposite parallel rows that cannot both hold make the system empty.
    for (const auto& [dir, v] : best) {
      IntVec neg(dir.size());
      for (std::size_t i = 0; i < dir.size(); ++i) neg[i] = -dir[i];
      auto it = best.find(neg);
      if (it == best.end()) continue;
      Rat sum = v.first + it->second.first;  // dir.x <= u and -dir.x <= w  =>  -w <= dir.x <= u
      bool strict = kept[v.second].strict || kept[it->second.second].strict;
      if (sum < 0 || (sum == 0 && strict)) {
        rows_ = {LinIneq(IntVec(dim_, Int(0)), Int(-1))};
        return;
      }
    }
    std::sort(kept.begin(), kept.end());
    rows_ = std::move(kept);
  }

  std::size_t dim_ = 0;
  std::vector<LinIneq> rows_;
};

inline CoPolyhedron floor(const CoPolyhedron& P) {
  std::vector<LinIneq> rows;
  for (const auto& r : P.ineqs()) rows.push_back(r.floored());
  return CoPolyhedron(P.dim(), std::move(rows));
}

/// Row-wise integer tightening; same integer points as the input.
inline CoPolyhedron tighten(const CoPolyhedron& P) {
  std::vector<LinIneq> rows;
  for (const auto& r : P.ineqs()) rows.push_back(r.tightened());
  return CoPolyhedron(P.dim(), std::move(rows));
}

inline CoPolyhedron intersect(const CoPolyhedron& a, const CoPolyhedron& b) {
  if (a.dim() != b.dim()) throw DimensionError("intersect: dimension mismatch");
  return a.with(std::span<const LinIneq>(b.ineqs()));
}

/// Q + v.
inline CoPolyhedron translate(const CoPolyhedron& Q, std::span<const Int> v) {
  if (v.size() != Q.dim()) throw DimensionError("translate: dimension mismatch");
  std::vector<LinIneq> rows;
  for (const auto& r : Q.ineqs()) rows.push_back(r.translated(v));
  return CoPolyhedron(Q.dim(), std::move(rows));
}

/// The homogenized weak system {A x <= 0}.
inline CoPolyhedron recession_cone(const CoPolyhedron& Q) {
  std::vector<LinIneq> rows;
  for (const auto& r : Q.ineqs())
    if (!r.is_constant()) rows.emplace_back(r.a, Int(0), false);
  return CoPolyhedron(Q.dim(), std::move(rows));
}

/// Rows of Q that hold with equality on all of Q (Q assumed nonempty).
inline std::vector<LinIneq> implicit_equalities(const CoPolyhedron& Q) {
  std::vector<LinIneq> eq;
  const auto& rows = Q.ineqs();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].strict) continue;
    std::vector<LinIneq> probe = rows;
    probe[i].strict = true;
    if (CoPolyhedron(Q.dim(), std::move(probe)).is_empty()) eq.push_back(rows[i]);
  }
  return eq;
}

/// Dimension of the affine hull; -1 for the empty set.
inline long affine_dim(const CoPolyhedron& Q) {
  if (Q.is_empty()) return -1;
  auto eq = implicit_equalities(Q);
  std::vector<IntVec> a;
  for (const auto& r : eq) a.push_back(r.a);
  return static_cast<long>(Q.dim()) - static_cast<long>(rank(a, Q.dim()));
}

/// Drops rows implied by the others (LP test). Infeasible input collapses to
/// the canonical empty system.
inline CoPolyhedron remove_redundant(const CoPolyhedron& P) {
  if (P.is_empty()) return CoPolyhedron::empty(P.dim());
  std::vector<LinIneq> rows = P.ineqs();
  for (std::size_t i = rows.size(); i-- > 0;) {
    std::vector<RatVec> A;
    RatVec b;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j == i) continue;
      A.push_back(to_rat(rows[j].a));
      b.push_back(rows[j].b);
    }
    auto r = lp_maximize(A, b, to_rat(rows[i].a));
    if (r.status != LpStatus::optimal) continue;
    bool redundant = rows[i].strict ? r.value < rows[i].b : r.value <= rows[i].b;
    if (redundant) rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return CoPolyhedron(P.dim(), std::move(rows));
}

/// Real projection eliminating coordinate k (the result lives in dim-1).
inline CoPolyhedron eliminate_coordinate(const CoPolyhedron& P, std::size_t k,
                                         bool prune_redundant = true) {
  if (k >= P.dim()) throw DimensionError("eliminate_coordinate: coordinate out of range");
  auto drop = [&](const IntVec& a) {
    IntVec out;
    out.reserve(a.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != k) out.push_back(a[i]);
    return out;
  };
  if (P.trivially_empty()) return CoPolyhedron::empty(P.dim() - 1);
  std::vector<LinIneq> lower, upper, rows;
  for (const auto& r : P.ineqs()) {
    if (r.a[k] < 0)
      lower.push_back(r);
    else if (r.a[k] > 0)
      upper.push_back(r);
    else
      rows.emplace_back(drop(r.a), r.b, r.strict);
  }
  for (const auto& lo : lower)
    for (const auto& up : upper) {
      Int fl = up.a[k], fu = -lo.a[k];
      IntVec a(P.dim());
      for (std::size_t i = 0; i < P.dim(); ++i) a[i] = lo.a[i] * fl + up.a[i] * fu;
      rows.emplace_back(drop(a), lo.b * fl + up.b * fu, lo.strict || up.strict);
    }
  CoPolyhedron R(P.dim() - 1, std::move(rows));
  return prune_redundant ? remove_redundant(R) : R;
}

/// Real projection onto the coordinates in `keep` (in that order).
inline CoPolyhedron project_onto(const CoPolyhedron& P, std::span<const std::size_t> keep) {
  std::vector<bool> kept(P.dim(), false);
  for (auto k : keep) kept[k] = true;
  std::vector<std::size_t> order(keep.begin(), keep.end());
  for (std::size_t i = 0; i < P.dim(); ++i)
    if (!kept[i]) order.push_back(i);
  CoPolyhedron Q = P.permuted(order);
  while (Q.dim() > keep.size()) Q = eliminate_coordinate(Q, Q.dim() - 1);
  return Q;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin on the first coordinate with fiber bookkeeping

struct FmPiece {
  CoPolyhedron region;  // over y = (x_2, ..., x_{n+1})
  AffineFn lower;       // alpha: the active lower bound on x_1
  AffineFn upper;       // beta: the active upper bound on x_1
};

struct FmResult {
  CoPolyhedron projection;  // R
  bool infinite_fibers = false;
  std::vector<FmPiece> pieces;  // partition of R, empty when fibers are infinite
  std::vector<AffineFn> lower_bounds, upper_bounds;
};

/// Splits R = proj(Q) into pieces on which the fiber over y is
/// [alpha_j(y), beta_j(y)]. Ties between equal bounds go to the smaller row
/// index, which keeps the pieces pairwise disjoint.
inline FmResult fm_eliminate_first(const CoPolyhedron& Q) {
  if (Q.dim() == 0) throw DimensionError("fm_eliminate_first: dimension must be at least 1");
  if (!Q.weak_only()) throw DimensionError("fm_eliminate_first: weak-only system required");
  const std::size_t n = Q.dim() - 1;
  FmResult res;
  std::vector<LinIneq> rest;
  for (const auto& r : Q.ineqs()) {
    const Int& a0 = r.a[0];
    if (a0 == 0) {
      rest.emplace_back(IntVec(r.a.begin() + 1, r.a.end()), r.b, false);
      continue;
    }
    // a0 x1 + a'.y <= b  <=>  x1 <= (b - a'.y)/a0 (a0 > 0) or x1 >= (a'.y - b)/(-a0)
    AffineFn f;
    f.linear.resize(n);
    Rat s = make_rat(Int(1), a0 > 0 ? Int(a0) : Int(-a0));
    if (a0 > 0) {
      for (std::size_t i = 0; i < n; ++i) f.linear[i] = -r.a[i + 1] * s;
      f.constant = r.b * s;
      res.upper_bounds.push_back(f);
    } else {
      for (std::size_t i = 0; i < n; ++i) f.linear[i] = r.a[i + 1] * s;
      f.constant = -r.b * s;
      res.lower_bounds.push_back(f);
    }
  }
  const auto& L = res.lower_bounds;
  const auto& U = res.upper_bounds;
  if (L.empty() || U.empty()) {
    res.infinite_fibers = true;
    res.projection = remove_redundant(CoPolyhedron(n, rest));
    return res;
  }
  std::vector<LinIneq> rrows = rest;
  for (const auto& lo : L)
    for (const auto& up : U) rrows.push_back(nonpositive(lo - up, false));
  res.projection = remove_redundant(CoPolyhedron(n, rrows));
  if (res.projection.is_empty()) return res;

  for (std::size_t i = 0; i < L.size(); ++i) {
    std::vector<LinIneq> sel_lower;
    for (std::size_t k = 0; k < L.size(); ++k)
      if (k != i) sel_lower.push_back(nonpositive(L[k] - L[i], k < i));
    CoPolyhedron with_lower = res.projection.with(std::span<const LinIneq>(sel_lower));
    if (with_lower.is_empty()) continue;
    for (std::size_t j = 0; j < U.size(); ++j) {
      std::vector<LinIneq> sel;
      for (std::size_t k = 0; k < U.size(); ++k)
        if (k != j) sel.push_back(nonpositive(U[j] - U[k], k < j));
      CoPolyhedron piece = with_lower.with(std::span<const LinIneq>(sel));
      if (piece.is_empty()) continue;
      res.pieces.push_back({remove_redundant(piece), L[i], U[j]});
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Disjoint refinement

struct RefinedCell {
  CoPolyhedron poly;
  std::vector<std::size_t> members;  // indices of the inputs containing this cell
};

namespace detail {

inline LinIneq complement_row(const LinIneq& r, bool integral) {
  return integral ? r.negated_integral() : r.negated();
}

/// Nonempty pieces of C \ P as a disjoint list.
inline std::vector<CoPolyhedron> subtract(const CoPolyhedron& C, const CoPolyhedron& P,
                                          bool integral) {
  std::vector<CoPolyhedron> out;
  CoPolyhedron acc = C;
  for (const auto& r : P.ineqs()) {
    if (r.is_constant()) return {C};  // P empty
    CoPolyhedron outside = acc.with(complement_row(r, integral));
    if (!outside.is_empty()) out.push_back(outside);
    acc = acc.with(integral ? r.floored() : r);
    if (acc.is_empty()) break;
  }
  return out;
}

}  // namespace detail

/// Splits the union of the inputs into pairwise-disjoint cells, each lying
/// inside every input it meets. With `integral` set, complements are taken
/// over the integers (a.x >= b + 1), which preserves integer points only.
inline std::vector<RefinedCell> disjoint_refine_tagged(const std::vector<CoPolyhedron>& polys,
                                                       bool integral = false) {
  std::vector<RefinedCell> cells;
  for (std::size_t k = 0; k < polys.size(); ++k) {
    const CoPolyhedron P = integral ? floor(polys[k]) : polys[k];
    if (k > 0 && P.dim() != polys[0].dim()) throw DimensionError("disjoint_refine: dimension mismatch");
    if (P.is_empty()) continue;
    std::vector<RefinedCell> next;
    for (auto& c : cells) {
      CoPolyhedron inside = intersect(c.poly, P);
      if (!inside.is_empty()) {
        auto mem = c.members;
        mem.push_back(k);
        next.push_back({inside, std::move(mem)});
      }
      for (auto& piece : detail::subtract(c.poly, P, integral)) next.push_back({piece, c.members});
    }
    std::vector<CoPolyhedron> remainder{P};
    for (std::size_t j = 0; j < k && !remainder.empty(); ++j) {
      const CoPolyhedron prev = integral ? floor(polys[j]) : polys[j];
      std::vector<CoPolyhedron> r2;
      for (const auto& piece : remainder)
        for (auto& q : detail::subtract(piece, prev, integral)) r2.push_back(std::move(q));
      remainder = std::move(r2);
    }
    for (auto& piece : remainder) next.push_back({piece, {k}});
    cells = std::move(next);
  }
  for (auto& c : cells) c.poly = remove_redundant(c.poly);
  return cells;
}

inline std::vector<CoPolyhedron> disjoint_refine(const std::vector<CoPolyhedron>& polys) {
  std::vector<CoPolyhedron> out;
  for (auto& c : disjoint_refine_tagged(polys)) out.push_back(std::move(c.poly));
  return out;
}

/// Disjoint cells covering R^dim minus the union of the inputs.
inline std::vector<CoPolyhedron> complement_cells(std::size_t dim,
                                                  const std::vector<CoPolyhedron>& polys,
                                                  bool integral = false) {
  std::vector<CoPolyhedron> rest{CoPolyhedron::whole(dim)};
  for (const auto& P0 : polys) {
    const CoPolyhedron P = integral ? floor(P0) : P0;
    std::vector<CoPolyhedron> next;
    for (const auto& c : rest)
      for (auto& q : detail::subtract(c, P, integral)) next.push_back(std::move(q));
    rest = std::move(next);
  }
  for (auto& c : rest) c = remove_redundant(c);
  return rest;
}

}  // namespace semilin
