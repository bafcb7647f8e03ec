#pragma once

// Patterns, patterned polyhedra and semilinear sets, with projection and complement.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "semilin/context.hpp"
#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/integer.hpp"
#include "semilin/lattice.hpp"
#include "semilin/polyhedra.hpp"

namespace semilin {

/// Union of cosets c + period, for the listed representatives c.
class Pattern {
public:
  Pattern() = default;
  Pattern(Lattice period, const std::vector<IntVec>& reps) : period_(std::move(period)) {
    if (!period_.full_rank()) throw DimensionError("pattern period must be full rank");
    for (const auto& c : reps) {
      if (c.size() != period_.dim()) throw DimensionError("coset dimension does not match period");
      cosets_.push_back(period_.reduce(c));
    }
    std::sort(cosets_.begin(), cosets_.end());
    cosets_.erase(std::unique(cosets_.begin(), cosets_.end()), cosets_.end());
  }

  /// Z^n: every integer point.
  static Pattern all(std::size_t n) { return Pattern(Lattice::integer(n), {IntVec(n, Int(0))}); }
  static Pattern none(std::size_t n) { return Pattern(Lattice::integer(n), {}); }

  std::size_t dim() const noexcept { return period_.dim(); }
  const Lattice& period() const noexcept { return period_; }
  const std::vector<IntVec>& cosets() const noexcept { return cosets_; }
  bool empty() const noexcept { return cosets_.empty(); }
  bool is_all() const { return Int(static_cast<unsigned long>(cosets_.size())) == period_.index(); }

  bool contains(std::span<const Int> v) const {
    if (cosets_.empty()) return false;
    return std::binary_search(cosets_.begin(), cosets_.end(), period_.reduce(v));
  }

  /// Same period, the other cosets.
  Pattern complemented(const Options& opts = default_options()) const {
    check_index(opts);
    std::vector<IntVec> rest;
    period_.for_each_coset([&](const IntVec& c) {
      if (!std::binary_search(cosets_.begin(), cosets_.end(), c)) rest.push_back(c);
      return true;
    });
    return Pattern(period_, rest);
  }

  Pattern permuted(std::span<const std::size_t> order) const {
    std::vector<IntVec> reps;
    for (const auto& c : cosets_) {
      IntVec p(c.size());
      for (std::size_t i = 0; i < c.size(); ++i) p[i] = c[order[i]];
      reps.push_back(std::move(p));
    }
    return Pattern(period_.permuted(order), reps);
  }

  void check_index(const Options& opts) const {
    if (period_.index() > Int(static_cast<unsigned long>(opts.max_cosets)))
      throw ResourceError("pattern too large: period index exceeds cap of " + std::to_string(opts.max_cosets) +
                          " cosets");
  }

  bool operator==(const Pattern& o) const { return period_ == o.period_ && cosets_ == o.cosets_; }

private:
  Lattice period_;
  std::vector<IntVec> cosets_;
};

struct PatternedPolyhedron {
  CoPolyhedron poly;
  Pattern pattern;

  bool contains(std::span<const Int> v) const { return poly.contains(v) && pattern.contains(v); }
  bool operator==(const PatternedPolyhedron&) const = default;
};

struct SetStats {
  Int psi;
  Int eta;
};

/// Disjoint union of patterned polyhedra.
class SemilinearSet {
public:
  struct trusted_t {};
  static constexpr trusted_t trusted{};

  SemilinearSet() = default;
  explicit SemilinearSet(std::size_t dim) : dim_(dim) {}

  /// Validates dimensions and pairwise disjointness of the piece polyhedra.
  SemilinearSet(std::size_t dim, std::vector<PatternedPolyhedron> pieces) : dim_(dim), pieces_(std::move(pieces)) {
    check_dims();
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      for (std::size_t j = i + 1; j < pieces_.size(); ++j)
        if (!intersect(pieces_[i].poly, pieces_[j].poly).is_empty())
          throw DimensionError("semilinear pieces must be pairwise disjoint");
    canonicalize();
  }

  /// For callers that already guarantee disjointness.
  SemilinearSet(std::size_t dim, std::vector<PatternedPolyhedron> pieces, trusted_t)
      : dim_(dim), pieces_(std::move(pieces)) {
    check_dims();
    canonicalize();
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<PatternedPolyhedron>& pieces() const noexcept { return pieces_; }
  bool empty() const noexcept { return pieces_.empty(); }

  bool contains(std::span<const Int> v) const {
    if (v.size() != dim_) throw DimensionError("member: dimension mismatch");
    return std::any_of(pieces_.begin(), pieces_.end(), [&](const PatternedPolyhedron& p) { return p.contains(v); });
  }

  SemilinearSet permuted(std::span<const std::size_t> order) const {
    std::vector<PatternedPolyhedron> out;
    for (const auto& p : pieces_) out.push_back({p.poly.permuted(order), p.pattern.permuted(order)});
    return SemilinearSet(dim_, std::move(out), trusted);
  }

  bool operator==(const SemilinearSet&) const = default;

private:
  void check_dims() const {
    for (const auto& p : pieces_)
      if (p.poly.dim() != dim_ || p.pattern.dim() != dim_)
        throw DimensionError("piece dimension does not match the set");
  }
  void canonicalize() {
    std::erase_if(pieces_, [](const PatternedPolyhedron& p) { return p.pattern.empty(); });
    std::sort(pieces_.begin(), pieces_.end(), [](const PatternedPolyhedron& a, const PatternedPolyhedron& b) {
      if (a.poly.ineqs() != b.poly.ineqs()) return a.poly.ineqs() < b.poly.ineqs();
      const auto& ba = a.pattern.period().basis();
      const auto& bb = b.pattern.period().basis();
      if (!(ba == bb)) return ba.columns() < bb.columns();
      return a.pattern.cosets() < b.pattern.cosets();
    });
  }

  std::size_t dim_ = 0;
  std::vector<PatternedPolyhedron> pieces_;
};

inline bool member(const SemilinearSet& X, std::span<const Int> v) { return X.contains(v); }

namespace detail {

inline Int bit_length(const Int& x) {
  Int a = abs(x);
  return Int(static_cast<unsigned long>(a == 0 ? 1 : mpz_sizeinbase(a.get_mpz_t(), 2) + 1));
}

}  // namespace detail

inline SetStats stats(const SemilinearSet& X) {
  SetStats s{0, 0};
  for (const auto& p : X.pieces()) {
    s.eta += static_cast<unsigned long>(p.poly.size());
    for (const auto& r : p.poly.ineqs()) {
      s.psi += detail::bit_length(r.b);
      for (const auto& a : r.a) s.psi += detail::bit_length(a);
    }
    const auto& B = p.pattern.period().basis();
    for (std::size_t i = 0; i < B.rows(); ++i)
      for (std::size_t j = 0; j < B.cols(); ++j) s.psi += detail::bit_length(B(i, j));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Pattern simplification

namespace detail {

/// Coset differences g with S + g = S (mod period), as generators.
inline std::vector<IntVec> stabilizer_generators(const Lattice& period, const std::vector<IntVec>& S) {
  std::vector<IntVec> gens;
  if (S.size() < 2 || S.size() > 3000) return gens;
  std::set<IntVec> lookup(S.begin(), S.end());
  const IntVec& s0 = S.front();
  for (std::size_t k = 1; k < S.size(); ++k) {
    IntVec g(s0.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = S[k][i] - s0[i];
    bool ok = true;
    for (const auto& t : S) {
      IntVec u(t.size());
      for (std::size_t i = 0; i < u.size(); ++i) u[i] = t[i] + g[i];
      if (!lookup.count(period.reduce(u))) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    gens.push_back(std::move(g));
  }
  return gens;
}

inline Lattice coarsen(const Lattice& period, const std::vector<IntVec>& extra) {
  if (extra.empty()) return period;
  auto cols = period.generators();
  cols.insert(cols.end(), extra.begin(), extra.end());
  return Lattice::from_columns(cols, period.dim());
}

}  // namespace detail

/// Smallest description found of the pattern that contains the `members`
/// cosets and avoids the `nonmembers` cosets of `period`. When nonmembers is
/// null every other coset counts as a nonmember; otherwise cosets in neither
/// list are free to go either way.
inline Pattern simplify_pattern(const Lattice& period, const std::vector<IntVec>& members,
                                const std::vector<IntVec>* nonmembers, const Options& opts = default_options()) {
  const std::size_t n = period.dim();
  Pattern exact(period, members);
  if (exact.empty()) return exact;
  if (exact.is_all()) return Pattern::all(n);
  if (nonmembers && nonmembers->empty()) return Pattern::all(n);

  Lattice ta = detail::coarsen(period, detail::stabilizer_generators(period, exact.cosets()));
  Pattern best(ta, exact.cosets());
  if (best.is_all()) return Pattern::all(n);
  if (!nonmembers) return best;

  Pattern excluded(period, *nonmembers);
  Lattice tb = detail::coarsen(period, detail::stabilizer_generators(period, excluded.cosets()));
  if (tb.index() > Int(static_cast<unsigned long>(opts.max_cosets))) return best;
  Pattern other = Pattern(tb, excluded.cosets()).complemented(opts);
  if (other.cosets().size() < best.cosets().size()) return other;
  return best;
}

// ---------------------------------------------------------------------------
// Projection

/// Image of a pattern under dropping the first coordinate.
inline Pattern project_pattern(const Pattern& p) {
  Lattice period = lattice_project_drop_first(p.period());
  std::vector<IntVec> reps;
  for (const auto& c : p.cosets()) reps.emplace_back(c.begin() + 1, c.end());
  return Pattern(period, reps);
}

/// Per-piece record of the big-fiber region produced by a projection step.
struct ProjectStepTrace {
  std::vector<std::optional<PatternedPolyhedron>> big_fiber;
};

namespace detail {

/// Whether some integer x1 in the fiber over y gives (x1, y) in the pattern.
inline bool fiber_hits(const Pattern& pat, const AffineFn& alpha, const AffineFn& beta, const IntVec& y) {
  Int lo = ceil_rat(alpha(std::span<const Int>(y)));
  Int hi = floor_rat(beta(std::span<const Int>(y)));
  IntVec p(y.size() + 1);
  std::copy(y.begin(), y.end(), p.begin() + 1);
  for (Int x = lo; x <= hi; ++x) {
    p[0] = x;
    if (pat.contains(p)) return true;
  }
  return false;
}

/// Equations of the linear span of R's recession cone, and the HNF of that
/// system: the first `rank` columns of U complete the span to a basis of Z^n.
inline HnfResult recession_frame(const CoPolyhedron& R, std::vector<IntVec>& eqs) {
  eqs.clear();
  for (const auto& r : implicit_equalities(recession_cone(R))) eqs.push_back(r.a);
  return hnf(IntMat::from_rows(eqs, R.dim()));
}

/// Period under which no two integer points of the bounded polyhedron R are
/// congruent: {y : psi_k . y = 0 mod M_k} for n independent facet normals
/// psi_k, each M_k past the width of R along psi_k and divisible by |det psi|.
inline Lattice bounded_period(const CoPolyhedron& R) {
  const std::size_t n = R.dim();
  std::vector<IntVec> cand;
  for (const auto& r : R.ineqs()) {
    IntVec a = primitive(r.a);
    IntVec na = a;
    for (auto& x : na) x = -x;
    if (std::find(cand.begin(), cand.end(), a) == cand.end() && std::find(cand.begin(), cand.end(), na) == cand.end())
      cand.push_back(std::move(a));
  }
  for (std::size_t k = 0; k < n; ++k) {
    IntVec e(n, Int(0));
    e[k] = 1;
    if (std::find(cand.begin(), cand.end(), e) == cand.end()) cand.push_back(std::move(e));
  }
  std::vector<Int> span(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    RatVec c = to_rat(cand[i]);
    span[i] = floor_rat(R.maximize(c).value - R.minimize(c).value) + 1;
  }

  std::optional<Lattice> best;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (pick.size() == n) {
      std::vector<IntVec> rows;
      for (auto i : pick) rows.push_back(cand[i]);
      IntMat Psi = IntMat::from_rows(rows, n);
      Int D = abs(determinant(Psi));
      if (D == 0) return;
      RatMat inv(n, n);
      RatMat Pr = to_rat(Psi);
      for (std::size_t k = 0; k < n; ++k) {
        RatVec e(n, Rat(0));
        e[k] = 1;
        RatVec col = *solve_square(Pr, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, k) = col[i];
      }
      IntMat B(n, n);
      for (std::size_t k = 0; k < n; ++k) {
        Int M = D * ceil_div(span[pick[k]], D);
        for (std::size_t i = 0; i < n; ++i) {
          Rat v = inv(i, k) * Rat(M);
          B(i, k) = v.get_num();
        }
      }
      Lattice L(B);
      if (!best || L.index() < best->index()) best = std::move(L);
      return;
    }
    for (std::size_t i = from; i < cand.size(); ++i) {
      pick.push_back(i);
      choose(i + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return *best;
}

/// `along` (a lattice inside the recession span of R) plus the complementary
/// basis directions scaled past the width of R. Two integer points of R in
/// one coset of the result differ by an element of `along`.
inline Lattice slab_period(const CoPolyhedron& R, const HnfResult& frame, const std::vector<IntVec>& along) {
  const std::size_t n = R.dim();
  if (frame.rank == n) return bounded_period(R);
  std::vector<IntVec> cols = along;
  if (frame.rank > 0) {
    RatMat Ut = to_rat(frame.U).transpose();
    for (std::size_t k = 0; k < frame.rank; ++k) {
      RatVec e(n, Rat(0));
      e[k] = 1;
      RatVec phi = *solve_square(Ut, e);  // row k of U^{-1}
      Int M = floor_rat(R.maximize(phi).value - R.minimize(phi).value) + 1;
      IntVec u(n);
      for (std::size_t i = 0; i < n; ++i) u[i] = frame.U(i, k) * M;
      cols.push_back(std::move(u));
    }
  }
  Lattice period = Lattice::from_columns(cols, n);
  if (!period.full_rank()) throw Error("internal: slab period is not full rank");
  return period;
}

/// Sorts the cosets of `period` that meet R into members and nonmembers,
/// judging each by one witness point.
template <class Member>
void probe_cosets(const CoPolyhedron& R, const Lattice& period, Member&& member, std::vector<IntVec>& in,
                  std::vector<IntVec>& out, const Options& opts) {
  const std::size_t n = R.dim();
  if (period.index() > Int(static_cast<unsigned long>(opts.max_cosets)))
    throw ResourceError("pattern too large: period index exceeds cap of " + std::to_string(opts.max_cosets) +
                        " cosets");
  if (R.is_bounded()) {
    for_each_integer_point(R, [&](const IntVec& y) {
      opts.check_deadline();
      (member(y) ? in : out).push_back(y);
      return true;
    }, opts);
    return;
  }
  const IntMat& B = period.basis();
  period.for_each_coset([&](const IntVec& c) {
    opts.check_deadline();
    std::vector<LinIneq> rows;
    for (const auto& r : R.ineqs()) {
      IntVec a(n, Int(0));
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) a[j] += r.a[i] * B(i, j);
      rows.emplace_back(std::move(a), r.b - dot<Int>(r.a, c), r.strict);
    }
    auto z = ilp_feasible(CoPolyhedron(n, std::move(rows)), opts);
    if (!z) return true;
    IntVec y = c;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) y[i] += B(i, j) * (*z)[j];
    (member(y) ? in : out).push_back(c);
    return true;
  });
}

/// Coset count up to which a thin piece is resolved as a single piece by probing.
inline constexpr unsigned long kProbeLimit = 20000;

/// Image of the integer points of R under a patterned fiber [alpha, beta]
/// shorter than ell = ell(pat.period()). Returns disjoint pieces inside R.
inline std::vector<PatternedPolyhedron> thin_piece_image(const CoPolyhedron& R, const AffineFn& alpha,
                                                         const AffineFn& beta, const Pattern& pat, const Int& l,
                                                         const Options& opts) {
  const std::size_t n = R.dim();
  auto hits = [&](const IntVec& y) { return fiber_hits(pat, alpha, beta, y); };
  if (n == 0) {
    if (hits(IntVec{})) return {{R, Pattern::all(0)}};
    return {};
  }

  // Translations d with (alpha~ . d, d) in Lambda carry fibers onto fibers.
  RatVec graph(n + 1);
  graph[0] = 1;
  for (std::size_t j = 0; j < n; ++j) graph[j + 1] = -alpha.linear[j];
  const Lattice shifts = lattice_project_drop_first(
      lattice_intersect_subspace(pat.period(), IntMat::from_rows({clear_denominators(graph)}, n + 1)));

  std::vector<IntVec> eqs;
  const auto frame = recession_frame(R, eqs);
  const Lattice slab =
      slab_period(R, frame, lattice_intersect_subspace(shifts, IntMat::from_rows(eqs, n)).generators());

  if (slab.index() <= std::max(shifts.index(), Int(kProbeLimit))) {
    std::vector<IntVec> in, out;
    probe_cosets(R, slab, hits, in, out, opts);
    if (in.empty()) return {};
    return {{R, simplify_pattern(slab, in, &out, opts)}};
  }

  // On a coset c of `shifts` the first admissible offset i is fixed, so c
  // lies in the image exactly where beta - alpha >= ceil(alpha) - alpha + i.
  if (shifts.index() > Int(static_cast<unsigned long>(opts.max_cosets)))
    throw ResourceError("pattern too large: period index exceeds cap of " + std::to_string(opts.max_cosets) +
                        " cosets");
  std::map<Rat, std::vector<IntVec>> by_threshold;
  std::vector<IntVec> never;
  shifts.for_each_coset([&](const IntVec& c) {
    opts.check_deadline();
    const Rat a = alpha(std::span<const Int>(c));
    IntVec p(n + 1);
    std::copy(c.begin(), c.end(), p.begin() + 1);
    p[0] = ceil_rat(a);
    for (Int i = 0; i < l; ++i, ++p[0])
      if (pat.contains(p)) {
        by_threshold[Rat(p[0]) - a].push_back(c);
        return true;
      }
    never.push_back(c);
    return true;
  });

  const AffineFn gap = beta - alpha;
  std::vector<PatternedPolyhedron> out;
  std::vector<IntVec> members;
  for (auto it = by_threshold.begin(); it != by_threshold.end(); ++it) {
    members.insert(members.end(), it->second.begin(), it->second.end());
    AffineFn below{gap.linear, gap.constant - it->first};
    for (auto& x : below.linear) x = -x;
    below.constant = -below.constant;
    std::vector<LinIneq> rows{nonpositive(below, false)};
    auto next = std::next(it);
    if (next != by_threshold.end()) rows.push_back(nonpositive(AffineFn{gap.linear, gap.constant - next->first}, true));
    CoPolyhedron band = floor(R.with(std::span<const LinIneq>(rows)));
    if (band.is_empty()) continue;
    std::vector<IntVec> rest = never;
    for (auto later = next; later != by_threshold.end(); ++later)
      rest.insert(rest.end(), later->second.begin(), later->second.end());
    out.push_back({std::move(band), simplify_pattern(shifts, members, &rest, opts)});
  }
  return out;
}

/// Union pattern on a cell covered by several patterns. The result agrees
/// with the union on the integer points of `cell`.
inline Pattern merge_patterns(const std::vector<const Pattern*>& pats, const CoPolyhedron& cell,
                              const Options& opts) {
  if (pats.size() == 1) return *pats.front();
  for (const auto* p : pats)
    if (p->is_all()) return Pattern::all(p->dim());
  auto member = [&](const IntVec& y) {
    return std::any_of(pats.begin(), pats.end(), [&](const Pattern* p) { return p->contains(y); });
  };
  Lattice common = pats.front()->period();
  for (std::size_t i = 1; i < pats.size(); ++i) common = lattice_intersect(common, pats[i]->period());

  std::vector<IntVec> eqs;
  const auto frame = recession_frame(cell, eqs);
  Lattice slab = common;
  if (frame.rank > 0) {
    Lattice along = lattice_intersect_subspace(common, IntMat::from_rows(eqs, cell.dim()));
    slab = slab_period(cell, frame, along.generators());
  }
  if (slab.index() < common.index()) {
    std::vector<IntVec> in, out;
    probe_cosets(cell, slab, member, in, out, opts);
    if (in.empty()) return Pattern::none(cell.dim());
    return simplify_pattern(slab, in, &out, opts);
  }
  if (common.index() > Int(static_cast<unsigned long>(opts.max_cosets)))
    throw ResourceError("pattern too large: period index exceeds cap of " + std::to_string(opts.max_cosets) +
                        " cosets");
  std::vector<IntVec> reps;
  common.for_each_coset([&](const IntVec& c) {
    if (member(c)) reps.push_back(c);
    return true;
  });
  return simplify_pattern(common, reps, nullptr, opts);
}

/// Disjoint union of possibly overlapping patterned pieces.
inline std::vector<PatternedPolyhedron> merge_pieces(const std::vector<PatternedPolyhedron>& in,
                                                     bool already_disjoint, const Options& opts) {
  std::vector<PatternedPolyhedron> out;
  if (already_disjoint) {
    for (const auto& p : in)
      if (!p.pattern.empty() && ilp_feasible(p.poly, opts)) out.push_back(p);
    return out;
  }
  std::vector<CoPolyhedron> polys;
  for (const auto& p : in) polys.push_back(p.poly);
  for (auto& cell : disjoint_refine_tagged(polys, true)) {
    opts.check_deadline();
    if (!ilp_feasible(cell.poly, opts)) continue;
    std::vector<const Pattern*> pats;
    for (auto k : cell.members) pats.push_back(&in[k].pattern);
    Pattern p = merge_patterns(pats, cell.poly, opts);
    if (!p.empty()) out.push_back({std::move(cell.poly), std::move(p)});
  }
  return out;
}

/// {M x : x in X} for an injective integer n x r matrix M. `left`, when
/// nonempty, is an integer left inverse of M; otherwise a rational one is used.
inline SemilinearSet linear_image(const SemilinearSet& X, const IntMat& M, const IntMat& left = {}) {
  const std::size_t n = M.rows();
  const std::size_t r = M.cols();
  if (X.dim() != r) throw DimensionError("linear_image: matrix width must equal the set dimension");
  RatMat L;
  if (left.rows() == r && left.cols() == n) {
    L = to_rat(left);
  } else {
    RatMat Mr = to_rat(M);
    RatMat Mt = Mr.transpose();
    RatMat MtM = Mt * Mr;
    L = RatMat(r, n);
    for (std::size_t i = 0; i < r; ++i) {
      RatVec e(r, Rat(0));
      e[i] = 1;
      RatVec y = *solve_square(MtM, e);
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t j = 0; j < n; ++j) L(i, j) += y[a] * Mt(a, j);
    }
  }
  // Normals of the image span: equalities on the image, and filler directions
  // that complete the period to full rank without meeting the span.
  const std::vector<IntVec> normals = nullspace(to_rat(M).transpose());
  std::vector<PatternedPolyhedron> out;
  for (const auto& p : X.pieces()) {
    std::vector<LinIneq> rows;
    for (const auto& row : p.poly.ineqs()) {
      RatVec a(n, Rat(0));
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < r; ++i) a[j] += Rat(row.a[i]) * L(i, j);
      rows.push_back(LinIneq::from_rational(a, Rat(row.b), row.strict));
    }
    for (const auto& w : normals) {
      rows.emplace_back(w, Int(0));
      IntVec nw = w;
      for (auto& x : nw) x = -x;
      rows.emplace_back(std::move(nw), Int(0));
    }
    std::vector<IntVec> cols;
    const IntMat image = M * p.pattern.period().basis();
    for (std::size_t j = 0; j < image.cols(); ++j) {
      IntVec c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = image(i, j);
      cols.push_back(std::move(c));
    }
    cols.insert(cols.end(), normals.begin(), normals.end());
    std::vector<IntVec> reps;
    for (const auto& c : p.pattern.cosets()) {
      IntVec y(n, Int(0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j) y[i] += M(i, j) * c[j];
      reps.push_back(std::move(y));
    }
    out.push_back({CoPolyhedron(n, std::move(rows)), Pattern(Lattice::from_columns(cols, n), reps)});
  }
  return SemilinearSet(n, std::move(out), SemilinearSet::trusted);
}

}  // namespace detail

/// Pattern with the given period holding the cosets whose witness point in
/// R is accepted by `member`; cosets that miss R are left out.
template <class Oracle>
Pattern coset_probe(const CoPolyhedron& R, const Lattice& period, Oracle&& member,
                    const Options& opts = default_options()) {
  if (R.dim() != period.dim()) throw DimensionError("coset_probe: dimension mismatch");
  std::vector<IntVec> in, out;
  detail::probe_cosets(R, period, member, in, out, opts);
  return Pattern(period, in);
}

/// Projection of one patterned piece along the first coordinate. The pieces
/// returned are pairwise disjoint. `big_fiber`, when given, receives the part
/// of the image where every fiber has length at least ell.
inline std::vector<PatternedPolyhedron> project_step_piece(const PatternedPolyhedron& X, const Options& opts,
                                                           std::optional<PatternedPolyhedron>* big_fiber = nullptr) {
  if (X.poly.dim() == 0) throw DimensionError("project_step: nothing to project");
  const std::size_t n = X.poly.dim() - 1;
  std::vector<PatternedPolyhedron> out;
  if (big_fiber) big_fiber->reset();
  CoPolyhedron Q = remove_redundant(floor(X.poly));
  if (X.pattern.empty() || Q.is_empty()) return out;
  const Pattern projected = project_pattern(X.pattern);

  auto fm = fm_eliminate_first(Q);
  if (fm.infinite_fibers) {
    if (!fm.projection.is_empty()) {
      out.push_back({fm.projection, projected});
      if (big_fiber) *big_fiber = out.back();
    }
    return out;
  }
  const Int l = ell(X.pattern.period());
  IntVec shift(n + 1, Int(0));
  shift[0] = l;
  CoPolyhedron R0 = floor(eliminate_coordinate(intersect(Q, translate(Q, shift)), 0));
  if (!R0.is_empty()) {
    out.push_back({R0, projected});
    if (big_fiber) *big_fiber = out.back();
  }
  for (const auto& piece : fm.pieces) {
    opts.check_deadline();
    AffineFn gap = piece.upper - piece.lower;
    gap.constant -= l;
    CoPolyhedron thin = remove_redundant(floor(piece.region.with(nonpositive(gap, true))));
    if (thin.is_empty() || !ilp_feasible(thin, opts)) continue;
    for (auto& p : detail::thin_piece_image(thin, piece.lower, piece.upper, X.pattern, l, opts))
      out.push_back(std::move(p));
  }
  return out;
}

/// Drops the first coordinate: the image {y : (x, y) in X for some x}.
inline SemilinearSet project_step(const SemilinearSet& X, const Options& opts = default_options(),
                                  ProjectStepTrace* trace = nullptr) {
  if (X.dim() == 0) throw DimensionError("project_step: nothing to project");
  const std::size_t n = X.dim() - 1;
  if (trace) trace->big_fiber.assign(X.pieces().size(), std::nullopt);
  auto parts = parallel_map(X.pieces().size(), opts.jobs, [&](std::size_t i) {
    std::optional<PatternedPolyhedron> bf;
    auto r = project_step_piece(X.pieces()[i], opts, &bf);
    return std::make_pair(std::move(r), std::move(bf));
  });
  std::vector<PatternedPolyhedron> all;
  std::size_t sources = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (trace) trace->big_fiber[i] = parts[i].second;
    if (!parts[i].first.empty()) ++sources;
    for (auto& p : parts[i].first) all.push_back(std::move(p));
  }
  return SemilinearSet(n, detail::merge_pieces(all, sources <= 1, opts), SemilinearSet::trusted);
}

/// Applies project_step `count` times.
inline SemilinearSet eliminate_leading(SemilinearSet X, std::size_t count, const Options& opts = default_options()) {
  if (count > X.dim()) throw DimensionError("eliminate_leading: too many coordinates");
  for (std::size_t k = 0; k < count; ++k) X = project_step(X, opts);
  return X;
}

/// T(X) for an integer matrix T with X.dim() columns.
inline SemilinearSet project(const SemilinearSet& X, const IntMat& T, const Options& opts = default_options()) {
  const std::size_t m = X.dim();
  const std::size_t n = T.rows();
  if (T.cols() != m) throw DimensionError("project: matrix width must equal the set dimension");

  // Coordinate selection: permute the dropped coordinates to the front.
  std::vector<std::size_t> picked;
  std::vector<bool> used(m, false);
  bool selection = n <= m;
  for (std::size_t i = 0; i < n && selection; ++i) {
    std::size_t hit = m;
    for (std::size_t j = 0; j < m; ++j) {
      if (T(i, j) == 0) continue;
      if (T(i, j) != 1 || hit != m) {
        hit = m + 1;
        break;
      }
      hit = j;
    }
    if (hit >= m || used[hit]) {
      selection = false;
      break;
    }
    used[hit] = true;
    picked.push_back(hit);
  }
  if (selection) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < m; ++j)
      if (!used[j]) order.push_back(j);
    order.insert(order.end(), picked.begin(), picked.end());
    return eliminate_leading(X.permuted(order), m - n, opts);
  }

  // General map: T U = [H 0] with U unimodular, so T(X) = H (drop_tail(U^{-1} X)).
  auto h = hnf(T);
  const std::size_t r = h.rank;
  IntMat V(m, m);
  {
    RatMat Ur = to_rat(h.U);
    for (std::size_t j = 0; j < m; ++j) {
      RatVec e(m, Rat(0));
      e[j] = 1;
      RatVec col = *solve_square(Ur, e);
      for (std::size_t i = 0; i < m; ++i) V(i, j) = col[i].get_num();
    }
  }
  SemilinearSet Z = detail::linear_image(X, V, h.U);
  std::vector<std::size_t> order;
  for (std::size_t j = r; j < m; ++j) order.push_back(j);
  for (std::size_t j = 0; j < r; ++j) order.push_back(j);
  Z = eliminate_leading(Z.permuted(order), m - r, opts);
  std::vector<std::size_t> keep(r);
  for (std::size_t j = 0; j < r; ++j) keep[j] = j;
  return detail::linear_image(Z, h.H.select_columns(keep));
}

/// Z^n minus X.
inline SemilinearSet complement(const SemilinearSet& X, const Options& opts = default_options()) {
  std::vector<PatternedPolyhedron> out;
  std::vector<CoPolyhedron> polys;
  for (const auto& p : X.pieces()) {
    polys.push_back(p.poly);
    Pattern rest = p.pattern.complemented(opts);
    if (!rest.empty()) out.push_back({p.poly, std::move(rest)});
  }
  for (auto& cell : complement_cells(X.dim(), polys, true))
    if (ilp_feasible(cell, opts)) out.push_back({std::move(cell), Pattern::all(X.dim())});
  return SemilinearSet(X.dim(), std::move(out), SemilinearSet::trusted);
}

/// Patterned copolyhedron P ∩ Z^n as a one-piece set.
inline SemilinearSet from_polyhedron(const CoPolyhedron& P) {
  if (P.is_empty()) return SemilinearSet(P.dim());
  return SemilinearSet(P.dim(), {{P, Pattern::all(P.dim())}}, SemilinearSet::trusted);
}

}  // namespace semilin
