#pragma once

// Brute-force oracles and seeded instance generators for tests.
//
// The oracles work on machine integers and only read the input data; they
// do not call the polyhedral or lattice routines of the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <stdexcept>
#include <vector>

#include "semilin/exactmath.hpp"
#include "semilin/polyhedra.hpp"
#include "semilin/presburger.hpp"
#include "semilin/semilinear.hpp"

namespace semilin::testkit {

using i64 = std::int64_t;
using i128 = __int128;
using Point = std::vector<i64>;

struct IntBox {
  Point lo, hi;

  static IntBox cube(std::size_t n, i64 lo, i64 hi) { return {Point(n, lo), Point(n, hi)}; }
  std::size_t dim() const { return lo.size(); }

  template <class F>
  void for_each(F f) const {
    const std::size_t n = lo.size();
    for (std::size_t i = 0; i < n; ++i)
      if (lo[i] > hi[i]) return;
    Point x = lo;
    for (;;) {
      f(x);
      std::size_t i = 0;
      while (i < n && x[i] == hi[i]) x[i] = lo[i], ++i;
      if (i == n) return;
      ++x[i];
    }
  }
};

inline i64 to_i64(const Int& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("testkit: value exceeds 64 bits");
  return x.get_si();
}

// ---------------------------------------------------------------------------
// Machine-integer copies of the data

struct Row {
  std::vector<i64> a;
  i64 b;
  bool strict;
  bool holds(const Point& x) const {
    i128 s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<i128>(a[i]) * x[i];
    return strict ? s < b : s <= b;
  }
};

inline std::vector<Row> rows_of(const CoPolyhedron& P) {
  std::vector<Row> out;
  for (const auto& r : P.ineqs()) {
    Row row{{}, to_i64(r.b), r.strict};
    for (const auto& a : r.a) row.a.push_back(to_i64(a));
    out.push_back(std::move(row));
  }
  return out;
}

inline bool all_hold(const std::vector<Row>& rows, const Point& x) {
  return std::all_of(rows.begin(), rows.end(), [&](const Row& r) { return r.holds(x); });
}

/// Determinant by cofactor expansion (small matrices only).
inline i128 det(const std::vector<std::vector<i128>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  i128 s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    std::vector<std::vector<i128>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<i128> r;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) r.push_back(m[i][k]);
      minor.push_back(std::move(r));
    }
    i128 c = m[0][j] * det(minor);
    s += (j % 2 == 0) ? c : -c;
  }
  return s;
}

/// Adjugate and determinant of a square matrix, for Cramer solves.
struct Cramer {
  std::vector<std::vector<i128>> adj;
  i128 d = 1;

  explicit Cramer(const std::vector<std::vector<i128>>& m) {
    const std::size_t n = m.size();
    d = det(m);
    adj.assign(n, std::vector<i128>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<i128>> minor;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == i) continue;
          std::vector<i128> row;
          for (std::size_t c = 0; c < n; ++c)
            if (c != j) row.push_back(m[r][c]);
          minor.push_back(std::move(row));
        }
        i128 c = det(minor);
        adj[j][i] = ((i + j) % 2 == 0) ? c : -c;
      }
  }

  /// adj * v; the solution of m x = v is this divided by d.
  std::vector<i128> scaled_solution(const std::vector<i128>& v) const {
    std::vector<i128> out(adj.size(), 0);
    for (std::size_t i = 0; i < adj.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) out[i] += adj[i][j] * v[j];
    return out;
  }
};

/// Lattice coset membership via Cramer's rule on the period basis.
struct CosetOracle {
  Cramer cramer;
  std::vector<Point> reps;

  explicit CosetOracle(const Pattern& p) : cramer(basis_of(p)) {
    for (const auto& c : p.cosets()) {
      Point r;
      for (const auto& x : c) r.push_back(to_i64(x));
      reps.push_back(std::move(r));
    }
  }

  bool contains(const Point& u) const {
    for (const auto& c : reps) {
      std::vector<i128> diff;
      for (std::size_t i = 0; i < u.size(); ++i) diff.push_back(static_cast<i128>(u[i]) - c[i]);
      auto z = cramer.scaled_solution(diff);
      if (std::all_of(z.begin(), z.end(), [&](i128 v) { return v % cramer.d == 0; })) return true;
    }
    return false;
  }

private:
  static std::vector<std::vector<i128>> basis_of(const Pattern& p) {
    const auto& B = p.period().basis();
    std::vector<std::vector<i128>> m(B.rows(), std::vector<i128>(B.cols()));
    for (std::size_t i = 0; i < B.rows(); ++i)
      for (std::size_t j = 0; j < B.cols(); ++j) m[i][j] = to_i64(B(i, j));
    return m;
  }
};

struct PieceOracle {
  std::vector<Row> rows;
  CosetOracle pattern;
  explicit PieceOracle(const PatternedPolyhedron& p) : rows(rows_of(p.poly)), pattern(p.pattern) {}
  bool contains(const Point& u) const { return all_hold(rows, u) && pattern.contains(u); }
};

/// Membership in a semilinear set recomputed from its raw data.
struct SetOracle {
  std::vector<PieceOracle> pieces;
  explicit SetOracle(const SemilinearSet& X) {
    for (const auto& p : X.pieces()) pieces.emplace_back(p);
  }
  bool contains(const Point& u) const {
    return std::any_of(pieces.begin(), pieces.end(), [&](const PieceOracle& p) { return p.contains(u); });
  }
};

inline bool oracle_member(const SemilinearSet& X, const Point& u) { return SetOracle(X).contains(u); }

// ---------------------------------------------------------------------------
// Oracles

inline std::vector<Point> brute_points(const CoPolyhedron& P, const IntBox& box) {
  auto rows = rows_of(P);
  std::vector<Point> out;
  box.for_each([&](const Point& x) {
    if (all_hold(rows, x)) out.push_back(x);
  });
  return out;
}

/// {T u : u in X, |u_i| <= source_bound} intersected with the target box.
///
/// Per target v, the equations T u = v are solved for a maximal independent
/// set of coordinates by Cramer's rule. The other coordinates are enumerated;
/// for the last one the rows cut out an interval, and within it membership is
/// periodic, so one period of candidates per piece suffices.
inline std::set<Point> brute_project(const SemilinearSet& X, const IntMat& T, i64 source_bound, const IntBox& target) {
  const std::size_t m = X.dim();
  const std::size_t n = T.rows();
  std::vector<std::vector<i64>> t(n, std::vector<i64>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) t[i][j] = to_i64(T(i, j));

  // Greedy choice of a nonsingular square submatrix of T.
  std::vector<std::size_t> prow, pcol;
  auto submatrix = [&](const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
    std::vector<std::vector<i128>> sub(r.size(), std::vector<i128>(c.size()));
    for (std::size_t a = 0; a < r.size(); ++a)
      for (std::size_t b = 0; b < c.size(); ++b) sub[a][b] = t[r[a]][c[b]];
    return sub;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (std::find(pcol.begin(), pcol.end(), j) != pcol.end()) continue;
      auto r2 = prow, c2 = pcol;
      r2.push_back(i);
      c2.push_back(j);
      if (det(submatrix(r2, c2)) != 0) {
        prow = r2;
        pcol = c2;
        break;
      }
    }
  std::vector<std::size_t> freec;
  for (std::size_t j = 0; j < m; ++j)
    if (std::find(pcol.begin(), pcol.end(), j) == pcol.end()) freec.push_back(j);
  const Cramer cr(submatrix(prow, pcol));
  const i128 d = cr.d;

  std::vector<PieceOracle> pieces;
  std::vector<i128> piece_period;
  for (const auto& p : X.pieces()) {
    pieces.emplace_back(p);
    const auto& B = p.pattern.period().basis();
    i128 idx = 1;
    for (std::size_t i = 0; i < B.rows(); ++i) idx *= to_i64(B(i, i));
    piece_period.push_back(idx * (d < 0 ? -d : d));
  }

  // u_S as (z0 - s * w) / d where s is the last free coordinate.
  auto solve_s = [&](const Point& v, const Point& u, std::vector<i128>& z0, std::vector<i128>& w) {
    std::vector<i128> rhs(prow.size()), col(prow.size(), 0);
    for (std::size_t a = 0; a < prow.size(); ++a) {
      i128 sum = v[prow[a]];
      for (std::size_t k = 0; k + 1 < freec.size(); ++k) sum -= static_cast<i128>(t[prow[a]][freec[k]]) * u[freec[k]];
      rhs[a] = sum;
      if (!freec.empty()) col[a] = t[prow[a]][freec.back()];
    }
    z0 = cr.scaled_solution(rhs);
    w = cr.scaled_solution(col);
  };

  auto fill = [&](const Point& v, Point& u, i64 s) -> bool {
    std::vector<i128> z0, w;
    solve_s(v, u, z0, w);
    if (!freec.empty()) u[freec.back()] = s;
    for (std::size_t b = 0; b < pcol.size(); ++b) {
      i128 num = z0[b] - static_cast<i128>(s) * w[b];
      if (num % d != 0) return false;
      i128 val = num / d;
      if (val > source_bound || val < -source_bound) return false;
      u[pcol[b]] = static_cast<i64>(val);
    }
    for (std::size_t i = 0; i < n; ++i) {
      i128 sum = 0;
      for (std::size_t j = 0; j < m; ++j) sum += static_cast<i128>(t[i][j]) * u[j];
      if (sum != v[i]) return false;
    }
    return true;
  };

  auto floor_div = [](i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
  };

  // Interval of s where every row of `rows` and the box hold, given the
  // other free coordinates: each constraint is (alpha + beta s) / d <= c.
  auto s_range = [&](const Point& v, const Point& u, const std::vector<Row>& rows, i128& lo, i128& hi) {
    std::vector<i128> z0, w;
    solve_s(v, u, z0, w);
    lo = -source_bound;
    hi = source_bound;
    auto add = [&](i128 alpha, i128 beta, i128 c, bool strict) {
      // alpha + beta s <= c*d (after normalizing d > 0)
      if (d < 0) alpha = -alpha, beta = -beta;
      i128 rhs = c * (d < 0 ? -d : d) - alpha;
      if (strict) rhs -= 1;
      if (beta == 0) {
        if (rhs < 0) lo = 1, hi = 0;
        return;
      }
      if (beta > 0) hi = std::min(hi, floor_div(rhs, beta));
      else lo = std::max(lo, -floor_div(rhs, -beta));
    };
    // box on u_S: -B <= (z0 - s w)/d <= B
    for (std::size_t b = 0; b < pcol.size(); ++b) {
      add(z0[b], -w[b], source_bound, false);
      add(-z0[b], w[b], source_bound, false);
    }
    for (const auto& r : rows) {
      i128 alpha = 0, beta = 0;
      for (std::size_t k = 0; k + 1 < freec.size(); ++k) alpha += static_cast<i128>(r.a[freec[k]]) * u[freec[k]] * d;
      if (!freec.empty()) beta += static_cast<i128>(r.a[freec.back()]) * d;
      for (std::size_t b = 0; b < pcol.size(); ++b) {
        alpha += static_cast<i128>(r.a[pcol[b]]) * z0[b];
        beta -= static_cast<i128>(r.a[pcol[b]]) * w[b];
      }
      add(alpha, beta, r.b, r.strict);
    }
  };

  std::set<Point> out;
  target.for_each([&](const Point& v) {
    Point u(m, 0);
    bool found = false;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (found) return;
      if (k + 1 >= freec.size()) {
        for (std::size_t pi = 0; pi < pieces.size() && !found; ++pi) {
          i128 lo = 0, hi = 0;
          if (freec.empty()) {
            if (fill(v, u, 0) && pieces[pi].contains(u)) found = true;
            continue;
          }
          s_range(v, u, pieces[pi].rows, lo, hi);
          i128 stop = std::min(hi, lo + piece_period[pi] - 1);
          for (i128 s = lo; s <= stop && !found; ++s)
            if (fill(v, u, static_cast<i64>(s)) && pieces[pi].contains(u)) found = true;
        }
        return;
      }
      for (i64 s = -source_bound; s <= source_bound && !found; ++s) {
        u[freec[k]] = s;
        rec(k + 1);
      }
    };
    rec(0);
    if (found) out.insert(v);
  });
  return out;
}

/// Values in [0, limit] with at least k representations as N-combinations of a.
inline std::set<i64> brute_semigroup(const std::vector<i64>& a, i64 limit, int k) {
  std::vector<i64> ways(static_cast<std::size_t>(limit + 1), 0);
  ways[0] = 1;
  for (i64 g : a)
    for (i64 v = g; v <= limit; ++v) ways[static_cast<std::size_t>(v)] += ways[static_cast<std::size_t>(v - g)];
  std::set<i64> out;
  for (i64 v = 0; v <= limit; ++v)
    if (ways[static_cast<std::size_t>(v)] >= k) out.insert(v);
  return out;
}

/// Hadamard-type bound on the coordinates of a smallest witness u with
/// T u in the target box, taken over the pieces of X and capped at `cap`.
inline i64 hadamard_source_bound(const SemilinearSet& X, const IntMat& T, const IntBox& target, i64 cap = 1000) {
  const std::size_t m = X.dim();
  long double best = 0;
  for (const auto& p : X.pieces()) {
    std::vector<long double> norms;
    auto push = [&](const std::vector<long double>& a, long double b) {
      long double s = b * b;
      for (auto x : a) s += x * x;
      norms.push_back(std::ceil(std::sqrt(s)));
    };
    for (const auto& r : rows_of(p.poly)) push(std::vector<long double>(r.a.begin(), r.a.end()), r.b);
    for (std::size_t i = 0; i < T.rows(); ++i) {
      std::vector<long double> a(m);
      for (std::size_t j = 0; j < m; ++j) a[j] = static_cast<long double>(to_i64(T(i, j)));
      push(a, std::max(std::abs(target.lo[i]), std::abs(target.hi[i])));
    }
    std::sort(norms.rbegin(), norms.rend());
    long double h = static_cast<long double>(m + 1);
    for (std::size_t i = 0; i < std::min(norms.size(), m + 1); ++i) h *= norms[i];
    const IntMat& B = p.pattern.period().basis();
    for (std::size_t i = 0; i < B.rows(); ++i)
      for (std::size_t j = 0; j < B.cols(); ++j) h += std::abs(static_cast<long double>(to_i64(B(i, j))));
    best = std::max(best, h);
  }
  return best >= static_cast<long double>(cap) ? cap : static_cast<i64>(best);
}

inline IntVec to_intvec(const Point& p) {
  IntVec v;
  for (auto x : p) v.emplace_back(static_cast<long>(x));
  return v;
}

namespace detail {

inline i128 eval_term(const Term& t, const std::map<std::string, i64>& env) {
  i128 v = to_i64(t.constant);
  for (const auto& [x, c] : t.coeffs) v += static_cast<i128>(to_i64(c)) * env.at(x);
  return v;
}

inline bool eval_node(const Node& n, std::map<std::string, i64>& env, i64 w) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: {
      const i128 l = eval_term(n.lhs, env), r = eval_term(n.rhs, env);
      switch (n.cmp) {
        case Cmp::Le: return l <= r;
        case Cmp::Lt: return l < r;
        case Cmp::Ge: return l >= r;
        case Cmp::Gt: return l > r;
        case Cmp::Eq: return l == r;
        case Cmp::Ne: return l != r;
      }
      return false;
    }
    case K::Not: return !eval_node(*n.kids[0], env, w);
    case K::And:
      return std::all_of(n.kids.begin(), n.kids.end(), [&](const NodePtr& k) { return eval_node(*k, env, w); });
    case K::Or:
      return std::any_of(n.kids.begin(), n.kids.end(), [&](const NodePtr& k) { return eval_node(*k, env, w); });
    case K::Exists:
    case K::Forall: {
      const bool exists = n.kind == K::Exists;
      std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == n.vars.size()) return eval_node(*n.kids[0], env, w);
        for (i64 v = -w; v <= w; ++v) {
          env[n.vars[i]] = v;
          if (rec(i + 1) == exists) return exists;
        }
        return !exists;
      };
      const bool r = rec(0);
      for (const auto& v : n.vars) env.erase(v);
      return r;
    }
  }
  return false;
}

}  // namespace detail

/// Direct semantic evaluation of F at an assignment of its free variables,
/// with every quantified variable ranging over [-witness_bound, witness_bound].
inline bool brute_eval(const Formula& F, const Point& assignment, i64 witness_bound) {
  std::map<std::string, i64> env;
  for (std::size_t i = 0; i < F.free().size(); ++i) env[F.free()[i]] = assignment.at(i);
  return detail::eval_node(*F.body(), env, witness_bound);
}

// ---------------------------------------------------------------------------
// Seeded instance generation

class InstanceGen {
public:
  explicit InstanceGen(std::uint64_t seed, i64 coeff_cap = 6) : rng_(seed), cap_(coeff_cap) {}

  i64 uniform(i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng_); }
  bool coin() { return uniform(0, 1) == 1; }
  std::mt19937_64& rng() { return rng_; }

  IntVec vector(std::size_t n, i64 cap) {
    IntVec v(n);
    for (auto& x : v) x = static_cast<long>(uniform(-cap, cap));
    return v;
  }

  LinIneq row(std::size_t n) {
    IntVec a;
    do a = vector(n, cap_);
    while (is_zero(a));
    return LinIneq(a, Int(static_cast<long>(uniform(-cap_, cap_))), uniform(0, 3) == 0);
  }

  CoPolyhedron polyhedron(std::size_t n, std::size_t rows) {
    std::vector<LinIneq> r;
    for (std::size_t i = 0; i < rows; ++i) r.push_back(row(n));
    return CoPolyhedron(n, std::move(r));
  }

  /// Full-rank lower-triangular period with small diagonal and a few cosets.
  Pattern pattern(std::size_t n, i64 max_diag = 3) {
    IntMat B(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      B(j, j) = static_cast<long>(uniform(1, max_diag));
      for (std::size_t i = j + 1; i < n; ++i) B(i, j) = static_cast<long>(uniform(-2, 2));
    }
    Lattice L(B);
    auto all = L.coset_representatives();
    std::vector<IntVec> reps;
    for (const auto& c : all)
      if (coin()) reps.push_back(c);
    if (reps.empty()) reps.push_back(all[static_cast<std::size_t>(uniform(0, static_cast<i64>(all.size()) - 1))]);
    return Pattern(L, reps);
  }

  /// One random polyhedron cut by parallel hyperplanes into up to
  /// `max_pieces` disjoint pieces, each with its own pattern.
  SemilinearSet semilinear(std::size_t n, std::size_t max_pieces, std::size_t max_rows = 3) {
    CoPolyhedron base = polyhedron(n, static_cast<std::size_t>(uniform(1, static_cast<i64>(max_rows))));
    std::size_t k = static_cast<std::size_t>(uniform(1, static_cast<i64>(max_pieces)));
    IntVec h;
    do h = vector(n, 3);
    while (n > 0 && is_zero(h));
    std::vector<long> cuts;
    for (std::size_t i = 0; i + 1 < k; ++i) cuts.push_back(static_cast<long>(uniform(-cap_, cap_)));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<PatternedPolyhedron> pieces;
    IntVec nh(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) nh[i] = -h[i];
    for (std::size_t i = 0; i <= cuts.size(); ++i) {
      std::vector<LinIneq> extra;
      if (n > 0 && i > 0) extra.emplace_back(nh, Int(-cuts[i - 1] - 1));
      if (n > 0 && i < cuts.size()) extra.emplace_back(h, Int(cuts[i]));
      CoPolyhedron P = base.with(std::span<const LinIneq>(extra));
      if (P.is_empty()) continue;
      pieces.push_back({P, pattern(n)});
    }
    return SemilinearSet(n, std::move(pieces));
  }

  /// Integer matrix of full row rank.
  IntMat matrix(std::size_t rows, std::size_t cols, i64 cap = 0) {
    if (cap == 0) cap = cap_;
    for (;;) {
      IntMat T(rows, cols);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) T(i, j) = static_cast<long>(uniform(-cap, cap));
      if (rank(to_rat(T)) == std::min(rows, cols)) return T;
    }
  }

  /// Random linear atom over `vars` with coefficients in [-cap, cap].
  NodePtr atom(const std::vector<std::string>& vars, i64 cap = 3) {
    static const Cmp cmps[] = {Cmp::Le, Cmp::Lt, Cmp::Ge, Cmp::Gt, Cmp::Eq, Cmp::Ne};
    Term t;
    while (t.is_constant()) {
      t = Term{};
      for (const auto& v : vars) t += Term::var(v).scaled(Int(static_cast<long>(uniform(-cap, cap))));
    }
    // = and != at half the weight of the inequalities.
    Cmp c = cmps[static_cast<std::size_t>(uniform(0, 9)) % 6];
    return build::atom(std::move(t), c, Term::num(Int(static_cast<long>(uniform(-2 * cap, 2 * cap)))));
  }

  /// Random Boolean combination of `atoms` atoms with occasional negations.
  NodePtr body(const std::vector<std::string>& vars, std::size_t atoms, i64 cap = 3) {
    std::vector<NodePtr> parts;
    for (std::size_t i = 0; i < atoms; ++i) parts.push_back(atom(vars, cap));
    while (parts.size() > 1) {
      std::size_t i = static_cast<std::size_t>(uniform(0, static_cast<i64>(parts.size()) - 2));
      std::vector<NodePtr> two{parts[i], parts[i + 1]};
      NodePtr joined = coin() ? build::conj(std::move(two)) : build::disj(std::move(two));
      if (uniform(0, 4) == 0) joined = build::negation(joined);
      parts[i] = joined;
      parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(i) + 1);
    }
    return parts[0];
  }

private:
  std::mt19937_64 rng_;
  i64 cap_;
};

}  // namespace semilin::testkit
