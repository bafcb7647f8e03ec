#pragma once

// Exact two-phase simplex over the rationals with Bland's rule.

#include <cstddef>
#include <optional>
#include <vector>

#include "semilin/exactmath.hpp"

namespace semilin {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rat value;
  RatVec x;
};

namespace detail {

class Tableau {
public:
  // Rows hold [coefficients | rhs]; basis[i] is the basic column of row i.
  std::vector<RatVec> rows;
  std::vector<std::size_t> basis;
  RatVec reduced;  // reduced costs, one per column
  Rat value;       // current objective value
  std::size_t ncols = 0;
  std::vector<bool> blocked;  // columns never allowed to enter

  void pivot(std::size_t r, std::size_t c) {
    RatVec& pr = rows[r];
    Rat inv = 1 / pr[c];
    for (auto& x : pr)
      if (x != 0) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      RatVec& row = rows[i];
      if (row[c] == 0) continue;
      Rat f = row[c];
      for (std::size_t j = 0; j <= ncols; ++j)
        if (pr[j] != 0) row[j] -= f * pr[j];
    }
    if (reduced[c] != 0) {
      Rat f = reduced[c];
      for (std::size_t j = 0; j < ncols; ++j)
        if (pr[j] != 0) reduced[j] -= f * pr[j];
      value += f * pr[ncols];
    }
    basis[r] = c;
  }

  /// Runs primal simplex to optimality; false when unbounded.
  bool optimize() {
    for (;;) {
      std::size_t enter = ncols;
      for (std::size_t j = 0; j < ncols; ++j)
        if (!blocked[j] && reduced[j] > 0) {
          enter = j;
          break;
        }
      if (enter == ncols) return true;
      std::size_t leave = rows.size();
      Rat best;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Rat& a = rows[i][enter];
        if (a <= 0) continue;
        Rat ratio = rows[i][ncols] / a;
        if (leave == rows.size() || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == rows.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace detail

/// Maximizes c.x subject to A x <= b over free real variables x.
inline LpResult lp_maximize(const std::vector<RatVec>& A, const RatVec& b, const RatVec& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw DimensionError("lp_maximize: rhs length mismatch");

  std::vector<std::size_t> art_rows;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0) art_rows.push_back(i);
  const std::size_t nart = art_rows.size();
  const std::size_t ncols = 2 * n + m + nart;

  detail::Tableau t;
  t.ncols = ncols;
  t.rows.assign(m, RatVec(ncols + 1));
  t.basis.assign(m, 0);
  t.blocked.assign(ncols, false);
  std::size_t a = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (A[i].size() != n) throw DimensionError("lp_maximize: row length mismatch");
    RatVec& row = t.rows[i];
    const bool neg = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (A[i][j] == 0) continue;
      row[j] = neg ? Rat(-A[i][j]) : A[i][j];
      row[n + j] = -row[j];
    }
    row[2 * n + i] = neg ? -1 : 1;
    row[ncols] = neg ? Rat(-b[i]) : b[i];
    if (neg) {
      row[2 * n + m + a] = 1;
      t.basis[i] = 2 * n + m + a;
      ++a;
    } else {
      t.basis[i] = 2 * n + i;
    }
  }

  // Phase 1: maximize -sum(artificials).
  t.reduced.assign(ncols, Rat(0));
  t.value = 0;
  if (nart > 0) {
    for (std::size_t i : art_rows) {
      for (std::size_t j = 0; j < 2 * n + m; ++j) t.reduced[j] += t.rows[i][j];
      t.value -= t.rows[i][ncols];
    }
    t.optimize();
    if (t.value < 0) return {LpStatus::infeasible, 0, {}};
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < t.rows.size();) {
      if (t.basis[i] < 2 * n + m) {
        ++i;
        continue;
      }
      std::size_t col = ncols;
      for (std::size_t j = 0; j < 2 * n + m; ++j)
        if (t.rows[i][j] != 0) {
          col = j;
          break;
        }
      if (col == ncols) {
        t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
        t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      t.pivot(i, col);
      ++i;
    }
    for (std::size_t j = 2 * n + m; j < ncols; ++j) t.blocked[j] = true;
  }

  // Phase 2.
  RatVec cost(ncols, Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = c[j];
    cost[n + j] = -c[j];
  }
  t.reduced = cost;
  t.value = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const Rat& cb = cost[t.basis[i]];
    if (cb == 0) continue;
    for (std::size_t j = 0; j < ncols; ++j)
      if (t.rows[i][j] != 0) t.reduced[j] -= cb * t.rows[i][j];
    t.value += cb * t.rows[i][ncols];
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) t.reduced[t.basis[i]] = 0;

  const bool bounded = t.optimize();
  LpResult res;
  res.x.assign(n, Rat(0));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::size_t bcol = t.basis[i];
    if (bcol < n)
      res.x[bcol] += t.rows[i][ncols];
    else if (bcol < 2 * n)
      res.x[bcol - n] -= t.rows[i][ncols];
  }
  res.status = bounded ? LpStatus::optimal : LpStatus::unbounded;
  res.value = t.value;
  return res;
}

inline LpResult lp_minimize(const std::vector<RatVec>& A, const RatVec& b, const RatVec& c) {
  RatVec neg(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
  auto r = lp_maximize(A, b, neg);
  r.value = -r.value;
  return r;
}

/// A point satisfying A x <= b with the rows flagged strict holding strictly,
/// or nullopt when the system has no real solution.
inline std::optional<RatVec> lp_feasible_point(const std::vector<RatVec>& A, const RatVec& b,
                                               const std::vector<bool>& strict,
                                               std::size_t n) {
  bool any_strict = false;
  for (bool s : strict) any_strict = any_strict || s;
  if (!any_strict) {
    auto r = lp_maximize(A, b, RatVec(n, Rat(0)));
    if (r.status == LpStatus::infeasible) return std::nullopt;
    return r.x;
  }
  // maximize eps subject to A x + s*eps <= b, eps <= 1
  std::vector<RatVec> rows;
  RatVec rhs;
  rows.reserve(A.size() + 1);
  for (std::size_t i = 0; i < A.size(); ++i) {
    RatVec r = A[i];
    r.push_back(strict[i] ? Rat(1) : Rat(0));
    rows.push_back(std::move(r));
    rhs.push_back(b[i]);
  }
  RatVec cap(n + 1, Rat(0));
  cap[n] = 1;
  rows.push_back(cap);
  rhs.push_back(1);
  auto r = lp_maximize(rows, rhs, cap);
  if (r.status != LpStatus::optimal || r.value <= 0) return std::nullopt;
  r.x.pop_back();
  return r.x;
}

}  // namespace semilin
