#pragma once

// k-feasibility sets
//   sigma_{>=k}(A) = {y : y = A x_1 = ... = A x_k, x_j in N^n pairwise distinct}
// and Frobenius numbers.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/genfunc.hpp"
#include "semilin/presburger.hpp"
#include "semilin/semilinear.hpp"

namespace semilin {

struct KFeasInstance {
  IntMat A;
  std::size_t k = 1;

  KFeasInstance(IntMat a, std::size_t kk) : A(std::move(a)), k(kk) {
    if (k < 1) throw DimensionError("k-feasibility needs k >= 1");
    if (A.cols() < 1) throw DimensionError("k-feasibility needs at least one column");
  }
};

/// Names y1..yd of the free block (plain "y" when d = 1).
inline std::vector<std::string> sigma_free_vars(std::size_t d) {
  if (d == 1) return {"y"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back("y" + std::to_string(i + 1));
  return out;
}

/// {y : E x_1..x_k >= 0 : y = A x_j for all j, x_i != x_j for i < j}.
inline Formula sigma_formula(const KFeasInstance& inst) {
  const std::size_t d = inst.A.rows(), n = inst.A.cols();
  const auto ys = sigma_free_vars(d);
  auto xname = [](std::size_t j, std::size_t i) { return "x" + std::to_string(j + 1) + "_" + std::to_string(i + 1); };
  std::vector<std::string> bound;
  std::vector<NodePtr> parts;
  for (std::size_t j = 0; j < inst.k; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      bound.push_back(xname(j, i));
      parts.push_back(build::atom(Term::var(xname(j, i)), Cmp::Ge, Term::num(0)));
    }
    for (std::size_t r = 0; r < d; ++r) {
      Term ax;
      for (std::size_t i = 0; i < n; ++i) ax += Term::var(xname(j, i)).scaled(inst.A(r, i));
      parts.push_back(build::atom(Term::var(ys[r]), Cmp::Eq, std::move(ax)));
    }
  }
  for (std::size_t a = 0; a < inst.k; ++a)
    for (std::size_t b = a + 1; b < inst.k; ++b) {
      std::vector<NodePtr> differ;
      for (std::size_t i = 0; i < n; ++i)
        differ.push_back(build::atom(Term::var(xname(a, i)), Cmp::Ne, Term::var(xname(b, i))));
      parts.push_back(build::disj(std::move(differ)));
    }
  return Formula(ys, build::exists(std::move(bound), build::conj(std::move(parts))));
}

/// Short GF of sigma_{>=k}(A); the nonzero columns of A must lie in a pointed cone.
inline ShortGF sigma_gf(const KFeasInstance& inst, const Options& opts = default_options()) {
  std::vector<IntVec> cols;
  for (auto& c : inst.A.columns())
    if (!is_zero(c)) cols.push_back(std::move(c));
  if (!cols.empty() && !detail::positive_functional(cols, inst.A.rows()))
    throw NotPointedError("non-pointed instance: the columns of A span a cone containing a line");
  return gf_formula(sigma_formula(inst), opts);
}

struct DimensionReduction {
  IntMat B;
  IntMat U;
};

/// U unimodular with U A zero below row n; B is the top n x n block of U A
/// (zero rows appended when A has fewer than n rows).
inline DimensionReduction reduce_dimension(const IntMat& A) {
  const std::size_t d = A.rows(), n = A.cols();
  HnfResult h = hnf(A.transpose());
  IntMat U = h.U.transpose();
  IntMat UA = U * A;
  IntMat B(n, n);
  for (std::size_t i = 0; i < std::min(d, n); ++i)
    for (std::size_t j = 0; j < n; ++j) B(i, j) = UA(i, j);
  return {std::move(B), std::move(U)};
}

/// Largest integer outside the numerical semigroup generated by a; -1 if every
/// natural number is representable.
inline Int frobenius_number(const std::vector<Int>& a, const Options& opts = default_options()) {
  if (a.empty()) throw DimensionError("frobenius_number: empty generator list");
  Int g = 0;
  for (const auto& x : a) {
    if (x <= 0) throw DimensionError("frobenius_number: generators must be positive");
    g = gcd(g, x);
  }
  if (g != 1) throw Error("infinite complement: generators have gcd " + g.get_str());

  IntMat A(1, a.size());
  for (std::size_t i = 0; i < a.size(); ++i) A(0, i) = a[i];
  const SemilinearSet gaps = complement(eliminate(sigma_formula(KFeasInstance(A, 1)), opts), opts);

  Int best = -1;
  const LinIneq natural(IntVec{Int(-1)}, Int(0));
  for (const auto& p : gaps.pieces()) {
    CoPolyhedron P = p.poly.with(natural);
    auto top = P.maximize(RatVec{Rat(1)});
    if (top.status == LpStatus::infeasible) continue;
    if (top.status == LpStatus::unbounded) throw Error("infinite complement");
    auto bottom = P.minimize(RatVec{Rat(1)});
    for (Int y = floor_rat(top.value), lo = ceil_rat(bottom.value); y >= lo && y > best; --y) {
      if (P.contains(IntVec{y}) && p.pattern.contains(IntVec{y})) {
        best = y;
        break;
      }
    }
  }
  return best;
}

}  // namespace semilin
