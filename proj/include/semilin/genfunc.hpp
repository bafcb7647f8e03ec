#pragma once

// Short rational generating functions
//   g(t) = sum_i c_i t^{a_i} / prod_j (1 - t^{b_ij})
// with box expansion and the cell/periodization pipeline for patterned sets.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "semilin/cells.hpp"
#include "semilin/context.hpp"
#include "semilin/error.hpp"
#include "semilin/exactmath.hpp"
#include "semilin/integer.hpp"
#include "semilin/lattice.hpp"
#include "semilin/lp.hpp"
#include "semilin/polyhedra.hpp"
#include "semilin/semilinear.hpp"
#include "semilin/vrep.hpp"

namespace semilin {

struct GFTerm {
  Rat coeff{1};
  IntVec num;
  std::vector<IntVec> den;
  bool operator==(const GFTerm&) const = default;
};

namespace detail {

/// ceil(log2|x| + 1), taking 1 for x = 0.
inline Int log_length(const Int& x) {
  if (x == 0) return 1;
  Int a = abs(x);
  const std::size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);
  const bool power_of_two = mpz_scan1(a.get_mpz_t(), 0) == bits - 1;
  return Int(static_cast<unsigned long>(power_of_two ? bits : bits + 1));
}

}  // namespace detail

/// Finite sum of rational terms over Z^n. The length is the binary size
/// sum of log(|p q|) over coefficients p/q plus log|entry| over exponents.
class ShortGF {
public:
  explicit ShortGF(std::size_t dim = 0) : dim_(dim) {}
  ShortGF(std::size_t dim, std::vector<GFTerm> terms) : dim_(dim) {
    for (auto& t : terms) add(std::move(t));
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<GFTerm>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  const Int& length() const noexcept { return length_; }

  void add(GFTerm t) {
    if (t.num.size() != dim_) throw DimensionError("GF term exponent has wrong dimension");
    for (const auto& b : t.den) {
      if (b.size() != dim_) throw DimensionError("GF denominator has wrong dimension");
      if (is_zero_vec(b)) throw DimensionError("GF denominator exponent must be nonzero");
    }
    if (t.coeff == 0) return;
    length_ += detail::log_length(t.coeff.get_num() * t.coeff.get_den());
    for (const auto& a : t.num) length_ += detail::log_length(a);
    for (const auto& b : t.den)
      for (const auto& x : b) length_ += detail::log_length(x);
    terms_.push_back(std::move(t));
  }

  bool operator==(const ShortGF& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

private:
  static bool is_zero_vec(const IntVec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
  }

  std::size_t dim_ = 0;
  std::vector<GFTerm> terms_;
  Int length_{0};
};

/// Integer box lo <= y <= hi.
struct Box {
  IntVec lo, hi;

  Box() = default;
  Box(IntVec l, IntVec h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size()) throw DimensionError("box bounds differ in dimension");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i]) throw DimensionError("box needs lo <= hi");
  }
  static Box cube(std::size_t n, long lo, long hi) { return Box(IntVec(n, Int(lo)), IntVec(n, Int(hi))); }

  std::size_t dim() const noexcept { return lo.size(); }
  bool contains(std::span<const Int> y) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (y[i] < lo[i] || y[i] > hi[i]) return false;
    return true;
  }
  CoPolyhedron poly() const { return CoPolyhedron::box(lo, hi); }
};

/// Sum of t^p over the distinct points p.
inline ShortGF gf_finite(std::size_t dim, std::vector<IntVec> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  ShortGF g(dim);
  for (auto& p : points) g.add({Rat(1), std::move(p), {}});
  return g;
}

namespace detail {

/// Some lambda with lambda.w >= 1 for every w, if one exists.
inline std::optional<RatVec> positive_functional(const std::vector<IntVec>& ws, std::size_t n) {
  std::vector<RatVec> A;
  RatVec b;
  for (const auto& w : ws) {
    RatVec row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = -w[i];
    A.push_back(std::move(row));
    b.emplace_back(-1);
  }
  return lp_feasible_point(A, b, std::vector<bool>(A.size(), false), n);
}

}  // namespace detail

/// h times prod 1/(1 - t^w). The generators must span a pointed cone, so
/// parallel ones such as (2), (5) are accepted but w and -w are not.
inline ShortGF periodize(const ShortGF& h, const std::vector<IntVec>& gens) {
  for (const auto& w : gens) {
    if (w.size() != h.dim()) throw DimensionError("periodize: generator has wrong dimension");
    if (std::all_of(w.begin(), w.end(), [](const Int& x) { return x == 0; }))
      throw DimensionError("periodize: generator must be nonzero");
  }
  if (!gens.empty() && !detail::positive_functional(gens, h.dim()))
    throw DimensionError("periodize: generators span a cone containing a line");
  ShortGF out(h.dim());
  for (auto t : h.terms()) {
    t.den.insert(t.den.end(), gens.begin(), gens.end());
    out.add(std::move(t));
  }
  return out;
}

/// Term-list concatenation.
inline ShortGF gf_sum(std::size_t dim, const std::vector<ShortGF>& gs) {
  ShortGF out(dim);
  for (const auto& g : gs) {
    if (g.dim() != dim) throw DimensionError("gf_sum: dimension mismatch");
    for (const auto& t : g.terms()) out.add(t);
  }
  return out;
}

/// Coefficients of the series inside the box; each 1/(1 - t^b) expands as
/// sum_k t^{kb}. Every term needs a functional positive on its denominators.
inline std::map<IntVec, Rat> expand_box(const ShortGF& g, const Box& box, const Options& opts = default_options()) {
  if (box.dim() != g.dim()) throw DimensionError("expand_box: box dimension mismatch");
  const std::size_t n = g.dim();
  std::map<IntVec, Rat> out;
  for (const auto& t : g.terms()) {
    if (t.den.empty()) {
      if (box.contains(t.num)) out[t.num] += t.coeff;
      continue;
    }
    auto lambda = detail::positive_functional(t.den, n);
    if (!lambda) throw NotPointedError("non-pointed GF: no functional is positive on all denominators");
    Rat top = 0;
    for (std::size_t i = 0; i < n; ++i) top += (*lambda)[i] * ((*lambda)[i] > 0 ? Rat(box.hi[i]) : Rat(box.lo[i]));
    std::vector<Rat> step;
    for (const auto& w : t.den) step.push_back(dot<Rat>(*lambda, to_rat(w)));

    IntVec y = t.num;
    std::function<void(std::size_t, const Rat&)> walk = [&](std::size_t j, const Rat& level) {
      if (j == t.den.size()) {
        if (box.contains(y)) out[y] += t.coeff;
        return;
      }
      opts.check_deadline();
      const IntVec& w = t.den[j];
      Rat at = level;
      std::size_t k = 0;
      for (; at <= top; ++k, at += step[j]) {
        walk(j + 1, at);
        for (std::size_t i = 0; i < n; ++i) y[i] += w[i];
      }
      for (std::size_t i = 0; i < n; ++i) y[i] -= w[i] * static_cast<unsigned long>(k);
    };
    walk(0, dot<Rat>(*lambda, to_rat(t.num)));
  }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

/// Sum of the expanded coefficients in the box.
inline Rat count_box(const ShortGF& g, const Box& box, const Options& opts = default_options()) {
  Rat total = 0;
  for (const auto& [y, c] : expand_box(g, box, opts)) total += c;
  return total;
}

/// Monomial GF of the intersection of two indicator series inside the box.
inline ShortGF hadamard_expanded(const ShortGF& g1, const ShortGF& g2, const Box& box,
                                 const Options& opts = default_options()) {
  if (g1.dim() != g2.dim()) throw DimensionError("hadamard: dimension mismatch");
  auto e1 = expand_box(g1, box, opts);
  auto e2 = expand_box(g2, box, opts);
  for (const auto* e : {&e1, &e2})
    for (const auto& [y, c] : *e)
      if (c != 1) throw Error("not an indicator GF: coefficient " + c.get_str() + " in the box");
  std::vector<IntVec> both;
  for (const auto& [y, c] : e1)
    if (e2.count(y)) both.push_back(y);
  return gf_finite(g1.dim(), std::move(both));
}

namespace detail {

/// Splits P into pieces without lines by fixing the sign of each lineality
/// direction; integer points are preserved.
inline std::vector<CoPolyhedron> pointed_parts(const CoPolyhedron& P) {
  const auto lines = lineality_space(P);
  std::vector<CoPolyhedron> out{P};
  for (const auto& u : lines) {
    std::vector<CoPolyhedron> next;
    IntVec neg = u;
    for (auto& x : neg) x = -x;
    for (const auto& Q : out) {
      next.push_back(Q.with(LinIneq(neg, Int(0))));
      next.push_back(Q.with(LinIneq(u, Int(-1))));
    }
    out = std::move(next);
  }
  return out;
}

/// One pipeline cell: the cell itself, its bounded region R_i + P_i and the
/// periodizing generators.
struct GfCell {
  CoPolyhedron cell;
  CoPolyhedron region;
  std::vector<IntVec> gens;
};

inline std::vector<GfCell> gf_cells(const PatternedPolyhedron& piece, const Options& opts) {
  std::vector<GfCell> out;
  for (const auto& part : pointed_parts(floor(piece.poly))) {
    for (const auto& cell : cell_decompose(floor(part))) {
      opts.check_deadline();
      std::vector<Int> mult;
      std::vector<IntVec> gens;
      for (const auto& r : cell.rays) {
        Int k = minimal_ray_multiple(piece.pattern.period(), r);
        IntVec w = r;
        for (auto& x : w) x *= k;
        mult.push_back(k);
        gens.push_back(std::move(w));
      }
      out.push_back({cell.region(), cell.parallelepiped(mult), std::move(gens)});
    }
  }
  return out;
}

/// Runs the cell pipeline on every piece; content(piece, region) yields the
/// finite GF h_i of the bounded region.
template <class Content>
ShortGF gf_pipeline(const SemilinearSet& X, Content content, const Options& opts) {
  const std::size_t n = X.dim();
  std::vector<ShortGF> parts = parallel_map(X.pieces().size(), opts.jobs, [&](std::size_t i) {
    const auto& piece = X.pieces()[i];
    std::vector<ShortGF> terms;
    for (const auto& c : gf_cells(piece, opts)) {
      ShortGF h = content(piece, c.region);
      if (!h.is_zero()) terms.push_back(periodize(h, c.gens));
    }
    return gf_sum(n, terms);
  });
  return gf_sum(n, parts);
}

}  // namespace detail

/// Short GF whose series is the indicator of X. Pieces containing lines are
/// split by sign, so terms may expand in different directions.
inline ShortGF gf_semilinear(const SemilinearSet& X, const Options& opts = default_options()) {
  auto filter = [&](const PatternedPolyhedron& piece, const CoPolyhedron& region) {
    std::vector<IntVec> pts;
    for_each_integer_point(region, [&](const IntVec& y) {
      if (piece.pattern.contains(y)) pts.push_back(y);
      return true;
    }, opts);
    return gf_finite(X.dim(), std::move(pts));
  };
  return detail::gf_pipeline(X, filter, opts);
}

/// Short GF of T(Q ∩ Z^m). The image must not contain a line.
inline ShortGF project_gf(const CoPolyhedron& Q, const IntMat& T, const Options& opts = default_options()) {
  if (T.cols() != Q.dim()) throw DimensionError("project_gf: matrix width must equal the polyhedron dimension");
  SemilinearSet Y = project(from_polyhedron(Q), T, opts);
  for (const auto& p : Y.pieces())
    if (!lineality_space(p.poly).empty()) throw NotPointedError("non-pointed projection: the image contains a line");
  return gf_semilinear(Y, opts);
}

/// Text form c*t^a/((1-t^b1)(1-t^b2)), terms joined by " + ".
inline std::string to_string(const ShortGF& g) {
  if (g.is_zero()) return "0";
  auto power = [&](const IntVec& a) {
    std::ostringstream s;
    s << "t";
    if (a.size() == 1) {
      if (a[0] != 1) s << '^' << a[0];
    } else {
      s << "^(";
      for (std::size_t i = 0; i < a.size(); ++i) s << (i ? "," : "") << a[i];
      s << ')';
    }
    return s.str();
  };
  std::ostringstream out;
  for (std::size_t k = 0; k < g.terms().size(); ++k) {
    const auto& t = g.terms()[k];
    Rat c = t.coeff;
    if (k) {
      out << (c < 0 ? " - " : " + ");
      c = abs(c);
    }
    const bool unit = std::all_of(t.num.begin(), t.num.end(), [](const Int& x) { return x == 0; });
    if (unit) {
      out << c.get_str();
    } else {
      if (c == -1) out << '-';
      else if (c != 1) out << c.get_str() << '*';
      out << power(t.num);
    }
    if (!t.den.empty()) {
      out << "/(";
      for (const auto& b : t.den) out << "(1-" << power(b) << ')';
      out << ')';
    }
  }
  return out.str();
}

}  // namespace semilin
