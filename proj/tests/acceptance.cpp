// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "semilin/semilin.hpp"
#include "semilin/testkit.hpp"

using namespace semilin;
using testkit::i128;
using testkit::i64;
using testkit::IntBox;
using testkit::Point;

namespace {

IntVec iv(std::initializer_list<long> a) {
  IntVec v;
  for (long x : a) v.emplace_back(x);
  return v;
}

LinIneq row(std::initializer_list<long> a, long b) { return LinIneq(iv(a), Int(b)); }

IntMat drop_first(std::size_t m) {
  IntMat T(m - 1, m);
  for (std::size_t i = 0; i + 1 < m; ++i) T(i, i + 1) = 1;
  return T;
}

bool pairwise_disjoint(const SemilinearSet& X) {
  for (std::size_t i = 0; i < X.pieces().size(); ++i)
    for (std::size_t j = i + 1; j < X.pieces().size(); ++j)
      if (!intersect(X.pieces()[i].poly, X.pieces()[j].poly).is_empty()) return false;
  return true;
}

Point add(const Point& a, const Point& b, i64 sign = 1) {
  Point c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += sign * b[i];
  return c;
}

Point to_point(const IntVec& v) {
  Point p;
  for (const auto& x : v) p.push_back(testkit::to_i64(x));
  return p;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;  // 0 = no limit
  std::function<Outcome()> run;
};

// ---------------------------------------------------------------------------

Outcome example_projection() {
  std::vector<LinIneq> rows{row({1, -2, -5}, 0), row({-1, 2, 5}, 0), row({0, -1, 0}, 0), row({0, 0, -1}, 0)};
  IntMat T = IntMat::from_rows({iv({1, 0, 0})}, 3);
  ShortGF g = project_gf(CoPolyhedron(3, rows), T);
  std::set<i64> got;
  bool unit = true;
  for (const auto& [y, c] : expand_box(g, Box::cube(1, 0, 20))) {
    got.insert(y[0].get_si());
    unit = unit && c == 1;
  }
  std::set<i64> want;
  for (i64 v = 0; v <= 20; ++v)
    if (v != 1 && v != 3) want.insert(v);
  return {got == want && unit, std::to_string(got.size()) + " points"};
}

Outcome nonmultiples_of_five() {
  SemilinearSet X = eliminate(parse("{x : A y : (5*y >= x+1) | (5*y <= x-1)}"));
  int bad = 0;
  for (long x = -25; x <= 25; ++x)
    if (member(X, iv({x})) != (x % 5 != 0)) ++bad;
  bool five = false;
  for (const auto& p : X.pieces()) five = five || p.pattern.period().index() == 5;
  return {bad == 0 && five, std::to_string(bad) + " mismatches, " + std::to_string(X.pieces().size()) + " pieces"};
}

struct ProjectionCase {
  SemilinearSet Y;
  std::set<Point> image;
  IntBox box;
};

std::vector<ProjectionCase> projection_cases;

Outcome random_projections() {
  int ok = 0;
  std::ostringstream fails;
  for (std::uint64_t s = 0; s < 100; ++s) {
    testkit::InstanceGen gen(1000 + s);
    const auto m = static_cast<std::size_t>(gen.uniform(1, 3));
    const auto n = static_cast<std::size_t>(gen.uniform(1, 2));
    SemilinearSet X = gen.semilinear(m, 3);
    IntMat T = gen.matrix(n, m);
    IntBox box = IntBox::cube(n, -15, 15);
    SemilinearSet Y = project(X, T);
    auto image = testkit::brute_project(X, T, testkit::hadamard_source_bound(X, T, box, 1000), box);
    int bad = 0;
    box.for_each([&](const Point& v) {
      if (member(Y, testkit::to_intvec(v)) != (image.count(v) > 0)) ++bad;
    });
    if (bad == 0 && pairwise_disjoint(Y))
      ++ok;
    else
      fails << " seed " << 1000 + s;
    projection_cases.push_back({std::move(Y), std::move(image), box});
  }
  return {ok == 100, std::to_string(ok) + "/100 exact" + fails.str()};
}

Outcome periodicity() {
  if (projection_cases.empty()) return {false, "no projections"};
  long checks = 0, bad = 0;
  for (const auto& c : projection_cases) {
    for (const auto& piece : c.Y.pieces()) {
      auto rows = testkit::rows_of(piece.poly);
      for (const auto& gen : piece.pattern.period().generators()) {
        const Point g = to_point(gen);
        c.box.for_each([&](const Point& y) {
          const Point z = add(y, g);
          for (std::size_t i = 0; i < z.size(); ++i)
            if (z[i] < c.box.lo[i] || z[i] > c.box.hi[i]) return;
          if (!testkit::all_hold(rows, y) || !testkit::all_hold(rows, z)) return;
          ++checks;
          if ((c.image.count(y) > 0) != (c.image.count(z) > 0)) ++bad;
        });
      }
    }
  }
  return {bad == 0, std::to_string(checks) + " translations, " + std::to_string(bad) + " violations"};
}

Outcome big_fiber() {
  int instances = 0;
  long checks = 0, bad = 0;
  for (std::uint64_t s = 0; instances < 50 && s < 2000; ++s) {
    testkit::InstanceGen gen(3000 + s);
    const auto m = static_cast<std::size_t>(gen.uniform(2, 3));
    SemilinearSet X = gen.semilinear(m, 1);
    if (X.pieces().empty()) continue;
    std::optional<PatternedPolyhedron> bf;
    project_step_piece(X.pieces()[0], default_options(), &bf);
    if (!bf || bf->poly.is_empty()) continue;
    ++instances;
    IntMat T = drop_first(m);
    IntBox box = IntBox::cube(m - 1, -15, 15);
    auto image = testkit::brute_project(X, T, testkit::hadamard_source_bound(X, T, box, 1000), box);
    testkit::PieceOracle region(*bf);
    auto rows = testkit::rows_of(bf->poly);
    box.for_each([&](const Point& y) {
      if (!testkit::all_hold(rows, y)) return;
      ++checks;
      if ((image.count(y) > 0) != region.pattern.contains(y)) ++bad;
    });
  }
  return {instances == 50 && bad == 0, std::to_string(instances) + " instances, " + std::to_string(checks) +
                                           " points in R0, " + std::to_string(bad) + " violations"};
}

Outcome complement_involution() {
  long bad = 0;
  int overlapping = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    testkit::InstanceGen gen(5000 + s);
    const auto n = static_cast<std::size_t>(gen.uniform(1, 3));
    SemilinearSet X = gen.semilinear(n, 3);
    SemilinearSet C = complement(X);
    SemilinearSet CC = complement(C);
    if (!pairwise_disjoint(C) || !pairwise_disjoint(CC)) ++overlapping;
    testkit::SetOracle ox(X), oc(C), occ(CC);
    const i64 r = n == 3 ? 6 : 15;
    IntBox::cube(n, -r, r).for_each([&](const Point& v) {
      const bool x = ox.contains(v);
      if (oc.contains(v) == x || occ.contains(v) != x) ++bad;
    });
  }
  return {bad == 0 && overlapping == 0,
          std::to_string(bad) + " membership violations, " + std::to_string(overlapping) + " overlapping sets"};
}

// Exact solver for W k = d with W of full column rank, via a nonsingular
// square block of rows.
struct ColumnSolver {
  std::vector<Point> cols;
  std::vector<std::size_t> pivots;
  std::optional<testkit::Cramer> cramer;

  explicit ColumnSolver(std::vector<Point> w) : cols(std::move(w)) {
    if (cols.empty()) return;
    const std::size_t n = cols[0].size(), r = cols.size();
    auto block = [&](const std::vector<std::size_t>& rs) {
      std::vector<std::vector<i128>> b(rs.size(), std::vector<i128>(rs.size()));
      for (std::size_t a = 0; a < rs.size(); ++a)
        for (std::size_t t = 0; t < rs.size(); ++t) b[a][t] = cols[t][rs[a]];
      return b;
    };
    std::vector<std::size_t> rs(r);
    std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t at, std::size_t from) {
      if (at == r) return testkit::det(block(rs)) != 0;
      for (std::size_t i = from; i < n; ++i) {
        rs[at] = i;
        if (choose(at + 1, i + 1)) return true;
      }
      return false;
    };
    if (!choose(0, 0)) throw std::runtime_error("generators are dependent");
    pivots = rs;
    cramer.emplace(block(rs));
  }

  // The unique natural k with W k = d, if any.
  std::optional<std::vector<i64>> natural(const Point& d) const {
    if (cols.empty()) {
      for (i64 x : d)
        if (x != 0) return std::nullopt;
      return std::vector<i64>{};
    }
    std::vector<i128> rhs;
    for (std::size_t p : pivots) rhs.push_back(d[p]);
    auto z = cramer->scaled_solution(rhs);
    std::vector<i64> k;
    for (i128 v : z) {
      if (v % cramer->d != 0) return std::nullopt;
      i128 q = v / cramer->d;
      if (q < 0) return std::nullopt;
      k.push_back(static_cast<i64>(q));
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
      i128 s = 0;
      for (std::size_t t = 0; t < cols.size(); ++t) s += static_cast<i128>(cols[t][i]) * k[t];
      if (s != d[i]) return std::nullopt;
    }
    return k;
  }
};

IntBox bounding_box(const CoPolyhedron& P) {
  const std::size_t n = P.dim();
  IntBox b{Point(n), Point(n)};
  for (std::size_t i = 0; i < n; ++i) {
    RatVec e(n, Rat(0));
    e[i] = 1;
    b.hi[i] = testkit::to_i64(floor_rat(P.maximize(e).value));
    b.lo[i] = testkit::to_i64(ceil_rat(P.minimize(e).value));
  }
  return b;
}

Outcome periodization_tiling() {
  int cells = 0, with_rays = 0;
  long points = 0, bad_tiling = 0, bad_gf = 0;
  for (std::uint64_t s = 0; cells < 30 && s < 2000; ++s) {
    testkit::InstanceGen gen(7000 + s);
    const auto n = static_cast<std::size_t>(gen.uniform(1, 2));
    SemilinearSet X = gen.semilinear(n, 1);
    if (X.pieces().empty()) continue;
    const auto& piece = X.pieces()[0];
    int taken = 0;
    for (const auto& c : detail::gf_cells(piece, default_options())) {
      if (cells == 30 || taken == 3) break;
      if (c.region.is_empty()) continue;
      ++cells;
      ++taken;
      if (!c.gens.empty()) ++with_rays;
      std::vector<Point> w;
      for (const auto& g : c.gens) w.push_back(to_point(g));
      ColumnSolver solve(w);
      auto base = testkit::brute_points(c.region, bounding_box(c.region));
      auto cell_rows = testkit::rows_of(c.cell);
      testkit::CosetOracle pattern(piece.pattern);
      const IntBox box = IntBox::cube(n, -20, 20);

      std::set<Point> want;
      box.for_each([&](const Point& y) {
        long reps = 0;
        for (const auto& p : base)
          if (solve.natural(add(y, p, -1))) ++reps;
        const bool inside = testkit::all_hold(cell_rows, y);
        points += inside;
        if (reps != (inside ? 1 : 0)) ++bad_tiling;
        if (inside && pattern.contains(y)) want.insert(y);
      });

      std::vector<IntVec> h;
      for (const auto& p : base)
        if (pattern.contains(p)) h.push_back(testkit::to_intvec(p));
      ShortGF g = periodize(gf_finite(n, h), c.gens);
      std::map<Point, Rat> got;
      for (const auto& [y, coeff] : expand_box(g, Box::cube(n, -20, 20))) got[to_point(y)] = coeff;
      if (got.size() != want.size()) ++bad_gf;
      for (const auto& [y, coeff] : got)
        if (coeff != 1 || !want.count(y)) ++bad_gf;
    }
  }
  return {cells == 30 && bad_tiling == 0 && bad_gf == 0,
          std::to_string(cells) + " cells (" + std::to_string(with_rays) + " unbounded), " + std::to_string(points) +
              " cell points, " + std::to_string(bad_tiling) + " tiling and " + std::to_string(bad_gf) +
              " expansion violations"};
}

Outcome frobenius_goldens() {
  std::ostringstream out;
  bool pass = true;
  for (auto [gens, want] : std::vector<std::pair<std::vector<i64>, i64>>{{{3, 5}, 7}, {{2, 3}, 1}, {{6, 9, 20}, 43}}) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Int> a;
    for (i64 x : gens) a.emplace_back(static_cast<long>(x));
    const Int f = frobenius_number(a);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto reps = testkit::brute_semigroup(gens, 200, 1);
    bool brute = !reps.count(want);
    for (i64 v = want + 1; v <= want + *std::max_element(gens.begin(), gens.end()); ++v) brute = brute && reps.count(v);
    const bool ok = f == want && brute && dt < 30;
    pass = pass && ok;
    out << " F=" << f.get_str() << " (" << static_cast<int>(dt * 1000) << " ms)";
  }
  return {pass, out.str().substr(1)};
}

Outcome k_feasibility() {
  std::ostringstream out;
  bool pass = true;
  for (std::size_t k : {1u, 2u}) {
    ShortGF g = sigma_gf(KFeasInstance(IntMat::from_rows({iv({3, 5})}, 2), k));
    std::set<i64> got;
    bool unit = true;
    for (const auto& [y, c] : expand_box(g, Box::cube(1, 0, 40))) {
      got.insert(y[0].get_si());
      unit = unit && c == 1;
    }
    const auto want = testkit::brute_semigroup({3, 5}, 40, static_cast<int>(k));
    pass = pass && unit && got == want;
    out << " k=" << k << ": " << got.size() << " points";
  }
  return {pass, out.str().substr(1)};
}

struct Sentence {
  const char* text;
  bool value;
  i64 witness_bound;
};

// Each bound makes the quantifier ranges of brute_eval decide the sentence:
// either the witnesses are bounded, or the body is periodic in the universal
// variables and the range covers a period past every threshold.
const Sentence corpus[] = {
    {"E x : 2*x = 4", true, 2},
    {"E x : 2*x = 5", false, 5},
    {"A x : x >= 0", false, 1},
    {"A x : E y : 5*y > x - 5 & 5*y < x + 5", true, 10},
    {"A x : E y : x = 2*y | x = 2*y + 1", true, 10},
    {"A x : E y : x = 3*y", false, 3},
    {"E x, y : 3*x + 5*y = 7 & x >= 0 & y >= 0", false, 7},
    {"E x, y : 3*x + 5*y = 8 & x >= 0 & y >= 0", true, 8},
    {"A y : y <= 7 | (E a, b : a >= 0 & b >= 0 & y = 3*a + 5*b)", true, 20},
    {"A y : y <= 6 | (E a, b : a >= 0 & b >= 0 & y = 3*a + 5*b)", false, 20},
    {"E x : x > 0 & x < 1", false, 2},
    {"A x : A y : x + y >= 0 | x + y <= -1", true, 3},
    {"E x : A y : y >= x | y < x", true, 1},
    {"E x : A y : 2*y != x", true, 3},
    {"A x : E y : 2*y = x", false, 2},
    {"E x, y : x + y = 10 & x - y = 3", false, 10},
    {"E x, y : x + y = 10 & x - y = 4", true, 10},
    {"A x, y : !(x + y = 10 & x - y = 3)", true, 10},
    {"E x : 6*x + 4 = 10*x - 8 & x >= 0", true, 3},
    {"A x : 7*x != 12", true, 5},
};

Outcome duality_and_truth() {
  long bad_dual = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    testkit::InstanceGen gen(9000 + s);
    std::vector<std::string> vars{"x", "y"};
    NodePtr phi = gen.body(vars, static_cast<std::size_t>(gen.uniform(1, 3)));
    SemilinearSet A = eliminate(Formula({"x"}, build::forall({"y"}, phi)));
    SemilinearSet B = eliminate(Formula({"x"}, build::negation(build::exists({"y"}, build::negation(phi)))));
    SemilinearSet E = eliminate(Formula({"x"}, build::exists({"y"}, phi)));
    SemilinearSet NE = eliminate(Formula({"x"}, build::negation(build::forall({"y"}, build::negation(phi)))));
    for (long x = -15; x <= 15; ++x) {
      IntVec v = iv({x});
      if (member(A, v) != member(B, v) || member(E, v) != member(NE, v)) ++bad_dual;
    }
  }
  int right = 0;
  std::ostringstream wrong;
  for (const auto& s : corpus) {
    Formula F = parse(s.text);
    const bool t = truth(F);
    const bool b = testkit::brute_eval(F, {}, s.witness_bound);
    if (t == s.value && b == s.value)
      ++right;
    else
      wrong << " [" << s.text << "]";
  }
  const int total = static_cast<int>(std::size(corpus));
  return {bad_dual == 0 && right == total, std::to_string(bad_dual) + " duality violations, " +
                                               std::to_string(right) + "/" + std::to_string(total) + " sentences" +
                                               wrong.str()};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "projection golden x = 2y + 5z", 5, example_projection},
      {2, "non-multiples of 5", 5, nonmultiples_of_five},
      {3, "random projections vs brute force", 600, random_projections},
      {4, "periodicity of projected pieces", 0, periodicity},
      {5, "big-fiber region", 0, big_fiber},
      {6, "complement involution and disjointness", 0, complement_involution},
      {7, "periodization tiling", 0, periodization_tiling},
      {8, "Frobenius numbers", 0, frobenius_goldens},
      {9, "k-feasibility GF for [3 5]", 60, k_feasibility},
      {10, "quantifier duality and truth", 0, duality_and_truth},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && dt >= c.limit_s) {
      r.pass = false;
      r.detail += ", over the time limit";
    }
    failed += !r.pass;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", r.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                r.detail.c_str(), dt);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
