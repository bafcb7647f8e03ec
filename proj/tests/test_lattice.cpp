#include <gtest/gtest.h>

#include <set>
#include <utility>

#include "semilin/lattice.hpp"

using namespace semilin;

namespace {

using P2 = std::pair<long, long>;

Lattice gens2(std::vector<P2> g) {
  std::vector<IntVec> cols;
  for (auto [a, b] : g) cols.push_back({Int(a), Int(b)});
  return Lattice::from_columns(cols, 2);
}

// Points k1*g1 + k2*g2 with |k| <= K: an independent membership oracle.
std::set<P2> combos(std::vector<P2> g, long K) {
  std::set<P2> out;
  for (long a = -K; a <= K; ++a)
    for (long b = -K; b <= K; ++b) out.insert({a * g[0].first + b * g[1].first, a * g[0].second + b * g[1].second});
  return out;
}

IntVec v2(long a, long b) { return {Int(a), Int(b)}; }

}  // namespace

TEST(Lattice, MemberScalar) {
  Lattice six = Lattice::diagonal({Int(6)});
  EXPECT_TRUE(six.contains(IntVec{Int(12)}));
  EXPECT_FALSE(six.contains(IntVec{Int(5)}));
}

TEST(Lattice, MemberMatrixColumns) {
  // Matrix [[2,1],[0,3]] read as columns (2,0), (1,3).
  auto L = gens2({{2, 0}, {1, 3}});
  auto pts = combos({{2, 0}, {1, 3}}, 8);
  EXPECT_TRUE(pts.count({3, 3}));
  EXPECT_TRUE(L.contains(v2(3, 3)));
  for (long x = -6; x <= 6; ++x)
    for (long y = -6; y <= 6; ++y) EXPECT_EQ(L.contains(v2(x, y)), pts.count({x, y}) > 0);
}

TEST(Lattice, IntersectScalar) {
  auto L = lattice_intersect(Lattice::diagonal({Int(2)}), Lattice::diagonal({Int(3)}));
  EXPECT_EQ(L, Lattice::diagonal({Int(6)}));
  auto M = gens2({{1, 1}, {0, 2}});
  EXPECT_EQ(lattice_intersect(M, M), M);
}

TEST(Lattice, IntersectMatchesScan) {
  auto A = Lattice::diagonal({Int(2), Int(1)});
  auto B = Lattice::diagonal({Int(1), Int(3)});
  auto C = lattice_intersect(A, B);
  EXPECT_EQ(C, Lattice::diagonal({Int(2), Int(3)}));
  for (long x = -12; x <= 12; ++x)
    for (long y = -12; y <= 12; ++y) {
      bool in = (x % 2 == 0) && (y % 3 == 0);
      EXPECT_EQ(C.contains(v2(x, y)), in);
    }
}

TEST(Lattice, IntersectRandomAgreement) {
  auto A = gens2({{3, 1}, {1, 4}});
  auto B = gens2({{2, 2}, {0, 5}});
  auto C = lattice_intersect(A, B);
  auto pa = combos({{3, 1}, {1, 4}}, 40), pb = combos({{2, 2}, {0, 5}}, 40);
  for (long x = -10; x <= 10; ++x)
    for (long y = -10; y <= 10; ++y)
      EXPECT_EQ(C.contains(v2(x, y)), pa.count({x, y}) && pb.count({x, y}));
}

TEST(Lattice, RankDeficientIntersectThrows) {
  auto A = Lattice::from_columns({v2(1, 0)}, 2);
  EXPECT_THROW(lattice_intersect(A, Lattice::integer(2)), DimensionError);
}

TEST(Lattice, ProjectDropFirst) {
  EXPECT_EQ(lattice_project_drop_first(Lattice::integer(2)), Lattice::integer(1));
  EXPECT_EQ(lattice_project_drop_first(Lattice::diagonal({Int(2), Int(3)})), Lattice::diagonal({Int(3)}));
  // generators (1,1), (0,2): second coordinates of combinations
  std::set<long> img;
  for (auto [x, y] : combos({{1, 1}, {0, 2}}, 5)) img.insert(y);
  EXPECT_TRUE(img.count(1));
  EXPECT_EQ(lattice_project_drop_first(gens2({{1, 1}, {0, 2}})), Lattice::integer(1));
}

TEST(Lattice, Ell) {
  EXPECT_EQ(ell(Lattice::integer(2)), 1);
  EXPECT_EQ(ell(Lattice::diagonal({Int(2), Int(3)})), 2);
  auto L = gens2({{1, 1}, {0, 2}});
  long t = 1;
  while (!L.contains(v2(t, 0))) ++t;
  EXPECT_EQ(t, 2);
  EXPECT_EQ(ell(L), t);
}

TEST(Lattice, MinimalRayMultiple) {
  EXPECT_EQ(minimal_ray_multiple(Lattice::integer(2), v2(3, -1)), 1);
  EXPECT_EQ(minimal_ray_multiple(Lattice::diagonal({Int(6)}), IntVec{Int(4)}), 3);
  auto L = Lattice::diagonal({Int(2), Int(3)});
  long n = 1;
  while (!L.contains(v2(n, n))) ++n;
  EXPECT_EQ(minimal_ray_multiple(L, v2(1, 1)), n);
  EXPECT_EQ(n, 6);
}

TEST(Lattice, DirectSum) {
  auto L = lattice_direct_sum(Lattice::diagonal({Int(2)}), Lattice::diagonal({Int(3)}));
  EXPECT_EQ(L, Lattice::diagonal({Int(2), Int(3)}));
}

TEST(Lattice, CosetsAndReduce) {
  auto L = gens2({{2, 1}, {0, 3}});
  EXPECT_EQ(L.index(), 6);
  auto reps = L.coset_representatives();
  EXPECT_EQ(reps.size(), 6u);
  for (long x = -5; x <= 5; ++x)
    for (long y = -5; y <= 5; ++y) {
      IntVec r = L.reduce(v2(x, y));
      IntVec diff = {Int(x) - r[0], Int(y) - r[1]};
      EXPECT_TRUE(L.contains(diff));
      EXPECT_TRUE(std::find(reps.begin(), reps.end(), r) != reps.end());
    }
}
