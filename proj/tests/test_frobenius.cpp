#include <gtest/gtest.h>

#include "semilin/frobenius.hpp"
#include "semilin/testkit.hpp"

using namespace semilin;
using testkit::i64;

namespace {

IntVec iv(std::initializer_list<long> a) {
  IntVec v;
  for (long x : a) v.emplace_back(x);
  return v;
}

IntMat row_matrix(std::initializer_list<long> a) { return IntMat::from_rows({iv(a)}, a.size()); }

std::set<i64> support1(const ShortGF& g, long lo, long hi) {
  std::set<i64> s;
  for (const auto& [y, c] : expand_box(g, Box::cube(1, lo, hi))) {
    EXPECT_EQ(c, 1) << "at " << y[0];
    s.insert(y[0].get_si());
  }
  return s;
}

std::set<i64> members1(const SemilinearSet& X, i64 lo, i64 hi) {
  std::set<i64> s;
  for (i64 x = lo; x <= hi; ++x)
    if (member(X, iv({static_cast<long>(x)}))) s.insert(x);
  return s;
}

}  // namespace

TEST(BruteSemigroup, ThreeFive) {
  std::set<i64> all;
  for (i64 v = 0; v <= 15; ++v) all.insert(v);
  auto s = testkit::brute_semigroup({3, 5}, 15, 1);
  std::set<i64> missing;
  std::set_difference(all.begin(), all.end(), s.begin(), s.end(), std::inserter(missing, missing.end()));
  EXPECT_EQ(missing, (std::set<i64>{1, 2, 4, 7}));
}

TEST(SigmaFormula, Shape) {
  Formula F = sigma_formula(KFeasInstance(row_matrix({3, 5}), 2));
  EXPECT_EQ(F.free(), std::vector<std::string>{"y"});
  PrefixClass c = prefix_class(F);
  EXPECT_EQ(c.sizes, (std::vector<std::size_t>{1, 4}));
  EXPECT_THROW(KFeasInstance(row_matrix({3, 5}), 0), DimensionError);
}

TEST(SigmaFormula, NaturalNumbers) {
  SemilinearSet X = eliminate(sigma_formula(KFeasInstance(row_matrix({1}), 1)));
  std::set<i64> nat;
  for (i64 v = 0; v <= 10; ++v) nat.insert(v);
  EXPECT_EQ(members1(X, -10, 10), nat);
}

TEST(SigmaFormula, MatchesBruteForce) {
  for (std::size_t k : {1u, 2u}) {
    SemilinearSet X = eliminate(sigma_formula(KFeasInstance(row_matrix({3, 5}), k)));
    EXPECT_EQ(members1(X, -5, 40), testkit::brute_semigroup({3, 5}, 40, static_cast<int>(k))) << "k " << k;
  }
}

TEST(SigmaFormula, TwoRowInstance) {
  // A = [[1 2 0], [0 0 1]]: y = (a + 2b, c).
  IntMat A = IntMat::from_rows({iv({1, 2, 0}), iv({0, 0, 1})}, 3);
  SemilinearSet X = eliminate(sigma_formula(KFeasInstance(A, 2)));
  testkit::IntBox::cube(2, -2, 8).for_each([&](const testkit::Point& p) {
    int ways = 0;
    for (i64 b = 0; 2 * b <= p[0]; ++b) ways += p[1] >= 0;
    EXPECT_EQ(member(X, testkit::to_intvec(p)), ways >= 2) << p[0] << "," << p[1];
  });
}

TEST(SigmaGf, ThreeFive) {
  ShortGF g1 = sigma_gf(KFeasInstance(row_matrix({3, 5}), 1));
  EXPECT_EQ(support1(g1, 0, 30), testkit::brute_semigroup({3, 5}, 30, 1));
  ShortGF g2 = sigma_gf(KFeasInstance(row_matrix({3, 5}), 2));
  auto s2 = support1(g2, 0, 40);
  EXPECT_EQ(s2, testkit::brute_semigroup({3, 5}, 40, 2));
  EXPECT_TRUE(s2.count(15) && s2.count(18) && s2.count(20));
  EXPECT_FALSE(s2.count(8));
}

TEST(SigmaGf, Monotone) {
  ShortGF g1 = sigma_gf(KFeasInstance(row_matrix({2, 3}), 1));
  ShortGF g2 = sigma_gf(KFeasInstance(row_matrix({2, 3}), 2));
  auto s1 = support1(g1, 0, 30), s2 = support1(g2, 0, 30);
  EXPECT_TRUE(std::includes(s1.begin(), s1.end(), s2.begin(), s2.end()));
}

TEST(SigmaGf, Naturals) {
  std::set<i64> nat;
  for (i64 v = 0; v <= 20; ++v) nat.insert(v);
  EXPECT_EQ(support1(sigma_gf(KFeasInstance(row_matrix({1}), 1)), -5, 20), nat);
}

TEST(SigmaGf, NonPointedIsRejected) {
  EXPECT_THROW(sigma_gf(KFeasInstance(row_matrix({1, -1}), 1)), NotPointedError);
}

TEST(ReduceDimension, SquareInput) {
  IntMat A = IntMat::from_rows({iv({2, 1}), iv({0, 3})}, 2);
  auto r = reduce_dimension(A);
  EXPECT_EQ(abs(determinant(r.U)), 1);
  EXPECT_EQ(r.B, r.U * A);
  EXPECT_EQ(abs(determinant(r.B)), abs(determinant(A)));
}

TEST(ReduceDimension, Column) {
  IntMat A = IntMat::from_columns({iv({2, 4})}, 2);
  auto r = reduce_dimension(A);
  EXPECT_EQ(abs(determinant(r.U)), 1);
  IntMat UA = r.U * A;
  EXPECT_EQ(UA(0, 0), 2);
  EXPECT_EQ(UA(1, 0), 0);
  EXPECT_EQ(r.B, IntMat::from_rows({iv({2})}, 1));
}

TEST(ReduceDimension, ZeroMatrix) {
  auto r = reduce_dimension(IntMat(3, 2));
  EXPECT_EQ(r.B, IntMat(2, 2));
  EXPECT_EQ(abs(determinant(r.U)), 1);
}

TEST(ReduceDimension, SigmaSetsCorrespond) {
  // A = [[1 2], [2 4], [1 1]] has rank 2 in Z^3.
  IntMat A = IntMat::from_rows({iv({1, 2}), iv({2, 4}), iv({1, 1})}, 2);
  auto r = reduce_dimension(A);
  IntMat UA = r.U * A;
  for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(UA(2, j), 0);
  for (i64 a = 0; a <= 4; ++a)
    for (i64 b = 0; b <= 4; ++b) {
      IntVec x = iv({static_cast<long>(a), static_cast<long>(b)});
      IntVec y = A * std::span<const Int>(x);
      IntVec uy = r.U * std::span<const Int>(y);
      IntVec bx = r.B * std::span<const Int>(x);
      EXPECT_EQ(IntVec(uy.begin(), uy.begin() + 2), bx);
    }
}

TEST(Frobenius, Goldens) {
  for (auto [gens, want] : std::vector<std::pair<std::vector<long>, long>>{{{3, 5}, 7}, {{2, 3}, 1}, {{6, 9, 20}, 43}}) {
    std::vector<Int> a(gens.begin(), gens.end());
    Int f = frobenius_number(a);
    EXPECT_EQ(f, want);
    std::vector<i64> ga(gens.begin(), gens.end());
    auto reps = testkit::brute_semigroup(ga, 200, 1);
    EXPECT_FALSE(reps.count(want));
    for (i64 v = want + 1; v <= want + *std::max_element(ga.begin(), ga.end()); ++v) EXPECT_TRUE(reps.count(v)) << v;
  }
}

TEST(Frobenius, EdgeCases) {
  EXPECT_EQ(frobenius_number({Int(1), Int(7)}), -1);
  EXPECT_THROW(frobenius_number({Int(4), Int(6)}), Error);
  EXPECT_THROW(frobenius_number({}), DimensionError);
  EXPECT_THROW(frobenius_number({Int(0), Int(3)}), DimensionError);
}
