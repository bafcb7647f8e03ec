#include <gtest/gtest.h>

#include "semilin/presburger.hpp"
#include "semilin/testkit.hpp"

using namespace semilin;
using testkit::i64;

namespace {

IntVec iv(std::initializer_list<long> a) {
  IntVec v;
  for (long x : a) v.emplace_back(x);
  return v;
}

const char* kNonMultiples = "A y : (5*y >= x+1) | (5*y <= x-1)";

std::set<long> members1(const SemilinearSet& X, long lo, long hi) {
  std::set<long> s;
  for (long x = lo; x <= hi; ++x)
    if (member(X, iv({x}))) s.insert(x);
  return s;
}

std::set<long> support1(const ShortGF& g, long lo, long hi) {
  std::set<long> s;
  for (const auto& [y, c] : expand_box(g, Box::cube(1, lo, hi))) {
    EXPECT_EQ(c, 1) << "at " << y[0];
    s.insert(y[0].get_si());
  }
  return s;
}

bool dnf_member(const DisjointDNF& d, const IntVec& v) {
  return std::any_of(d.cells.begin(), d.cells.end(), [&](const CoPolyhedron& c) { return c.contains(v); });
}

}  // namespace

TEST(Parse, NonMultiplesFormula) {
  Formula F = parse(kNonMultiples);
  EXPECT_EQ(F.free(), std::vector<std::string>{"x"});
  ASSERT_EQ(F.body()->kind, Node::Kind::Forall);
  EXPECT_EQ(F.body()->vars, std::vector<std::string>{"y"});
  EXPECT_EQ(F.body()->kids[0]->kind, Node::Kind::Or);
  PrefixClass c = prefix_class(F);
  EXPECT_EQ(c.k, 2u);
  EXPECT_EQ(c.sizes, (std::vector<std::size_t>{1, 1}));
}

TEST(Parse, TrivialSentence) {
  Formula F = parse("E x : x = x");
  EXPECT_TRUE(F.is_sentence());
  EXPECT_TRUE(truth(F));
}

TEST(Parse, NonLinearTermIsRejected) {
  try {
    parse("x*y >= 1");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("non-linear"), std::string::npos);
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 1u);
  }
}

TEST(Parse, SyntaxErrorReportsPosition) {
  try {
    parse("x <= 3 &\n  (y >= )");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 9u);
  }
  EXPECT_THROW(parse("x <= 3 $"), ParseError);
  EXPECT_THROW(parse("x"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(Parse, ScopingErrors) {
  EXPECT_THROW(parse("{x : x + y <= 1}"), ParseError);
  EXPECT_THROW(parse("E y : E y : y = 0"), ParseError);
  EXPECT_THROW(parse("x >= 0 & E x : x = 1"), ParseError);
  EXPECT_THROW(parse("{x, x : x = 0}"), ParseError);
}

TEST(Parse, TermsAndChains) {
  Formula F = parse("{a, b : 0 <= 2*(a - b) + -3*b <= 7 # trailing comment\n}");
  EXPECT_EQ(F.free(), (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(F.body()->kind, Node::Kind::And);
  const Node& first = *F.body()->kids[0];
  EXPECT_EQ(first.rhs.coeffs.at("a"), 2);
  EXPECT_EQ(first.rhs.coeffs.at("b"), -5);
  EXPECT_TRUE(parse("(x + 1) * 3 <= 6").body()->kind == Node::Kind::Atom);
  EXPECT_TRUE(parse("!(x <= 1) | true").body()->kind == Node::Kind::Or);
}

TEST(Parse, RoundTripThroughText) {
  for (const char* text : {kNonMultiples, "E y,z : y >= 0 & z >= 0 & x = 2*y + 5*z", "{p, q : !(p != q) | -p < 3}",
                           "A x : E y : 5*y > x - 5 & 5*y < x + 5"}) {
    Formula F = parse(text);
    Formula G = parse(to_string(F));
    EXPECT_EQ(to_string(F), to_string(G)) << text;
    EXPECT_EQ(F.free(), G.free());
  }
}

TEST(Prenex, PullsQuantifiersOut) {
  Formula F = parse("{x : !(E y : y >= x) & (A z : z = z)}");
  Prenex p = prenex(F);
  ASSERT_EQ(p.blocks.size(), 1u);
  EXPECT_TRUE(p.blocks[0].forall);
  EXPECT_EQ(p.blocks[0].vars, (std::vector<std::string>{"y", "z"}));
  EXPECT_FALSE(truth(parse("E x : !(E y : y >= x)")));
}

TEST(DisjointDnf, SingleAtom) {
  auto d = to_disjoint_dnf(parse("{x, y : x + y <= 3}"));
  ASSERT_EQ(d.cells.size(), 1u);
}

TEST(DisjointDnf, OverlappingDisjunctionCoversZ) {
  auto d = to_disjoint_dnf(parse("{x : x <= 2 | x >= 0}"));
  for (std::size_t i = 0; i < d.cells.size(); ++i)
    for (std::size_t j = i + 1; j < d.cells.size(); ++j) EXPECT_TRUE(intersect(d.cells[i], d.cells[j]).is_empty());
  for (long x = -5; x <= 5; ++x) {
    int hits = 0;
    for (const auto& c : d.cells) hits += c.contains(iv({x}));
    EXPECT_EQ(hits, 1) << x;
  }
}

TEST(DisjointDnf, Disequality) {
  auto d = to_disjoint_dnf(parse("{x : x != 0}"));
  ASSERT_EQ(d.cells.size(), 2u);
  std::set<std::vector<LinIneq>> got;
  for (const auto& c : d.cells) got.insert(c.ineqs());
  std::set<std::vector<LinIneq>> want{{LinIneq(iv({1}), Int(-1))}, {LinIneq(iv({-1}), Int(-1))}};
  EXPECT_EQ(got, want);
}

TEST(DisjointDnf, RandomBodiesAreDisjointAndExact) {
  for (std::uint64_t seed = 300; seed < 330; ++seed) {
    testkit::InstanceGen gen(seed);
    std::vector<std::string> vars{"x", "y"};
    Formula F(vars, gen.body(vars, static_cast<std::size_t>(gen.uniform(1, 4))));
    auto d = to_disjoint_dnf(F);
    for (std::size_t i = 0; i < d.cells.size(); ++i)
      for (std::size_t j = i + 1; j < d.cells.size(); ++j)
        EXPECT_TRUE(intersect(d.cells[i], d.cells[j]).is_empty()) << "seed " << seed;
    testkit::IntBox::cube(2, -6, 6).for_each([&](const testkit::Point& p) {
      EXPECT_EQ(dnf_member(d, testkit::to_intvec(p)), testkit::brute_eval(F, p, 0)) << "seed " << seed;
    });
  }
}

TEST(Eliminate, NonMultiplesOfFive) {
  SemilinearSet X = eliminate(parse(kNonMultiples));
  std::set<long> expected;
  for (long x = -25; x <= 25; ++x)
    if (x % 5 != 0) expected.insert(x);
  EXPECT_EQ(members1(X, -25, 25), expected);
  ASSERT_EQ(X.pieces().size(), 1u);
  EXPECT_EQ(X.pieces()[0].pattern.period(), Lattice::diagonal(iv({5})));
  EXPECT_EQ(X.pieces()[0].pattern.cosets(), (std::vector<IntVec>{iv({1}), iv({2}), iv({3}), iv({4})}));
}

TEST(Eliminate, Evens) {
  SemilinearSet X = eliminate(parse("E y : x = 2*y"));
  std::set<long> evens;
  for (long x = -10; x <= 10; x += 2) evens.insert(x);
  EXPECT_EQ(members1(X, -10, 10), evens);
}

TEST(Eliminate, SemigroupTwoFive) {
  SemilinearSet X = eliminate(parse("E y,z : y >= 0 & z >= 0 & x = 2*y + 5*z"));
  std::set<long> expected;
  for (auto v : testkit::brute_semigroup({2, 5}, 30, 1)) expected.insert(static_cast<long>(v));
  EXPECT_EQ(members1(X, -5, 30), expected);
}

TEST(Eliminate, ForallExistsDuality) {
  for (std::uint64_t seed = 400; seed < 415; ++seed) {
    testkit::InstanceGen gen(seed);
    std::vector<std::string> vars{"x", "y"};
    NodePtr phi = gen.body(vars, static_cast<std::size_t>(gen.uniform(1, 3)));
    SemilinearSet A = eliminate(Formula({"x"}, build::forall({"y"}, phi)));
    SemilinearSet B = eliminate(Formula({"x"}, build::negation(build::exists({"y"}, build::negation(phi)))));
    for (long x = -12; x <= 12; ++x) EXPECT_EQ(member(A, iv({x})), member(B, iv({x}))) << "seed " << seed;
  }
}

TEST(Eliminate, BoundedWitnessesMatchBruteForce) {
  for (std::uint64_t seed = 500; seed < 520; ++seed) {
    testkit::InstanceGen gen(seed);
    std::vector<std::string> vars{"x", "y"};
    const i64 w = 4;
    NodePtr range = parse("{y : -4 <= y <= 4}").body();
    NodePtr phi = gen.body(vars, static_cast<std::size_t>(gen.uniform(1, 3)));
    Formula E({"x"}, build::exists({"y"}, build::conj({range, phi})));
    Formula A({"x"}, build::forall({"y"}, build::disj({build::negation(range), phi})));
    SemilinearSet XE = eliminate(E), XA = eliminate(A);
    for (i64 x = -12; x <= 12; ++x) {
      EXPECT_EQ(member(XE, iv({x})), testkit::brute_eval(E, {x}, w)) << "seed " << seed << " x " << x;
      EXPECT_EQ(member(XA, iv({x})), testkit::brute_eval(A, {x}, w)) << "seed " << seed << " x " << x;
    }
  }
}

TEST(Truth, Examples) {
  EXPECT_TRUE(truth(parse("E x : 2*x = 4")));
  EXPECT_FALSE(truth(parse("E x : 2*x = 5")));
  EXPECT_FALSE(truth(parse("A x : x >= 0")));
  EXPECT_TRUE(truth(parse("A x : E y : 5*y > x - 5 & 5*y < x + 5")));
  EXPECT_FALSE(truth(parse("A x : E y : 5*y > x & 5*y < x + 5")));
  EXPECT_TRUE(truth(parse("true")));
  EXPECT_THROW(truth(parse("x = 0")), DimensionError);
}

TEST(BoundN, Examples) {
  Formula zero = parse("x = 0");
  EXPECT_GE(bound_N(zero), 0);
  EXPECT_GE(bound_N(parse(kNonMultiples)), 4);
  EXPECT_EQ(bound_N(parse("x = 3 & x = 4")), 0);
}

TEST(BoundN, CellsFitInBox) {
  Formula F = parse("E y,z : y >= 0 & z >= 0 & x = 2*y + 5*z");
  const Int N = bound_N(F);
  SemilinearSet X = eliminate(F);
  for (const auto& piece : X.pieces())
    for (const auto& c : detail::gf_cells(piece, default_options()))
      for (const auto& y : integer_points(c.region)) EXPECT_LE(abs(y[0]), N);
}

TEST(BoundN, GrowsWithCoefficients) {
  Int small = bound_N(parse("E y : y >= 0 & x = 3*y"));
  Int large = bound_N(parse("E y : y >= 0 & x = 7*y"));
  EXPECT_LE(small, large);
}

TEST(GfFormula, NonMultiplesOfFiveOnNaturals) {
  ShortGF g = gf_formula(parse("x >= 0 & (A y : (5*y >= x+1) | (5*y <= x-1))"));
  std::set<long> expected;
  for (long x = 0; x <= 25; ++x)
    if (x % 5 != 0) expected.insert(x);
  EXPECT_EQ(support1(g, -5, 25), expected);
}

TEST(GfFormula, SemigroupTwoFive) {
  ShortGF g = gf_formula(parse("E y,z : y >= 0 & z >= 0 & x = 2*y + 5*z"));
  EXPECT_EQ(support1(g, 0, 20), (std::set<long>{0, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20}));
}

TEST(GfFormula, Unsatisfiable) {
  EXPECT_TRUE(gf_formula(parse("x >= 1 & x <= 0")).is_zero());
}

TEST(GfFormula, LineIsRejected) {
  EXPECT_THROW(gf_formula(parse(kNonMultiples)), NotPointedError);
}

TEST(GfFormula, MatchesEliminateOnBox) {
  Formula F = parse("{x, y : x >= 0 & y >= 0 & x + 2*y <= 9 | x >= 3 & y = 1 & (E z : x = 3*z)}");
  SemilinearSet X = eliminate(F);
  ShortGF g = gf_formula(F);
  auto e = expand_box(g, Box::cube(2, -3, 20));
  for (const auto& [y, c] : e) EXPECT_EQ(c, 1);
  testkit::IntBox::cube(2, -3, 20).for_each([&](const testkit::Point& p) {
    IntVec y = testkit::to_intvec(p);
    EXPECT_EQ(e.count(y) > 0, member(X, y));
  });
}
