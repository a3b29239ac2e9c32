#include <gtest/gtest.h>

#include <random>

#include "chow/polyring.hpp"
#include "oracles.hpp"

using namespace chow;

namespace {

TablePtr cb_table(int bound = 10) {
  auto v = chern_variables("c", 4);
  v.push_back({"b1", 1});
  v.push_back({"b2", 2});
  return make_table(std::move(v), bound);
}

}  // namespace

TEST(VarTable, RejectsDuplicatesAndBadDegrees) {
  EXPECT_THROW(make_table({{"a", 1}, {"a", 2}}), std::invalid_argument);
  EXPECT_THROW(make_table({{"a", 0}}), std::invalid_argument);
  EXPECT_THROW(make_table({{"a", 1}}, 0), std::invalid_argument);
}

TEST(VarTable, ChernVariablesCarryDegrees) {
  auto t = make_table(chern_variables("f", 3));
  ASSERT_EQ(t->size(), 3u);
  EXPECT_EQ(t->var(2).name, "f3");
  EXPECT_EQ(t->var(2).degree, 3);
  EXPECT_EQ(t->require("f2"), 1u);
  EXPECT_THROW(t->require("g1"), std::invalid_argument);
}

TEST(Poly, ParsesAndPrintsCanonically) {
  auto t = cb_table();
  const Poly p = Poly::parse(t, "(c1 - b1)^2 + 2*c2 - b2");
  EXPECT_EQ(p.to_string(), "c1^2 - 2*c1*b1 + 2*c2 + b1^2 - b2");
  EXPECT_EQ(Poly::parse(t, p.to_string()), p);
  EXPECT_EQ(Poly(t).to_string(), "0");
  EXPECT_EQ(Poly::parse(t, "-3").to_string(), "-3");
}

TEST(Poly, GradedLexOrderPutsEarlierVariablesFirst) {
  auto t = cb_table();
  EXPECT_EQ(Poly::parse(t, "b1^2 + c1*b1 + c2").to_string(), "c1*b1 + c2 + b1^2");
}

TEST(Poly, ProductTruncatesAtTheDegreeBound) {
  auto t = cb_table(3);
  const Poly p = Poly::parse(t, "1 + c1");
  EXPECT_EQ(p.pow(5).to_string(), "10*c1^3 + 10*c1^2 + 5*c1 + 1");
  EXPECT_EQ((Poly::parse(t, "c2") * Poly::parse(t, "c2")).to_string(), "0");
}

TEST(Poly, MismatchedTablesAreRejected) {
  auto a = make_table(chern_variables("c", 2));
  auto b = make_table(chern_variables("d", 2));
  EXPECT_THROW(Poly::variable(a, "c1") + Poly::variable(b, "d1"), std::invalid_argument);
  EXPECT_THROW(Poly::variable(a, "c1") * Poly::variable(b, "d1"), std::invalid_argument);
}

TEST(Poly, ParseErrors) {
  auto t = cb_table();
  EXPECT_THROW(Poly::parse(t, "c1 +"), std::invalid_argument);
  EXPECT_THROW(Poly::parse(t, "z1"), std::invalid_argument);
  EXPECT_THROW(Poly::parse(t, "(c1"), std::invalid_argument);
}

TEST(Poly, GradedPartsAndHomogeneity) {
  auto t = cb_table();
  const Poly p = Poly::parse(t, "1 + c1 + c2 + b1*c1");
  EXPECT_EQ(p.graded_part(2).to_string(), "c1*b1 + c2");
  EXPECT_TRUE(p.graded_part(2).is_homogeneous());
  EXPECT_FALSE(p.is_homogeneous());
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.low_degree(), 0);
  EXPECT_THROW(p.graded_part(11), std::out_of_range);
}

TEST(RingMap, SubstituteAndKill) {
  auto t = cb_table();
  const Poly p = Poly::parse(t, "c2 - b1^2 + c1*b2");
  EXPECT_EQ(kill_variables(p, {"c1"}).to_string(), "c2 - b1^2");
  const Poly q = substitute(p, {{"c2", Poly::parse(t, "b2 + b1^2")}});
  EXPECT_EQ(q.to_string(), "c1*b2 + b2");
  EXPECT_THROW(ring_map(p, t, std::vector<Poly>{}), std::invalid_argument);
}

TEST(RingMap, ImagesMustBeHomogeneousOfTheRightDegree) {
  auto t = cb_table();
  std::vector<Poly> images;
  for (std::size_t i = 0; i < t->size(); ++i) images.push_back(Poly::variable(t, i));
  images[0] = Poly::parse(t, "c2");
  EXPECT_THROW(ring_map(Poly::parse(t, "c1"), t, images), std::invalid_argument);
}

TEST(Embed, MatchesByName) {
  auto small = make_table(chern_variables("c", 2));
  auto big = cb_table();
  const Poly p = Poly::parse(small, "c1*c2 - 3");
  EXPECT_EQ(embed(p, big).to_string(), "c1*c2 - 3");
  EXPECT_THROW(embed(Poly::parse(big, "b1"), small), std::invalid_argument);
}

TEST(SeriesInvert, InvertsTotalClasses) {
  auto t = make_table(chern_variables("b", 2), 6);
  const Poly c = Poly::parse(t, "1 + b1 + b2");
  const Poly inv = series_invert(c);
  EXPECT_EQ(inv.graded_part(1).to_string(), "-b1");
  EXPECT_EQ(inv.graded_part(2).to_string(), "b1^2 - b2");
  EXPECT_EQ(inv.graded_part(3).to_string(), "-b1^3 + 2*b1*b2");
  EXPECT_EQ(c * inv, Poly::constant(t, 1));
  EXPECT_THROW(series_invert(Poly::parse(t, "2 + b1")), std::invalid_argument);
}

TEST(SeriesInvert, RandomTotalClassesTimesInverseIsOne) {
  std::mt19937_64 rng(7);
  auto t = cb_table(8);
  for (int trial = 0; trial < 20; ++trial) {
    Poly c = Poly::constant(t, 1);
    for (int d = 1; d <= 4; ++d) c += oracle::random_homogeneous(t, d, rng, 3);
    EXPECT_EQ(c * series_invert(c), Poly::constant(t, 1));
  }
}

TEST(SymmetricReduce, PowerSumsInElementaryClasses) {
  auto base = make_table(chern_variables("e", 3), 6);
  RootSet roots(base, 3);
  const std::vector<std::size_t> targets{0, 1, 2};
  Poly p2(roots.table());
  for (int i = 1; i <= 3; ++i) p2 += roots.root(i).pow(2);
  EXPECT_EQ(symmetric_reduce(roots, p2, targets).to_string(), "e1^2 - 2*e2");
  Poly p3(roots.table());
  for (int i = 1; i <= 3; ++i) p3 += roots.root(i).pow(3);
  EXPECT_EQ(symmetric_reduce(roots, p3, targets).to_string(), "e1^3 - 3*e1*e2 + 3*e3");
}

TEST(SymmetricReduce, RejectsNonSymmetricInput) {
  auto base = make_table(chern_variables("e", 2));
  RootSet roots(base, 2);
  const std::vector<std::size_t> targets{0, 1};
  EXPECT_THROW(symmetric_reduce(roots, roots.root(1), targets), std::invalid_argument);
}

TEST(SymmetricReduce, ExpandInvertsReduce) {
  std::mt19937_64 rng(11);
  auto base = make_table(chern_variables("e", 3), 7);
  RootSet roots(base, 3);
  const std::vector<std::size_t> targets{0, 1, 2};
  for (int trial = 0; trial < 20; ++trial) {
    const Poly q = oracle::random_homogeneous(base, 1 + trial % 6, rng);
    const Poly expanded = roots.expand(q, targets);
    EXPECT_TRUE(roots.is_symmetric(expanded));
    EXPECT_EQ(symmetric_reduce(roots, expanded, targets), q);
  }
}

TEST(SymmetricReduce, CoefficientsMayInvolveBaseVariables) {
  auto base = make_table({{"a", 1}, {"e1", 1}, {"e2", 2}}, 6);
  RootSet roots(base, 2);
  const std::vector<std::size_t> targets{1, 2};
  const Poly p = roots.lift(Poly::parse(base, "a")) * (roots.root(1) * roots.root(2));
  EXPECT_EQ(symmetric_reduce(roots, p, targets).to_string(), "a*e2");
}

TEST(RootSet, ElementaryClassesAboveTheBoundVanish) {
  auto base = make_table(chern_variables("e", 4), 2);
  RootSet roots(base, 4);
  EXPECT_TRUE(roots.elementary(3).is_zero());
  EXPECT_TRUE(roots.elementary(4).is_zero());
  EXPECT_EQ(roots.elementary(2).terms().size(), 6u);
}
