#include <gtest/gtest.h>

#include "cpa/domains/octagon.hpp"
#include "support/random.hpp"

namespace {

using namespace cpa;
using domains::Dbm;
using domains::OctagonCpa;
using domains::OctagonState;
using solver::LinearConstraint;
using solver::LinearTerm;
using testsupport::edge_labeled;

// signed indices of variable k
std::size_t pos(std::size_t k) { return 2 * k; }
std::size_t neg(std::size_t k) { return 2 * k + 1; }

const Dbm& dbm_of(const StatePtr& s) { return *static_cast<const OctagonState&>(*s).dbm(); }

// x_k <= c
Dbm upper(std::size_t n, std::size_t k, long c) {
  Dbm m(n);
  m.constrain(pos(k), neg(k), 2 * c);
  return m;
}

// x_k >= c
Dbm lower(Dbm m, std::size_t k, long c) {
  m.constrain(neg(k), pos(k), -2 * c);
  return m;
}

TEST(OctagonTransfer, ClosureDerivesTransitiveBound) {
  Program p = parse("void main() { int x; int y; int z; if (x - y <= 1) { if (y - z <= 2) { x = 0; } } }");
  OctagonCpa cpa(p);
  auto s = cpa.initial_state(p.main().entry);
  for (const char* label : {"[x - y <= 1]", "[y - z <= 2]"}) {
    auto next = cpa.transfer(s, edge_labeled(p, label), cpa.initial_precision());
    ASSERT_EQ(next.size(), 1u);
    s = next[0];
  }
  // variables are main::x, main::y, main::z in that order
  EXPECT_EQ(dbm_of(s).at(pos(0), pos(2)), Integer(3));
}

TEST(OctagonTransfer, IncrementShiftsBound) {
  Program p = parse("void main() { int x; x = x + 1; }");
  OctagonCpa cpa(p);
  auto s = cpa.make(upper(1, 0, 4));
  auto next = cpa.transfer(s, edge_labeled(p, "x := x + 1"), cpa.initial_precision());
  ASSERT_EQ(next.size(), 1u);
  const Dbm& out = dbm_of(next[0]);
  // every x <= 4 in the box lands on x + 1, and 5 is the new maximum
  for (long x = -8; x <= 4; ++x) EXPECT_TRUE(out.contains({x + 1}));
  EXPECT_FALSE(out.contains({6}));
  EXPECT_EQ(out.at(pos(0), neg(0)), Integer(10));
}

TEST(OctagonTransfer, ContradictionIsInfeasible) {
  Program p = parse("void main() { int x; if (x - x <= -1) { x = 0; } }");
  OctagonCpa cpa(p);
  auto s = cpa.initial_state(p.main().entry);
  EXPECT_TRUE(cpa.transfer(s, edge_labeled(p, "[x - x <= -1]"), cpa.initial_precision()).empty());
  Dbm m(1);
  m.constrain(pos(0), pos(0), -1);
  EXPECT_FALSE(strong_closure(m));
}

TEST(OctagonTransfer, NonOctagonalAssumeIsIgnored) {
  OctagonCpa cpa(nullptr, {"x", "y"});
  auto atom = LinearConstraint::less_equal(LinearTerm::variable("x", 2) + LinearTerm::variable("y", 3));
  auto out = cpa.assume(Dbm(2), atom);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, Dbm(2));
}

TEST(OctagonAssign, NonLinearRightHandSideHavocs) {
  OctagonCpa cpa(nullptr, {"x", "y"});
  Dbm m = upper(2, 0, 1);
  Dbm out = cpa.assign(m, "x", LinearTerm::variable("y", 2));
  EXPECT_FALSE(out.at(pos(0), neg(0)).has_value());
  Dbm shifted = cpa.assign(lower(upper(2, 1, 3), 1, 3), "x", -LinearTerm::variable("y") + LinearTerm::constant(1));
  EXPECT_TRUE(shifted.contains({-2, 3}));
  EXPECT_FALSE(shifted.contains({-1, 3}));
}

TEST(OctagonJoin, Examples) {
  OctagonCpa cpa(nullptr, {"x"});
  auto b = cpa.make(upper(1, 0, 3));
  EXPECT_TRUE(cpa.join(cpa.make(std::nullopt), b)->equals(*b));
  EXPECT_TRUE(cpa.join(cpa.make(upper(1, 0, 1)), b)->equals(*b));

  auto one = cpa.make(*strong_closure(lower(upper(1, 0, 1), 0, 1)));
  auto three = cpa.make(*strong_closure(lower(upper(1, 0, 3), 0, 3)));
  auto joined = cpa.join(one, three);
  const Dbm& j = dbm_of(joined);
  EXPECT_EQ(j, *strong_closure(lower(upper(1, 0, 3), 0, 1)));
  for (long x : {1, 3}) EXPECT_TRUE(j.contains({x}));
  EXPECT_FALSE(j.contains({0}));
  EXPECT_FALSE(j.contains({4}));
}

TEST(StrongClosure, Examples) {
  Dbm chain(3);
  chain.constrain(pos(0), pos(1), 1);
  chain.constrain(pos(1), pos(2), 2);
  auto closed = strong_closure(chain);
  ASSERT_TRUE(closed);
  EXPECT_EQ(closed->at(pos(0), pos(2)), Integer(3));
  EXPECT_EQ(strong_closure(*closed), closed);

  Dbm twice(1);
  twice.constrain(pos(0), neg(0), 3);  // x + x <= 3
  auto tight = strong_closure(twice);
  ASSERT_TRUE(tight);
  EXPECT_EQ(tight->at(pos(0), neg(0)), Integer(2));
  EXPECT_TRUE(tight->contains({1}));
  EXPECT_FALSE(tight->contains({2}));
}

TEST(StrongClosure, MatchesFixpointOracle) {
  std::mt19937 rng(17);
  for (int i = 0; i < 200; ++i) {
    Dbm m = testsupport::random_dbm(rng, 1 + i % 3);
    auto expected = testsupport::tighten_to_fixpoint(m);
    auto actual = strong_closure(m);
    ASSERT_EQ(actual.has_value(), expected.has_value()) << i;
    if (actual) EXPECT_EQ(*actual, *expected) << i;
    EXPECT_EQ(m.points(8), actual ? actual->points(8) : std::vector<std::vector<long>>{}) << i;
  }
}

TEST(Octagon, LatticeLaws) {
  OctagonCpa cpa(nullptr, {"x", "y"});
  auto report = testsupport::check_lattice_laws(cpa, testsupport::octagon_states(cpa), 2000, 3);
  EXPECT_EQ(report.failures, 0u) << report.first_failure;
}

}  // namespace
