#include <gtest/gtest.h>

#include "cpa/algorithm/reachability.hpp"
#include "cpa/domains/location.hpp"
#include "cpa/domains/predicate.hpp"
#include "support/interpreter.hpp"
#include "support/random.hpp"

namespace {

using namespace cpa;
using domains::Predicate;
using domains::PredicateCpa;
using domains::PredicatePrecision;
using domains::PredicateSet;
using domains::PredicateState;
using solver::LinearConstraint;
using solver::LinearTerm;
using testsupport::edge_labeled;

LinearTerm var(const std::string& v) { return LinearTerm::variable("main::" + v); }
LinearTerm num(long k) { return LinearTerm::constant(k); }
Predicate le(const LinearTerm& t) { return *domains::canonical_predicate(LinearConstraint::less_equal(t)); }
Predicate eq(const LinearTerm& t) { return *domains::canonical_predicate(LinearConstraint::equal(t)); }

const Predicate x_ge_1 = le(num(1) - var("x"));
const Predicate y_ge_0 = le(-var("y"));

const Program& program() {
  static const Program p = parse(R"(
    void main() {
      int x; int y;
      if (x > 0) { x = nondet(); }
      if (x == 0) { y = 1; }
    })");
  return p;
}

StatePtr holding(PredicateSet s) { return std::make_shared<PredicateState>(false, std::move(s)); }

std::vector<StatePtr> post(const StatePtr& s, const std::string& label, const PredicateSet& at_target) {
  PredicateCpa cpa(program());
  const auto& e = edge_labeled(program(), label);
  auto pi = std::make_shared<PredicatePrecision>(std::map<LocationId, PredicateSet>{{e.target, at_target}},
                                                 PredicateSet{});
  return cpa.transfer(s, e, pi);
}

const PredicateSet& holds(const StatePtr& s) { return static_cast<const PredicateState&>(*s).holds(); }

TEST(PredicateTransfer, GuardEstablishesPredicate) {
  auto next = post(PredicateState::top(), "[x > 0]", {x_ge_1});
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(holds(next[0]), PredicateSet{x_ge_1});
  // oracle: x > 0 normalizes to x >= 1, which entails the predicate
  EXPECT_TRUE(solver::entails({LinearConstraint::less_equal(num(1) - var("x"))}, x_ge_1));
}

TEST(PredicateTransfer, HavocKillsPredicates) {
  auto next = post(holding({x_ge_1}), "x := nondet()", {x_ge_1});
  ASSERT_EQ(next.size(), 1u);
  EXPECT_TRUE(holds(next[0]).empty());
}

TEST(PredicateTransfer, InfeasibleGuardHasNoSuccessor) {
  Predicate x_is_1 = eq(var("x") - num(1)), x_is_0 = eq(var("x"));
  EXPECT_TRUE(post(holding({x_is_1}), "[x == 0]", {x_is_0}).empty());
  EXPECT_FALSE(solver::is_feasible({x_is_1, x_is_0}));
}

TEST(PredicateTransfer, EmptyPrecisionGivesEmptyState) {
  for (const char* label : {"[x > 0]", "x := nondet()", "y := 1"}) {
    auto next = post(PredicateState::top(), label, {});
    ASSERT_EQ(next.size(), 1u) << label;
    EXPECT_TRUE(holds(next[0]).empty()) << label;
  }
}

TEST(PredicateTransfer, UntouchedPredicateSurvives) {
  auto next = post(holding({y_ge_0, x_ge_1}), "x := nondet()", {y_ge_0, x_ge_1});
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(holds(next[0]), PredicateSet{y_ge_0});
}

TEST(PredicateTransfer, AntimonotoneInPrecision) {
  // enlarging the target precision never loses a predicate
  std::vector<Predicate> universe{x_ge_1, y_ge_0, eq(var("x")), le(var("x") - var("y")), eq(var("y") - num(1)),
                                  le(var("x") - num(5))};
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int i = 0; i < 60; ++i) {
    PredicateSet small, extra, start;
    for (const auto& p : universe) {
      if (coin(rng)) small.insert(p);
      if (coin(rng)) extra.insert(p);
      if (coin(rng) && coin(rng)) start.insert(p);
    }
    PredicateSet large = small;
    large.insert(extra.begin(), extra.end());
    for (const char* label : {"[x > 0]", "[x <= 0]", "x := nondet()", "y := 1", "[x == 0]"}) {
      auto a = post(holding(start), label, small);
      auto b = post(holding(start), label, large);
      ASSERT_EQ(a.size(), b.size()) << label;
      if (a.empty()) continue;
      for (const auto& p : holds(a[0])) EXPECT_TRUE(holds(b[0]).count(p)) << label;
    }
  }
}

TEST(PredicateOrder, Examples) {
  PredicateCpa cpa(program());
  EXPECT_TRUE(cpa.less_or_equal(*holding({x_ge_1, y_ge_0}), *holding({x_ge_1})));
  EXPECT_FALSE(cpa.less_or_equal(*holding({}), *holding({x_ge_1})));
  EXPECT_TRUE(cpa.less_or_equal(*PredicateState::bottom(), *holding({x_ge_1})));
  EXPECT_TRUE(cpa.less_or_equal(*PredicateState::bottom(), *PredicateState::bottom()));
}

TEST(PredicatePrec, DropsPredicatesOutsidePrecision) {
  PredicateCpa cpa(program());
  LocationId l{2};
  auto with = std::make_shared<PredicatePrecision>(std::map<LocationId, PredicateSet>{{l, {x_ge_1}}}, PredicateSet{});
  auto without = std::make_shared<PredicatePrecision>();
  auto s = holding({x_ge_1});
  EXPECT_EQ(cpa.prec(s, with, {l, {}}).state, s);
  auto dropped = cpa.prec(s, without, {l, {}});
  EXPECT_TRUE(holds(dropped.state).empty());
  EXPECT_EQ(dropped.precision, without);
  auto bottom = PredicateState::bottom();
  EXPECT_TRUE(cpa.prec(bottom, with, {l, {}}).state->is_bottom());
}

TEST(PredicatePrecision, EffectiveAndCounts) {
  PredicatePrecision pi({{LocationId{1}, {x_ge_1}}, {LocationId{2}, {x_ge_1, y_ge_0}}}, {y_ge_0});
  EXPECT_EQ(pi.effective(LocationId{1}), (PredicateSet{x_ge_1, y_ge_0}));
  EXPECT_EQ(pi.effective(LocationId{7}), PredicateSet{y_ge_0});
  EXPECT_EQ(pi.distinct(), 2u);
  EXPECT_EQ(pi.per_location_sum(), 4u);
}

TEST(CanonicalPredicate, GcdAndTriviality) {
  auto scaled = domains::canonical_predicate(LinearConstraint::less_equal(LinearTerm::variable("x", 2) - num(4)));
  auto plain = domains::canonical_predicate(LinearConstraint::less_equal(LinearTerm::variable("x") - num(2)));
  EXPECT_EQ(scaled, plain);
  EXPECT_FALSE(domains::canonical_predicate(LinearConstraint::less_equal(num(-1))));
}

TEST(Predicate, LatticeLaws) {
  PredicateCpa cpa(testsupport::lattice_program());
  auto report = testsupport::check_lattice_laws(cpa, testsupport::predicate_states(), 2000, 2);
  EXPECT_EQ(report.failures, 0u) << report.first_failure;
}

TEST(PredicateSoundness, ConcreteStoresSatisfyReachedPredicates) {
  Program p = parse(R"(
    void main() {
      int i; int n;
      n = nondet();
      i = 0;
      while (i < n) { i = i + 1; }
      if (n > 2) { i = 0; }
    })");
  auto i = LinearTerm::variable("main::i"), n = LinearTerm::variable("main::n");
  PredicateSet global{le(-i), le(i - n), le(n - num(3)), le(num(3) - i), eq(i)};
  auto cpa = compose({std::make_shared<domains::LocationCpa>(), std::make_shared<PredicateCpa>(p)});
  auto pi = CompositePrecision({NoPrecision::instance(), std::make_shared<PredicatePrecision>(
                                                             std::map<LocationId, PredicateSet>{}, global)});
  auto run = algorithm::run_cpa_plus(p, *cpa, std::make_shared<CompositePrecision>(pi));
  ASSERT_EQ(run.status, algorithm::RunStatus::kCompleted);
  auto ex = testsupport::explore(p, 0, 3, true);
  ASSERT_EQ(ex.runs, 4u);
  std::size_t checked = 0;
  for (const auto& [loc, stores] : ex.stores) {
    for (const auto& store : stores) {
      ++checked;
      std::map<std::string, Rational> point(store.begin(), store.end());
      bool covered = false;
      for (auto id : run.reached.at(loc)) {
        const auto& abs = holds(static_cast<const CompositeState&>(*run.arg.node(id).state).component(1));
        bool all = true;
        for (const auto& q : abs) all = all && solver::Conjunction({q}).satisfied_by(point);
        covered = covered || all;
      }
      EXPECT_TRUE(covered) << to_string(loc);
    }
  }
  EXPECT_GT(checked, 20u);
  EXPECT_GT(run.reached.size(), 5u);
}

}  // namespace
