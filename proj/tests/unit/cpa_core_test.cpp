#include <gtest/gtest.h>

#include "cpa/core/composite.hpp"
#include "cpa/domains/builtin.hpp"
#include "cpa/domains/explicit_value.hpp"
#include "cpa/domains/location.hpp"
#include "support/random.hpp"

namespace {

using namespace cpa;
using domains::ExplicitCpa;
using domains::ExplicitState;
using domains::LocationCpa;
using domains::LocationState;
using testsupport::edge_labeled;

const Program& program() {
  static const Program p = parse("void main() { int x; x = 3; if (x > 5) { ERROR: ; } }");
  return p;
}

CpaPtr location() { return std::make_shared<LocationCpa>(); }
CpaPtr explicit_inf() { return std::make_shared<ExplicitCpa>(program(), Threshold::infinite()); }

StatePtr at(LocationId l, StatePtr value) {
  return std::make_shared<CompositeState>(std::vector<StatePtr>{std::make_shared<LocationState>(l), std::move(value)});
}

StatePtr x_is(long v) { return ExplicitState::of({{"main::x", v}}); }

TEST(Compose, LocationOnly) {
  auto cpa = compose({location()});
  const auto& e = edge_labeled(program(), "x := 3");
  auto s = cpa->initial_state(e.source);
  auto next = cpa->transfer(s, e, cpa->initial_precision());
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(cpa->location_of(*next[0]), e.target);
}

TEST(Compose, ComponentwiseAssign) {
  auto cpa = compose({location(), explicit_inf()});
  const auto& e = edge_labeled(program(), "x := 3");
  auto next = cpa->transfer(at(e.source, ExplicitState::top()), e, cpa->initial_precision());
  ASSERT_EQ(next.size(), 1u);
  EXPECT_TRUE(next[0]->equals(*at(e.target, x_is(3))));
}

TEST(Compose, BottomComponentDropsSuccessor) {
  auto cpa = compose({location(), explicit_inf()});
  const auto& e = edge_labeled(program(), "[x > 5]");
  // oracle: the explicit analysis alone has no successor either
  ExplicitCpa alone(program(), Threshold::infinite());
  EXPECT_TRUE(alone.transfer(x_is(3), e, alone.initial_precision()).empty());
  EXPECT_TRUE(cpa->transfer(at(e.source, x_is(3)), e, cpa->initial_precision()).empty());
}

TEST(Compose, RejectsBadLocationPlacement) {
  EXPECT_THROW(compose({explicit_inf()}), CompositionError);
  EXPECT_THROW(compose({explicit_inf(), location()}), CompositionError);
  EXPECT_THROW(compose({location(), location()}), CompositionError);
  EXPECT_THROW(compose({}), CompositionError);
}

TEST(Compose, MergeOnlyAtSameLocation) {
  auto cpa = compose({location(), explicit_inf()});
  cpa->components()[1]->set_merge_mode(MergeMode::kJoin);
  auto pi = cpa->initial_precision();
  LocationId l0{0}, l1{1};
  auto other = cpa->merge(at(l0, x_is(1)), at(l1, x_is(2)), pi);
  EXPECT_TRUE(other->equals(*at(l1, x_is(2))));
  auto same = cpa->merge(at(l0, x_is(1)), at(l0, x_is(2)), pi);
  EXPECT_TRUE(same->equals(*at(l0, ExplicitState::top())));
}

TEST(Compose, StopComparesSameLocationOnly) {
  auto cpa = compose({location(), explicit_inf()});
  auto pi = cpa->initial_precision();
  EXPECT_FALSE(cpa->stop(at(LocationId{0}, x_is(1)), {at(LocationId{1}, ExplicitState::top())}, pi));
  EXPECT_TRUE(cpa->stop(at(LocationId{0}, x_is(1)), {at(LocationId{0}, ExplicitState::top())}, pi));
}

TEST(Compose, BottomIsAnyBottomComponent) {
  CompositeState s({std::make_shared<LocationState>(LocationId{0}), ExplicitState::bottom()});
  EXPECT_TRUE(s.is_bottom());
}

TEST(MergeSep, ReturnsSecond) {
  auto s1 = x_is(1), s2 = x_is(2);
  EXPECT_EQ(merge_sep(s1, s2), s2);
  EXPECT_EQ(merge_sep(ExplicitState::bottom(), s2), s2);
  EXPECT_EQ(merge_sep(s2, s2), s2);
}

TEST(StopSep, Examples) {
  ExplicitCpa cpa(program(), Threshold::infinite());
  EXPECT_TRUE(stop_sep(cpa, x_is(3), {x_is(3)}));
  EXPECT_TRUE(stop_sep(cpa, x_is(3), {ExplicitState::top()}));
  EXPECT_FALSE(stop_sep(cpa, x_is(3), {x_is(4)}));
}

TEST(Registry, NamesAndErrors) {
  auto registry = domains::builtin_registry();
  EXPECT_EQ(registry.names(), (std::vector<std::string>{"callstack", "explicit", "location", "octagon", "predicate"}));
  EXPECT_THROW(registry.add("explicit", {}), std::invalid_argument);
  EXPECT_THROW(registry.create("interval", program(), {}), UnknownCpaError);
  Configuration config;
  config.merge["explicit"] = MergeMode::kJoin;
  EXPECT_EQ(registry.create("explicit", program(), config)->merge_mode(), MergeMode::kJoin);
}

TEST(Composite, LatticeLaws) {
  auto cpa = testsupport::lattice_composite();
  auto report = testsupport::check_lattice_laws(*cpa, testsupport::composite_states(), 2000, 5);
  EXPECT_EQ(report.failures, 0u) << report.first_failure;
}

TEST(Composite, MergeCoversSecondArgument) {
  auto cpa = testsupport::lattice_composite();
  for (const auto& c : cpa->components()) c->set_merge_mode(MergeMode::kJoin);
  auto generate = testsupport::composite_states();
  std::mt19937 rng(9);
  for (int i = 0; i < 500; ++i) {
    auto s1 = generate(rng), s2 = generate(rng);
    if (s1->is_bottom() || s2->is_bottom()) continue;
    EXPECT_TRUE(cpa->less_or_equal(*s2, *cpa->merge(s1, s2, cpa->initial_precision())));
  }
}

}  // namespace
