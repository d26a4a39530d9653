#include <gtest/gtest.h>

#include "cpa/algorithm/cegar.hpp"
#include "cpa/domains/builtin.hpp"
#include "cpa/domains/explicit_value.hpp"
#include "cpa/domains/location.hpp"
#include "cpa/domains/predicate.hpp"
#include "support/corpus.hpp"
#include "support/interpreter.hpp"

namespace {

using namespace cpa;
using namespace cpa::algorithm;
using domains::PredicateSet;
using solver::LinearConstraint;
using solver::LinearTerm;

std::shared_ptr<CompositeCpa> location_only() { return compose({std::make_shared<domains::LocationCpa>()}); }

std::shared_ptr<CompositeCpa> location_explicit(const Program& p) {
  return compose({std::make_shared<domains::LocationCpa>(),
                  std::make_shared<domains::ExplicitCpa>(p, Threshold::infinite())});
}

RunResult reach(const Program& p, const CompositeCpa& cpa, RunOptions options = {}) {
  return run_cpa_plus(p, cpa, cpa.initial_precision(), options);
}

// Path the location analysis alone finds to the first error label.
std::vector<EdgeId> syntactic_error_path(const Program& p) {
  auto cpa = location_only();
  auto run = reach(p, *cpa);
  if (!run.counterexample) throw std::logic_error("no error label reachable");
  return run.counterexample->edges;
}

std::vector<std::string> labels(const Program& p, const std::vector<EdgeId>& edges) {
  std::vector<std::string> out;
  for (EdgeId e : edges) out.push_back(describe(p.edge(e).op));
  return out;
}

LinearTerm var(const std::string& v) { return LinearTerm::variable(v); }
LinearTerm num(long k) { return LinearTerm::constant(k); }
domains::Predicate pred(const LinearConstraint& c) { return *domains::canonical_predicate(c); }

TEST(RunCpaPlus, LocationOnlyReachesEveryLocation) {
  Program p = parse("void main() { int x; x = 1; if (x > 0) { x = 2; } else { x = 3; } while (x > 0) { x = x - 1; } }");
  auto cpa = location_only();
  auto run = reach(p, *cpa);
  EXPECT_EQ(run.status, RunStatus::kCompleted);
  EXPECT_FALSE(run.counterexample);
  std::set<LocationId> seen;
  for (NodeId id : run.reached.members()) seen.insert(run.arg.node(id).location);
  EXPECT_EQ(seen, std::set<LocationId>(p.main().locations.begin(), p.main().locations.end()));
}

TEST(RunCpaPlus, ConstantGuardPrunesError) {
  Program p = parse("void main() { int x; x = 0; if (x == 1) { ERROR: ; } }");
  EXPECT_FALSE(testsupport::explore(p).error_reachable);
  auto cpa = location_explicit(p);
  auto run = reach(p, *cpa);
  EXPECT_EQ(run.status, RunStatus::kCompleted);
  EXPECT_FALSE(run.counterexample);
}

TEST(RunCpaPlus, NondetGuardReachesError) {
  Program p = parse("void main() { int x; x = nondet(); if (x == 1) { ERROR: ; } }");
  auto cpa = location_explicit(p);
  auto run = reach(p, *cpa);
  ASSERT_EQ(run.status, RunStatus::kErrorReached);
  ASSERT_TRUE(run.counterexample);
  EXPECT_EQ(labels(p, run.counterexample->edges), (std::vector<std::string>{"x := nondet()", "[x == 1]"}));
  EXPECT_TRUE(p.is_error(p.edge(run.counterexample->edges.back()).target));
  // first input is the uninitialized x, the second one the nondet value
  EXPECT_EQ(testsupport::run(p, {0, 1}).outcome, testsupport::RunOutcome::kReachedError);
}

TEST(RunCpaPlus, PopLimit) {
  Program p = parse("void main() { int x; x = 0; while (x >= 0) { x = x + 1; } }");
  auto cpa = location_explicit(p);
  RunOptions options;
  options.max_pops = 50;
  auto run = reach(p, *cpa, options);
  EXPECT_EQ(run.status, RunStatus::kLimitExceeded);
  EXPECT_FALSE(run.limit_reason.empty());
  EXPECT_LE(run.pops, 50u);
}

TEST(RunCpaPlus, ArgStaysWellFormedAfterEveryPop) {
  for (const auto& prog : testsupport::corpus()) {
    Program p = parse(prog.source);
    auto cpa = compose({std::make_shared<domains::LocationCpa>(),
                        std::make_shared<domains::CallstackCpa>(p.main_function()),
                        std::make_shared<domains::ExplicitCpa>(p, Threshold::of(2))});
    RunOptions options;
    std::size_t violations = 0;
    options.on_pop = [&](const AbstractReachabilityGraph& arg, const ReachedSet& reached, const Waitlist& waitlist) {
      for (NodeId id : waitlist.items())
        if (!reached.contains(id)) ++violations;
      for (NodeId id = 0; id < arg.size(); ++id) {
        // parents are created before their children, so walks terminate
        const auto& parent = arg.node(id).parent;
        if (id == arg.root() ? parent.has_value() : (!parent || *parent >= id)) ++violations;
      }
    };
    reach(p, *cpa, options);
    EXPECT_EQ(violations, 0u) << prog.name;
  }
}

TEST(ExtractPath, ErrorAtEntry) {
  Program p = parse("void main() { ERROR: ; }");
  auto path = syntactic_error_path(p);
  EXPECT_LE(path.size(), 1u);
}

TEST(ExtractPath, LinearProgram) {
  Program p = parse("void main() { int x; x = 1; x = x + 1; ERROR: ; }");
  EXPECT_EQ(labels(p, syntactic_error_path(p)), (std::vector<std::string>{"x := 1", "x := x + 1"}));
}

TEST(ExtractPath, EdgesAreAdjacent) {
  for (const auto& prog : testsupport::corpus()) {
    Program p = parse(prog.source);
    auto cpa = location_only();
    auto run = reach(p, *cpa);
    if (!run.counterexample) continue;
    const auto& cex = *run.counterexample;
    ASSERT_EQ(cex.states.size(), cex.edges.size() + 1) << prog.name;
    ASSERT_FALSE(cex.edges.empty()) << prog.name;
    EXPECT_EQ(p.edge(cex.edges.front()).source, p.main().entry) << prog.name;
    for (std::size_t i = 1; i < cex.edges.size(); ++i)
      EXPECT_EQ(p.edge(cex.edges[i - 1]).target, p.edge(cex.edges[i]).source) << prog.name;
    EXPECT_TRUE(p.is_error(p.edge(cex.edges.back()).target)) << prog.name;
    auto again = extract_path(run.arg, cex.nodes.back());
    EXPECT_EQ(again.edges, cex.edges);
  }
}

TEST(CheckFeasibility, ConcreteModel) {
  Program p = parse("void main() { int x; x = nondet(); if (x == 1) { ERROR: ; } }");
  auto r = check_feasibility(p, syntactic_error_path(p));
  ASSERT_EQ(r.kind, FeasibilityKind::kConcrete);
  // the model satisfies the guard after substitution
  EXPECT_EQ(r.model.assignment.at("main::x@1"), 1);
  EXPECT_EQ(testsupport::run(p, r.inputs).outcome, testsupport::RunOutcome::kReachedError);
}

TEST(CheckFeasibility, InfeasiblePrefix) {
  Program p = parse("void main() { int x; x = 0; x = x + 1; if (x == 0) { ERROR: ; } }");
  auto path = syntactic_error_path(p);
  auto r = check_feasibility(p, path);
  EXPECT_EQ(r.kind, FeasibilityKind::kInfeasible);
  EXPECT_EQ(r.prefix_length, 3u);
  // oracle: x0 = 0, x1 = x0 + 1, x1 = 0 has no rational solution
  solver::Conjunction c{LinearConstraint::equal(var("x0")), LinearConstraint::equal(var("x1") - var("x0") - num(1)),
                        LinearConstraint::equal(var("x1"))};
  EXPECT_FALSE(solver::is_feasible(c));
}

TEST(CheckFeasibility, ParityIsRelaxedOnly) {
  Program p = parse("void main() { int x; x = nondet(); if (2 * x == 1) { ERROR: ; } }");
  auto r = check_feasibility(p, syntactic_error_path(p));
  EXPECT_EQ(r.kind, FeasibilityKind::kRelaxedOnly);
}

TEST(CheckFeasibility, BlowupIsRelaxedOnly) {
  Program p = parse(R"(void main() { int a; int b; int c; int d;
    if (a <= b) { if (b <= c) { if (c <= d) { if (d <= a - 1) { ERROR: ; } } } } })");
  EXPECT_EQ(check_feasibility(p, syntactic_error_path(p), solver::SolverLimits{1}).kind,
            FeasibilityKind::kRelaxedOnly);
  EXPECT_EQ(check_feasibility(p, syntactic_error_path(p)).kind, FeasibilityKind::kInfeasible);
}

TEST(WitnessInputs, OrderFollowsExecution) {
  Program p = parse(R"(
    int pick(int a) { int r; int s; r = nondet(); return a + r + s; }
    void main() { int y; int x; x = nondet(); y = pick(x); if (y == 9) { ERROR: ; } })");
  auto path = syntactic_error_path(p);
  std::map<std::string, Integer> value{{"main::x@0", 1}, {"main::y@0", 2}, {"main::x@1", 3},
                                       {"pick::r@1", 4}, {"pick::s@1", 5}, {"pick::r@2", 6}};
  // main's locals sorted, main's nondet, the callee's locals sorted, its nondet
  EXPECT_EQ(witness_inputs(p, path, value), (std::vector<Integer>{1, 2, 3, 4, 5, 6}));
}

TEST(DiscoverPredicates, IncrementCut) {
  Program p = parse("void main() { int x; x = 0; x = x + 1; if (x == 0) { ERROR: ; } }");
  auto path = syntactic_error_path(p);
  auto found = discover_predicates(p, path, 3);
  LocationId cut = p.edge(path[1]).target;
  ASSERT_TRUE(found.count(cut));
  auto x = var("main::x");
  EXPECT_TRUE(found.at(cut).count(pred(LinearConstraint::equal(x - num(1)))));
  EXPECT_TRUE(found.at(cut).count(pred(LinearConstraint::equal(x))));

  // rerunning with the mined predicates removes the path; x == 1 at the cut
  // needs x == 0 one location earlier to be derivable
  EXPECT_TRUE(found.at(p.edge(path[0]).target).count(pred(LinearConstraint::equal(x))));
  auto cpa = compose({std::make_shared<domains::LocationCpa>(), std::make_shared<domains::PredicateCpa>(p)});
  auto precision = CompositeCpa::with_component(cpa->initial_precision(), 1,
                                                std::make_shared<domains::PredicatePrecision>(found, PredicateSet{}));
  EXPECT_EQ(run_cpa_plus(p, *cpa, precision).status, RunStatus::kCompleted);
}

TEST(DiscoverPredicates, TightenedBound) {
  Program p = parse("void main() { int y; if (y > 2) { if (y < 1) { ERROR: ; } } }");
  auto path = syntactic_error_path(p);
  ASSERT_EQ(check_feasibility(p, path).prefix_length, 2u);
  auto found = discover_predicates(p, path, 2);
  LocationId cut = p.edge(path[0]).target;
  auto y_ge_3 = pred(LinearConstraint::less_equal(num(3) - var("main::y")));
  ASSERT_TRUE(found.count(cut));
  EXPECT_TRUE(found.at(cut).count(y_ge_3));
  // oracle: y >= 3 together with y < 1 is infeasible
  EXPECT_FALSE(solver::is_feasible({y_ge_3, LinearConstraint::less_equal(var("main::y"))}));
}

TEST(RefinePrecision, FirstRefinementIsNeverStuck) {
  Program p = parse("void main() { int x; x = 0; x = x + 1; if (x == 0) { ERROR: ; } }");
  auto path = syntactic_error_path(p);
  auto found = discover_predicates(p, path, 3);
  domains::PredicatePrecision refined;
  ASSERT_NO_THROW(refined = refine_precision({}, found, PredicateScope::kLocation));
  EXPECT_GT(refined.per_location_sum(), 0u);
  EXPECT_THROW(refine_precision(refined, found, PredicateScope::kLocation), RefinementStuckError);

  auto global = refine_precision({}, found, PredicateScope::kGlobal);
  EXPECT_TRUE(global.by_location().empty());
  EXPECT_EQ(global.global().size(), global.distinct());
}

Configuration with_threshold(Threshold t) {
  Configuration c;
  c.threshold = t;
  return c;
}

Program load(const std::string& name) {
  return parse(testsupport::read_file(std::string(MINICPA_PROGRAMS_DIR) + "/" + name + ".mc"));
}

TEST(CegarLoop, SafeLoopNeedsPredicatesWithoutValues) {
  Program p = load("loop_counter");
  auto r = cegar_loop(p, with_threshold(Threshold::of(0)));
  EXPECT_EQ(r.verdict, Verdict::kSafe);
  EXPECT_GE(r.stats.refinements, 1u);
  EXPECT_GE(r.stats.predicates, 1u);
  EXPECT_EQ(r.precision_history.size(), r.stats.refinements);
}

TEST(CegarLoop, SafeLoopAtInfinityNeedsNoRefinement) {
  auto r = cegar_loop(load("loop_counter"), with_threshold(Threshold::infinite()));
  EXPECT_EQ(r.verdict, Verdict::kSafe);
  EXPECT_EQ(r.stats.refinements, 0u);
  EXPECT_EQ(r.stats.predicates, 0u);
}

TEST(CegarLoop, BugVariantWitnessReplays) {
  Program p = load("loop_counter_BUG");
  for (Threshold t : {Threshold::of(0), Threshold::of(2), Threshold::of(3), Threshold::of(5), Threshold::infinite()}) {
    auto r = cegar_loop(p, with_threshold(t));
    ASSERT_EQ(r.verdict, Verdict::kUnsafe) << t.to_string();
    ASSERT_TRUE(r.counterexample);
    EXPECT_FALSE(r.counterexample->relaxed);
    EXPECT_EQ(testsupport::run(p, r.counterexample->inputs).outcome, testsupport::RunOutcome::kReachedError);
  }
}

TEST(CegarLoop, RelaxedCounterexampleIsFlagged) {
  auto r = cegar_loop(load("parity_relaxed"), with_threshold(Threshold::of(0)));
  EXPECT_EQ(r.verdict, Verdict::kUnsafe);
  ASSERT_TRUE(r.counterexample);
  EXPECT_TRUE(r.counterexample->relaxed);
}

TEST(CegarLoop, UnknownOutcomes) {
  Program p = load("loop_counter");
  Configuration c = with_threshold(Threshold::of(0));
  c.limits.max_refinements = 0;
  auto r = cegar_loop(p, c);
  EXPECT_EQ(r.verdict, Verdict::kUnknown);
  EXPECT_EQ(r.reason, "refinement limit reached");

  c = with_threshold(Threshold::of(0));
  c.cpas = {"location", "callstack", "explicit"};
  EXPECT_EQ(cegar_loop(p, c).verdict, Verdict::kUnknown);

  Program deep = load("call_chain");
  c = Configuration{};
  c.limits.callstack_depth = 1;
  r = cegar_loop(deep, c);
  EXPECT_EQ(r.verdict, Verdict::kUnknown);
  EXPECT_FALSE(r.reason.empty());

  c = with_threshold(Threshold::infinite());
  c.cpas = {"location", "explicit"};
  c.limits.max_pops = 10;
  Program endless = parse("void main() { int x; x = 0; while (x >= 0) { x = x + 1; } ERROR: ; }");
  EXPECT_EQ(cegar_loop(endless, c).verdict, Verdict::kUnknown);
}

TEST(CegarLoop, BuildAnalysisRejectsBadConfig) {
  Program p = load("loop_counter");
  Configuration c;
  c.cpas = {"explicit", "location"};
  EXPECT_THROW(build_analysis(p, c, domains::builtin_registry()), CompositionError);
  c.cpas = {"location", "interval"};
  EXPECT_THROW(build_analysis(p, c, domains::builtin_registry()), UnknownCpaError);
}

}  // namespace
