#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cpa/domains/builtin.hpp"
#include "cpa/driver/driver.hpp"
#include "support/corpus.hpp"

namespace {

using namespace cpa;
using namespace cpa::driver;
using algorithm::Verdict;

const CpaRegistry& registry() {
  static const CpaRegistry r = domains::builtin_registry();
  return r;
}

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text, registry());
  } catch (const ConfigError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

TEST(ParseConfig, EmptyGivesDefaults) {
  Configuration c = parse_config("", registry());
  EXPECT_EQ(c.cpas, (std::vector<std::string>{"location", "callstack", "explicit", "predicate"}));
  EXPECT_EQ(c.threshold, Threshold::of(5));
  EXPECT_EQ(c.waitlist, WaitlistOrder::kBfs);
  EXPECT_EQ(c.explicit_counter, CounterMode::kPerLocation);
  EXPECT_EQ(c.predicate_scope, PredicateScope::kLocation);
  EXPECT_EQ(c.limits.max_refinements, 200u);
}

TEST(ParseConfig, InfiniteThreshold) {
  EXPECT_TRUE(parse_config("explicit.threshold = inf", registry()).threshold.is_infinite());
}

TEST(ParseConfig, AllKeys) {
  Configuration c = parse_config(R"(# comment line
cpas = location, callstack, octagon, predicate
explicit.threshold = 3   # trailing comment
explicit.counter = global
predicate.scope = global
waitlist = DFS
limits.max_refinements = 7
limits.max_pops = 1000
limits.time_s = 2.5
limits.callstack_depth = 4
limits.solver_max_constraints = 99
output.format = text
output.emit_dot = true
octagon.merge = join
)",
                                 registry());
  EXPECT_EQ(c.cpas, (std::vector<std::string>{"location", "callstack", "octagon", "predicate"}));
  EXPECT_EQ(c.threshold, Threshold::of(3));
  EXPECT_EQ(c.explicit_counter, CounterMode::kGlobal);
  EXPECT_EQ(c.predicate_scope, PredicateScope::kGlobal);
  EXPECT_EQ(c.waitlist, WaitlistOrder::kDfs);
  EXPECT_EQ(c.limits.max_refinements, 7u);
  EXPECT_EQ(c.limits.max_pops, 1000u);
  EXPECT_DOUBLE_EQ(c.limits.time_s, 2.5);
  EXPECT_EQ(c.limits.callstack_depth, 4u);
  EXPECT_EQ(c.limits.solver_max_constraints, 99u);
  EXPECT_TRUE(c.emit_dot);
  EXPECT_EQ(c.merge.at("octagon"), MergeMode::kJoin);
}

TEST(ParseConfig, ErrorsCarryLine) {
  EXPECT_EQ(error_line("cpas = explicit"), 1u);
  EXPECT_EQ(error_line("\n\ncpas = location, location"), 3u);
  EXPECT_EQ(error_line("waitlist = BFS\nexplicit.threshold = many"), 2u);
  EXPECT_EQ(error_line("no_such_key = 1"), 1u);
  EXPECT_EQ(error_line("missing equals sign"), 1u);
  EXPECT_EQ(error_line("cpas = location, interval"), 1u);
  EXPECT_EQ(error_line("x = 1\nwidget.merge = join"), 1u);
  EXPECT_EQ(error_line("output.format = json"), 1u);
  EXPECT_EQ(error_line("explicit.counter = sometimes"), 1u);
  try {
    parse_config("# header\ncpas = explicit", registry());
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("line 2: ", 0), 0u) << e.what();
  }
}

TEST(LoadConfig, ReadsFile) {
  auto path = std::filesystem::temp_directory_path() / "minicpa_driver_test.properties";
  std::ofstream(path) << "explicit.threshold = 0\n";
  EXPECT_EQ(load_config(path, registry()).threshold, Threshold::of(0));
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path, registry()), ConfigError);
}

TEST(ExitStatus, Contract) {
  EXPECT_EQ(exit_status(Verdict::kSafe), 0);
  EXPECT_EQ(exit_status(Verdict::kUnsafe), 1);
  EXPECT_EQ(exit_status(Verdict::kUnknown), 2);
}

Program load(const std::string& name) {
  return parse(testsupport::read_file(std::string(MINICPA_PROGRAMS_DIR) + "/" + name + ".mc"));
}

TEST(RenderReport, SafeProgram) {
  Program p = load("no_error");
  Configuration c;
  auto text = render_report(p, "no_error", c, algorithm::cegar_loop(p, c), true);
  EXPECT_EQ(text.rfind("verdict: SAFE\n", 0), 0u);
  EXPECT_NE(text.find("\nrefinements: 0\n"), std::string::npos);
  EXPECT_NE(text.find("\npredicates: 0\n"), std::string::npos);
  EXPECT_NE(text.find("\nreached: "), std::string::npos);
  EXPECT_NE(text.find("\ntime_s: "), std::string::npos);
}

TEST(RenderReport, UnsafeListsEdgesAndWitness) {
  Program p = load("nondet_branch_BUG");
  Configuration c;
  auto report = algorithm::cegar_loop(p, c);
  auto text = render_report(p, "nondet_branch_BUG", c, report, false);
  EXPECT_EQ(text.rfind("verdict: UNSAFE\n", 0), 0u);
  ASSERT_TRUE(report.counterexample);
  for (EdgeId e : report.counterexample->edges) EXPECT_NE(text.find(describe(p.edge(e).op)), std::string::npos);
  for (const auto& [symbol, value] : report.counterexample->model.assignment)
    EXPECT_NE(text.find(symbol + " = " + value.get_str()), std::string::npos) << symbol;
  EXPECT_EQ(text.find("[timing]"), std::string::npos);
}

TEST(RenderReport, StableSectionIsDeterministic) {
  Program p = load("loop_counter_BUG");
  Configuration c;
  auto first = render_report(p, "loop_counter_BUG", c, algorithm::cegar_loop(p, c), true);
  auto second = render_report(p, "loop_counter_BUG", c, algorithm::cegar_loop(p, c), true);
  EXPECT_EQ(stable_section(first), stable_section(second));
  EXPECT_EQ(stable_section(first), render_report(p, "loop_counter_BUG", c, algorithm::cegar_loop(p, c), false));
}

TEST(Bench, ThresholdOrder) {
  auto ordered = ordered_thresholds({Threshold::infinite(), Threshold::of(5), Threshold::of(0), Threshold::of(5)});
  EXPECT_EQ(ordered, (std::vector<Threshold>{Threshold::of(0), Threshold::of(5), Threshold::infinite()}));
}

BenchTable sample_table() {
  BenchTable t;
  t.thresholds = {Threshold::of(0), Threshold::infinite()};
  t.rows.push_back({"alpha", {{Verdict::kSafe, 0.125, 3, 2, false, ""}, {Verdict::kSafe, 0.001, 0, 0, false, ""}}});
  t.rows.push_back({"beta_BUG",
                    {{Verdict::kUnsafe, 1.5, 1, 1, true, ""}, {Verdict::kUnknown, 2, 0, 0, false, "max pops, \"sic\""}}});
  return t;
}

TEST(Bench, CsvRoundTrip) {
  auto table = sample_table();
  auto csv = to_csv(table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "program,threshold,verdict,time_s,preds,refines,relaxed,reason");
  EXPECT_EQ(parse_bench_csv(csv), table);
  EXPECT_THROW(parse_bench_csv("program,threshold\nalpha,0\n"), std::invalid_argument);
}

TEST(Bench, TablesMarkAbortedCells) {
  auto table = sample_table();
  auto runtime = render_runtime_table(table);
  auto counts = render_counts_table(table);
  EXPECT_NE(runtime.find("0.125"), std::string::npos);
  EXPECT_NE(runtime.find("inf"), std::string::npos);
  std::string beta_counts = counts.substr(counts.find("beta_BUG"));
  EXPECT_NE(beta_counts.find('-'), std::string::npos);
  std::string beta_runtime = runtime.substr(runtime.find("beta_BUG"));
  EXPECT_NE(beta_runtime.find('-'), std::string::npos);
  EXPECT_EQ(beta_runtime.find("2.000"), std::string::npos);
}

TEST(Bench, SweepSmallDirectory) {
  auto dir = std::filesystem::temp_directory_path() / "minicpa_bench_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "b_BUG.mc") << "void main() { int x; x = nondet(); if (x == 3) { ERROR: ; } }";
  std::ofstream(dir / "a.mc") << "void main() { int x; x = 1; if (x == 3) { ERROR: ; } }";
  std::ofstream(dir / "c.mc") << "void main() { syntax error";
  std::ofstream(dir / "notes.txt") << "ignored";
  std::size_t calls = 0;
  auto table = bench_sweep(dir, {Threshold::infinite(), Threshold::of(0)}, Configuration{},
                           [&](const std::string&, const Threshold&, const BenchCell&) { ++calls; });
  std::filesystem::remove_all(dir);
  EXPECT_EQ(calls, 6u);
  EXPECT_EQ(table.thresholds, (std::vector<Threshold>{Threshold::of(0), Threshold::infinite()}));
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[0].program, "a");
  EXPECT_EQ(table.rows[0].cells[0].verdict, Verdict::kSafe);
  EXPECT_EQ(table.rows[1].cells[1].verdict, Verdict::kUnsafe);
  EXPECT_TRUE(table.rows[2].cells[0].aborted());
  EXPECT_FALSE(table.rows[2].cells[0].reason.empty());
  EXPECT_EQ(parse_bench_csv(to_csv(table)), table);
}

}  // namespace
