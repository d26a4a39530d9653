#include "cpa/algorithm/cegar.hpp"

#include <chrono>
#include <ctime>

#include "cpa/domains/builtin.hpp"
#include "cpa/domains/location.hpp"

namespace cpa::algorithm {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kSafe: return "SAFE";
    case Verdict::kUnsafe: return "UNSAFE";
    case Verdict::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::shared_ptr<CompositeCpa> build_analysis(const Program& program, const Configuration& config,
                                             const CpaRegistry& registry) {
  std::vector<CpaPtr> components;
  for (const auto& name : config.cpas) components.push_back(registry.create(name, program, config));
  return compose(std::move(components));
}

VerificationReport cegar_loop(const Program& program, const Configuration& config) {
  static const CpaRegistry registry = domains::builtin_registry();
  return cegar_loop(program, config, registry);
}

VerificationReport cegar_loop(const Program& program, const Configuration& config, const CpaRegistry& registry) {
  const auto wall_start = std::chrono::steady_clock::now();
  const std::clock_t cpu_start = std::clock();
  const solver::SolverLimits solver_limits{config.limits.solver_max_constraints};

  VerificationReport report;
  auto finish = [&](Verdict verdict, std::string reason = {}) {
    report.verdict = verdict;
    report.reason = std::move(reason);
    report.stats.predicates = report.precision.distinct();
    report.stats.predicates_per_location = report.precision.per_location_sum();
    report.stats.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    report.stats.cpu_s = static_cast<double>(std::clock() - cpu_start) / CLOCKS_PER_SEC;
    return std::move(report);
  };

  auto cpa = build_analysis(program, config, registry);
  const int predicate_index = cpa->index_of("predicate");
  const PrecisionPtr base_precision = cpa->initial_precision();

  while (true) {
    PrecisionPtr precision = base_precision;
    if (predicate_index >= 0) {
      precision = CompositeCpa::with_component(base_precision, static_cast<std::size_t>(predicate_index),
                                               std::make_shared<domains::PredicatePrecision>(report.precision));
    }
    RunOptions options;
    options.waitlist = config.waitlist;
    options.max_pops = config.limits.max_pops;
    if (config.limits.time_s > 0) {
      double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
      if (elapsed >= config.limits.time_s) return finish(Verdict::kUnknown, "time limit exceeded");
      options.time_limit_s = config.limits.time_s - elapsed;
    }

    RunResult run;
    try {
      run = run_cpa_plus(program, *cpa, precision, options);
    } catch (const domains::CallstackOverflow& e) {
      return finish(Verdict::kUnknown, e.what());
    }
    report.stats.reached = run.reached.size();
    report.arg = std::move(run.arg);

    if (run.status == RunStatus::kLimitExceeded) return finish(Verdict::kUnknown, run.limit_reason);
    if (run.status == RunStatus::kCompleted) return finish(Verdict::kSafe);

    const std::vector<EdgeId>& path = run.counterexample->edges;
    FeasibilityResult feasibility = check_feasibility(program, path, solver_limits);
    if (feasibility.kind != FeasibilityKind::kInfeasible) {
      report.counterexample = Counterexample{path, std::move(feasibility.model), std::move(feasibility.inputs),
                                             feasibility.kind == FeasibilityKind::kRelaxedOnly};
      return finish(Verdict::kUnsafe);
    }
    if (predicate_index < 0) return finish(Verdict::kUnknown, "spurious counterexample and no predicate analysis");
    if (report.stats.refinements >= config.limits.max_refinements)
      return finish(Verdict::kUnknown, "refinement limit reached");

    PredicateMap found = discover_predicates(program, path, feasibility.prefix_length, solver_limits);
    try {
      report.precision = refine_precision(report.precision, found, config.predicate_scope);
    } catch (const RefinementStuckError& e) {
      return finish(Verdict::kUnknown, e.what());
    }
    ++report.stats.refinements;
    report.precision_history.push_back(report.precision.per_location_sum());
  }
}

}  // namespace cpa::algorithm
