#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpa/algorithm/reachability.hpp"
#include "cpa/algorithm/refinement.hpp"
#include "cpa/core/registry.hpp"

namespace cpa::algorithm {

enum class Verdict { kSafe, kUnsafe, kUnknown };

std::string to_string(Verdict v);

struct Counterexample {
  std::vector<EdgeId> edges;
  solver::Model model;
  std::vector<Integer> inputs;
  /// The path is feasible over the rationals but no integer model was found.
  bool relaxed = false;
};

struct Statistics {
  std::size_t predicates = 0;               // distinct predicates in the final precision
  std::size_t predicates_per_location = 0;  // per-location set sizes summed
  std::size_t refinements = 0;
  std::size_t reached = 0;
  double wall_s = 0;
  double cpu_s = 0;
};

struct VerificationReport {
  Verdict verdict = Verdict::kUnknown;
  std::string reason;  // set for UNKNOWN
  std::optional<Counterexample> counterexample;
  Statistics stats;
  domains::PredicatePrecision precision;
  /// per_location_sum() of the predicate precision after each refinement.
  std::vector<std::size_t> precision_history;
  /// ARG of the last reachability run.
  AbstractReachabilityGraph arg;
};

/// Instantiates `config.cpas` from `registry` and composes them. Throws
/// UnknownCpaError or CompositionError.
std::shared_ptr<CompositeCpa> build_analysis(const Program& program, const Configuration& config,
                                             const CpaRegistry& registry);

/// Reachability with counterexample-guided refinement of the predicate
/// precision. Every refinement restarts the analysis from the initial state.
VerificationReport cegar_loop(const Program& program, const Configuration& config, const CpaRegistry& registry);
VerificationReport cegar_loop(const Program& program, const Configuration& config);

}  // namespace cpa::algorithm
