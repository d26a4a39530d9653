#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpa/frontend/cfa.hpp"

namespace testsupport {

/// How a single concrete run ended.
enum class RunOutcome { kReachedError, kTerminated, kBoundExceeded };

struct RunResult {
  RunOutcome outcome = RunOutcome::kTerminated;
  /// Inputs actually consumed, in consumption order.
  std::vector<cpa::Integer> consumed;
  /// Whether the run ever read the value of each consumed input.
  std::vector<bool> read;
  /// Locations visited, in order.
  std::vector<cpa::LocationId> trace;
};

/// Reference interpreter over the CFA. Unknown values are read from `inputs`
/// in this order: the uninitialized locals of main (sorted) at start, then the
/// value of every `nondet()` and the uninitialized locals (sorted) of each
/// callee on entry. Missing inputs read as 0. A run stops after visiting any
/// single location more than `max_visits` times.
RunResult run(const cpa::Program& program, const std::vector<cpa::Integer>& inputs,
              int max_visits = 65);

struct Exploration {
  bool error_reachable = false;
  bool bound_exceeded = false;
  std::size_t runs = 0;
  std::optional<std::vector<cpa::Integer>> witness;
  /// Every concrete store observed at each location (variable → value).
  std::map<cpa::LocationId, std::vector<std::map<std::string, cpa::Integer>>> stores;
};

/// Enumerates every execution whose inputs all lie in [lo, hi]. Inputs a
/// run never reads are not varied, since their value cannot matter. With
/// `collect_stores`, records each visited store per location.
Exploration explore(const cpa::Program& program, int lo = 0, int hi = 3, bool collect_stores = false,
                    int max_visits = 65);

}  // namespace testsupport
