#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "cpa/algorithm/reachability.hpp"
#include "cpa/analysis/path_formula.hpp"
#include "cpa/domains/predicate.hpp"
#include "cpa/solver/fourier_motzkin.hpp"

namespace cpa::algorithm {

/// SSA encoding of an edge sequence: one DNF per edge and the SSA versions
/// in effect after each edge.
struct PathEncoding {
  std::vector<solver::Dnf> steps;
  std::vector<analysis::SsaIndex> after;
};

PathEncoding encode_path(const Program& program, const std::vector<EdgeId>& edges);

enum class FeasibilityKind { kConcrete, kRelaxedOnly, kInfeasible };

struct FeasibilityResult {
  FeasibilityKind kind = FeasibilityKind::kInfeasible;
  /// Values of the SSA symbols; integral for Concrete.
  solver::Model model;
  /// Program inputs in the order an execution consumes them (see
  /// witness_inputs). Rounded down for RelaxedOnly.
  std::vector<Integer> inputs;
  /// For Infeasible: length of the shortest infeasible prefix.
  std::size_t prefix_length = 0;
};

/// Decides whether the path can execute. Every combination of DNF branches
/// is explored; a rational model is turned into an integer one by bounded
/// search around it (±16) on each connected group of symbols.
FeasibilityResult check_feasibility(const Program& program, const std::vector<EdgeId>& path,
                                    const solver::SolverLimits& limits = {});

/// Inputs an execution of `path` reads, given the value of every SSA symbol:
/// the uninitialized locals of main (sorted), then for each edge in order
/// the value produced by `nondet()` or the uninitialized locals (sorted) of
/// the called function. Symbols missing from `value` read as 0.
std::vector<Integer> witness_inputs(const Program& program, const std::vector<EdgeId>& path,
                                    const std::map<std::string, Integer>& value);

class RefinementStuckError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using PredicateMap = std::map<LocationId, domains::PredicateSet>;

/// Mines predicates from the first `prefix_length` edges of an infeasible
/// path. A minimal infeasible core is cut after every edge; the constraints
/// of the core before the cut and after it are each projected onto the
/// variable versions live at the cut, and the resulting atoms, renamed back
/// to program variables, become predicates at the cut's location.
PredicateMap discover_predicates(const Program& program, const std::vector<EdgeId>& path,
                                 std::size_t prefix_length, const solver::SolverLimits& limits = {});

/// Adds `found` to `precision` (per location, or into the global set) and
/// throws RefinementStuckError if nothing new was added.
domains::PredicatePrecision refine_precision(const domains::PredicatePrecision& precision, const PredicateMap& found,
                                             PredicateScope scope);

}  // namespace cpa::algorithm
