#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpa/frontend/cfa.hpp"
#include "cpa/solver/linear.hpp"

namespace cpa::analysis {

/// Solver symbol for the `index`-th version of a program variable: `x@3`.
std::string ssa_symbol(const std::string& variable, int index);

/// Inverse of ssa_symbol; nullopt for names without an `@index` suffix.
std::optional<std::pair<std::string, int>> parse_ssa_symbol(const std::string& symbol);

/// Current SSA version of every program variable (0 when never written).
class SsaIndex {
 public:
  int index(const std::string& variable) const;
  std::string current(const std::string& variable) const { return ssa_symbol(variable, index(variable)); }
  /// Introduces a fresh version and returns its symbol.
  std::string bump(const std::string& variable);
  const std::map<std::string, int>& indices() const { return indices_; }

 private:
  std::map<std::string, int> indices_;
};

/// Callee locals that start with an unknown value: everything except the
/// parameters and the return slot, sorted by name.
std::vector<std::string> uninitialized_locals(const ControlFlowAutomaton& cfa);

/// One-step strongest postcondition of an edge in SSA form, as DNF over
/// solver symbols. Reads happen at the versions in `ssa` before the edge;
/// writes advance `ssa`. Assume edges yield the normalized condition; an
/// assignment `x := e` yields `x@new = e`; `nondet()` only advances x. A call
/// gives every callee local a fresh version, binds the formals to the
/// actuals and sets the return slot to 0; a return copies the return slot
/// into the result variable.
solver::Dnf encode_edge(const Program& program, const CfaEdge& edge, SsaIndex& ssa);

}  // namespace cpa::analysis
