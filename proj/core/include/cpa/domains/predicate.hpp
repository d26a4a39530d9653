#pragma once

#include <map>
#include <mutex>
#include <set>
#include <tuple>
#include <string>

#include "cpa/core/cpa.hpp"
#include "cpa/solver/fourier_motzkin.hpp"

namespace cpa::domains {

/// A predicate is a canonical linear atom over program variables (`≤ 0` or
/// `= 0`, tightened and gcd-reduced), so set membership is syntactic.
using Predicate = solver::LinearConstraint;
using PredicateSet = std::set<Predicate>;

/// Canonical form used for predicates; nullopt for atoms that are trivially
/// true or false.
std::optional<Predicate> canonical_predicate(const solver::LinearConstraint& atom);

/// Conjunction of the predicates known to hold, or ⊥.
class PredicateState final : public AbstractState {
 public:
  PredicateState(bool bottom, PredicateSet holds);
  static std::shared_ptr<const PredicateState> top();
  static std::shared_ptr<const PredicateState> bottom();

  const PredicateSet& holds() const { return holds_; }
  bool is_bottom() const override { return bottom_; }
  bool equals(const AbstractState& other) const override;
  std::size_t hash() const override { return hash_; }
  std::string to_string() const override;

 private:
  bool bottom_;
  PredicateSet holds_;
  std::size_t hash_ = 0;
};

/// Location-indexed predicates plus a set that applies everywhere.
class PredicatePrecision final : public Precision {
 public:
  PredicatePrecision() = default;
  PredicatePrecision(std::map<LocationId, PredicateSet> by_location, PredicateSet global)
      : by_location_(std::move(by_location)), global_(std::move(global)) {}

  const std::map<LocationId, PredicateSet>& by_location() const { return by_location_; }
  const PredicateSet& global() const { return global_; }
  PredicateSet effective(LocationId location) const;
  bool contains(LocationId location, const Predicate& p) const;

  /// Number of distinct predicates over all locations and the global set.
  std::size_t distinct() const;
  /// Sum of the per-location set sizes plus the global set size.
  std::size_t per_location_sum() const;

  std::string to_string() const override;
  friend bool operator==(const PredicatePrecision&, const PredicatePrecision&) = default;

 private:
  std::map<LocationId, PredicateSet> by_location_;
  PredicateSet global_;
};

/// Cartesian predicate abstraction recomputed on every edge.
class PredicateCpa final : public ConfigurableProgramAnalysis {
 public:
  explicit PredicateCpa(const Program& program, solver::SolverLimits limits = {})
      : program_(program), limits_(limits) {}

  std::string name() const override { return "predicate"; }
  StatePtr initial_state(LocationId entry) const override;
  PrecisionPtr initial_precision() const override;
  bool less_or_equal(const AbstractState& a, const AbstractState& b) const override;
  StatePtr join(const StatePtr& a, const StatePtr& b) const override;
  std::vector<StatePtr> transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr& precision) const override;
  Adjusted prec(const StatePtr& s, const PrecisionPtr& precision, const ReachedView& reached) const override;

 private:
  // Predicates holding after `edge`, or nullopt when the edge is infeasible.
  std::optional<PredicateSet> post(const PredicateState& state, const CfaEdge& edge,
                                   const PredicateSet& candidates) const;

  using TransferKey = std::tuple<EdgeId, PredicateSet, PredicateSet>;

  const Program& program_;
  solver::SolverLimits limits_;
  mutable std::mutex cache_mutex_;
  mutable std::map<TransferKey, std::optional<PredicateSet>> cache_;
};

/// Constraints of `c` that share variables, directly or transitively, with
/// `seed`.
solver::Conjunction slice(const solver::Conjunction& c, const std::set<std::string>& seed);

}  // namespace cpa::domains
