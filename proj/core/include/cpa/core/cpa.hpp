#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cpa/frontend/cfa.hpp"

namespace cpa {

/// Element of some abstract domain. States are immutable once built and are
/// shared through StatePtr.
class AbstractState {
 public:
  virtual ~AbstractState() = default;
  virtual bool is_bottom() const { return false; }
  /// Same concretization in the same representation (used for dedup).
  virtual bool equals(const AbstractState& other) const = 0;
  virtual std::size_t hash() const = 0;
  virtual std::string to_string() const = 0;
};

using StatePtr = std::shared_ptr<const AbstractState>;

/// Adjustable parameter of an analysis, attached to every reached state.
class Precision {
 public:
  virtual ~Precision() = default;
  virtual std::string to_string() const { return ""; }
};

using PrecisionPtr = std::shared_ptr<const Precision>;

/// Precision for analyses that have nothing to adjust.
class NoPrecision final : public Precision {
 public:
  static PrecisionPtr instance();
};

/// Read access to the reached states sharing a location with the state under
/// precision adjustment. For a component of a composite analysis, `states`
/// holds that component's projections.
struct ReachedView {
  LocationId location;
  std::vector<StatePtr> states;
};

struct Adjusted {
  StatePtr state;
  PrecisionPtr precision;
};

enum class MergeMode { kSep, kJoin };

/// A configurable program analysis: abstract domain plus the transfer,
/// merge, stop and precision-adjustment operators. Implementations must not
/// keep mutable state between calls.
class ConfigurableProgramAnalysis {
 public:
  virtual ~ConfigurableProgramAnalysis() = default;

  virtual std::string name() const = 0;
  virtual StatePtr initial_state(LocationId entry) const = 0;
  virtual PrecisionPtr initial_precision() const { return NoPrecision::instance(); }

  virtual bool less_or_equal(const AbstractState& a, const AbstractState& b) const = 0;
  virtual StatePtr join(const StatePtr& a, const StatePtr& b) const = 0;

  /// Abstract successors along `edge`; an empty result means the edge is
  /// infeasible from `s`.
  virtual std::vector<StatePtr> transfer(const StatePtr& s, const CfaEdge& edge,
                                         const PrecisionPtr& precision) const = 0;

  /// Default dispatches on merge_mode(): sep returns s2, join returns
  /// join(s1, s2).
  virtual StatePtr merge(const StatePtr& s1, const StatePtr& s2, const PrecisionPtr& precision) const;

  /// Default: stop-sep, i.e. some state of `reached` covers `s`.
  virtual bool stop(const StatePtr& s, const std::vector<StatePtr>& reached,
                    const PrecisionPtr& precision) const;

  /// Default: identity.
  virtual Adjusted prec(const StatePtr& s, const PrecisionPtr& precision, const ReachedView& /*reached*/) const {
    return {s, precision};
  }

  MergeMode merge_mode() const { return merge_mode_; }
  void set_merge_mode(MergeMode mode) { merge_mode_ = mode; }

 private:
  MergeMode merge_mode_ = MergeMode::kSep;
};

using CpaPtr = std::shared_ptr<ConfigurableProgramAnalysis>;

/// Implemented by the analysis that tracks the program counter. A composite
/// analysis needs exactly one, in first position.
class LocationAwareCpa {
 public:
  virtual ~LocationAwareCpa() = default;
  virtual LocationId location_of(const AbstractState& s) const = 0;
};

/// Never combines: returns s2.
StatePtr merge_sep(const StatePtr& s1, const StatePtr& s2);

/// True iff some state in `reached` is above `s` in the order of `cpa`.
bool stop_sep(const ConfigurableProgramAnalysis& cpa, const StatePtr& s, const std::vector<StatePtr>& reached);

}  // namespace cpa
