#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "cpa/core/configuration.hpp"
#include "cpa/core/cpa.hpp"

namespace cpa::domains {

/// Partial map from variables to integers. A missing variable is ⊤.
class ExplicitState final : public AbstractState {
 public:
  using Assignment = std::map<std::string, Integer>;

  static std::shared_ptr<const ExplicitState> top();
  static std::shared_ptr<const ExplicitState> bottom();
  static std::shared_ptr<const ExplicitState> of(Assignment values);

  const Assignment& values() const { return values_; }
  std::optional<Integer> value(const std::string& var) const;

  bool is_bottom() const override { return bottom_; }
  bool equals(const AbstractState& other) const override;
  std::size_t hash() const override { return hash_; }
  std::string to_string() const override;

  ExplicitState(bool bottom, Assignment values);

 private:
  bool bottom_ = false;
  Assignment values_;
  std::size_t hash_ = 0;
};

/// Threshold plus the explicit values seen so far per counter key. A key is
/// a (location, variable) pair, or only the variable in global counter mode.
class ExplicitPrecision final : public Precision {
 public:
  using Key = std::pair<std::optional<LocationId>, std::string>;

  ExplicitPrecision(Threshold threshold, CounterMode mode) : threshold_(threshold), mode_(mode) {}

  const Threshold& threshold() const { return threshold_; }
  CounterMode mode() const { return mode_; }
  Key key(LocationId location, const std::string& var) const;
  /// Observed values for a key; never more than threshold+1 elements.
  const std::set<Integer>* observed(const Key& key) const;
  bool saturated(const Key& key) const;

  /// Copies share per-location tables until one of them writes.
  std::shared_ptr<ExplicitPrecision> copy() const { return std::make_shared<ExplicitPrecision>(*this); }
  void record(const Key& key, std::set<Integer> values);
  void saturate(const Key& key);

  std::string to_string() const override { return "threshold=" + threshold_.to_string(); }

 private:
  struct Table {
    std::map<std::string, std::set<Integer>> observed;
    std::set<std::string> saturated;
  };
  Table& writable(const std::optional<LocationId>& location);

  Threshold threshold_;
  CounterMode mode_;
  std::map<std::optional<LocationId>, std::shared_ptr<const Table>> tables_;
};

/// Constant propagation with a per-variable value-count threshold applied at
/// precision-adjustment time.
class ExplicitCpa final : public ConfigurableProgramAnalysis {
 public:
  ExplicitCpa(const Program& program, Threshold threshold, CounterMode mode = CounterMode::kPerLocation)
      : program_(program), threshold_(threshold), mode_(mode) {}

  std::string name() const override { return "explicit"; }
  StatePtr initial_state(LocationId entry) const override;
  PrecisionPtr initial_precision() const override;
  bool less_or_equal(const AbstractState& a, const AbstractState& b) const override;
  StatePtr join(const StatePtr& a, const StatePtr& b) const override;
  std::vector<StatePtr> transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr& precision) const override;
  Adjusted prec(const StatePtr& s, const PrecisionPtr& precision, const ReachedView& reached) const override;

 private:
  const Program& program_;
  Threshold threshold_;
  CounterMode mode_;
};

/// Value of an arithmetic expression, or nullopt if it reads a ⊤ variable.
std::optional<Integer> evaluate(const frontend::Expr& e, const ExplicitState::Assignment& values);

}  // namespace cpa::domains
