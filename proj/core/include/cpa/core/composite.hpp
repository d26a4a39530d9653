#pragma once

#include <stdexcept>
#include <vector>

#include "cpa/core/cpa.hpp"

namespace cpa {

/// Tuple of component states; ⊥ as soon as one component is ⊥.
class CompositeState final : public AbstractState {
 public:
  explicit CompositeState(std::vector<StatePtr> components);

  const std::vector<StatePtr>& components() const { return components_; }
  const StatePtr& component(std::size_t i) const { return components_[i]; }
  std::size_t size() const { return components_.size(); }

  bool is_bottom() const override;
  bool equals(const AbstractState& other) const override;
  std::size_t hash() const override { return hash_; }
  std::string to_string() const override;

 private:
  std::vector<StatePtr> components_;
  std::size_t hash_ = 0;
};

class CompositePrecision final : public Precision {
 public:
  explicit CompositePrecision(std::vector<PrecisionPtr> components) : components_(std::move(components)) {}
  const std::vector<PrecisionPtr>& components() const { return components_; }
  const PrecisionPtr& component(std::size_t i) const { return components_[i]; }
  std::string to_string() const override;

 private:
  std::vector<PrecisionPtr> components_;
};

class CompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Componentwise product of analyses. The first component tracks the
/// location; merge only combines states at the same location and a
/// successor is dropped when any component has none.
class CompositeCpa final : public ConfigurableProgramAnalysis, public LocationAwareCpa {
 public:
  /// Throws CompositionError unless exactly one component is location-aware
  /// and it comes first.
  explicit CompositeCpa(std::vector<CpaPtr> components);

  const std::vector<CpaPtr>& components() const { return components_; }
  /// Index of the component with the given name, or -1.
  int index_of(const std::string& name) const;

  std::string name() const override;
  StatePtr initial_state(LocationId entry) const override;
  PrecisionPtr initial_precision() const override;
  bool less_or_equal(const AbstractState& a, const AbstractState& b) const override;
  StatePtr join(const StatePtr& a, const StatePtr& b) const override;
  std::vector<StatePtr> transfer(const StatePtr& s, const CfaEdge& edge,
                                 const PrecisionPtr& precision) const override;
  StatePtr merge(const StatePtr& s1, const StatePtr& s2, const PrecisionPtr& precision) const override;
  bool stop(const StatePtr& s, const std::vector<StatePtr>& reached, const PrecisionPtr& precision) const override;
  Adjusted prec(const StatePtr& s, const PrecisionPtr& precision, const ReachedView& reached) const override;
  LocationId location_of(const AbstractState& s) const override;

  /// Rebuilds the precision with component `index` replaced.
  static PrecisionPtr with_component(const PrecisionPtr& composite, std::size_t index, PrecisionPtr replacement);

 private:
  std::vector<CpaPtr> components_;
  const LocationAwareCpa* locator_ = nullptr;
};

std::shared_ptr<CompositeCpa> compose(std::vector<CpaPtr> components);

}  // namespace cpa
