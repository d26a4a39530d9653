#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpa/core/cpa.hpp"

namespace cpa::domains {

/// Program counter. The flat lattice's ⊤ ("any location") only arises from
/// joining different locations and is never produced by transfer.
class LocationState final : public AbstractState {
 public:
  explicit LocationState(std::optional<LocationId> location) : location_(location) {}
  const std::optional<LocationId>& location() const { return location_; }
  bool equals(const AbstractState& other) const override;
  std::size_t hash() const override { return location_ ? location_->value : 0xffffffffu; }
  std::string to_string() const override { return location_ ? cpa::to_string(*location_) : "⊤"; }

 private:
  std::optional<LocationId> location_;
};

class LocationCpa final : public ConfigurableProgramAnalysis, public LocationAwareCpa {
 public:
  std::string name() const override { return "location"; }
  StatePtr initial_state(LocationId entry) const override;
  bool less_or_equal(const AbstractState& a, const AbstractState& b) const override;
  StatePtr join(const StatePtr& a, const StatePtr& b) const override;
  std::vector<StatePtr> transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr& precision) const override;
  LocationId location_of(const AbstractState& s) const override;
};

struct Frame {
  std::string function;
  std::optional<LocationId> return_target;  // empty for the bottom frame
  friend bool operator==(const Frame&, const Frame&) = default;
};

class CallstackOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stack of active calls, innermost last. ⊤ (`frames` empty) stands for an
/// unknown stack and only arises from joins.
class CallstackState final : public AbstractState {
 public:
  explicit CallstackState(std::vector<Frame> frames);
  const std::vector<Frame>& frames() const { return frames_; }
  bool is_top() const { return frames_.empty(); }
  bool equals(const AbstractState& other) const override;
  std::size_t hash() const override { return hash_; }
  std::string to_string() const override;

 private:
  std::vector<Frame> frames_;
  std::size_t hash_ = 0;
};

/// Matches return edges with the call site on top of the stack. Throws
/// CallstackOverflow when a call would exceed `max_depth` frames.
class CallstackCpa final : public ConfigurableProgramAnalysis {
 public:
  CallstackCpa(std::string main_function, std::size_t max_depth = 32)
      : main_(std::move(main_function)), max_depth_(max_depth) {}
  std::string name() const override { return "callstack"; }
  StatePtr initial_state(LocationId entry) const override;
  bool less_or_equal(const AbstractState& a, const AbstractState& b) const override;
  StatePtr join(const StatePtr& a, const StatePtr& b) const override;
  std::vector<StatePtr> transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr& precision) const override;

 private:
  std::string main_;
  std::size_t max_depth_;
};

}  // namespace cpa::domains
