#include "cpa/domains/location.hpp"

#include <functional>

namespace cpa::domains {

bool LocationState::equals(const AbstractState& other) const {
  const auto* o = dynamic_cast<const LocationState*>(&other);
  return o && o->location_ == location_;
}

StatePtr LocationCpa::initial_state(LocationId entry) const { return std::make_shared<LocationState>(entry); }

bool LocationCpa::less_or_equal(const AbstractState& a, const AbstractState& b) const {
  const auto& y = static_cast<const LocationState&>(b);
  return !y.location() || static_cast<const LocationState&>(a).location() == y.location();
}

StatePtr LocationCpa::join(const StatePtr& a, const StatePtr& b) const {
  if (a->equals(*b)) return a;
  return std::make_shared<LocationState>(std::nullopt);
}

std::vector<StatePtr> LocationCpa::transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr&) const {
  const auto& loc = static_cast<const LocationState&>(*s).location();
  if (loc && *loc != edge.source) return {};
  return {std::make_shared<LocationState>(edge.target)};
}

LocationId LocationCpa::location_of(const AbstractState& s) const {
  const auto& loc = static_cast<const LocationState&>(s).location();
  if (!loc) throw std::logic_error("the joined location state has no single location");
  return *loc;
}

CallstackState::CallstackState(std::vector<Frame> frames) : frames_(std::move(frames)) {
  hash_ = frames_.size();
  for (const auto& f : frames_) {
    hash_ = hash_ * 31 + std::hash<std::string>{}(f.function);
    hash_ = hash_ * 31 + (f.return_target ? f.return_target->value + 1 : 0);
  }
}

bool CallstackState::equals(const AbstractState& other) const {
  const auto* o = dynamic_cast<const CallstackState*>(&other);
  return o && o->hash_ == hash_ && o->frames_ == frames_;
}

std::string CallstackState::to_string() const {
  if (frames_.empty()) return "⊤";
  std::string s;
  for (const auto& f : frames_) {
    if (!s.empty()) s += " > ";
    s += f.function;
  }
  return s;
}

StatePtr CallstackCpa::initial_state(LocationId) const {
  return std::make_shared<CallstackState>(std::vector<Frame>{{main_, std::nullopt}});
}

bool CallstackCpa::less_or_equal(const AbstractState& a, const AbstractState& b) const {
  const auto& y = static_cast<const CallstackState&>(b);
  return y.is_top() || a.equals(b);
}

StatePtr CallstackCpa::join(const StatePtr& a, const StatePtr& b) const {
  if (a->equals(*b)) return a;
  return std::make_shared<CallstackState>(std::vector<Frame>{});
}

std::vector<StatePtr> CallstackCpa::transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr&) const {
  const auto& state = static_cast<const CallstackState&>(*s);
  if (const auto* call = std::get_if<CallOp>(&edge.op)) {
    if (state.is_top()) return {s};
    if (state.frames().size() + 1 > max_depth_)
      throw CallstackOverflow("call depth exceeds " + std::to_string(max_depth_) + " frames");
    std::vector<Frame> frames = state.frames();
    frames.push_back({call->callee, call->return_target});
    return {std::make_shared<CallstackState>(std::move(frames))};
  }
  if (std::holds_alternative<ReturnOp>(edge.op)) {
    if (state.is_top()) return {s};
    if (state.frames().size() < 2 || state.frames().back().return_target != edge.target) return {};
    std::vector<Frame> frames = state.frames();
    frames.pop_back();
    return {std::make_shared<CallstackState>(std::move(frames))};
  }
  return {s};
}

}  // namespace cpa::domains
