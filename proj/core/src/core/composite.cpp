#include "cpa/core/composite.hpp"

namespace cpa {

namespace {

const CompositeState& as_composite(const AbstractState& s) { return static_cast<const CompositeState&>(s); }

const CompositePrecision& as_composite(const PrecisionPtr& p) { return static_cast<const CompositePrecision&>(*p); }

}  // namespace

CompositeState::CompositeState(std::vector<StatePtr> components) : components_(std::move(components)) {
  hash_ = 0x9e3779b97f4a7c15ull;
  for (const auto& c : components_) hash_ ^= c->hash() + 0x9e3779b97f4a7c15ull + (hash_ << 6) + (hash_ >> 2);
}

bool CompositeState::is_bottom() const {
  for (const auto& c : components_)
    if (c->is_bottom()) return true;
  return false;
}

bool CompositeState::equals(const AbstractState& other) const {
  const auto* o = dynamic_cast<const CompositeState*>(&other);
  if (!o || o->hash_ != hash_ || o->components_.size() != components_.size()) return false;
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (!components_[i]->equals(*o->components_[i])) return false;
  return true;
}

std::string CompositeState::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) s += ", ";
    s += components_[i]->to_string();
  }
  return s + ")";
}

std::string CompositePrecision::to_string() const {
  std::string s;
  for (const auto& c : components_) {
    std::string part = c->to_string();
    if (part.empty()) continue;
    if (!s.empty()) s += "; ";
    s += part;
  }
  return s;
}

CompositeCpa::CompositeCpa(std::vector<CpaPtr> components) : components_(std::move(components)) {
  if (components_.empty()) throw CompositionError("no analyses to compose");
  int locators = 0;
  for (const auto& c : components_)
    if (dynamic_cast<const LocationAwareCpa*>(c.get())) ++locators;
  if (locators == 0) throw CompositionError("the location analysis is missing");
  if (locators > 1) throw CompositionError("the location analysis appears more than once");
  locator_ = dynamic_cast<const LocationAwareCpa*>(components_.front().get());
  if (!locator_) throw CompositionError("the location analysis must come first");
}

int CompositeCpa::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (components_[i]->name() == name) return static_cast<int>(i);
  return -1;
}

std::string CompositeCpa::name() const {
  std::string s = "composite(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) s += ",";
    s += components_[i]->name();
  }
  return s + ")";
}

StatePtr CompositeCpa::initial_state(LocationId entry) const {
  std::vector<StatePtr> parts;
  for (const auto& c : components_) parts.push_back(c->initial_state(entry));
  return std::make_shared<CompositeState>(std::move(parts));
}

PrecisionPtr CompositeCpa::initial_precision() const {
  std::vector<PrecisionPtr> parts;
  for (const auto& c : components_) parts.push_back(c->initial_precision());
  return std::make_shared<CompositePrecision>(std::move(parts));
}

bool CompositeCpa::less_or_equal(const AbstractState& a, const AbstractState& b) const {
  if (a.is_bottom()) return true;
  if (b.is_bottom()) return false;
  const auto& x = as_composite(a);
  const auto& y = as_composite(b);
  for (std::size_t i = 0; i < components_.size(); ++i)
    if (!components_[i]->less_or_equal(*x.component(i), *y.component(i))) return false;
  return true;
}

StatePtr CompositeCpa::join(const StatePtr& a, const StatePtr& b) const {
  if (a->is_bottom()) return b;
  if (b->is_bottom()) return a;
  const auto& x = as_composite(*a);
  const auto& y = as_composite(*b);
  std::vector<StatePtr> parts;
  for (std::size_t i = 0; i < components_.size(); ++i)
    parts.push_back(components_[i]->join(x.component(i), y.component(i)));
  return std::make_shared<CompositeState>(std::move(parts));
}

std::vector<StatePtr> CompositeCpa::transfer(const StatePtr& s, const CfaEdge& edge,
                                             const PrecisionPtr& precision) const {
  const auto& state = as_composite(*s);
  const auto& pi = as_composite(precision);
  // cartesian product of the component successor sets
  std::vector<std::vector<StatePtr>> partial{{}};
  for (std::size_t i = 0; i < components_.size(); ++i) {
    std::vector<StatePtr> succ = components_[i]->transfer(state.component(i), edge, pi.component(i));
    std::erase_if(succ, [](const StatePtr& p) { return p->is_bottom(); });
    if (succ.empty()) return {};
    std::vector<std::vector<StatePtr>> next;
    next.reserve(partial.size() * succ.size());
    for (const auto& prefix : partial) {
      for (const auto& c : succ) {
        next.push_back(prefix);
        next.back().push_back(c);
      }
    }
    partial = std::move(next);
  }
  std::vector<StatePtr> out;
  out.reserve(partial.size());
  for (auto& parts : partial) out.push_back(std::make_shared<CompositeState>(std::move(parts)));
  return out;
}

StatePtr CompositeCpa::merge(const StatePtr& s1, const StatePtr& s2, const PrecisionPtr& precision) const {
  const auto& x = as_composite(*s1);
  const auto& y = as_composite(*s2);
  if (!x.component(0)->equals(*y.component(0))) return s2;
  const auto& pi = as_composite(precision);
  std::vector<StatePtr> parts;
  bool changed = false;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    parts.push_back(components_[i]->merge(x.component(i), y.component(i), pi.component(i)));
    changed = changed || !parts.back()->equals(*y.component(i));
  }
  if (!changed) return s2;
  return std::make_shared<CompositeState>(std::move(parts));
}

bool CompositeCpa::stop(const StatePtr& s, const std::vector<StatePtr>& reached, const PrecisionPtr& precision) const {
  const auto& x = as_composite(*s);
  const auto& pi = as_composite(precision);
  for (const auto& r : reached) {
    const auto& y = as_composite(*r);
    if (!x.component(0)->equals(*y.component(0))) continue;
    bool covered = true;
    for (std::size_t i = 0; i < components_.size() && covered; ++i)
      covered = components_[i]->stop(x.component(i), {y.component(i)}, pi.component(i));
    if (covered) return true;
  }
  return false;
}

Adjusted CompositeCpa::prec(const StatePtr& s, const PrecisionPtr& precision, const ReachedView& reached) const {
  const auto& x = as_composite(*s);
  const auto& pi = as_composite(precision);
  std::vector<StatePtr> states;
  std::vector<PrecisionPtr> precisions;
  bool changed = false;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    ReachedView view{reached.location, {}};
    view.states.reserve(reached.states.size());
    for (const auto& r : reached.states) view.states.push_back(as_composite(*r).component(i));
    Adjusted a = components_[i]->prec(x.component(i), pi.component(i), view);
    changed = changed || a.state != x.component(i) || a.precision != pi.component(i);
    states.push_back(std::move(a.state));
    precisions.push_back(std::move(a.precision));
  }
  if (!changed) return {s, precision};
  return {std::make_shared<CompositeState>(std::move(states)),
          std::make_shared<CompositePrecision>(std::move(precisions))};
}

LocationId CompositeCpa::location_of(const AbstractState& s) const {
  return locator_->location_of(*as_composite(s).component(0));
}

PrecisionPtr CompositeCpa::with_component(const PrecisionPtr& composite, std::size_t index, PrecisionPtr replacement) {
  std::vector<PrecisionPtr> parts = as_composite(composite).components();
  parts.at(index) = std::move(replacement);
  return std::make_shared<CompositePrecision>(std::move(parts));
}

std::shared_ptr<CompositeCpa> compose(std::vector<CpaPtr> components) {
  return std::make_shared<CompositeCpa>(std::move(components));
}

}  // namespace cpa
