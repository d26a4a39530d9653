#include "cpa/domains/predicate.hpp"

#include <algorithm>
#include <functional>

#include "cpa/analysis/path_formula.hpp"

namespace cpa::domains {

using solver::Conjunction;
using solver::LinearConstraint;

std::optional<Predicate> canonical_predicate(const LinearConstraint& atom) {
  if (atom.relation() == solver::Relation::kNotEqualZero) return std::nullopt;
  LinearConstraint c = atom.tightened();
  if (c.is_trivially_true() || c.is_trivially_false()) return std::nullopt;
  return c;
}

PredicateState::PredicateState(bool bottom, PredicateSet holds) : bottom_(bottom), holds_(std::move(holds)) {
  hash_ = bottom_ ? 0xdead : holds_.size();
  for (const auto& p : holds_) hash_ = hash_ * 1000003 + std::hash<std::string>{}(solver::to_string(p));
}

std::shared_ptr<const PredicateState> PredicateState::top() {
  static const auto shared = std::make_shared<const PredicateState>(false, PredicateSet{});
  return shared;
}

std::shared_ptr<const PredicateState> PredicateState::bottom() {
  static const auto shared = std::make_shared<const PredicateState>(true, PredicateSet{});
  return shared;
}

bool PredicateState::equals(const AbstractState& other) const {
  const auto* o = dynamic_cast<const PredicateState*>(&other);
  return o && o->hash_ == hash_ && o->bottom_ == bottom_ && o->holds_ == holds_;
}

std::string PredicateState::to_string() const {
  if (bottom_) return "⊥";
  std::string s = "{";
  for (const auto& p : holds_) {
    if (s.size() > 1) s += ", ";
    s += solver::to_string(p);
  }
  return s + "}";
}

PredicateSet PredicatePrecision::effective(LocationId location) const {
  PredicateSet out = global_;
  if (auto it = by_location_.find(location); it != by_location_.end()) out.insert(it->second.begin(), it->second.end());
  return out;
}

bool PredicatePrecision::contains(LocationId location, const Predicate& p) const {
  if (global_.count(p)) return true;
  auto it = by_location_.find(location);
  return it != by_location_.end() && it->second.count(p);
}

std::size_t PredicatePrecision::distinct() const {
  PredicateSet all = global_;
  for (const auto& [loc, preds] : by_location_) all.insert(preds.begin(), preds.end());
  return all.size();
}

std::size_t PredicatePrecision::per_location_sum() const {
  std::size_t n = global_.size();
  for (const auto& [loc, preds] : by_location_) n += preds.size();
  return n;
}

std::string PredicatePrecision::to_string() const {
  return "predicates=" + std::to_string(distinct());
}

Conjunction slice(const Conjunction& c, const std::set<std::string>& seed) {
  std::set<std::string> vars = seed;
  std::vector<const LinearConstraint*> pending;
  for (const auto& k : c.constraints()) pending.push_back(&k);
  Conjunction out;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<const LinearConstraint*> rest;
    for (const auto* k : pending) {
      bool touches = false;
      for (const auto& [v, coeff] : k->term().coefficients())
        if (vars.count(v)) touches = true;
      if (!touches) {
        rest.push_back(k);
        continue;
      }
      out.add(*k);
      for (const auto& [v, coeff] : k->term().coefficients()) vars.insert(v);
      grew = true;
    }
    pending = std::move(rest);
  }
  return out;
}

StatePtr PredicateCpa::initial_state(LocationId) const { return PredicateState::top(); }

PrecisionPtr PredicateCpa::initial_precision() const { return std::make_shared<PredicatePrecision>(); }

bool PredicateCpa::less_or_equal(const AbstractState& a, const AbstractState& b) const {
  const auto& x = static_cast<const PredicateState&>(a);
  const auto& y = static_cast<const PredicateState&>(b);
  if (x.is_bottom()) return true;
  if (y.is_bottom()) return false;
  return std::includes(x.holds().begin(), x.holds().end(), y.holds().begin(), y.holds().end());
}

StatePtr PredicateCpa::join(const StatePtr& a, const StatePtr& b) const {
  const auto& x = static_cast<const PredicateState&>(*a);
  const auto& y = static_cast<const PredicateState&>(*b);
  if (x.is_bottom()) return b;
  if (y.is_bottom()) return a;
  PredicateSet common;
  std::set_intersection(x.holds().begin(), x.holds().end(), y.holds().begin(), y.holds().end(),
                        std::inserter(common, common.end()));
  return std::make_shared<const PredicateState>(false, std::move(common));
}

std::vector<StatePtr> PredicateCpa::transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr& precision) const {
  const auto& state = static_cast<const PredicateState&>(*s);
  if (state.is_bottom()) return {};
  const auto& pi = static_cast<const PredicatePrecision&>(*precision);
  PredicateSet candidates = pi.effective(edge.target);

  TransferKey key{edge.id, state.holds(), candidates};
  {
    std::lock_guard<std::mutex> guard(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
      if (!it->second) return {};
      if (*it->second == state.holds()) return {s};
      return {std::make_shared<const PredicateState>(false, *it->second)};
    }
  }
  auto result = post(state, edge, candidates);
  {
    std::lock_guard<std::mutex> guard(cache_mutex_);
    cache_.emplace(std::move(key), result);
  }
  if (!result) return {};
  if (*result == state.holds()) return {s};
  return {std::make_shared<const PredicateState>(false, std::move(*result))};
}

std::optional<PredicateSet> PredicateCpa::post(const PredicateState& state, const CfaEdge& edge,
                                               const PredicateSet& candidates) const {

  analysis::SsaIndex ssa;
  auto at_zero = [](const std::string& v) { return analysis::ssa_symbol(v, 0); };
  Conjunction before;
  for (const auto& p : state.holds()) before.add(p.renamed(at_zero));
  solver::Dnf step = analysis::encode_edge(program_, edge, ssa);

  // Non-assume edges only add definitions of fresh symbols, so they keep a
  // satisfiable state satisfiable.
  const bool check = std::holds_alternative<AssumeOp>(edge.op);
  struct Branch {
    Conjunction phi;
    std::set<std::string> symbols;
    std::optional<solver::Model> model;  // cheap refutation of candidates
  };
  std::vector<Branch> branches;
  for (const auto& b : step) {
    Branch branch{before, {}, std::nullopt};
    branch.phi.add_all(b);
    if (check || !candidates.empty()) {
      try {
        auto feasible = solver::is_feasible(branch.phi, limits_);
        if (!feasible && check) continue;
        if (feasible) branch.model = std::move(feasible.model);
      } catch (const solver::BlowupError&) {
      }
    }
    branch.symbols = branch.phi.variables();
    branches.push_back(std::move(branch));
  }
  if (branches.empty()) return std::nullopt;
  if (candidates.empty()) return PredicateSet{};

  auto now = [&ssa](const std::string& v) { return ssa.current(v); };
  PredicateSet holds;
  for (const auto& p : candidates) {
    LinearConstraint renamed = p.renamed(now);
    std::set<std::string> vars;
    for (const auto& [v, c] : renamed.term().coefficients()) vars.insert(v);
    // a predicate over variables the edge leaves alone keeps holding
    if (state.holds().count(p) && renamed == p.renamed(at_zero)) {
      holds.insert(p);
      continue;
    }
    bool entailed = true;
    for (const auto& branch : branches) {
      // a satisfiable branch leaves unmentioned symbols free
      bool free = std::any_of(vars.begin(), vars.end(), [&](const std::string& v) { return !branch.symbols.count(v); });
      if (free || (branch.model && !renamed.satisfied_by(branch.model->assignment))) {
        entailed = false;
        break;
      }
      // each branch is satisfiable, so the slice decides entailment exactly
      if (!solver::entails(slice(branch.phi, vars), renamed, limits_)) {
        entailed = false;
        break;
      }
    }
    if (entailed) holds.insert(p);
  }
  return holds;
}

Adjusted PredicateCpa::prec(const StatePtr& s, const PrecisionPtr& precision, const ReachedView& reached) const {
  const auto& state = static_cast<const PredicateState&>(*s);
  if (state.is_bottom()) return {s, precision};
  const auto& pi = static_cast<const PredicatePrecision&>(*precision);
  PredicateSet kept;
  for (const auto& p : state.holds())
    if (pi.contains(reached.location, p)) kept.insert(p);
  if (kept.size() == state.holds().size()) return {s, precision};
  return {std::make_shared<const PredicateState>(false, std::move(kept)), precision};
}

}  // namespace cpa::domains
