#include "cpa/domains/explicit_value.hpp"

#include <functional>

#include "cpa/analysis/path_formula.hpp"
#include "cpa/solver/linear.hpp"

namespace cpa::domains {

using frontend::ArithOp;
using frontend::CompareOp;
using frontend::Expr;
using frontend::ExprKind;
using Assignment = ExplicitState::Assignment;

ExplicitState::ExplicitState(bool bottom, Assignment values) : bottom_(bottom), values_(std::move(values)) {
  hash_ = bottom_ ? 0x51ed27u : values_.size();
  for (const auto& [v, k] : values_) {
    hash_ = hash_ * 131 + std::hash<std::string>{}(v);
    hash_ = hash_ * 131 + std::hash<std::string>{}(k.get_str());
  }
}

std::shared_ptr<const ExplicitState> ExplicitState::top() {
  static const auto shared = std::make_shared<const ExplicitState>(false, Assignment{});
  return shared;
}

std::shared_ptr<const ExplicitState> ExplicitState::bottom() {
  static const auto shared = std::make_shared<const ExplicitState>(true, Assignment{});
  return shared;
}

std::shared_ptr<const ExplicitState> ExplicitState::of(Assignment values) {
  return std::make_shared<const ExplicitState>(false, std::move(values));
}

std::optional<Integer> ExplicitState::value(const std::string& var) const {
  auto it = values_.find(var);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

bool ExplicitState::equals(const AbstractState& other) const {
  const auto* o = dynamic_cast<const ExplicitState*>(&other);
  return o && o->hash_ == hash_ && o->bottom_ == bottom_ && o->values_ == values_;
}

std::string ExplicitState::to_string() const {
  if (bottom_) return "⊥";
  std::string s = "{";
  for (const auto& [v, k] : values_) {
    if (s.size() > 1) s += ", ";
    s += frontend::display_name(v) + "=" + k.get_str();
  }
  return s + "}";
}

ExplicitPrecision::Key ExplicitPrecision::key(LocationId location, const std::string& var) const {
  if (mode_ == CounterMode::kGlobal) return {std::nullopt, var};
  return {location, var};
}

const std::set<Integer>* ExplicitPrecision::observed(const Key& key) const {
  auto table = tables_.find(key.first);
  if (table == tables_.end()) return nullptr;
  auto it = table->second->observed.find(key.second);
  return it == table->second->observed.end() ? nullptr : &it->second;
}

bool ExplicitPrecision::saturated(const Key& key) const {
  auto table = tables_.find(key.first);
  return table != tables_.end() && table->second->saturated.count(key.second) > 0;
}

ExplicitPrecision::Table& ExplicitPrecision::writable(const std::optional<LocationId>& location) {
  auto& slot = tables_[location];
  auto fresh = slot ? std::make_shared<Table>(*slot) : std::make_shared<Table>();
  Table& table = *fresh;
  slot = std::move(fresh);
  return table;
}

void ExplicitPrecision::record(const Key& key, std::set<Integer> values) {
  writable(key.first).observed[key.second] = std::move(values);
}

void ExplicitPrecision::saturate(const Key& key) {
  Table& table = writable(key.first);
  table.saturated.insert(key.second);
  table.observed.erase(key.second);
}

std::optional<Integer> evaluate(const Expr& e, const Assignment& values) {
  switch (e.kind) {
    case ExprKind::kIntLiteral:
      return e.value;
    case ExprKind::kVariable: {
      auto it = values.find(e.name);
      if (it == values.end()) return std::nullopt;
      return it->second;
    }
    case ExprKind::kArith: {
      auto l = evaluate(*e.lhs, values);
      auto r = evaluate(*e.rhs, values);
      // 0 * ⊤ is still 0
      if (e.arith_op == ArithOp::kMul && ((l && *l == 0) || (r && *r == 0))) return Integer(0);
      if (!l || !r) return std::nullopt;
      switch (e.arith_op) {
        case ArithOp::kAdd: return *l + *r;
        case ArithOp::kSub: return *l - *r;
        case ArithOp::kMul: return *l * *r;
      }
      break;
    }
    default:
      break;
  }
  return std::nullopt;
}

namespace {

enum class Truth { kFalse, kTrue, kUnknown };

Truth decide(const Expr& cond, const Assignment& values) {
  switch (cond.kind) {
    case ExprKind::kCompare: {
      auto l = evaluate(*cond.lhs, values);
      auto r = evaluate(*cond.rhs, values);
      if (!l || !r) return Truth::kUnknown;
      bool result = false;
      switch (cond.compare_op) {
        case CompareOp::kEq: result = *l == *r; break;
        case CompareOp::kNe: result = *l != *r; break;
        case CompareOp::kLt: result = *l < *r; break;
        case CompareOp::kLe: result = *l <= *r; break;
        case CompareOp::kGt: result = *l > *r; break;
        case CompareOp::kGe: result = *l >= *r; break;
      }
      return result ? Truth::kTrue : Truth::kFalse;
    }
    case ExprKind::kNot: {
      Truth t = decide(*cond.lhs, values);
      if (t == Truth::kUnknown) return t;
      return t == Truth::kTrue ? Truth::kFalse : Truth::kTrue;
    }
    case ExprKind::kAnd: {
      Truth l = decide(*cond.lhs, values), r = decide(*cond.rhs, values);
      if (l == Truth::kFalse || r == Truth::kFalse) return Truth::kFalse;
      if (l == Truth::kTrue && r == Truth::kTrue) return Truth::kTrue;
      return Truth::kUnknown;
    }
    case ExprKind::kOr: {
      Truth l = decide(*cond.lhs, values), r = decide(*cond.rhs, values);
      if (l == Truth::kTrue || r == Truth::kTrue) return Truth::kTrue;
      if (l == Truth::kFalse && r == Truth::kFalse) return Truth::kFalse;
      return Truth::kUnknown;
    }
    default:
      break;
  }
  return Truth::kUnknown;
}

// Binds the single unknown variable of each top-level equality conjunct.
// Returns false when an equality has no integer solution.
bool strengthen(const Expr& cond, Assignment& values) {
  if (cond.kind == ExprKind::kAnd) return strengthen(*cond.lhs, values) && strengthen(*cond.rhs, values);
  if (cond.kind != ExprKind::kCompare || cond.compare_op != CompareOp::kEq) return true;
  solver::LinearTerm t = solver::linearize(*cond.lhs) - solver::linearize(*cond.rhs);
  Integer constant = t.constant_term();
  std::optional<std::pair<std::string, Integer>> unknown;
  for (const auto& [v, c] : t.coefficients()) {
    auto it = values.find(v);
    if (it != values.end()) {
      constant += c * it->second;
    } else if (unknown) {
      return true;  // two unknowns: nothing to bind
    } else {
      unknown = std::make_pair(v, c);
    }
  }
  if (!unknown) return constant == 0;
  const auto& [var, coeff] = *unknown;
  Integer numerator = -constant;
  if (numerator % coeff != 0) return false;
  values[var] = numerator / coeff;
  return true;
}

}  // namespace

StatePtr ExplicitCpa::initial_state(LocationId) const { return ExplicitState::top(); }

PrecisionPtr ExplicitCpa::initial_precision() const { return std::make_shared<ExplicitPrecision>(threshold_, mode_); }

bool ExplicitCpa::less_or_equal(const AbstractState& a, const AbstractState& b) const {
  const auto& x = static_cast<const ExplicitState&>(a);
  const auto& y = static_cast<const ExplicitState&>(b);
  if (x.is_bottom()) return true;
  if (y.is_bottom()) return false;
  for (const auto& [v, k] : y.values()) {
    auto it = x.values().find(v);
    if (it == x.values().end() || it->second != k) return false;
  }
  return true;
}

StatePtr ExplicitCpa::join(const StatePtr& a, const StatePtr& b) const {
  if (a->is_bottom()) return b;
  if (b->is_bottom()) return a;
  const auto& x = static_cast<const ExplicitState&>(*a);
  const auto& y = static_cast<const ExplicitState&>(*b);
  Assignment common;
  for (const auto& [v, k] : x.values())
    if (auto other = y.value(v); other && *other == k) common.emplace(v, k);
  return ExplicitState::of(std::move(common));
}

std::vector<StatePtr> ExplicitCpa::transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr&) const {
  const auto& state = static_cast<const ExplicitState&>(*s);
  if (state.is_bottom()) return {};
  const bool track = !threshold_.value || *threshold_.value > 0;
  Assignment values = state.values();
  bool infeasible = false;
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, AssumeOp>) {
          Truth t = decide(*op.condition, values);
          if (t == Truth::kFalse) {
            infeasible = true;
          } else if (t == Truth::kUnknown && track) {
            infeasible = !strengthen(*op.condition, values);
          }
        } else if constexpr (std::is_same_v<T, AssignOp>) {
          auto v = evaluate(*op.value, values);
          if (v) {
            values[op.target] = *v;
          } else {
            values.erase(op.target);
          }
        } else if constexpr (std::is_same_v<T, CallOp>) {
          const auto& callee = program_.cfa(op.callee);
          std::vector<std::optional<Integer>> actuals;
          for (const auto& a : op.arguments) actuals.push_back(evaluate(*a, values));
          for (const auto& v : callee.locals) values.erase(v);
          for (std::size_t i = 0; i < actuals.size(); ++i)
            if (actuals[i]) values[callee.parameters[i]] = *actuals[i];
          if (callee.returns_value) values[Program::return_slot(op.callee)] = 0;
        } else if constexpr (std::is_same_v<T, ReturnOp>) {
          if (op.result_target) {
            auto it = values.find(Program::return_slot(op.callee));
            if (it != values.end()) {
              values[*op.result_target] = it->second;
            } else {
              values.erase(*op.result_target);
            }
          }
          for (const auto& v : program_.cfa(op.callee).locals) values.erase(v);
        }
      },
      edge.op);
  if (infeasible) return {};
  if (!track) return {ExplicitState::top()};
  if (values == state.values()) return {s};
  return {ExplicitState::of(std::move(values))};
}

Adjusted ExplicitCpa::prec(const StatePtr& s, const PrecisionPtr& precision, const ReachedView& reached) const {
  const auto& state = static_cast<const ExplicitState&>(*s);
  const auto& pi = static_cast<const ExplicitPrecision&>(*precision);
  if (state.is_bottom() || pi.threshold().is_infinite()) return {s, precision};
  const std::uint64_t limit = *pi.threshold().value;
  if (limit == 0) return {ExplicitState::top(), precision};

  std::shared_ptr<ExplicitPrecision> next;
  auto writable = [&]() -> ExplicitPrecision& {
    if (!next) next = pi.copy();
    return *next;
  };
  Assignment kept;
  for (const auto& [var, value] : state.values()) {
    auto key = pi.key(reached.location, var);
    if (pi.saturated(key) || (next && next->saturated(key))) continue;
    std::set<Integer> seen;
    if (const auto* known = pi.observed(key)) seen = *known;
    seen.insert(value);
    for (const auto& r : reached.states) {
      if (seen.size() > limit) break;
      if (auto v = static_cast<const ExplicitState&>(*r).value(var)) seen.insert(*v);
    }
    if (seen.size() > limit) {
      writable().saturate(key);
      continue;
    }
    kept.emplace(var, value);
    const auto* known = pi.observed(key);
    if (!known || *known != seen) writable().record(key, std::move(seen));
  }
  StatePtr out = kept.size() == state.values().size() ? s : ExplicitState::of(std::move(kept));
  return {out, next ? PrecisionPtr(next) : precision};
}

}  // namespace cpa::domains
