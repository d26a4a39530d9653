#include "cpa/analysis/path_formula.hpp"

#include <algorithm>

namespace cpa::analysis {

using solver::Conjunction;
using solver::Dnf;
using solver::LinearConstraint;
using solver::LinearTerm;

std::string ssa_symbol(const std::string& variable, int index) {
  return variable + "@" + std::to_string(index);
}

std::optional<std::pair<std::string, int>> parse_ssa_symbol(const std::string& symbol) {
  auto at = symbol.rfind('@');
  if (at == std::string::npos || at + 1 == symbol.size()) return std::nullopt;
  int index = 0;
  for (std::size_t i = at + 1; i < symbol.size(); ++i) {
    if (symbol[i] < '0' || symbol[i] > '9') return std::nullopt;
    index = index * 10 + (symbol[i] - '0');
  }
  return std::make_pair(symbol.substr(0, at), index);
}

int SsaIndex::index(const std::string& variable) const {
  auto it = indices_.find(variable);
  return it == indices_.end() ? 0 : it->second;
}

std::string SsaIndex::bump(const std::string& variable) {
  return ssa_symbol(variable, ++indices_[variable]);
}

std::vector<std::string> uninitialized_locals(const ControlFlowAutomaton& cfa) {
  std::vector<std::string> out;
  const std::string ret = Program::return_slot(cfa.function_name);
  for (const auto& v : cfa.locals) {
    if (v == ret) continue;
    if (std::find(cfa.parameters.begin(), cfa.parameters.end(), v) != cfa.parameters.end()) continue;
    out.push_back(v);
  }
  return out;
}

namespace {

Dnf single(LinearConstraint c) { return {Conjunction{c}}; }

}  // namespace

Dnf encode_edge(const Program& program, const CfaEdge& edge, SsaIndex& ssa) {
  auto read = [&ssa](const std::string& v) { return ssa.current(v); };
  return std::visit(
      [&](const auto& op) -> Dnf {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, AssumeOp>) {
          return solver::normalize_condition(*op.condition, read);
        } else if constexpr (std::is_same_v<T, AssignOp>) {
          if (op.value->kind == frontend::ExprKind::kNondet) {
            ssa.bump(op.target);
            return {Conjunction{}};
          }
          LinearTerm rhs = solver::linearize(*op.value, read);
          std::string fresh = ssa.bump(op.target);
          return single(LinearConstraint::equal(LinearTerm::variable(fresh) - rhs).normalized());
        } else if constexpr (std::is_same_v<T, CallOp>) {
          const auto& callee = program.cfa(op.callee);
          std::vector<LinearTerm> actuals;
          for (const auto& a : op.arguments) actuals.push_back(solver::linearize(*a, read));
          for (const auto& v : callee.locals) ssa.bump(v);
          Conjunction c;
          for (std::size_t i = 0; i < actuals.size(); ++i)
            c.add(LinearConstraint::equal(LinearTerm::variable(ssa.current(callee.parameters[i])) - actuals[i])
                      .normalized());
          if (callee.returns_value)
            c.add(LinearConstraint::equal(LinearTerm::variable(ssa.current(Program::return_slot(op.callee)))));
          return {c};
        } else if constexpr (std::is_same_v<T, ReturnOp>) {
          if (!op.result_target) return {Conjunction{}};
          LinearTerm value = LinearTerm::variable(ssa.current(Program::return_slot(op.callee)));
          std::string fresh = ssa.bump(*op.result_target);
          return single(LinearConstraint::equal(LinearTerm::variable(fresh) - value).normalized());
        } else {
          return {Conjunction{}};
        }
      },
      edge.op);
}

}  // namespace cpa::analysis
