#include "cpa/algorithm/refinement.hpp"

#include <algorithm>

namespace cpa::algorithm {

using analysis::SsaIndex;
using solver::Conjunction;
using solver::Dnf;
using solver::LinearConstraint;

namespace {

// Bound on the number of branch combinations kept while walking a path.
constexpr std::size_t kMaxCombinations = 256;

bool is_assume(const Program& program, EdgeId id) { return std::holds_alternative<AssumeOp>(program.edge(id).op); }

// Integer refinement of a rational model: components whose values are
// already integral are kept, the others are searched in a box around the
// rational point.
std::optional<std::map<std::string, Integer>> integer_model(const Conjunction& c, const solver::Model& model) {
  std::map<std::string, Integer> out;
  for (const auto& [v, q] : model.assignment)
    if (is_integral(q)) out[v] = q.get_num();
  for (const auto& group : solver::connected_components(c)) {
    auto vars = group.variables();
    bool integral = std::all_of(vars.begin(), vars.end(), [&](const std::string& v) {
      auto it = model.assignment.find(v);
      return it == model.assignment.end() || is_integral(it->second);
    });
    if (integral) continue;
    long radius = 16;
    auto volume = [&](long r) {
      Integer points = 1;
      for (std::size_t i = 0; i < vars.size(); ++i) points *= 2 * r + 2;
      return points;
    };
    while (radius > 0 && volume(radius) > 10'000'000) radius /= 2;
    solver::Box box;
    for (const auto& v : vars) {
      Rational q = model.assignment.count(v) ? model.assignment.at(v) : Rational(0);
      box[v] = {floor(q) - radius, ceil(q) + radius};
    }
    std::optional<solver::Model> found;
    try {
      found = solver::integer_witness(group, box);
    } catch (const solver::BoxTooLargeError&) {
      return std::nullopt;
    }
    if (!found) return std::nullopt;
    for (const auto& [v, q] : found->assignment) out[v] = q.get_num();
  }
  return out;
}

std::map<std::string, Integer> floored(const solver::Model& model) {
  std::map<std::string, Integer> out;
  for (const auto& [v, q] : model.assignment) out[v] = floor(q);
  return out;
}

}  // namespace

PathEncoding encode_path(const Program& program, const std::vector<EdgeId>& edges) {
  PathEncoding enc;
  SsaIndex ssa;
  for (EdgeId id : edges) {
    enc.steps.push_back(analysis::encode_edge(program, program.edge(id), ssa));
    enc.after.push_back(ssa);
  }
  return enc;
}

std::vector<Integer> witness_inputs(const Program& program, const std::vector<EdgeId>& path,
                                    const std::map<std::string, Integer>& value) {
  auto read = [&value](const std::string& symbol) {
    auto it = value.find(symbol);
    return it == value.end() ? Integer(0) : it->second;
  };
  std::vector<Integer> inputs;
  SsaIndex ssa;
  for (const auto& v : analysis::uninitialized_locals(program.main())) inputs.push_back(read(ssa.current(v)));
  for (EdgeId id : path) {
    const CfaEdge& edge = program.edge(id);
    analysis::encode_edge(program, edge, ssa);
    if (const auto* assign = std::get_if<AssignOp>(&edge.op)) {
      if (assign->value->kind == frontend::ExprKind::kNondet) inputs.push_back(read(ssa.current(assign->target)));
    } else if (const auto* call = std::get_if<CallOp>(&edge.op)) {
      for (const auto& v : analysis::uninitialized_locals(program.cfa(call->callee)))
        inputs.push_back(read(ssa.current(v)));
    }
  }
  return inputs;
}

FeasibilityResult check_feasibility(const Program& program, const std::vector<EdgeId>& path,
                                    const solver::SolverLimits& limits) {
  PathEncoding enc = encode_path(program, path);
  FeasibilityResult result;
  std::vector<Conjunction> frontier{Conjunction{}};
  try {
    for (std::size_t t = 0; t < enc.steps.size(); ++t) {
      const bool check = is_assume(program, path[t]);
      std::vector<Conjunction> next;
      for (const auto& c : frontier) {
        for (const auto& branch : enc.steps[t]) {
          Conjunction d = c;
          d.add_all(branch);
          if (std::find(next.begin(), next.end(), d) != next.end()) continue;
          if (check && !branch.empty() && !solver::is_feasible(d, limits)) continue;
          if (next.size() < kMaxCombinations) next.push_back(std::move(d));
        }
      }
      if (next.empty()) {
        result.kind = FeasibilityKind::kInfeasible;
        result.prefix_length = t + 1;
        return result;
      }
      frontier = std::move(next);
    }
    std::optional<solver::Model> first_model;
    for (const auto& c : frontier) {
      auto feasible = solver::is_feasible(c, limits);
      if (!feasible) continue;  // possible only for non-assume contradictions
      if (!first_model) first_model = feasible.model;
      if (auto ints = integer_model(c, feasible.model)) {
        result.kind = FeasibilityKind::kConcrete;
        for (const auto& [v, k] : *ints) result.model.assignment[v] = Rational(k);
        result.inputs = witness_inputs(program, path, *ints);
        return result;
      }
    }
    if (!first_model) {
      result.kind = FeasibilityKind::kInfeasible;
      result.prefix_length = path.size();
      return result;
    }
    result.kind = FeasibilityKind::kRelaxedOnly;
    result.model = *first_model;
    result.inputs = witness_inputs(program, path, floored(*first_model));
  } catch (const solver::BlowupError&) {
    result = FeasibilityResult{};
    result.kind = FeasibilityKind::kRelaxedOnly;
    result.inputs = witness_inputs(program, path, {});
  }
  return result;
}

namespace {

struct TaggedAtom {
  LinearConstraint atom;
  std::size_t step;
};

Conjunction conjoin(const std::vector<TaggedAtom>& atoms) {
  Conjunction c;
  for (const auto& a : atoms) c.add(a.atom);
  return c;
}

// Deletion-based minimal infeasible subset, after narrowing to one
// infeasible group of variable-connected atoms.
std::vector<TaggedAtom> minimal_core(std::vector<TaggedAtom> atoms, const solver::SolverLimits& limits) {
  for (const auto& group : solver::connected_components(conjoin(atoms))) {
    if (solver::is_feasible(group, limits)) continue;
    std::erase_if(atoms, [&](const TaggedAtom& a) { return !group.constraints().count(a.atom); });
    break;
  }
  for (std::size_t i = 0; i < atoms.size();) {
    std::vector<TaggedAtom> without = atoms;
    without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
    if (!solver::is_feasible(conjoin(without), limits)) {
      atoms = std::move(without);
    } else {
      ++i;
    }
  }
  return atoms;
}

// Projects `atoms` onto the symbols live after step `cut` and renames them to
// program variables.
void mine(const std::vector<TaggedAtom>& atoms, const SsaIndex& live, const solver::SolverLimits& limits,
          domains::PredicateSet& out) {
  if (atoms.empty()) return;
  auto is_live = [&live](const std::string& symbol) {
    auto parsed = analysis::parse_ssa_symbol(symbol);
    return parsed && live.index(parsed->first) == parsed->second;
  };
  std::optional<Conjunction> projected;
  try {
    projected = solver::project(conjoin(atoms), is_live, limits);
  } catch (const solver::BlowupError&) {
    return;
  }
  if (!projected) return;
  auto to_variable = [](const std::string& symbol) { return analysis::parse_ssa_symbol(symbol)->first; };
  for (const auto& c : projected->constraints())
    if (auto p = domains::canonical_predicate(c.renamed(to_variable))) out.insert(*p);
}

}  // namespace

PredicateMap discover_predicates(const Program& program, const std::vector<EdgeId>& path, std::size_t prefix_length,
                                 const solver::SolverLimits& limits) {
  std::vector<EdgeId> prefix(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(prefix_length));
  PathEncoding enc = encode_path(program, prefix);

  // Infeasible branch combinations, each cut off at its first contradiction.
  std::vector<std::vector<TaggedAtom>> infeasible;
  std::function<void(std::size_t, const std::vector<TaggedAtom>&)> walk = [&](std::size_t t,
                                                                             const std::vector<TaggedAtom>& so_far) {
    if (infeasible.size() >= kMaxCombinations || t == enc.steps.size()) return;
    for (const auto& branch : enc.steps[t]) {
      std::vector<TaggedAtom> atoms = so_far;
      for (const auto& a : branch.constraints()) atoms.push_back({a, t});
      bool feasible = true;
      if (!branch.empty()) {
        try {
          feasible = static_cast<bool>(solver::is_feasible(conjoin(atoms), limits));
        } catch (const solver::BlowupError&) {
        }
      }
      if (feasible) {
        walk(t + 1, atoms);
      } else {
        infeasible.push_back(std::move(atoms));
      }
    }
  };
  walk(0, {});

  PredicateMap found;
  for (auto& atoms : infeasible) {
    std::vector<TaggedAtom> core;
    try {
      core = minimal_core(std::move(atoms), limits);
    } catch (const solver::BlowupError&) {
      continue;
    }
    std::size_t last = 0;
    for (const auto& a : core) last = std::max(last, a.step);
    for (std::size_t cut = 0; cut < last; ++cut) {
      std::vector<TaggedAtom> before, after;
      for (const auto& a : core) (a.step <= cut ? before : after).push_back(a);
      domains::PredicateSet& at = found[program.edge(prefix[cut]).target];
      mine(before, enc.after[cut], limits, at);
      mine(after, enc.after[cut], limits, at);
    }
  }
  std::erase_if(found, [](const auto& entry) { return entry.second.empty(); });
  return found;
}

domains::PredicatePrecision refine_precision(const domains::PredicatePrecision& precision, const PredicateMap& found,
                                             PredicateScope scope) {
  auto by_location = precision.by_location();
  auto global = precision.global();
  bool grew = false;
  for (const auto& [loc, preds] : found) {
    for (const auto& p : preds) {
      if (precision.contains(loc, p) && scope == PredicateScope::kLocation) continue;
      if (scope == PredicateScope::kGlobal) {
        grew = global.insert(p).second || grew;
      } else {
        grew = by_location[loc].insert(p).second || grew;
      }
    }
  }
  if (!grew) throw RefinementStuckError("refinement found no new predicate");
  return domains::PredicatePrecision(std::move(by_location), std::move(global));
}

}  // namespace cpa::algorithm
