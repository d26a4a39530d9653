#include "cpa/solver/fourier_motzkin.hpp"

#include <algorithm>

namespace cpa::solver {

namespace {

/// Sparse integer row Σ cᵢ·xᵢ + constant, sorted by variable id.
struct Row {
  std::vector<std::pair<int, Integer>> coeffs;
  Integer constant = 0;

  Integer coefficient(int var) const {
    auto it = std::lower_bound(coeffs.begin(), coeffs.end(), var,
                               [](const auto& p, int v) { return p.first < v; });
    return (it != coeffs.end() && it->first == var) ? it->second : Integer(0);
  }

  bool is_constant() const { return coeffs.empty(); }
};

/// ka·a + kb·b
Row combine(const Row& a, const Integer& ka, const Row& b, const Integer& kb) {
  Row out;
  out.coeffs.reserve(a.coeffs.size() + b.coeffs.size());
  auto i = a.coeffs.begin();
  auto j = b.coeffs.begin();
  while (i != a.coeffs.end() || j != b.coeffs.end()) {
    if (j == b.coeffs.end() || (i != a.coeffs.end() && i->first < j->first)) {
      out.coeffs.emplace_back(i->first, ka * i->second);
      ++i;
    } else if (i == a.coeffs.end() || j->first < i->first) {
      out.coeffs.emplace_back(j->first, kb * j->second);
      ++j;
    } else {
      Integer c = ka * i->second + kb * j->second;
      if (c != 0) out.coeffs.emplace_back(i->first, std::move(c));
      ++i;
      ++j;
    }
  }
  out.constant = ka * a.constant + kb * b.constant;
  return out;
}

void normalize(Row& r, bool equality) {
  Integer g = r.constant;
  for (const auto& [v, c] : r.coeffs) g = gcd(g, c);
  g = abs(g);
  if (g > 1) {
    for (auto& [v, c] : r.coeffs) c /= g;
    r.constant /= g;
  }
  if (equality && !r.coeffs.empty() && r.coeffs.front().second < 0) {
    for (auto& [v, c] : r.coeffs) c = -c;
    r.constant = -r.constant;
  }
}

Rational evaluate_rest(const Row& r, int skip, const std::vector<Rational>& values) {
  Rational sum(r.constant);
  for (const auto& [v, c] : r.coeffs)
    if (v != skip) sum += Rational(c) * values[v];
  return sum;
}

class Eliminator {
 public:
  Eliminator(const Conjunction& c, const SolverLimits& limits) : limits_(limits) {
    std::set<std::string> vars = c.variables();
    names_.assign(vars.begin(), vars.end());
    for (std::size_t i = 0; i < names_.size(); ++i) ids_[names_[i]] = static_cast<int>(i);
    for (const auto& k : c.constraints()) {
      Row r;
      for (const auto& [v, coeff] : k.term().coefficients()) r.coeffs.emplace_back(ids_[v], coeff);
      std::sort(r.coeffs.begin(), r.coeffs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      r.constant = k.term().constant_term();
      switch (k.relation()) {
        case Relation::kLessEqualZero:
          add_inequality(std::move(r));
          break;
        case Relation::kEqualZero:
          normalize(r, true);
          eqs_.push_back(std::move(r));
          break;
        case Relation::kNotEqualZero:
          throw std::invalid_argument("disequalities must be split before solving");
      }
    }
  }

  /// Eliminates every variable for which `eliminate(id)` holds. Returns false
  /// once the system is shown infeasible.
  bool run(const std::function<bool(int)>& eliminate) {
    if (infeasible_) return false;
    if (!eliminate_equalities(eliminate)) return false;
    return eliminate_inequalities(eliminate);
  }

  Model model() const {
    std::vector<Rational> values(names_.size(), Rational(0));
    for (auto step = steps_.rbegin(); step != steps_.rend(); ++step) {
      const int x = step->var;
      if (step->by_equality) {
        Integer a = step->pivot.coefficient(x);
        values[x] = -evaluate_rest(step->pivot, x, values) / Rational(a);
        continue;
      }
      std::optional<Rational> lo, hi;
      for (const auto& r : step->lower) {
        Rational b = evaluate_rest(r, x, values) / Rational(-r.coefficient(x));
        if (!lo || b > *lo) lo = b;
      }
      for (const auto& r : step->upper) {
        Rational b = -evaluate_rest(r, x, values) / Rational(r.coefficient(x));
        if (!hi || b < *hi) hi = b;
      }
      values[x] = choose(lo, hi);
    }
    Model m;
    for (std::size_t i = 0; i < names_.size(); ++i) {
      values[i].canonicalize();
      m.assignment[names_[i]] = values[i];
    }
    return m;
  }

  Conjunction remaining() const {
    Conjunction out;
    auto to_term = [&](const Row& r) {
      LinearTerm t = LinearTerm::constant(r.constant);
      for (const auto& [v, c] : r.coeffs) t += LinearTerm::variable(names_[v], c);
      return t;
    };
    for (const auto& r : eqs_) out.add(LinearConstraint::equal(to_term(r)));
    std::vector<bool> used(ineqs_.size(), false);
    for (std::size_t i = 0; i < ineqs_.size(); ++i) {
      if (used[i]) continue;
      // t ≤ 0 together with -t ≤ 0 is the equality t = 0
      Row neg = combine(ineqs_[i], 0, ineqs_[i], -1);
      for (std::size_t j = i + 1; j < ineqs_.size(); ++j) {
        if (!used[j] && ineqs_[j].coeffs == neg.coeffs && ineqs_[j].constant == neg.constant) {
          used[i] = used[j] = true;
          Row eq = ineqs_[i];
          normalize(eq, true);
          out.add(LinearConstraint::equal(to_term(eq)));
          break;
        }
      }
      if (!used[i]) out.add(LinearConstraint::less_equal(to_term(ineqs_[i])));
    }
    return out;
  }

  int id(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
  }
  const std::vector<std::string>& names() const { return names_; }

 private:
  struct Step {
    int var = -1;
    bool by_equality = false;
    Row pivot;
    std::vector<Row> lower, upper;
  };

  static Rational choose(const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
    const Rational zero(0);
    if ((!lo || *lo <= zero) && (!hi || *hi >= zero)) return zero;
    if (lo && *lo > zero) {
      Rational up(ceil(*lo));
      return (!hi || up <= *hi) ? up : *lo;
    }
    Rational down(floor(*hi));
    return (!lo || down >= *lo) ? down : *hi;
  }

  void count(std::size_t n = 1) {
    generated_ += n;
    if (generated_ > limits_.max_constraints)
      throw BlowupError("Fourier-Motzkin exceeded " + std::to_string(limits_.max_constraints) +
                        " constraints");
  }

  void add_inequality(Row r) {
    if (r.is_constant()) {
      if (r.constant > 0) infeasible_ = true;
      return;
    }
    normalize(r, false);
    ineqs_.push_back(std::move(r));
  }

  bool eliminate_equalities(const std::function<bool(int)>& eliminate) {
    for (;;) {
      // constant equalities are either trivial or contradictory
      for (auto it = eqs_.begin(); it != eqs_.end();) {
        if (it->is_constant()) {
          if (it->constant != 0) return !(infeasible_ = true);
          it = eqs_.erase(it);
        } else {
          ++it;
        }
      }
      std::size_t chosen = eqs_.size();
      int pivot = -1;
      for (std::size_t i = 0; i < eqs_.size() && pivot < 0; ++i) {
        Integer best;
        for (const auto& [v, c] : eqs_[i].coeffs) {
          if (!eliminate(v)) continue;
          if (pivot < 0 || abs(c) < best) {
            pivot = v;
            best = abs(c);
            chosen = i;
          }
        }
      }
      if (pivot < 0) return true;
      Row e = std::move(eqs_[chosen]);
      eqs_.erase(eqs_.begin() + static_cast<std::ptrdiff_t>(chosen));
      const Integer a = e.coefficient(pivot);
      const Integer abs_a = abs(a);
      const Integer sign_a = a > 0 ? 1 : -1;
      auto substitute = [&](Row& r, bool equality) {
        Integer b = r.coefficient(pivot);
        if (b == 0) return;
        r = combine(r, abs_a, e, -b * sign_a);
        normalize(r, equality);
        count();
      };
      for (auto& r : eqs_) substitute(r, true);
      std::vector<Row> old = std::move(ineqs_);
      ineqs_.clear();
      for (auto& r : old) {
        substitute(r, false);
        add_inequality(std::move(r));
        if (infeasible_) return false;
      }
      prune();
      if (infeasible_) return false;
      steps_.push_back({pivot, true, std::move(e), {}, {}});
    }
  }

  // Keeps only the strongest constant for each coefficient vector and
  // detects directly opposing pairs.
  void prune() {
    std::map<std::vector<std::pair<int, Integer>>, Integer> best;
    for (auto& r : ineqs_) {
      auto [it, inserted] = best.emplace(std::move(r.coeffs), r.constant);
      if (!inserted && r.constant > it->second) it->second = r.constant;
    }
    ineqs_.clear();
    for (auto& [coeffs, constant] : best) {
      std::vector<std::pair<int, Integer>> neg = coeffs;
      for (auto& [v, c] : neg) c = -c;
      auto opp = best.find(neg);
      if (opp != best.end() && constant + opp->second > 0) {
        infeasible_ = true;
        return;
      }
      ineqs_.push_back(Row{coeffs, constant});
    }
  }

  bool eliminate_inequalities(const std::function<bool(int)>& eliminate) {
    prune();
    if (infeasible_) return false;
    for (;;) {
      std::map<int, std::pair<std::size_t, std::size_t>> occurrences;
      for (const auto& r : ineqs_)
        for (const auto& [v, c] : r.coeffs) {
          if (!eliminate(v)) continue;
          auto& [pos, neg] = occurrences[v];
          (c > 0 ? pos : neg) += 1;
        }
      if (occurrences.empty()) return true;
      int var = -1;
      long best = 0;
      for (const auto& [v, pn] : occurrences) {
        long cost = static_cast<long>(pn.first * pn.second) - static_cast<long>(pn.first + pn.second);
        if (var < 0 || cost < best) {
          var = v;
          best = cost;
        }
      }
      Step step;
      step.var = var;
      std::vector<Row> rest;
      for (auto& r : ineqs_) {
        Integer c = r.coefficient(var);
        if (c > 0) {
          step.upper.push_back(std::move(r));
        } else if (c < 0) {
          step.lower.push_back(std::move(r));
        } else {
          rest.push_back(std::move(r));
        }
      }
      ineqs_ = std::move(rest);
      count(step.upper.size() * step.lower.size());
      for (const auto& p : step.upper) {
        for (const auto& n : step.lower) {
          Integer pc = p.coefficient(var);
          Integer nc = -n.coefficient(var);
          add_inequality(combine(p, nc, n, pc));
          if (infeasible_) return false;
        }
      }
      prune();
      if (infeasible_) return false;
      steps_.push_back(std::move(step));
    }
  }

  SolverLimits limits_;
  std::vector<std::string> names_;
  std::map<std::string, int> ids_;
  std::vector<Row> eqs_;
  std::vector<Row> ineqs_;
  std::vector<Step> steps_;
  bool infeasible_ = false;
  std::size_t generated_ = 0;
};

}  // namespace

Feasibility is_feasible(const Conjunction& c, const SolverLimits& limits) {
  Eliminator elim(c, limits);
  if (!elim.run([](int) { return true; })) return {};
  Feasibility result{true, elim.model()};
  return result;
}

bool entails(const Conjunction& c, const LinearConstraint& atom, const SolverLimits& limits) {
  try {
    for (const auto& branch : atom.negated()) {
      if (branch.is_trivially_false()) continue;
      Conjunction query = c;
      if (!branch.is_trivially_true()) query.add(branch);
      if (is_feasible(query, limits)) return false;
    }
    return true;
  } catch (const BlowupError&) {
    return false;
  }
}

std::optional<Conjunction> project(const Conjunction& c, const std::function<bool(const std::string&)>& keep,
                                   const SolverLimits& limits) {
  Eliminator elim(c, limits);
  const auto& names = elim.names();
  std::vector<bool> drop(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) drop[i] = !keep(names[i]);
  if (!elim.run([&](int v) { return static_cast<bool>(drop[v]); })) return std::nullopt;
  return elim.remaining();
}

std::optional<Model> integer_witness(const Conjunction& c, const Box& box) {
  std::set<std::string> var_set = c.variables();
  std::vector<std::string> vars(var_set.begin(), var_set.end());
  Integer volume = 1;
  for (const auto& v : vars) {
    auto it = box.find(v);
    if (it == box.end()) throw std::invalid_argument("no bound for variable " + v);
    const auto& [lo, hi] = it->second;
    if (hi < lo) return std::nullopt;
    volume *= hi - lo + 1;
    if (volume > 10'000'000) throw BoxTooLargeError("search box exceeds 10^7 points");
  }

  // each constraint is checked once its last variable (in search order) is set
  std::vector<std::vector<const LinearConstraint*>> checks(vars.size() + 1);
  for (const auto& k : c.constraints()) {
    std::size_t last = 0;
    for (const auto& [v, coeff] : k.term().coefficients()) {
      auto pos = static_cast<std::size_t>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
      last = std::max(last, pos + 1);
    }
    checks[last].push_back(&k);
  }
  std::map<std::string, Rational> assignment;
  auto ok = [&](std::size_t level) {
    for (const auto* k : checks[level])
      if (!k->satisfied_by(assignment)) return false;
    return true;
  };
  if (!ok(0)) return std::nullopt;

  std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
    if (i == vars.size()) return true;
    const auto& [lo, hi] = box.at(vars[i]);
    for (Integer v = lo; v <= hi; ++v) {
      assignment[vars[i]] = Rational(v);
      if (ok(i + 1) && search(i + 1)) return true;
    }
    assignment.erase(vars[i]);
    return false;
  };
  if (!search(0)) return std::nullopt;
  return Model{assignment};
}

}  // namespace cpa::solver

namespace cpa::solver {

std::vector<Conjunction> connected_components(const Conjunction& c) {
  std::vector<const LinearConstraint*> atoms;
  for (const auto& k : c.constraints()) atoms.push_back(&k);
  // union-find over atom indices, joined through shared variables
  std::vector<std::size_t> parent(atoms.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (const auto& [v, coeff] : atoms[i]->term().coefficients()) {
      auto [it, inserted] = owner.emplace(v, i);
      if (!inserted) parent[find(i)] = find(it->second);
    }
  }
  std::map<std::size_t, std::size_t> group_of_root;
  std::vector<Conjunction> groups;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::size_t root = find(i);
    auto [it, inserted] = group_of_root.emplace(root, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].add(*atoms[i]);
  }
  return groups;
}

}  // namespace cpa::solver
