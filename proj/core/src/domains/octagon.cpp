#include "cpa/domains/octagon.hpp"

#include <functional>

namespace cpa::domains {

using solver::LinearConstraint;
using solver::LinearTerm;
using solver::Relation;

namespace {

void lower(Bound& b, const Integer& c) {
  if (!b || c < *b) b = c;
}

// Signed index for s·x_k with s = ±1.
std::size_t signed_index(std::size_t k, int sign) { return sign > 0 ? 2 * k : 2 * k + 1; }

}  // namespace

Dbm::Dbm(std::size_t variables) : n_(variables), m_(4 * variables * variables) {
  for (std::size_t i = 0; i < dimension(); ++i) at(i, i) = Integer(0);
}

void Dbm::constrain(std::size_t i, std::size_t j, const Integer& c) {
  lower(at(i, j), c);
  lower(at(bar(j), bar(i)), c);
}

void Dbm::forget(std::size_t k) {
  for (std::size_t s : {2 * k, 2 * k + 1}) {
    for (std::size_t j = 0; j < dimension(); ++j) {
      if (j == s) continue;
      at(s, j).reset();
      at(j, s).reset();
    }
  }
}

bool Dbm::close() {
  const std::size_t dim = dimension();
  for (std::size_t i = 0; i < dim; ++i) {
    if (at(i, i) && *at(i, i) < 0) return false;
    at(i, i) = Integer(0);
  }
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < dim; ++i) {
      const Bound& ik = at(i, k);
      if (!ik) continue;
      for (std::size_t j = 0; j < dim; ++j) {
        const Bound& kj = at(k, j);
        if (kj) lower(at(i, j), *ik + *kj);
      }
    }
  }
  for (std::size_t i = 0; i < dim; ++i)
    if (*at(i, i) < 0) return false;
  for (std::size_t i = 0; i < dim; ++i) {
    Bound& u = at(i, bar(i));
    if (u) u = 2 * floor_div(*u, 2);
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const Bound& a = at(i, bar(i));
    const Bound& b = at(bar(i), i);
    if (a && b && *a + *b < 0) return false;
  }
  for (std::size_t i = 0; i < dim; ++i) {
    const Bound& a = at(i, bar(i));
    if (!a) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      const Bound& b = at(bar(j), j);
      if (b) lower(at(i, j), floor_div(*a + *b, 2));
    }
  }
  return true;
}

bool Dbm::contains(const std::vector<long>& point) const {
  auto value = [&](std::size_t i) { return (i % 2 == 0) ? point[i / 2] : -point[i / 2]; };
  for (std::size_t i = 0; i < dimension(); ++i)
    for (std::size_t j = 0; j < dimension(); ++j)
      if (const Bound& b = at(i, j); b && Integer(value(i) - value(j)) > *b) return false;
  return true;
}

std::vector<std::vector<long>> Dbm::points(long r) const {
  std::vector<std::vector<long>> out;
  std::vector<long> p(n_, -r);
  if (n_ == 0) {
    if (contains(p)) out.push_back(p);
    return out;
  }
  for (;;) {
    if (contains(p)) out.push_back(p);
    std::size_t k = 0;
    while (k < n_ && p[k] == r) p[k++] = -r;
    if (k == n_) break;
    ++p[k];
  }
  return out;
}

std::optional<Dbm> strong_closure(Dbm m) {
  if (!m.close()) return std::nullopt;
  return m;
}

OctagonState::OctagonState(std::optional<Dbm> dbm, const std::vector<std::string>* names)
    : dbm_(std::move(dbm)), names_(names) {
  if (!dbm_) {
    hash_ = 0xb0770;
    return;
  }
  hash_ = dbm_->variables();
  for (std::size_t i = 0; i < dbm_->dimension(); ++i)
    for (std::size_t j = 0; j < dbm_->dimension(); ++j) {
      const Bound& b = dbm_->at(i, j);
      hash_ = hash_ * 1099511628211ull + (b ? std::hash<std::string>{}(b->get_str()) : 7);
    }
}

bool OctagonState::equals(const AbstractState& other) const {
  const auto* o = dynamic_cast<const OctagonState*>(&other);
  return o && o->hash_ == hash_ && o->dbm_ == dbm_;
}

std::string OctagonState::to_string() const {
  if (!dbm_) return "⊥";
  auto name = [&](std::size_t i) {
    std::size_t k = i / 2;
    return names_ && k < names_->size() ? frontend::display_name((*names_)[k]) : "v" + std::to_string(k);
  };
  std::string s;
  auto add = [&s](const std::string& part) { s += (s.empty() ? "" : ", ") + part; };
  const Dbm& m = *dbm_;
  for (std::size_t i = 0; i < m.dimension(); ++i) {
    for (std::size_t j = 0; j < m.dimension(); ++j) {
      const Bound& b = m.at(i, j);
      if (i == j || !b) continue;
      std::string vi = (i % 2 ? "-" : "") + name(i);
      if (j == Dbm::bar(i)) {
        add(vi + " <= " + floor_div(*b, 2).get_str());
      } else if (i / 2 < j / 2) {
        add(vi + (j % 2 ? " + " : " - ") + name(j) + " <= " + b->get_str());
      }
    }
  }
  return "{" + s + "}";
}

OctagonCpa::OctagonCpa(const Program& program) : OctagonCpa(&program, program.variables()) {}

OctagonCpa::OctagonCpa(const Program* program, std::vector<std::string> variables)
    : program_(program), names_(std::move(variables)) {
  for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = i;
}

StatePtr OctagonCpa::make(std::optional<Dbm> dbm) const { return std::make_shared<OctagonState>(std::move(dbm), &names_); }

StatePtr OctagonCpa::initial_state(LocationId) const { return make(Dbm(names_.size())); }

bool OctagonCpa::less_or_equal(const AbstractState& a, const AbstractState& b) const {
  const auto& x = static_cast<const OctagonState&>(a).dbm();
  const auto& y = static_cast<const OctagonState&>(b).dbm();
  if (!x) return true;
  if (!y) return false;
  for (std::size_t i = 0; i < x->dimension(); ++i)
    for (std::size_t j = 0; j < x->dimension(); ++j) {
      const Bound& q = y->at(i, j);
      if (!q) continue;
      const Bound& p = x->at(i, j);
      if (!p || *p > *q) return false;
    }
  return true;
}

StatePtr OctagonCpa::join(const StatePtr& a, const StatePtr& b) const {
  const auto& x = static_cast<const OctagonState&>(*a).dbm();
  const auto& y = static_cast<const OctagonState&>(*b).dbm();
  if (!x) return b;
  if (!y) return a;
  Dbm m = *x;
  for (std::size_t i = 0; i < m.dimension(); ++i)
    for (std::size_t j = 0; j < m.dimension(); ++j) {
      Bound& p = m.at(i, j);
      const Bound& q = y->at(i, j);
      if (!q) {
        p.reset();
      } else if (p && *q > *p) {
        p = q;
      }
    }
  return make(strong_closure(std::move(m)));
}

std::optional<Dbm> OctagonCpa::assume(Dbm dbm, const LinearConstraint& c) const {
  if (c.relation() == Relation::kEqualZero) {
    auto first = assume(std::move(dbm), LinearConstraint::less_equal(c.term()));
    if (!first) return std::nullopt;
    return assume(std::move(*first), LinearConstraint::less_equal(-c.term()));
  }
  if (c.relation() != Relation::kLessEqualZero) return dbm;
  LinearConstraint t = c.tightened();
  const auto& coeffs = t.term().coefficients();
  const Integer bound = -t.term().constant_term();
  if (coeffs.empty()) {
    if (bound < 0) return std::nullopt;
    return dbm;
  }
  if (coeffs.size() == 1) {
    const auto& [var, a] = *coeffs.begin();
    std::size_t p = signed_index(index(var), a > 0 ? 1 : -1);
    dbm.constrain(p, Dbm::bar(p), 2 * floor_div(bound, abs(a)));
  } else if (coeffs.size() == 2) {
    auto first = coeffs.begin();
    auto second = std::next(first);
    if (abs(first->second) != 1 || abs(second->second) != 1) return dbm;
    std::size_t p = signed_index(index(first->first), first->second > 0 ? 1 : -1);
    std::size_t q = signed_index(index(second->first), second->second > 0 ? -1 : 1);
    dbm.constrain(p, q, bound);
  } else {
    return dbm;
  }
  if (!dbm.close()) return std::nullopt;
  return dbm;
}

std::pair<Bound, Bound> OctagonCpa::range(const Dbm& dbm, const LinearTerm& t) const {
  Bound lo = t.constant_term(), hi = t.constant_term();
  for (const auto& [var, a] : t.coefficients()) {
    std::size_t k = index(var);
    const Bound& up2 = dbm.at(2 * k, 2 * k + 1);
    const Bound& down2 = dbm.at(2 * k + 1, 2 * k);
    Bound x_hi = up2 ? Bound(floor_div(*up2, 2)) : std::nullopt;
    Bound x_lo = down2 ? Bound(-floor_div(*down2, 2)) : std::nullopt;
    Bound add_lo = a > 0 ? x_lo : x_hi;
    Bound add_hi = a > 0 ? x_hi : x_lo;
    if (lo) lo = add_lo ? Bound(*lo + a * *add_lo) : std::nullopt;
    if (hi) hi = add_hi ? Bound(*hi + a * *add_hi) : std::nullopt;
  }
  return {lo, hi};
}

Dbm OctagonCpa::assign(Dbm dbm, const std::string& x, const LinearTerm& rhs) const {
  const std::size_t k = index(x);
  const std::size_t px = 2 * k, nx = 2 * k + 1;
  const Integer& c = rhs.constant_term();
  const auto& coeffs = rhs.coefficients();
  if (coeffs.size() == 1 && coeffs.begin()->first == x && abs(coeffs.begin()->second) == 1) {
    if (coeffs.begin()->second < 0) {
      // x := -x: swap the roles of +x and -x
      for (std::size_t j = 0; j < dbm.dimension(); ++j) std::swap(dbm.at(px, j), dbm.at(nx, j));
      for (std::size_t i = 0; i < dbm.dimension(); ++i) std::swap(dbm.at(i, px), dbm.at(i, nx));
    }
    for (std::size_t j = 0; j < dbm.dimension(); ++j) {
      if (j == px || j == nx) continue;
      if (auto& b = dbm.at(px, j)) *b += c;
      if (auto& b = dbm.at(j, px)) *b -= c;
      if (auto& b = dbm.at(nx, j)) *b -= c;
      if (auto& b = dbm.at(j, nx)) *b += c;
    }
    if (auto& b = dbm.at(px, nx)) *b += 2 * c;
    if (auto& b = dbm.at(nx, px)) *b -= 2 * c;
  } else if (coeffs.size() == 1 && abs(coeffs.begin()->second) == 1) {
    std::size_t q = signed_index(index(coeffs.begin()->first), coeffs.begin()->second > 0 ? 1 : -1);
    dbm.forget(k);
    dbm.constrain(px, q, c);
    dbm.constrain(q, px, -c);
  } else {
    auto [lo, hi] = range(dbm, rhs);
    dbm.forget(k);
    if (hi) dbm.constrain(px, nx, 2 * *hi);
    if (lo) dbm.constrain(nx, px, -2 * *lo);
  }
  dbm.close();
  return dbm;
}

std::vector<StatePtr> OctagonCpa::transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr&) const {
  const auto& current = static_cast<const OctagonState&>(*s).dbm();
  if (!current) return {};
  Dbm dbm = *current;
  std::optional<StatePtr> result;
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, AssumeOp>) {
          StatePtr joined;
          for (const auto& conj : solver::normalize_condition(*op.condition)) {
            std::optional<Dbm> branch = dbm;
            for (const auto& atom : conj.constraints()) {
              if (!branch) break;
              branch = assume(std::move(*branch), atom);
            }
            if (!branch) continue;
            StatePtr st = make(std::move(branch));
            joined = joined ? join(joined, st) : st;
          }
          result = joined ? joined : make(std::nullopt);
        } else if constexpr (std::is_same_v<T, AssignOp>) {
          if (op.value->kind == frontend::ExprKind::kNondet) {
            dbm.forget(index(op.target));
          } else {
            dbm = assign(std::move(dbm), op.target, solver::linearize(*op.value));
          }
        } else if constexpr (std::is_same_v<T, CallOp>) {
          const auto& callee = program_->cfa(op.callee);
          for (const auto& v : callee.locals) dbm.forget(index(v));
          for (std::size_t i = 0; i < op.arguments.size(); ++i)
            dbm = assign(std::move(dbm), callee.parameters[i], solver::linearize(*op.arguments[i]));
          if (callee.returns_value) dbm = assign(std::move(dbm), Program::return_slot(op.callee), LinearTerm());
        } else if constexpr (std::is_same_v<T, ReturnOp>) {
          if (op.result_target)
            dbm = assign(std::move(dbm), *op.result_target,
                         LinearTerm::variable(Program::return_slot(op.callee)));
          for (const auto& v : program_->cfa(op.callee).locals) dbm.forget(index(v));
        }
      },
      edge.op);
  if (result) {
    if ((*result)->is_bottom()) return {};
    return {*result};
  }
  return {make(std::move(dbm))};
}

}  // namespace cpa::domains
