#include "cpa/solver/linear.hpp"

#include <sstream>

namespace cpa::solver {

using frontend::ArithOp;
using frontend::CompareOp;
using frontend::Expr;
using frontend::ExprKind;

LinearTerm LinearTerm::constant(Integer c) {
  LinearTerm t;
  t.constant_ = std::move(c);
  return t;
}

LinearTerm LinearTerm::variable(const std::string& name, Integer coefficient) {
  LinearTerm t;
  if (coefficient != 0) t.coefficients_.emplace(name, std::move(coefficient));
  return t;
}

Integer LinearTerm::coefficient(const std::string& var) const {
  auto it = coefficients_.find(var);
  return it == coefficients_.end() ? Integer(0) : it->second;
}

LinearTerm& LinearTerm::operator+=(const LinearTerm& other) {
  for (const auto& [v, c] : other.coefficients_) {
    auto [it, inserted] = coefficients_.emplace(v, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) coefficients_.erase(it);
    }
  }
  constant_ += other.constant_;
  return *this;
}

LinearTerm& LinearTerm::operator-=(const LinearTerm& other) { return *this += -other; }

LinearTerm& LinearTerm::operator*=(const Integer& factor) {
  if (factor == 0) {
    coefficients_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [v, c] : coefficients_) c *= factor;
  constant_ *= factor;
  return *this;
}

LinearTerm LinearTerm::renamed(const std::function<std::string(const std::string&)>& rename) const {
  LinearTerm out = constant(constant_);
  for (const auto& [v, c] : coefficients_) out += variable(rename(v), c);
  return out;
}

Rational LinearTerm::evaluate(const std::map<std::string, Rational>& assignment) const {
  Rational sum(constant_);
  for (const auto& [v, c] : coefficients_) {
    auto it = assignment.find(v);
    if (it != assignment.end()) sum += Rational(c) * it->second;
  }
  return sum;
}

bool operator<(const LinearTerm& a, const LinearTerm& b) {
  if (a.coefficients_ != b.coefficients_) return a.coefficients_ < b.coefficients_;
  return a.constant_ < b.constant_;
}

LinearConstraint::LinearConstraint(LinearTerm term, Relation relation)
    : term_(std::move(term)), relation_(relation) {}

namespace {

Integer content(const LinearTerm& t, bool with_constant) {
  Integer g = 0;
  for (const auto& [v, c] : t.coefficients()) g = gcd(g, c);
  if (with_constant) g = gcd(g, t.constant_term());
  return g;
}

LinearTerm divide_exact(const LinearTerm& t, const Integer& g) {
  LinearTerm out = LinearTerm::constant(t.constant_term() / g);
  for (const auto& [v, c] : t.coefficients()) out += LinearTerm::variable(v, c / g);
  return out;
}

bool leading_negative(const LinearTerm& t) {
  return !t.coefficients().empty() && t.coefficients().begin()->second < 0;
}

}  // namespace

LinearConstraint LinearConstraint::normalized() const {
  Integer g = content(term_, true);
  LinearTerm t = (g > 1) ? divide_exact(term_, g) : term_;
  if (relation_ != Relation::kLessEqualZero && leading_negative(t)) t = -t;
  return {std::move(t), relation_};
}

LinearConstraint LinearConstraint::tightened() const {
  if (relation_ != Relation::kLessEqualZero || term_.is_constant()) return normalized();
  Integer g = content(term_, false);
  if (g <= 1) return normalized();
  LinearTerm t = LinearTerm::constant(ceil_div(term_.constant_term(), g));
  for (const auto& [v, c] : term_.coefficients()) t += LinearTerm::variable(v, c / g);
  return LinearConstraint(std::move(t), relation_).normalized();
}

std::vector<LinearConstraint> LinearConstraint::negated() const {
  switch (relation_) {
    case Relation::kLessEqualZero:
      return {less_equal(-term_ + LinearTerm::constant(1)).tightened()};
    case Relation::kEqualZero:
      return {less_equal(term_ + LinearTerm::constant(1)).tightened(),
              less_equal(-term_ + LinearTerm::constant(1)).tightened()};
    case Relation::kNotEqualZero:
      return {equal(term_).normalized()};
  }
  return {};
}

bool LinearConstraint::is_trivially_true() const {
  if (!term_.is_constant()) return false;
  const Integer& c = term_.constant_term();
  switch (relation_) {
    case Relation::kLessEqualZero: return c <= 0;
    case Relation::kEqualZero: return c == 0;
    case Relation::kNotEqualZero: return c != 0;
  }
  return false;
}

bool LinearConstraint::is_trivially_false() const {
  return term_.is_constant() && !is_trivially_true();
}

bool LinearConstraint::satisfied_by(const std::map<std::string, Rational>& assignment) const {
  Rational v = term_.evaluate(assignment);
  switch (relation_) {
    case Relation::kLessEqualZero: return v <= 0;
    case Relation::kEqualZero: return v == 0;
    case Relation::kNotEqualZero: return v != 0;
  }
  return false;
}

bool operator<(const LinearConstraint& a, const LinearConstraint& b) {
  if (a.relation_ != b.relation_) return a.relation_ < b.relation_;
  return a.term_ < b.term_;
}

std::string to_string(const LinearTerm& term) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : term.coefficients()) {
    Integer mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (mag != 1) os << mag.get_str() << '*';
    os << frontend::display_name(v);
    first = false;
  }
  const Integer& k = term.constant_term();
  if (first) {
    os << k.get_str();
  } else if (k != 0) {
    os << (k < 0 ? " - " : " + ") << Integer(abs(k)).get_str();
  }
  return os.str();
}

std::string to_string(const LinearConstraint& c) {
  LinearTerm t = c.term();
  const char* rel = "<=";
  switch (c.relation()) {
    case Relation::kLessEqualZero:
      if (leading_negative(t)) {
        t = -t;
        rel = ">=";
      }
      break;
    case Relation::kEqualZero:
      rel = "==";
      break;
    case Relation::kNotEqualZero:
      rel = "!=";
      break;
  }
  if (t.is_constant()) return to_string(t) + " " + rel + " 0";
  Integer rhs = -t.constant_term();
  LinearTerm lhs = t - LinearTerm::constant(t.constant_term());
  return to_string(lhs) + " " + rel + " " + rhs.get_str();
}

Conjunction::Conjunction(std::initializer_list<LinearConstraint> cs) {
  for (const auto& c : cs) add(c);
}

Conjunction::Conjunction(const std::vector<LinearConstraint>& cs) {
  for (const auto& c : cs) add(c);
}

void Conjunction::add(const LinearConstraint& c) { constraints_.insert(c); }

void Conjunction::add_all(const Conjunction& other) {
  constraints_.insert(other.constraints_.begin(), other.constraints_.end());
}

std::set<std::string> Conjunction::variables() const {
  std::set<std::string> vars;
  for (const auto& c : constraints_)
    for (const auto& [v, k] : c.term().coefficients()) vars.insert(v);
  return vars;
}

bool Conjunction::satisfied_by(const std::map<std::string, Rational>& assignment) const {
  for (const auto& c : constraints_)
    if (!c.satisfied_by(assignment)) return false;
  return true;
}

Conjunction Conjunction::renamed(const std::function<std::string(const std::string&)>& rename) const {
  Conjunction out;
  for (const auto& c : constraints_) out.add(c.renamed(rename));
  return out;
}

std::string to_string(const Conjunction& c) {
  std::string s = "{";
  bool first = true;
  for (const auto& k : c.constraints()) {
    if (!first) s += ", ";
    s += to_string(k);
    first = false;
  }
  return s + "}";
}

LinearTerm linearize(const Expr& e, const std::function<std::string(const std::string&)>& rename) {
  switch (e.kind) {
    case ExprKind::kIntLiteral:
      return LinearTerm::constant(e.value);
    case ExprKind::kVariable:
      return LinearTerm::variable(rename ? rename(e.name) : e.name);
    case ExprKind::kArith: {
      LinearTerm l = linearize(*e.lhs, rename);
      LinearTerm r = linearize(*e.rhs, rename);
      switch (e.arith_op) {
        case ArithOp::kAdd: return l + r;
        case ArithOp::kSub: return l - r;
        case ArithOp::kMul:
          if (l.is_constant()) return r * l.constant_term();
          if (r.is_constant()) return l * r.constant_term();
          throw NonlinearError("nonlinear product: " + to_string(e));
      }
      break;
    }
    case ExprKind::kNondet:
      throw std::invalid_argument("nondet() has no linear form");
    default:
      break;
  }
  throw std::invalid_argument("not an arithmetic expression: " + to_string(e));
}

namespace {

Dnf atom(LinearConstraint c) {
  c = c.tightened();
  if (c.is_trivially_false()) return {};
  Conjunction conj;
  if (!c.is_trivially_true()) conj.add(c);
  return {conj};
}

Dnf disjoin(Dnf a, const Dnf& b) {
  for (const auto& c : b)
    if (std::find(a.begin(), a.end(), c) == a.end()) a.push_back(c);
  return a;
}

Dnf conjoin(const Dnf& a, const Dnf& b) {
  Dnf out;
  for (const auto& x : a) {
    for (const auto& y : b) {
      Conjunction c = x;
      c.add_all(y);
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

Dnf normalize_condition(const Expr& cond, const std::function<std::string(const std::string&)>& rename) {
  using LC = LinearConstraint;
  const LinearTerm one = LinearTerm::constant(1);
  switch (cond.kind) {
    case ExprKind::kCompare: {
      LinearTerm t = linearize(*cond.lhs, rename) - linearize(*cond.rhs, rename);
      switch (cond.compare_op) {
        case CompareOp::kLt: return atom(LC::less_equal(t + one));
        case CompareOp::kLe: return atom(LC::less_equal(t));
        case CompareOp::kGt: return atom(LC::less_equal(-t + one));
        case CompareOp::kGe: return atom(LC::less_equal(-t));
        case CompareOp::kEq: return atom(LC::equal(t));
        case CompareOp::kNe:
          return disjoin(atom(LC::less_equal(t + one)), atom(LC::less_equal(-t + one)));
      }
      break;
    }
    case ExprKind::kNot:
      return normalize_condition(*frontend::negate_condition(cond.lhs), rename);
    case ExprKind::kAnd:
      return conjoin(normalize_condition(*cond.lhs, rename), normalize_condition(*cond.rhs, rename));
    case ExprKind::kOr:
      return disjoin(normalize_condition(*cond.lhs, rename), normalize_condition(*cond.rhs, rename));
    default:
      return normalize_condition(
          *Expr::compare(CompareOp::kNe, std::make_shared<Expr>(cond), Expr::literal(0)), rename);
  }
  return {};
}

}  // namespace cpa::solver
