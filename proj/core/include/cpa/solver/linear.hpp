#pragma once

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpa/frontend/ast.hpp"
#include "cpa/support/numbers.hpp"

namespace cpa::solver {

/// Σ cᵢ·vᵢ + constant over named integer variables. Zero coefficients are
/// never stored and variables are kept ordered by name.
class LinearTerm {
 public:
  LinearTerm() = default;
  static LinearTerm constant(Integer c);
  static LinearTerm variable(const std::string& name, Integer coefficient = 1);

  const std::map<std::string, Integer>& coefficients() const { return coefficients_; }
  const Integer& constant_term() const { return constant_; }
  Integer coefficient(const std::string& var) const;
  bool is_constant() const { return coefficients_.empty(); }
  bool mentions(const std::string& var) const { return coefficients_.count(var) > 0; }

  LinearTerm& operator+=(const LinearTerm& other);
  LinearTerm& operator-=(const LinearTerm& other);
  LinearTerm& operator*=(const Integer& factor);
  friend LinearTerm operator+(LinearTerm a, const LinearTerm& b) { return a += b; }
  friend LinearTerm operator-(LinearTerm a, const LinearTerm& b) { return a -= b; }
  friend LinearTerm operator*(LinearTerm a, const Integer& k) { return a *= k; }
  LinearTerm operator-() const { return *this * Integer(-1); }

  /// Applies `rename` to every variable name (names may collide; colliding
  /// coefficients are summed).
  LinearTerm renamed(const std::function<std::string(const std::string&)>& rename) const;
  Rational evaluate(const std::map<std::string, Rational>& assignment) const;

  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
  friend bool operator<(const LinearTerm& a, const LinearTerm& b);

 private:
  std::map<std::string, Integer> coefficients_;
  Integer constant_ = 0;
};

enum class Relation { kLessEqualZero, kEqualZero, kNotEqualZero };

/// `term ⋈ 0` with ⋈ ∈ {≤, =, ≠}.
class LinearConstraint {
 public:
  LinearConstraint() = default;
  LinearConstraint(LinearTerm term, Relation relation);

  static LinearConstraint less_equal(LinearTerm t) { return {std::move(t), Relation::kLessEqualZero}; }
  static LinearConstraint equal(LinearTerm t) { return {std::move(t), Relation::kEqualZero}; }
  static LinearConstraint not_equal(LinearTerm t) { return {std::move(t), Relation::kNotEqualZero}; }

  const LinearTerm& term() const { return term_; }
  Relation relation() const { return relation_; }

  /// Exact rescaling: divides by the gcd of all coefficients and the
  /// constant; equalities get a positive leading coefficient.
  LinearConstraint normalized() const;
  /// Integer-valid strengthening: for `≤`, divides by the gcd g of the
  /// variable coefficients and rounds the constant up to a multiple of g.
  LinearConstraint tightened() const;
  /// Integer negation as a disjunction of constraints (`≤` and `=` only
  /// produce `≤`/`=` atoms; the negation of `≠` is `=`).
  std::vector<LinearConstraint> negated() const;

  bool is_trivially_true() const;
  bool is_trivially_false() const;
  bool satisfied_by(const std::map<std::string, Rational>& assignment) const;
  LinearConstraint renamed(const std::function<std::string(const std::string&)>& rename) const {
    return {term_.renamed(rename), relation_};
  }

  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
  friend bool operator<(const LinearConstraint& a, const LinearConstraint& b);

 private:
  LinearTerm term_;
  Relation relation_ = Relation::kLessEqualZero;
};

/// Human-readable form with variables on the left, e.g. `x - y <= 1`.
std::string to_string(const LinearTerm& term);
std::string to_string(const LinearConstraint& c);

/// Deduplicated, canonically ordered set of constraints.
class Conjunction {
 public:
  Conjunction() = default;
  Conjunction(std::initializer_list<LinearConstraint> cs);
  explicit Conjunction(const std::vector<LinearConstraint>& cs);

  void add(const LinearConstraint& c);
  void add_all(const Conjunction& other);
  const std::set<LinearConstraint>& constraints() const { return constraints_; }
  std::size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }
  std::set<std::string> variables() const;
  bool satisfied_by(const std::map<std::string, Rational>& assignment) const;
  Conjunction renamed(const std::function<std::string(const std::string&)>& rename) const;

  friend bool operator==(const Conjunction&, const Conjunction&) = default;
  friend bool operator<(const Conjunction& a, const Conjunction& b) {
    return a.constraints_ < b.constraints_;
  }

 private:
  std::set<LinearConstraint> constraints_;
};

std::string to_string(const Conjunction& c);

/// Disjunctive normal form.
using Dnf = std::vector<Conjunction>;

class NonlinearError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear form of an arithmetic expression. `rename` maps each program
/// variable to the solver symbol it stands for (identity by default).
LinearTerm linearize(const frontend::Expr& e,
                     const std::function<std::string(const std::string&)>& rename = {});

/// Converts a condition into DNF over integer-tightened atoms: strict
/// comparisons become `t + 1 ≤ 0`, `!=` splits into `<` and `>`.
Dnf normalize_condition(const frontend::Expr& cond,
                        const std::function<std::string(const std::string&)>& rename = {});

}  // namespace cpa::solver
