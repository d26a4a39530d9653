#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "cpa/solver/linear.hpp"

namespace cpa::solver {

struct Model {
  std::map<std::string, Rational> assignment;
};

/// Intermediate constraint count exceeded the configured cap; callers treat
/// the query conservatively.
class BlowupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoxTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverLimits {
  std::size_t max_constraints = 50'000;
};

/// Result of a rational satisfiability query. Infeasible over the rationals
/// implies infeasible over the integers; the converse does not hold.
struct Feasibility {
  bool feasible = false;
  Model model;  // meaningful only when feasible
  explicit operator bool() const { return feasible; }
};

/// Rational satisfiability of `≤ 0` / `= 0` constraints by Fourier-Motzkin
/// elimination after substituting equalities. A feasible answer carries a
/// model obtained by back-substitution that prefers integer values.
/// Throws BlowupError; std::invalid_argument on `≠` atoms.
Feasibility is_feasible(const Conjunction& c, const SolverLimits& limits = {});

/// Every DNF branch of `c ∧ ¬atom` is infeasible. BlowupError yields false.
bool entails(const Conjunction& c, const LinearConstraint& atom, const SolverLimits& limits = {});

/// Existential projection onto the variables accepted by `keep`: a
/// conjunction over kept variables with the same rational solutions.
/// Returns nullopt when `c` is infeasible. Throws BlowupError.
std::optional<Conjunction> project(const Conjunction& c,
                                   const std::function<bool(const std::string&)>& keep,
                                   const SolverLimits& limits = {});

/// Inclusive integer bounds per variable.
using Box = std::map<std::string, std::pair<Integer, Integer>>;

/// Exhaustive search for an integer model inside `box`, in lexicographic
/// order of (variable name, value). Every variable of `c` needs a bound.
/// Throws BoxTooLargeError above 10^7 points; std::invalid_argument on a
/// missing bound.
std::optional<Model> integer_witness(const Conjunction& c, const Box& box);

}  // namespace cpa::solver

namespace cpa::solver {

/// Splits `c` into groups of constraints that share no variables, ordered by
/// their smallest constraint. Ground constraints form singleton groups.
std::vector<Conjunction> connected_components(const Conjunction& c);

}  // namespace cpa::solver
