#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpa/core/cpa.hpp"
#include "cpa/solver/linear.hpp"

namespace cpa::domains {

/// Upper bound that may be +∞ (empty optional).
using Bound = std::optional<Integer>;

/// Difference-bound matrix over the signed forms of n variables: index 2k is
/// +x_k, index 2k+1 is -x_k, and entry (i, j) bounds v_i - v_j from above.
class Dbm {
 public:
  explicit Dbm(std::size_t variables = 0);

  std::size_t variables() const { return n_; }
  std::size_t dimension() const { return 2 * n_; }
  const Bound& at(std::size_t i, std::size_t j) const { return m_[i * 2 * n_ + j]; }
  Bound& at(std::size_t i, std::size_t j) { return m_[i * 2 * n_ + j]; }
  static std::size_t bar(std::size_t i) { return i ^ 1u; }

  /// Lowers entry (i, j) and its coherent twin (j̄, ī) to at most `c`.
  void constrain(std::size_t i, std::size_t j, const Integer& c);
  /// Drops every constraint that mentions variable k.
  void forget(std::size_t k);

  /// Integer tight closure: shortest paths, halving of unary bounds to even
  /// values, then strengthening through unary bounds. Returns false when
  /// the octagon is empty; the matrix is then unspecified.
  bool close();

  /// Integer points of the octagon inside [-r, r]^n, as value vectors.
  std::vector<std::vector<long>> points(long r) const;
  bool contains(const std::vector<long>& point) const;

  friend bool operator==(const Dbm&, const Dbm&) = default;

 private:
  std::size_t n_;
  std::vector<Bound> m_;
};

/// Strong closure of a matrix; nullopt when it is empty.
std::optional<Dbm> strong_closure(Dbm m);

class OctagonState final : public AbstractState {
 public:
  OctagonState(std::optional<Dbm> dbm, const std::vector<std::string>* names);

  /// Empty when ⊥.
  const std::optional<Dbm>& dbm() const { return dbm_; }
  bool is_bottom() const override { return !dbm_.has_value(); }
  bool equals(const AbstractState& other) const override;
  std::size_t hash() const override { return hash_; }
  std::string to_string() const override;

 private:
  std::optional<Dbm> dbm_;
  const std::vector<std::string>* names_;
  std::size_t hash_ = 0;
};

/// Relational analysis over ±x ±y ≤ c constraints on all program variables.
/// No widening: loops terminate only when the octagons stabilize.
class OctagonCpa final : public ConfigurableProgramAnalysis {
 public:
  explicit OctagonCpa(const Program& program);
  /// Stand-alone use over a fixed variable list (tests).
  OctagonCpa(const Program* program, std::vector<std::string> variables);

  std::string name() const override { return "octagon"; }
  StatePtr initial_state(LocationId entry) const override;
  bool less_or_equal(const AbstractState& a, const AbstractState& b) const override;
  StatePtr join(const StatePtr& a, const StatePtr& b) const override;
  std::vector<StatePtr> transfer(const StatePtr& s, const CfaEdge& edge, const PrecisionPtr& precision) const override;

  const std::vector<std::string>& variables() const { return names_; }
  StatePtr make(std::optional<Dbm> dbm) const;
  /// Meet with one linear constraint; non-octagonal atoms are ignored.
  std::optional<Dbm> assume(Dbm dbm, const solver::LinearConstraint& c) const;
  /// x := e for a linear right-hand side.
  Dbm assign(Dbm dbm, const std::string& x, const solver::LinearTerm& rhs) const;

 private:
  std::size_t index(const std::string& var) const { return index_.at(var); }
  /// Interval of a linear term from the unary bounds; nullopt side = unbounded.
  std::pair<Bound, Bound> range(const Dbm& dbm, const solver::LinearTerm& t) const;

  const Program* program_;
  std::vector<std::string> names_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace cpa::domains
