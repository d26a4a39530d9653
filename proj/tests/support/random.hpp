#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "cpa/core/composite.hpp"
#include "cpa/domains/octagon.hpp"
#include "cpa/solver/fourier_motzkin.hpp"

namespace testsupport {

/// First edge of `program` whose pretty-print is `label`. Throws
/// std::out_of_range when there is none.
const cpa::CfaEdge& edge_labeled(const cpa::Program& program, std::string_view label);

using StateGenerator = std::function<cpa::StatePtr(std::mt19937&)>;

struct LawReport {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
};

/// Draws `checks` triples (a, b, c) and tests on each: reflexivity,
/// transitivity, antisymmetry, both upper-bound laws, least upper bound,
/// idempotence, commutativity and associativity of join.
LawReport check_lattice_laws(const cpa::ConfigurableProgramAnalysis& cpa, const StateGenerator& generate,
                             std::size_t checks, unsigned seed);

/// Small-universe generators for the lattice laws. The analyses they are
/// meant for are built over `lattice_program()`.
const cpa::Program& lattice_program();
StateGenerator explicit_states();
StateGenerator predicate_states();
StateGenerator octagon_states(const cpa::domains::OctagonCpa& cpa);
/// Composite of location, explicit and predicate over two locations.
std::shared_ptr<cpa::CompositeCpa> lattice_composite();
StateGenerator composite_states();

/// DBM over `variables` built from a few random coherent constraints with
/// bounds in [-8, 8]; the remaining entries are +∞.
cpa::domains::Dbm random_dbm(std::mt19937& rng, std::size_t variables);

/// Applies the integer octagon tightening rules one at a time until nothing
/// changes: path shortening, even unary bounds and strengthening through
/// unary bounds. nullopt once a diagonal entry is negative.
std::optional<cpa::domains::Dbm> tighten_to_fixpoint(cpa::domains::Dbm m);

/// Conjunction over at most four variables v0..v3 with coefficients in
/// [-3, 3].
cpa::solver::Conjunction random_conjunction(std::mt19937& rng);

/// Box [-r, r] for every variable of `c`.
cpa::solver::Box box_for(const cpa::solver::Conjunction& c, int r);

}  // namespace testsupport
