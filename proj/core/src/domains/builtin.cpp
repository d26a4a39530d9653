#include "cpa/domains/builtin.hpp"

#include "cpa/domains/explicit_value.hpp"
#include "cpa/domains/location.hpp"
#include "cpa/domains/octagon.hpp"
#include "cpa/domains/predicate.hpp"

namespace cpa::domains {

CpaRegistry builtin_registry() {
  CpaRegistry r;
  r.add("location", [](const Program&, const Configuration&) { return std::make_shared<LocationCpa>(); });
  r.add("callstack", [](const Program& p, const Configuration& c) {
    return std::make_shared<CallstackCpa>(p.main_function(), c.limits.callstack_depth);
  });
  r.add("explicit", [](const Program& p, const Configuration& c) {
    return std::make_shared<ExplicitCpa>(p, c.threshold, c.explicit_counter);
  });
  r.add("octagon", [](const Program& p, const Configuration&) { return std::make_shared<OctagonCpa>(p); });
  r.add("predicate", [](const Program& p, const Configuration& c) {
    return std::make_shared<PredicateCpa>(p, solver::SolverLimits{c.limits.solver_max_constraints});
  });
  return r;
}

}  // namespace cpa::domains
