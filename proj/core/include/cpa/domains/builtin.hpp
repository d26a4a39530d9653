#pragma once

#include "cpa/core/registry.hpp"

namespace cpa::domains {

/// Registry with `location`, `callstack`, `explicit`, `octagon` and
/// `predicate`.
CpaRegistry builtin_registry();

}  // namespace cpa::domains
