#include "cpa/core/cpa.hpp"

namespace cpa {

PrecisionPtr NoPrecision::instance() {
  static const PrecisionPtr shared = std::make_shared<NoPrecision>();
  return shared;
}

StatePtr ConfigurableProgramAnalysis::merge(const StatePtr& s1, const StatePtr& s2, const PrecisionPtr&) const {
  if (merge_mode_ == MergeMode::kSep) return merge_sep(s1, s2);
  return join(s1, s2);
}

bool ConfigurableProgramAnalysis::stop(const StatePtr& s, const std::vector<StatePtr>& reached,
                                       const PrecisionPtr&) const {
  return stop_sep(*this, s, reached);
}

StatePtr merge_sep(const StatePtr&, const StatePtr& s2) { return s2; }

bool stop_sep(const ConfigurableProgramAnalysis& cpa, const StatePtr& s, const std::vector<StatePtr>& reached) {
  for (const auto& r : reached)
    if (cpa.less_or_equal(*s, *r)) return true;
  return false;
}

}  // namespace cpa
