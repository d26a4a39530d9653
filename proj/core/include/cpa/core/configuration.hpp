#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpa/core/cpa.hpp"

namespace cpa {

/// Number of distinct explicit values tracked per variable before it is
/// abstracted to ⊤. Infinite when `value` is empty.
struct Threshold {
  std::optional<std::uint64_t> value;

  static Threshold infinite() { return {}; }
  static Threshold of(std::uint64_t v) { return {v}; }
  bool is_infinite() const { return !value.has_value(); }
  std::string to_string() const { return value ? std::to_string(*value) : "inf"; }
  /// Accepts a decimal number or `inf`.
  static std::optional<Threshold> parse(const std::string& text);

  friend bool operator==(const Threshold&, const Threshold&) = default;
};

enum class CounterMode { kPerLocation, kGlobal };
enum class PredicateScope { kLocation, kGlobal };
enum class WaitlistOrder { kBfs, kDfs };

struct Limits {
  std::size_t max_refinements = 200;
  std::size_t max_pops = 1'000'000;
  double time_s = 0;  // 0 disables the wall-clock limit
  std::size_t callstack_depth = 32;
  std::size_t solver_max_constraints = 50'000;
};

struct Configuration {
  std::vector<std::string> cpas{"location", "callstack", "explicit", "predicate"};
  Threshold threshold = Threshold::of(5);
  CounterMode explicit_counter = CounterMode::kPerLocation;
  PredicateScope predicate_scope = PredicateScope::kLocation;
  WaitlistOrder waitlist = WaitlistOrder::kBfs;
  Limits limits;
  /// Per-analysis merge override (`<name>.merge = sep|join`).
  std::map<std::string, MergeMode> merge;
  std::string report_format = "text";
  bool emit_dot = false;
};

}  // namespace cpa
