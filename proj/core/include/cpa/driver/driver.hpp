#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpa/algorithm/cegar.hpp"

namespace cpa::driver {

/// Invalid configuration. `line()` is the 1-based line of the offending
/// entry, or 0 when the problem is not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads `key = value` lines; `#` starts a comment. Keys not present keep
/// their defaults. The result is validated against `registry`.
Configuration parse_config(const std::string& text, const CpaRegistry& registry);
Configuration load_config(const std::filesystem::path& path, const CpaRegistry& registry);

/// Checks that every analysis exists, none repeats and `location` is first.
void validate(const Configuration& config, const CpaRegistry& registry);

/// Report text. The stable part depends only on the program and the
/// configuration; timings follow under a `[timing]` header when requested.
std::string render_report(const Program& program, const std::string& program_name, const Configuration& config,
                          const algorithm::VerificationReport& report, bool with_timing);

/// The report without its `[timing]` section.
std::string stable_section(const std::string& report_text);

int exit_status(algorithm::Verdict verdict);

struct BenchCell {
  algorithm::Verdict verdict = algorithm::Verdict::kUnknown;
  double time_s = 0;  // rounded to milliseconds
  std::size_t predicates = 0;
  std::size_t refinements = 0;
  bool relaxed = false;
  std::string reason;

  bool aborted() const { return verdict == algorithm::Verdict::kUnknown; }
  friend bool operator==(const BenchCell&, const BenchCell&) = default;
};

struct BenchRow {
  std::string program;
  std::vector<BenchCell> cells;  // aligned with BenchTable::thresholds
  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchTable {
  std::vector<Threshold> thresholds;
  std::vector<BenchRow> rows;
  friend bool operator==(const BenchTable&, const BenchTable&) = default;
};

/// Finite thresholds ascending, `inf` last, duplicates removed.
std::vector<Threshold> ordered_thresholds(std::vector<Threshold> thresholds);

/// Runs every `.mc` file of `dir` (sorted by name) at every threshold.
/// Failures of a single cell become UNKNOWN cells. `progress` is called
/// after each cell.
BenchTable bench_sweep(const std::filesystem::path& dir, const std::vector<Threshold>& thresholds,
                       const Configuration& config,
                       const std::function<void(const std::string&, const Threshold&, const BenchCell&)>& progress = {});

/// Runtime per cell; `-` for aborted runs.
std::string render_runtime_table(const BenchTable& table);
/// Preds and Refines per cell; `-` for aborted runs.
std::string render_counts_table(const BenchTable& table);

std::string to_csv(const BenchTable& table);
/// Inverse of to_csv. Throws std::invalid_argument on malformed input.
BenchTable parse_bench_csv(const std::string& text);

}  // namespace cpa::driver
