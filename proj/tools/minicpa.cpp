// Command-line front end: `verify` checks one program, `bench` sweeps a
// directory of programs over explicit-value thresholds.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cpa/domains/builtin.hpp"
#include "cpa/driver/driver.hpp"
#include "cpa/frontend/parser.hpp"

namespace fs = std::filesystem;
using namespace cpa;

namespace {

constexpr int kErrorStatus = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Threshold threshold_option(const std::string& text) {
  auto t = Threshold::parse(text);
  if (!t) throw CLI::ValidationError("threshold", "expected a number or inf, got '" + text + "'");
  return *t;
}

Configuration base_config(const std::string& config_path, const CpaRegistry& registry) {
  return config_path.empty() ? driver::parse_config("", registry) : driver::load_config(config_path, registry);
}

int run_verify(const std::string& file, const std::string& config_path, const std::string& threshold, bool emit_dot,
               const std::string& report_path) {
  const CpaRegistry registry = domains::builtin_registry();
  Configuration config = base_config(config_path, registry);
  if (!threshold.empty()) config.threshold = threshold_option(threshold);
  if (emit_dot) config.emit_dot = true;

  Program program = parse(read_file(file));
  auto report = algorithm::cegar_loop(program, config, registry);
  const std::string name = fs::path(file).stem().string();
  std::cout << driver::render_report(program, name, config, report, true);
  if (!report_path.empty()) write_file(report_path, driver::render_report(program, name, config, report, true));
  if (config.emit_dot) {
    fs::path dir = report_path.empty() ? fs::path(file).parent_path() : fs::path(report_path).parent_path();
    write_file(dir / (name + ".cfa.dot"), export_dot(program));
    write_file(dir / (name + ".arg.dot"), algorithm::export_arg_dot(program, report.arg));
  }
  return driver::exit_status(report.verdict);
}

int run_bench(const std::string& dir, const std::string& thresholds_text, const std::string& config_path,
              const std::string& out_dir) {
  const CpaRegistry registry = domains::builtin_registry();
  Configuration config = base_config(config_path, registry);
  std::vector<Threshold> thresholds;
  std::istringstream in(thresholds_text);
  for (std::string part; std::getline(in, part, ',');) thresholds.push_back(threshold_option(part));

  auto table = driver::bench_sweep(dir, thresholds, config, [](const std::string& program, const Threshold& t,
                                                               const driver::BenchCell& cell) {
    std::cerr << program << " @ " << t.to_string() << ": " << algorithm::to_string(cell.verdict) << "\n";
  });
  std::string runtime = driver::render_runtime_table(table);
  std::string counts = driver::render_counts_table(table);
  std::cout << "Runtime (s)\n" << runtime << "\nPredicates and refinements\n" << counts;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "runtime.txt", runtime);
    write_file(fs::path(out_dir) / "counts.txt", counts);
    write_file(fs::path(out_dir) / "bench.csv", driver::to_csv(table));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Configurable program analysis for MiniC"};
  app.require_subcommand(1);

  std::string file, config_path, threshold, report_path;
  bool emit_dot = false;
  auto* verify = app.add_subcommand("verify", "Check whether an ERROR label is reachable");
  verify->add_option("file", file, "MiniC program")->required()->check(CLI::ExistingFile);
  verify->add_option("--config", config_path, "Properties file")->check(CLI::ExistingFile);
  verify->add_option("--threshold", threshold, "Explicit-value threshold (number or inf)");
  verify->add_flag("--emit-dot", emit_dot, "Write CFA and ARG as Graphviz files");
  verify->add_option("--report", report_path, "Also write the report to this file");

  std::string dir, thresholds = "0,2,3,5,inf", out_dir, bench_config;
  auto* bench = app.add_subcommand("bench", "Verify every program of a directory at several thresholds");
  bench->add_option("dir", dir, "Directory of .mc programs")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--thresholds", thresholds, "Comma-separated thresholds")->capture_default_str();
  bench->add_option("--config", bench_config, "Properties file")->check(CLI::ExistingFile);
  bench->add_option("--out", out_dir, "Directory for tables and CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int status = app.exit(e);
    return status == 0 ? 0 : kErrorStatus;
  }

  try {
    if (verify->parsed()) return run_verify(file, config_path, threshold, emit_dot, report_path);
    return run_bench(dir, thresholds, bench_config, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kErrorStatus;
}
