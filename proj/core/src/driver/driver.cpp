#include "cpa/driver/driver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace cpa::driver {

using algorithm::Verdict;

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) parts.push_back(trim(part));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

template <typename Number>
Number parse_number(const std::string& value, std::size_t line, const std::string& key) {
  std::istringstream in(value);
  Number n{};
  if (value.empty() || value[0] == '-' || !(in >> n) || !in.eof())
    throw ConfigError(line, "bad value for " + key + ": '" + value + "'");
  return n;
}

bool parse_bool(const std::string& value, std::size_t line, const std::string& key) {
  std::string v = lower(value);
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(line, "bad value for " + key + ": '" + value + "'");
}

}  // namespace

void validate(const Configuration& config, const CpaRegistry& registry) {
  if (config.cpas.empty()) throw ConfigError(0, "cpas is empty");
  std::set<std::string> seen;
  for (const auto& name : config.cpas) {
    if (!registry.contains(name)) throw ConfigError(0, "unknown analysis '" + name + "'");
    if (!seen.insert(name).second) throw ConfigError(0, "analysis '" + name + "' listed twice");
  }
  if (config.cpas.front() != "location") throw ConfigError(0, "cpas must start with location");
  for (const auto& [name, mode] : config.merge)
    if (!registry.contains(name)) throw ConfigError(0, "merge setting for unknown analysis '" + name + "'");
}

Configuration parse_config(const std::string& text, const CpaRegistry& registry) {
  Configuration config;
  std::size_t cpas_line = 0;
  std::map<std::string, std::size_t> merge_lines;
  std::istringstream in(text);
  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    std::string content = trim(raw.substr(0, raw.find('#')));
    if (content.empty()) continue;
    auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    std::string key = trim(content.substr(0, eq));
    std::string value = trim(content.substr(eq + 1));

    if (key == "cpas") {
      config.cpas = split(value, ',');
      cpas_line = line;
    } else if (key == "explicit.threshold") {
      auto t = Threshold::parse(value);
      if (!t) throw ConfigError(line, "bad threshold '" + value + "'");
      config.threshold = *t;
    } else if (key == "explicit.counter") {
      std::string v = lower(value);
      if (v == "perlocation") {
        config.explicit_counter = CounterMode::kPerLocation;
      } else if (v == "global") {
        config.explicit_counter = CounterMode::kGlobal;
      } else {
        throw ConfigError(line, "explicit.counter must be perLocation or global");
      }
    } else if (key == "predicate.scope") {
      std::string v = lower(value);
      if (v == "location") {
        config.predicate_scope = PredicateScope::kLocation;
      } else if (v == "global") {
        config.predicate_scope = PredicateScope::kGlobal;
      } else {
        throw ConfigError(line, "predicate.scope must be location or global");
      }
    } else if (key == "waitlist") {
      std::string v = lower(value);
      if (v == "bfs") {
        config.waitlist = WaitlistOrder::kBfs;
      } else if (v == "dfs") {
        config.waitlist = WaitlistOrder::kDfs;
      } else {
        throw ConfigError(line, "waitlist must be BFS or DFS");
      }
    } else if (key == "limits.max_refinements") {
      config.limits.max_refinements = parse_number<std::size_t>(value, line, key);
    } else if (key == "limits.max_pops") {
      config.limits.max_pops = parse_number<std::size_t>(value, line, key);
    } else if (key == "limits.time_s") {
      config.limits.time_s = parse_number<double>(value, line, key);
    } else if (key == "limits.callstack_depth") {
      config.limits.callstack_depth = parse_number<std::size_t>(value, line, key);
    } else if (key == "limits.solver_max_constraints") {
      config.limits.solver_max_constraints = parse_number<std::size_t>(value, line, key);
    } else if (key == "output.format") {
      if (value != "text") throw ConfigError(line, "output.format supports only text");
      config.report_format = value;
    } else if (key == "output.emit_dot") {
      config.emit_dot = parse_bool(value, line, key);
    } else if (key.size() > 6 && key.ends_with(".merge")) {
      std::string name = key.substr(0, key.size() - 6);
      std::string v = lower(value);
      if (v != "sep" && v != "join") throw ConfigError(line, key + " must be sep or join");
      config.merge[name] = v == "sep" ? MergeMode::kSep : MergeMode::kJoin;
      merge_lines[name] = line;
    } else {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
  }
  try {
    validate(config, registry);
  } catch (const ConfigError& e) {
    // point at the line that introduced the problem
    std::size_t line = cpas_line;
    for (const auto& [name, at] : merge_lines)
      if (!registry.contains(name)) line = at;
    throw ConfigError(line, e.what());
  }
  return config;
}

Configuration load_config(const std::filesystem::path& path, const CpaRegistry& registry) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), registry);
}

int exit_status(Verdict verdict) {
  switch (verdict) {
    case Verdict::kSafe: return 0;
    case Verdict::kUnsafe: return 1;
    case Verdict::kUnknown: return 2;
  }
  return 2;
}

namespace {

constexpr const char* kTimingHeader = "[timing]\n";

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string seconds(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << s;
  return os.str();
}

}  // namespace

std::string render_report(const Program& program, const std::string& program_name, const Configuration& config,
                          const algorithm::VerificationReport& report, bool with_timing) {
  std::ostringstream os;
  os << "verdict: " << algorithm::to_string(report.verdict) << "\n";
  if (report.verdict == Verdict::kUnknown) os << "reason: " << report.reason << "\n";
  os << "program: " << program_name << "\n";
  os << "cpas: " << join(config.cpas, ",") << "\n";
  os << "threshold: " << config.threshold.to_string() << "\n";
  os << "predicates: " << report.stats.predicates << "\n";
  os << "predicates_per_location: " << report.stats.predicates_per_location << "\n";
  os << "refinements: " << report.stats.refinements << "\n";
  os << "reached: " << report.stats.reached << "\n";
  if (const auto& cex = report.counterexample) {
    os << "counterexample:\n";
    os << "  relaxed: " << (cex->relaxed ? "true" : "false") << "\n";
    os << "  edges: " << cex->edges.size() << "\n";
    for (EdgeId id : cex->edges) {
      const CfaEdge& e = program.edge(id);
      os << "    " << to_string(e.source) << " -> " << to_string(e.target) << "  " << describe(e.op) << "\n";
    }
    std::vector<std::string> inputs;
    for (const auto& v : cex->inputs) inputs.push_back(v.get_str());
    os << "  inputs: " << join(inputs, ", ") << "\n";
    os << "  witness:\n";
    for (const auto& [symbol, value] : cex->model.assignment) os << "    " << symbol << " = " << value.get_str() << "\n";
  }
  if (with_timing) {
    os << kTimingHeader;
    os << "time_s: " << seconds(report.stats.wall_s) << "\n";
    os << "cpu_s: " << seconds(report.stats.cpu_s) << "\n";
  }
  return os.str();
}

std::string stable_section(const std::string& report_text) {
  auto at = report_text.find(kTimingHeader);
  return at == std::string::npos ? report_text : report_text.substr(0, at);
}

std::vector<Threshold> ordered_thresholds(std::vector<Threshold> thresholds) {
  std::sort(thresholds.begin(), thresholds.end(), [](const Threshold& a, const Threshold& b) {
    if (a.is_infinite() || b.is_infinite()) return !a.is_infinite() && b.is_infinite();
    return *a.value < *b.value;
  });
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  return thresholds;
}

BenchTable bench_sweep(const std::filesystem::path& dir, const std::vector<Threshold>& thresholds,
                       const Configuration& config,
                       const std::function<void(const std::string&, const Threshold&, const BenchCell&)>& progress) {
  BenchTable table;
  table.thresholds = ordered_thresholds(thresholds);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mc") files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  for (const auto& file : files) {
    BenchRow row;
    row.program = file.stem().string();
    std::ifstream in(file);
    std::ostringstream source;
    source << in.rdbuf();
    for (const auto& t : table.thresholds) {
      BenchCell cell;
      try {
        Program program = parse(source.str());
        Configuration c = config;
        c.threshold = t;
        auto report = algorithm::cegar_loop(program, c);
        cell.verdict = report.verdict;
        cell.time_s = std::round(report.stats.cpu_s * 1000) / 1000;
        cell.predicates = report.stats.predicates;
        cell.refinements = report.stats.refinements;
        cell.relaxed = report.counterexample && report.counterexample->relaxed;
        cell.reason = report.reason;
      } catch (const std::exception& e) {
        cell = BenchCell{};
        cell.reason = e.what();
      }
      if (progress) progress(row.program, t, cell);
      row.cells.push_back(std::move(cell));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

std::string render_grid(const std::vector<std::vector<std::string>>& grid) {
  std::vector<std::size_t> width;
  for (const auto& row : grid) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  for (const auto& row : grid) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::string pad(width[i] - row[i].size(), ' ');
      line += i == 0 ? row[i] + pad : "  " + pad + row[i];
    }
    os << line.substr(0, line.find_last_not_of(' ') + 1) << "\n";
  }
  return os.str();
}

}  // namespace

std::string render_runtime_table(const BenchTable& table) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"Program"};
  for (const auto& t : table.thresholds) header.push_back(t.to_string());
  grid.push_back(header);
  for (const auto& row : table.rows) {
    std::vector<std::string> line{row.program};
    for (const auto& cell : row.cells) line.push_back(cell.aborted() ? "-" : seconds(cell.time_s));
    grid.push_back(line);
  }
  return render_grid(grid);
}

std::string render_counts_table(const BenchTable& table) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"Program"}, sub{""};
  for (const auto& t : table.thresholds) {
    header.push_back(t.to_string());
    header.push_back("");
    sub.push_back("Preds");
    sub.push_back("Refines");
  }
  grid.push_back(header);
  grid.push_back(sub);
  for (const auto& row : table.rows) {
    std::vector<std::string> line{row.program};
    for (const auto& cell : row.cells) {
      line.push_back(cell.aborted() ? "-" : std::to_string(cell.predicates));
      line.push_back(cell.aborted() ? "-" : std::to_string(cell.refinements));
    }
    grid.push_back(line);
  }
  return render_grid(grid);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::vector<std::string> csv_record(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in: " + line);
  return fields;
}

constexpr const char* kCsvHeader = "program,threshold,verdict,time_s,preds,refines,relaxed,reason";

Verdict parse_verdict(const std::string& s) {
  if (s == "SAFE") return Verdict::kSafe;
  if (s == "UNSAFE") return Verdict::kUnsafe;
  if (s == "UNKNOWN") return Verdict::kUnknown;
  throw std::invalid_argument("bad verdict '" + s + "'");
}

std::size_t parse_count(const std::string& s) {
  std::size_t used = 0;
  unsigned long long n = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad count '" + s + "'");
  return static_cast<std::size_t>(n);
}

}  // namespace

std::string to_csv(const BenchTable& table) {
  std::ostringstream os;
  os << kCsvHeader << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      const BenchCell& cell = row.cells[i];
      os << csv_field(row.program) << ',' << table.thresholds[i].to_string() << ','
         << algorithm::to_string(cell.verdict) << ',' << seconds(cell.time_s) << ',' << cell.predicates << ','
         << cell.refinements << ',' << (cell.relaxed ? "true" : "false") << ',' << csv_field(cell.reason) << "\n";
    }
  }
  return os.str();
}

BenchTable parse_bench_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("missing bench CSV header");
  BenchTable table;
  std::map<std::string, std::size_t> row_of;
  std::vector<std::string> threshold_names;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto f = csv_record(line);
    if (f.size() != 8) throw std::invalid_argument("expected 8 fields: " + line);
    auto threshold = Threshold::parse(f[1]);
    if (!threshold) throw std::invalid_argument("bad threshold '" + f[1] + "'");
    auto [it, inserted] = row_of.emplace(f[0], table.rows.size());
    if (inserted) table.rows.push_back({f[0], {}});
    BenchRow& row = table.rows[it->second];
    std::size_t column = row.cells.size();
    if (table.rows.size() == 1) {
      table.thresholds.push_back(*threshold);
    } else if (column >= table.thresholds.size() || !(table.thresholds[column] == *threshold)) {
      throw std::invalid_argument("threshold columns differ between rows: " + line);
    }
    BenchCell cell;
    cell.verdict = parse_verdict(f[2]);
    cell.time_s = std::stod(f[3]);
    cell.predicates = parse_count(f[4]);
    cell.refinements = parse_count(f[5]);
    if (f[6] != "true" && f[6] != "false") throw std::invalid_argument("bad relaxed flag '" + f[6] + "'");
    cell.relaxed = f[6] == "true";
    cell.reason = f[7];
    row.cells.push_back(std::move(cell));
  }
  for (const auto& row : table.rows)
    if (row.cells.size() != table.thresholds.size()) throw std::invalid_argument("incomplete row " + row.program);
  return table;
}

}  // namespace cpa::driver
