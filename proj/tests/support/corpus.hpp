#pragma once

#include <string>
#include <vector>

namespace testsupport {

struct CorpusProgram {
  std::string name;  // file stem
  std::string path;
  std::string source;
  bool in_suite = false;  // part of the bundled 10-program benchmark suite
  bool is_bug_variant() const { return name.size() > 4 && name.ends_with("_BUG"); }
};

/// Bundled suite followed by the extra bounded test programs, each group
/// sorted by name.
const std::vector<CorpusProgram>& corpus();
std::vector<CorpusProgram> suite();

std::string read_file(const std::string& path);

}  // namespace testsupport
