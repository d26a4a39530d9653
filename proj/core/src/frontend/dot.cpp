#include <algorithm>
#include <sstream>

#include "cpa/frontend/cfa.hpp"

namespace cpa {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const Program& program) {
  std::ostringstream os;
  os << "digraph cfa {\n";
  os << "  node [shape=circle];\n";
  std::vector<const CfaEdge*> interprocedural;
  for (const auto& name : program.function_order()) {
    const auto& cfa = program.cfa(name);
    os << "  subgraph \"cluster_" << escape(name) << "\" {\n";
    os << "    label=\"" << escape(name) << "\";\n";
    for (LocationId loc : cfa.locations) {
      os << "    " << to_string(loc);
      if (program.is_error(loc)) {
        os << " [shape=doubleoctagon, color=red]";
      } else if (loc == cfa.entry) {
        os << " [shape=doublecircle]";
      }
      os << ";\n";
    }
    for (EdgeId id : cfa.edges) {
      const CfaEdge& e = program.edge(id);
      if (std::holds_alternative<CallOp>(e.op) || std::holds_alternative<ReturnOp>(e.op)) {
        interprocedural.push_back(&e);
        continue;
      }
      os << "    " << to_string(e.source) << " -> " << to_string(e.target) << " [label=\""
         << escape(describe(e.op)) << "\"];\n";
    }
    os << "  }\n";
  }
  std::sort(interprocedural.begin(), interprocedural.end(),
            [](const CfaEdge* a, const CfaEdge* b) { return a->id < b->id; });
  for (const CfaEdge* e : interprocedural) {
    os << "  " << to_string(e->source) << " -> " << to_string(e->target) << " [label=\""
       << escape(describe(e->op)) << "\", style=dashed];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cpa
