#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cpa/frontend/ast.hpp"

namespace cpa {

/// Program-counter value. Ids are unique across all functions of a program.
struct LocationId {
  std::uint32_t value = 0;
  auto operator<=>(const LocationId&) const = default;
};

struct EdgeId {
  std::uint32_t value = 0;
  auto operator<=>(const EdgeId&) const = default;
};

std::string to_string(LocationId id);

/// Guard edge. `condition` is the formula that holds when the edge is taken;
/// the false branch stores the already negated condition.
struct AssumeOp {
  frontend::ExprPtr condition;
  bool truth_branch = true;
};

struct AssignOp {
  std::string target;
  frontend::ExprPtr value;
};

struct SkipOp {};

/// Call site to callee entry. The callee's locals start unknown; formals take
/// the actuals evaluated in the caller.
struct CallOp {
  std::string callee;
  std::vector<frontend::ExprPtr> arguments;
  LocationId return_target;
  std::optional<std::string> result_target;
};

/// Callee exit back to one call site's return target. There is one such
/// edge per call site; the callstack decides which one is taken.
struct ReturnOp {
  std::string callee;
  std::optional<frontend::ExprPtr> returned;
  std::optional<std::string> result_target;
};

using EdgeOperation = std::variant<AssumeOp, AssignOp, SkipOp, CallOp, ReturnOp>;

struct CfaEdge {
  EdgeId id;
  LocationId source;
  LocationId target;
  EdgeOperation op;
};

/// Pretty-print of the edge operation, e.g. `[x > 0]`, `x := x - 1`, `skip`.
std::string describe(const EdgeOperation& op);

struct ControlFlowAutomaton {
  std::string function_name;
  bool returns_value = false;
  LocationId entry;
  LocationId exit;
  std::vector<LocationId> locations;
  std::vector<EdgeId> edges;
  std::set<LocationId> error_locations;
  /// Qualified names (`f::x`), in declaration order.
  std::vector<std::string> parameters;
  /// All qualified locals including parameters and the return slot, sorted.
  std::vector<std::string> locals;
};

struct LocationInfo {
  std::string function;
  bool is_error = false;
};

/// Lowered program: one CFA per function over a shared location/edge space.
class Program {
 public:
  const std::map<std::string, ControlFlowAutomaton>& cfas() const { return cfas_; }
  const ControlFlowAutomaton& cfa(std::string_view function) const;
  const ControlFlowAutomaton& main() const { return cfa(main_); }
  const std::string& main_function() const { return main_; }
  /// Functions in source order.
  const std::vector<std::string>& function_order() const { return order_; }
  const std::set<std::string>& globals() const { return globals_; }
  /// Every program variable (globals and qualified locals), sorted.
  const std::vector<std::string>& variables() const { return variables_; }

  const CfaEdge& edge(EdgeId id) const { return edges_[id.value]; }
  const std::vector<CfaEdge>& edges() const { return edges_; }
  std::span<const EdgeId> outgoing(LocationId loc) const { return outgoing_[loc.value]; }
  const LocationInfo& location(LocationId loc) const { return locations_[loc.value]; }
  std::size_t location_count() const { return locations_.size(); }
  bool is_error(LocationId loc) const { return locations_[loc.value].is_error; }

  /// Qualified name of the slot holding a function's return value.
  static std::string return_slot(std::string_view function);

 private:
  friend class ProgramBuilder;

  std::map<std::string, ControlFlowAutomaton> cfas_;
  std::vector<std::string> order_;
  std::string main_;
  std::set<std::string> globals_;
  std::vector<std::string> variables_;
  std::vector<CfaEdge> edges_;
  std::vector<LocationInfo> locations_;
  std::vector<std::vector<EdgeId>> outgoing_;
};

/// Parses MiniC source and lowers it into CFAs. Throws ParseError or
/// SemanticError (see parser.hpp).
Program parse(std::string_view source);

/// Lowers an already parsed translation unit.
Program lower(const frontend::TranslationUnit& unit);

/// Graphviz rendering, one cluster per function, locations ordered by id.
std::string export_dot(const Program& program);

}  // namespace cpa
