#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cpa/core/composite.hpp"
#include "cpa/core/configuration.hpp"

namespace cpa::algorithm {

using NodeId = std::size_t;

/// Every abstract state the algorithm produced, with its tree edge. Covered
/// successors are kept as leaves that point at the state covering them.
class AbstractReachabilityGraph {
 public:
  struct Node {
    StatePtr state;
    PrecisionPtr precision;
    LocationId location;
    std::optional<NodeId> parent;
    std::optional<EdgeId> edge;  // edge from the parent
    std::optional<NodeId> covered_by;
  };

  NodeId add(Node node);
  const Node& node(NodeId id) const { return nodes_.at(id); }
  Node& node(NodeId id) { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  NodeId root() const { return 0; }

 private:
  std::vector<Node> nodes_;
};

/// Reached states indexed by location.
class ReachedSet {
 public:
  void add(NodeId id, LocationId location);
  bool contains(NodeId id) const { return members_.count(id) > 0; }
  const std::vector<NodeId>& at(LocationId location) const;
  std::size_t size() const { return members_.size(); }
  const std::set<NodeId>& members() const { return members_; }

 private:
  std::map<LocationId, std::vector<NodeId>> by_location_;
  std::set<NodeId> members_;
};

class Waitlist {
 public:
  explicit Waitlist(WaitlistOrder order) : order_(order) {}
  void push(NodeId id);
  NodeId pop();
  bool empty() const { return items_.empty(); }
  bool contains(NodeId id) const { return queued_.count(id) > 0; }
  const std::deque<NodeId>& items() const { return items_; }

 private:
  WaitlistOrder order_;
  std::deque<NodeId> items_;
  std::set<NodeId> queued_;
};

/// Path from the program entry to an error location.
struct CounterexamplePath {
  std::vector<EdgeId> edges;
  std::vector<StatePtr> states;  // one more than edges; states[0] is the root
  std::vector<NodeId> nodes;
};

struct RunOptions {
  WaitlistOrder waitlist = WaitlistOrder::kBfs;
  std::size_t max_pops = 1'000'000;
  double time_limit_s = 0;  // 0 = none
  /// Test hook called after each pop has been fully processed.
  std::function<void(const AbstractReachabilityGraph&, const ReachedSet&, const Waitlist&)> on_pop;
};

enum class RunStatus { kCompleted, kErrorReached, kLimitExceeded };

struct RunResult {
  RunStatus status = RunStatus::kCompleted;
  std::string limit_reason;
  AbstractReachabilityGraph arg;
  ReachedSet reached;
  std::optional<CounterexamplePath> counterexample;
  std::size_t pops = 0;
};

/// Worklist reachability driven only by the CPA operators. Stops at the
/// first state whose location is an error location.
RunResult run_cpa_plus(const Program& program, const CompositeCpa& cpa, const PrecisionPtr& initial_precision,
                       const RunOptions& options = {});

/// Parent walk from `node` back to the root.
CounterexamplePath extract_path(const AbstractReachabilityGraph& arg, NodeId node);

/// Graphviz rendering of the ARG (tree edges solid, coverage dashed).
std::string export_arg_dot(const Program& program, const AbstractReachabilityGraph& arg);

}  // namespace cpa::algorithm
