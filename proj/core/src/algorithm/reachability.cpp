#include "cpa/algorithm/reachability.hpp"

#include <sstream>

namespace cpa::algorithm {

NodeId AbstractReachabilityGraph::add(Node node) {
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

void ReachedSet::add(NodeId id, LocationId location) {
  if (members_.insert(id).second) by_location_[location].push_back(id);
}

const std::vector<NodeId>& ReachedSet::at(LocationId location) const {
  static const std::vector<NodeId> none;
  auto it = by_location_.find(location);
  return it == by_location_.end() ? none : it->second;
}

void Waitlist::push(NodeId id) {
  if (!queued_.insert(id).second) return;
  items_.push_back(id);
}

NodeId Waitlist::pop() {
  NodeId id;
  if (order_ == WaitlistOrder::kBfs) {
    id = items_.front();
    items_.pop_front();
  } else {
    id = items_.back();
    items_.pop_back();
  }
  queued_.erase(id);
  return id;
}

CounterexamplePath extract_path(const AbstractReachabilityGraph& arg, NodeId node) {
  CounterexamplePath path;
  std::optional<NodeId> cur = node;
  while (cur) {
    const auto& n = arg.node(*cur);
    path.nodes.push_back(*cur);
    path.states.push_back(n.state);
    if (n.edge) path.edges.push_back(*n.edge);
    cur = n.parent;
  }
  std::reverse(path.nodes.begin(), path.nodes.end());
  std::reverse(path.states.begin(), path.states.end());
  std::reverse(path.edges.begin(), path.edges.end());
  return path;
}

RunResult run_cpa_plus(const Program& program, const CompositeCpa& cpa, const PrecisionPtr& initial_precision,
                       const RunOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  RunResult result;
  auto& arg = result.arg;
  auto& reached = result.reached;
  Waitlist waitlist(options.waitlist);

  const LocationId entry = program.main().entry;
  NodeId root = arg.add({cpa.initial_state(entry), initial_precision, entry, std::nullopt, std::nullopt, std::nullopt});
  reached.add(root, entry);
  if (program.is_error(entry)) {
    result.status = RunStatus::kErrorReached;
    result.counterexample = extract_path(arg, root);
    return result;
  }
  waitlist.push(root);

  auto states_at = [&](LocationId loc) {
    std::vector<StatePtr> out;
    for (NodeId id : reached.at(loc)) out.push_back(arg.node(id).state);
    return out;
  };

  while (!waitlist.empty()) {
    if (result.pops >= options.max_pops) {
      result.status = RunStatus::kLimitExceeded;
      result.limit_reason = "state limit of " + std::to_string(options.max_pops) + " pops reached";
      return result;
    }
    if (options.time_limit_s > 0 &&
        std::chrono::duration<double>(Clock::now() - start).count() > options.time_limit_s) {
      result.status = RunStatus::kLimitExceeded;
      result.limit_reason = "time limit reached";
      return result;
    }
    const NodeId current = waitlist.pop();
    ++result.pops;
    const StatePtr state = arg.node(current).state;
    const PrecisionPtr precision = arg.node(current).precision;
    const LocationId here = arg.node(current).location;

    for (EdgeId eid : program.outgoing(here)) {
      const CfaEdge& edge = program.edge(eid);
      for (const StatePtr& successor : cpa.transfer(state, edge, precision)) {
        const LocationId there = cpa.location_of(*successor);
        Adjusted adjusted = cpa.prec(successor, precision, ReachedView{there, states_at(there)});
        const StatePtr& next = adjusted.state;

        if (program.is_error(there)) {
          NodeId id = arg.add({next, adjusted.precision, there, current, eid, std::nullopt});
          reached.add(id, there);
          result.status = RunStatus::kErrorReached;
          result.counterexample = extract_path(arg, id);
          return result;
        }

        for (NodeId other : reached.at(there)) {
          auto& node = arg.node(other);
          StatePtr merged = cpa.merge(next, node.state, adjusted.precision);
          if (merged != node.state && !merged->equals(*node.state)) {
            node.state = merged;
            node.precision = adjusted.precision;
            waitlist.push(other);
          }
        }

        std::vector<StatePtr> partners = states_at(there);
        bool covered = false;
        std::optional<NodeId> cover;
        for (NodeId other : reached.at(there)) {
          if (cpa.stop(next, {arg.node(other).state}, adjusted.precision)) {
            covered = true;
            cover = other;
            break;
          }
        }
        NodeId id = arg.add({next, adjusted.precision, there, current, eid, cover});
        if (!covered) {
          reached.add(id, there);
          waitlist.push(id);
        }
      }
    }
    if (options.on_pop) options.on_pop(arg, reached, waitlist);
  }
  return result;
}

std::string export_arg_dot(const Program& program, const AbstractReachabilityGraph& arg) {
  std::ostringstream os;
  os << "digraph arg {\n  node [shape=box];\n";
  for (NodeId id = 0; id < arg.size(); ++id) {
    const auto& n = arg.node(id);
    std::string label = "A" + std::to_string(id) + " @ " + to_string(n.location) + "\\n" + n.state->to_string();
    std::string escaped;
    for (char c : label) {
      if (c == '"') escaped += '\\';
      escaped += c;
    }
    os << "  A" << id << " [label=\"" << escaped << "\"";
    if (program.is_error(n.location)) os << ", color=red";
    if (n.covered_by) os << ", style=dashed";
    os << "];\n";
  }
  for (NodeId id = 0; id < arg.size(); ++id) {
    const auto& n = arg.node(id);
    if (n.parent) {
      std::string label = describe(program.edge(*n.edge).op);
      std::string escaped;
      for (char c : label) {
        if (c == '"') escaped += '\\';
        escaped += c;
      }
      os << "  A" << *n.parent << " -> A" << id << " [label=\"" << escaped << "\"];\n";
    }
    if (n.covered_by) os << "  A" << id << " -> A" << *n.covered_by << " [style=dashed, label=\"covered\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cpa::algorithm
