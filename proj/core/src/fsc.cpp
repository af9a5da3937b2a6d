#include "detmcvi/fsc.hpp"

#include <algorithm>
#include <string>

namespace detmcvi {

NodeIndex FscNode::Successor(ObservationId obs) const {
  const auto it = std::lower_bound(
      edges.begin(), edges.end(), obs,
      [](const auto& edge, ObservationId o) { return edge.first < o; });
  if (it == edges.end() || it->first != obs) return kNoNode;
  return it->second;
}

NodeIndex Fsc::AddNode(ActionId action,
                       std::vector<std::pair<ObservationId, NodeIndex>> edges) {
  const auto index = static_cast<NodeIndex>(nodes_.size());
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].second < 0 || edges[i].second > index)
      throw std::out_of_range("edge target " +
                              std::to_string(edges[i].second) +
                              " is not a node");
    if (i > 0 && edges[i - 1].first == edges[i].first)
      throw std::invalid_argument("duplicate observation edge");
  }
  nodes_.push_back({action, std::move(edges)});
  return index;
}

Fsc Fsc::FromNodes(std::vector<FscNode> nodes, NodeIndex start, bool tree) {
  const auto n = static_cast<NodeIndex>(nodes.size());
  for (auto& node : nodes) {
    std::sort(node.edges.begin(), node.edges.end());
    for (std::size_t i = 0; i < node.edges.size(); ++i) {
      if (node.edges[i].second < 0 || node.edges[i].second >= n)
        throw std::out_of_range("edge target " +
                                std::to_string(node.edges[i].second) +
                                " is not a node");
      if (i > 0 && node.edges[i - 1].first == node.edges[i].first)
        throw std::invalid_argument("duplicate observation edge");
    }
  }
  Fsc fsc;
  fsc.nodes_ = std::move(nodes);
  fsc.SetStart(start);
  fsc.tree_ = tree;
  return fsc;
}

std::optional<NodeIndex> Fsc::FindNode(
    ActionId action,
    const std::vector<std::pair<ObservationId, NodeIndex>>& edges) const {
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].action == action && nodes_[v].edges == edges)
      return static_cast<NodeIndex>(v);
  }
  return std::nullopt;
}

void Fsc::SetStart(NodeIndex start) {
  if (start != kNoNode &&
      (start < 0 || static_cast<std::size_t>(start) >= nodes_.size()))
    throw std::out_of_range("start node out of range");
  start_ = start;
}

const FscNode& Fsc::node(NodeIndex v) const {
  return nodes_.at(static_cast<std::size_t>(v));
}

Fsc Fsc::Compacted() const {
  Fsc out;
  out.tree_ = tree_;
  if (start_ == kNoNode) return out;
  std::vector<char> reachable(nodes_.size(), 0);
  std::vector<NodeIndex> stack{start_};
  reachable[static_cast<std::size_t>(start_)] = 1;
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    for (const auto& [obs, target] : node(v).edges) {
      if (!reachable[static_cast<std::size_t>(target)]) {
        reachable[static_cast<std::size_t>(target)] = 1;
        stack.push_back(target);
      }
    }
  }
  std::vector<NodeIndex> remap(nodes_.size(), kNoNode);
  NodeIndex next = 0;
  for (std::size_t v = 0; v < nodes_.size(); ++v)
    if (reachable[v]) remap[v] = next++;
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (!reachable[v]) continue;
    FscNode node = nodes_[v];
    for (auto& edge : node.edges)
      edge.second = remap[static_cast<std::size_t>(edge.second)];
    out.nodes_.push_back(std::move(node));
  }
  out.start_ = remap[static_cast<std::size_t>(start_)];
  return out;
}

bool IsPolicyTree(const Fsc& fsc) {
  const std::size_t n = fsc.size();
  std::vector<int> indegree(n, 0);
  for (const auto& node : fsc.nodes())
    for (const auto& [obs, target] : node.edges)
      if (++indegree[static_cast<std::size_t>(target)] > 1) return false;
  if (fsc.start() != kNoNode && indegree[static_cast<std::size_t>(fsc.start())])
    return false;
  // With in-degree <= 1 everywhere, a cycle exists iff some node is not
  // reachable from a root (in-degree 0).
  std::vector<char> seen(n, 0);
  std::vector<NodeIndex> stack;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) stack.push_back(static_cast<NodeIndex>(v));
  std::size_t visited = 0;
  while (!stack.empty()) {
    const NodeIndex v = stack.back();
    stack.pop_back();
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = 1;
    ++visited;
    for (const auto& [obs, target] : fsc.node(v).edges)
      stack.push_back(target);
  }
  return visited == n;
}

std::string_view ToString(TrialOutcome outcome) {
  switch (outcome) {
    case TrialOutcome::kSuccess:
      return "success";
    case TrialOutcome::kHorizon:
      return "horizon";
    case TrialOutcome::kUndefined:
      return "undefined";
  }
  return "unknown";
}

TrialRecord Simulate(const Fsc& policy, const DetPomdpModel& model,
                     StateRef s0, int horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  TrialRecord record;
  record.states.push_back(s0);
  StateRef state = s0;
  NodeIndex v = policy.start();
  for (int t = 0; t < horizon; ++t) {
    if (model.IsGoal(state)) {
      record.outcome = TrialOutcome::kSuccess;
      return record;
    }
    if (v == kNoNode) {
      record.outcome = TrialOutcome::kUndefined;
      return record;
    }
    const FscNode& node = policy.node(v);
    const StepResult step = Step(model, state, node.action);
    record.actions.push_back(node.action);
    record.total_cost += step.cost;
    ++record.steps;
    state = step.next;
    record.states.push_back(state);
    v = node.Successor(step.observation);
  }
  record.outcome = model.IsGoal(state) ? TrialOutcome::kSuccess
                                       : TrialOutcome::kHorizon;
  return record;
}

}  // namespace detmcvi
