#include "detmcvi/qmdp_tree.hpp"

#include <algorithm>
#include <chrono>

#include "detmcvi/bounds.hpp"

namespace detmcvi {

QmdpTreeResult SolveQmdpTree(const DetPomdpModel& model, const Belief& initial,
                             const QmdpTreeConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const DistCache dist(model, config.heuristic_depth);
  QmdpTreeResult result;

  struct Pending {
    Belief belief;
    int depth;
    NodeIndex parent;
    ObservationId obs;
  };
  std::vector<FscNode> nodes;
  std::vector<Pending> stack;
  if (!BeliefIsTerminal(model, initial))
    stack.push_back({initial, 0, kNoNode, ObservationId{0}});
  while (!stack.empty()) {
    Pending item = std::move(stack.back());
    stack.pop_back();
    if (config.node_budget != 0 && nodes.size() >= config.node_budget) {
      result.truncated = true;
      break;
    }
    ActionId best_action = 0;
    double best_q = kInfinity;
    for (ActionId a = 0; a < model.NumActions(); ++a) {
      double q = 0.0;
      for (const auto& [s, p] : item.belief) {
        q += p * (model.Cost(s, a) +
                  std::min(dist.Dist(model.Next(s, a)), config.heuristic_clamp));
      }
      if (q < best_q) {
        best_q = q;
        best_action = a;
      }
    }
    const auto index = static_cast<NodeIndex>(nodes.size());
    nodes.push_back({best_action, {}});
    if (item.parent != kNoNode)
      nodes[item.parent].edges.emplace_back(item.obs, index);
    if (item.depth + 1 >= config.max_depth) {
      result.truncated = true;
      continue;
    }
    auto branches = BeliefSuccessors(model, item.belief, best_action);
    // Reverse push so children are numbered in observation order.
    for (auto it = branches.rbegin(); it != branches.rend(); ++it) {
      if (BeliefIsTerminal(model, it->belief)) continue;
      stack.push_back(
          {std::move(it->belief), item.depth + 1, index, it->observation});
    }
  }
  if (!nodes.empty()) result.policy = Fsc::FromNodes(std::move(nodes), 0, true);
  result.policy.set_tree(true);
  result.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return result;
}

}  // namespace detmcvi
