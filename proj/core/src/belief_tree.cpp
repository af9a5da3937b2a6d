#include "detmcvi/belief_tree.hpp"

#include <algorithm>

namespace detmcvi {

double ActionInfo::Lower() const {
  double total = immediate;
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const double child_lower =
        expanded() ? children[i]->lower : branches[i].heuristic;
    total += branches[i].prob * child_lower;
  }
  return total;
}

double LowerBoundBackup(const BeliefTreeNode& node) {
  if (node.terminal) return 0.0;
  double best = kInfinity;
  for (const auto& action : node.actions) best = std::min(best, action.Lower());
  return best;
}

bool ShouldClose(const BeliefTreeNode& node) {
  if (node.terminal) return true;
  if (node.actions.empty()) return false;
  for (const auto& action : node.actions) {
    if (!action.expanded()) return false;
    for (const auto& child : action.children)
      if (!child->closed) return false;
  }
  return true;
}

int MarkClosed(BeliefTreeNode& node) {
  int closed = 0;
  for (BeliefTreeNode* current = &node; current != nullptr;
       current = current->parent) {
    if (current->closed) continue;
    if (!ShouldClose(*current)) break;
    current->closed = true;
    ++closed;
  }
  return closed;
}

}  // namespace detmcvi
