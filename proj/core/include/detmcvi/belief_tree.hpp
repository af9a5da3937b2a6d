#pragma once

#include <memory>
#include <vector>

#include "detmcvi/belief.hpp"
#include "detmcvi/types.hpp"

namespace detmcvi {

struct BeliefTreeNode;

/// Per-observation summary of one action at a belief.
struct BranchInfo {
  ObservationId obs;
  double prob = 0.0;
  /// v_{a,o}; kNoNode means the edge is left undefined (fallback policy).
  NodeIndex best_node = kNoNode;
  /// min_v alpha_{F,v}(b^o), the controller value of the child belief.
  double child_value = 0.0;
  /// V_{a,o} = Pr(o | b, a) * child_value.
  double best_value = 0.0;
  /// Admissible heuristic H(b^o).
  double heuristic = 0.0;
  bool terminal = false;
};

struct ActionInfo {
  /// C_a = sum_s b(s) c(s, a).
  double immediate = 0.0;
  /// V_a = C_a + sum_o V_{a,o}; Q^F(b, a) of the current controller.
  double value = 0.0;
  std::vector<BranchInfo> branches;
  /// Aligned with branches once the action is expanded, empty before.
  std::vector<std::unique_ptr<BeliefTreeNode>> children;

  bool expanded() const { return !children.empty(); }
  /// Lower bound on Q*(b, a) from child lower bounds, or from the heuristic
  /// for children that were never created.
  double Lower() const;
};

/// Node of the search tree over reachable beliefs.
struct BeliefTreeNode {
  Belief belief;
  double upper = kInfinity;
  double lower = 0.0;
  bool terminal = false;
  bool closed = false;
  int depth = 0;
  BeliefTreeNode* parent = nullptr;
  /// Ancestor holding the same belief, when the path revisits it. Such nodes
  /// are closed on creation and inherit the ancestor's lower bound.
  const BeliefTreeNode* repeat_of = nullptr;
  /// Controller node chosen for this belief by its latest backup.
  NodeIndex policy_node = kNoNode;
  /// Empty until the node is first evaluated.
  std::vector<ActionInfo> actions;
  /// Number of controller nodes already folded into `actions`.
  std::size_t evaluated_fsc_size = 0;

  double ExcessUncertainty(double epsilon) const {
    return upper - lower - epsilon;
  }
};

/// min_a { C_a + sum_o Pr(o|b,a) lower(b^o) }; 0 for terminal beliefs.
double LowerBoundBackup(const BeliefTreeNode& node);

/// True when the closing rule holds: the belief is terminal, or every action
/// is expanded and every child is closed.
bool ShouldClose(const BeliefTreeNode& node);

/// Closes `node` if the rule holds and propagates to ancestors. Returns the
/// number of nodes newly closed.
int MarkClosed(BeliefTreeNode& node);

}  // namespace detmcvi
