#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "detmcvi/model.hpp"
#include "detmcvi/types.hpp"

namespace detmcvi {

/// Controller node: the action psi(v) and the partial transition eta(v, .).
struct FscNode {
  ActionId action = 0;
  /// Sorted by observation token, unique keys.
  std::vector<std::pair<ObservationId, NodeIndex>> edges;

  /// eta(v, o), or kNoNode when undefined.
  NodeIndex Successor(ObservationId obs) const;

  friend bool operator==(const FscNode&, const FscNode&) = default;
};

/**
 * @brief Finite-state controller (policy graph).
 *
 * Nodes are append-only: once added, a node's action and edges never change,
 * so indices are stable for the lifetime of the controller. A controller
 * flagged as a tree additionally promises no cycles and at most one incoming
 * (node, observation) edge per node.
 */
class Fsc {
 public:
  Fsc() = default;

  /// Builds a controller from explicit nodes (edges may reference any node).
  /// Throws std::out_of_range / std::invalid_argument on dangling edges,
  /// duplicate observations or a bad start index.
  static Fsc FromNodes(std::vector<FscNode> nodes, NodeIndex start,
                       bool tree = false);

  /// Appends a node; edges are sorted and must target existing nodes or the
  /// node itself. Returns the new index.
  NodeIndex AddNode(ActionId action,
                    std::vector<std::pair<ObservationId, NodeIndex>> edges);

  /// Returns an existing node with identical action and edges, if any.
  std::optional<NodeIndex> FindNode(
      ActionId action,
      const std::vector<std::pair<ObservationId, NodeIndex>>& edges) const;

  void SetStart(NodeIndex start);
  NodeIndex start() const { return start_; }

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const FscNode& node(NodeIndex v) const;
  const std::vector<FscNode>& nodes() const { return nodes_; }

  bool is_tree() const { return tree_; }
  void set_tree(bool tree) { tree_ = tree; }

  /// Keeps only nodes reachable from the start node, preserving their
  /// relative order. An FSC without a start node compacts to empty.
  Fsc Compacted() const;

  friend bool operator==(const Fsc&, const Fsc&) = default;

 private:
  std::vector<FscNode> nodes_;
  NodeIndex start_ = kNoNode;
  bool tree_ = false;
};

/// Structural policy-tree check: acyclic and every node has at most one
/// incoming (node, observation) edge.
bool IsPolicyTree(const Fsc& fsc);

enum class TrialOutcome { kSuccess, kHorizon, kUndefined };

std::string_view ToString(TrialOutcome outcome);

struct TrialRecord {
  TrialOutcome outcome = TrialOutcome::kUndefined;
  std::vector<StateRef> states;  // s_0 .. s_k
  std::vector<ActionId> actions;
  double total_cost = 0.0;
  int steps = 0;
};

/// Executes the controller from s0 for at most `horizon` actions. There is no
/// fallback: a missing edge ends the trial as kUndefined. Success means a goal
/// state is reached within the horizon.
TrialRecord Simulate(const Fsc& policy, const DetPomdpModel& model,
                     StateRef s0, int horizon);

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"start": int, "nodes": [{"action": int, "edges": {"<token>": int}}]}
/// plus "tree": true for policy trees.
std::string ExportJson(const Fsc& fsc);
/// Throws FormatError (with the byte offset for syntax errors).
Fsc ImportJson(std::string_view text);

/// Graphviz rendering; the model, when given, supplies action and observation
/// labels.
std::string ExportDot(const Fsc& fsc, const DetPomdpModel* model = nullptr);

}  // namespace detmcvi
