#include "detmcvi/aostar.hpp"

#include <algorithm>
#include <chrono>
#include <memory>

#include "detmcvi/bounds.hpp"

namespace detmcvi {

namespace {

struct AndOrNode;

struct AndOrBranch {
  ObservationId obs;
  double prob = 0.0;
  std::unique_ptr<AndOrNode> child;
};

struct AndOrAction {
  double immediate = 0.0;
  std::vector<AndOrBranch> branches;
};

struct AndOrNode {
  Belief belief;
  double cost = 0.0;
  bool terminal = false;
  bool solved = false;
  bool expanded = false;
  int depth = 0;
  ActionId best_action = -1;
  AndOrNode* parent = nullptr;
  std::vector<AndOrAction> actions;
};

class AoStar {
 public:
  AoStar(const DetPomdpModel& model, const AoStarConfig& config)
      : model_(model), config_(config), dist_(model, config.heuristic_depth) {}

  std::unique_ptr<AndOrNode> MakeNode(Belief belief, int depth,
                                      AndOrNode* parent) {
    auto node = std::make_unique<AndOrNode>();
    node->terminal = BeliefIsTerminal(model_, belief);
    node->belief = std::move(belief);
    node->depth = depth;
    node->parent = parent;
    if (node->terminal) {
      node->solved = true;
    } else {
      node->cost = dist_.LowerBound(node->belief, config_.heuristic_clamp);
    }
    ++nodes_;
    return node;
  }

  /// Follows best actions to an unsolved, unexpanded tip.
  AndOrNode* FindTip(AndOrNode* node) const {
    while (node->expanded) {
      const AndOrAction& action = node->actions[node->best_action];
      AndOrNode* next = nullptr;
      double best_prob = -1.0;
      for (const auto& branch : action.branches) {
        if (!branch.child->solved && branch.prob > best_prob) {
          best_prob = branch.prob;
          next = branch.child.get();
        }
      }
      if (next == nullptr) return nullptr;
      node = next;
    }
    return node;
  }

  void Expand(AndOrNode& node) {
    ++expansions_;
    if (node.depth >= config_.max_depth) {
      node.solved = true;
      depth_limited_ = true;
      return;
    }
    node.expanded = true;
    node.actions.resize(static_cast<std::size_t>(model_.NumActions()));
    for (ActionId a = 0; a < model_.NumActions(); ++a) {
      AndOrAction& action = node.actions[a];
      action.immediate = ExpectedCost(model_, node.belief, a);
      for (auto& succ : BeliefSuccessors(model_, node.belief, a)) {
        action.branches.push_back(
            {succ.observation, succ.probability,
             MakeNode(std::move(succ.belief), node.depth + 1, &node)});
      }
    }
  }

  void Revise(AndOrNode* node) {
    for (; node != nullptr; node = node->parent) {
      if (!node->expanded) continue;
      double best = kInfinity;
      ActionId best_action = 0;
      for (ActionId a = 0; a < static_cast<ActionId>(node->actions.size());
           ++a) {
        const AndOrAction& action = node->actions[a];
        double q = action.immediate;
        for (const auto& branch : action.branches)
          q += branch.prob * branch.child->cost;
        if (q < best) {
          best = q;
          best_action = a;
        }
      }
      node->cost = best;
      node->best_action = best_action;
      node->solved = std::all_of(
          node->actions[best_action].branches.begin(),
          node->actions[best_action].branches.end(),
          [](const AndOrBranch& b) { return b.child->solved; });
    }
  }

  Fsc Extract(const AndOrNode& root) const {
    std::vector<FscNode> nodes;
    struct Item {
      const AndOrNode* node;
      NodeIndex parent;
      ObservationId obs;
    };
    std::vector<Item> stack;
    if (root.expanded) stack.push_back({&root, kNoNode, ObservationId{0}});
    while (!stack.empty()) {
      const Item item = stack.back();
      stack.pop_back();
      const auto index = static_cast<NodeIndex>(nodes.size());
      nodes.push_back({item.node->best_action, {}});
      if (item.parent != kNoNode)
        nodes[item.parent].edges.emplace_back(item.obs, index);
      const auto& branches =
          item.node->actions[item.node->best_action].branches;
      for (auto it = branches.rbegin(); it != branches.rend(); ++it) {
        if (it->child->terminal || !it->child->expanded) continue;
        stack.push_back({it->child.get(), index, it->obs});
      }
    }
    Fsc fsc;
    if (!nodes.empty()) fsc = Fsc::FromNodes(std::move(nodes), 0, true);
    fsc.set_tree(true);
    return fsc;
  }

  std::size_t nodes() const { return nodes_; }
  std::size_t expansions() const { return expansions_; }
  bool depth_limited() const { return depth_limited_; }

 private:
  const DetPomdpModel& model_;
  const AoStarConfig& config_;
  DistCache dist_;
  std::size_t nodes_ = 0;
  std::size_t expansions_ = 0;
  bool depth_limited_ = false;
};

}  // namespace

AoStarResult SolveAoStar(const DetPomdpModel& model, const Belief& initial,
                         const AoStarConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  AoStar search(model, config);
  auto root = search.MakeNode(initial, 0, nullptr);
  AoStarResult result;
  result.converged = true;
  while (!root->solved) {
    if ((config.node_budget != 0 && search.nodes() >= config.node_budget) ||
        (config.time_budget > 0.0 && elapsed() >= config.time_budget)) {
      result.converged = false;
      break;
    }
    AndOrNode* tip = search.FindTip(root.get());
    if (tip == nullptr) break;
    search.Expand(*tip);
    search.Revise(tip);
  }
  result.policy = search.Extract(*root);
  result.value = root->cost;
  result.depth_limited = search.depth_limited();
  result.tree_nodes = search.nodes();
  result.expansions = search.expansions();
  result.seconds = elapsed();
  return result;
}

}  // namespace detmcvi
