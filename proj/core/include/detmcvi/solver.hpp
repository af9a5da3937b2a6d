#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "detmcvi/belief_tree.hpp"
#include "detmcvi/bounds.hpp"
#include "detmcvi/fsc.hpp"
#include "detmcvi/model.hpp"
#include "detmcvi/rollout.hpp"

namespace detmcvi {

struct SolverConfig {
  double epsilon = 0.01;
  /// Belief tree depth limit (horizon T-bar).
  int max_depth = 100;
  /// Planning belief support limit N (used by SolveDetMcvi).
  int max_belief_support = 10000;
  /// Wall-clock budget in seconds; <= 0 means unlimited.
  double time_budget = 0.0;
  /// Limit on belief tree nodes; 0 means unlimited.
  std::size_t node_budget = 0;
  /// Limit on solver iterations; 0 means unlimited.
  std::int64_t iteration_budget = 0;
  int k_fallback_rollouts = 16;
  std::uint64_t seed = 0;
  /// Seconds between trace points; <= 0 records every iteration.
  double eval_interval = 5.0;
  /// Step limit of fallback walks; <= 0 uses max(10 * max_depth, 100).
  int rollout_depth = 0;
  /// Depth of the bounded shortest-path heuristic search.
  int heuristic_depth = 1000;
  /// Upper limit on cached alpha values; 0 means unlimited.
  std::size_t alpha_cache_limit = 0;
  /// Optional early-stop predicate, called every stop_check_interval
  /// iterations with the current controller (start set to the root's node).
  std::function<bool(const Fsc&)> stop_check;
  int stop_check_interval = 10;

  /// Throws std::invalid_argument on out-of-range fields.
  void Validate() const;
};

struct TracePoint {
  double t_seconds = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  std::size_t fsc_nodes = 0;
};

class BoundsTrace {
 public:
  /// Appends a point; times are forced to be strictly increasing.
  void Record(TracePoint point);
  const std::vector<TracePoint>& points() const { return points_; }
  bool empty() const { return points_.empty(); }
  /// CSV with header t_seconds,upper,lower,fsc_nodes.
  void WriteCsv(std::ostream& out) const;

 private:
  std::vector<TracePoint> points_;
};

enum class SolveStatus {
  kConverged,
  kRootClosed,
  kStopCheck,
  kTimeBudget,
  kNodeBudget,
  kIterationBudget,
};

std::string_view ToString(SolveStatus status);

struct SolverStats {
  std::int64_t iterations = 0;
  std::size_t tree_nodes = 0;
  std::int64_t backups = 0;
  std::int64_t nodes_reused = 0;
  /// Expansions attempted on a closed node; stays zero.
  std::int64_t closed_expansions = 0;
  /// Backups whose new value exceeded the previous controller value.
  std::int64_t monotonicity_violations = 0;
};

struct SolveResult {
  Fsc policy;
  BoundsTrace trace;
  double upper = kInfinity;
  double lower = 0.0;
  SolveStatus status = SolveStatus::kIterationBudget;
  SolverStats stats;
  double seconds = 0.0;

  /// True unless a budget ended the search.
  bool converged() const {
    return status == SolveStatus::kConverged ||
           status == SolveStatus::kRootClosed ||
           status == SolveStatus::kStopCheck;
  }
};

/**
 * @brief Belief-tree search that grows a finite-state controller by
 * deterministic point-based backups.
 *
 * Each iteration descends from the root along the action that is best for
 * the current controller and the child with the largest weighted excess
 * uncertainty, then backs up the visited beliefs in reverse order. Upper
 * bounds are controller values, lower bounds come from the shortest-path
 * heuristic backed up through the tree.
 */
class DetMcviSolver {
 public:
  DetMcviSolver(const DetPomdpModel& model, Belief initial_belief,
                SolverConfig config);
  ~DetMcviSolver();
  DetMcviSolver(const DetMcviSolver&) = delete;
  DetMcviSolver& operator=(const DetMcviSolver&) = delete;

  /// One traversal plus backups. Returns false once the search is finished
  /// (converged or root closed); further calls do nothing.
  bool Iterate();

  /// Iterates until convergence, root closure, the stop check or a budget.
  SolveResult Solve();

  double upper() const;
  double lower() const;
  bool finished() const;
  const BeliefTreeNode& root() const { return *root_; }
  /// The growing controller with start set to the root's node.
  const Fsc& fsc() const { return fsc_; }
  const SolverStats& stats() const { return stats_; }
  const SolverConfig& config() const { return config_; }
  /// C-bar, the walk-based upper bound used for clamping and truncation.
  double upper_clamp() const { return c_bar_; }

 private:
  struct Candidate {
    BeliefTreeNode* child = nullptr;
    double score = -kInfinity;
  };

  std::unique_ptr<BeliefTreeNode> MakeNode(Belief belief, int depth,
                                           BeliefTreeNode* parent);
  void RefreshActions(BeliefTreeNode& node);
  void EvaluateBranch(BranchInfo& branch, const Belief& child_belief,
                      std::size_t first_node);
  void Expand(BeliefTreeNode& node, ActionId action);
  void MarkRepeat(BeliefTreeNode& child) const;
  void RefreshChildBounds(BeliefTreeNode& node, ActionId action);
  Candidate SelectChild(BeliefTreeNode& node, ActionId action) const;
  std::vector<BeliefTreeNode*> Traverse();
  void Backup(BeliefTreeNode& node);
  std::vector<BeliefBranch> Successors(const BeliefTreeNode& node,
                                       ActionId action) const;

  const DetPomdpModel* model_;
  SolverConfig config_;
  Fsc fsc_;
  double c_bar_ = 0.0;
  double clamp_ = 0.0;
  std::unique_ptr<DistCache> dist_;
  std::unique_ptr<RolloutEngine> engine_;
  std::unique_ptr<BeliefTreeNode> root_;
  SolverStats stats_;
  bool finished_ = false;
};

/// Plans from the model's initial belief (downsampled to at most
/// config.max_belief_support states with config.seed).
SolveResult SolveDetMcvi(const DetPomdpModel& model,
                         const SolverConfig& config);

}  // namespace detmcvi
