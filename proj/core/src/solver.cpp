#include "detmcvi/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "detmcvi/eval.hpp"
#include "detmcvi/hash.hpp"

namespace detmcvi {

namespace {

constexpr std::uint64_t kFallbackSalt = 0x6a09e667f3bcc909ULL;

double Tolerance(double value) {
  return 1e-12 * std::max(1.0, std::abs(value));
}

ActionId ArgminValue(const std::vector<ActionInfo>& actions) {
  ActionId best = 0;
  for (ActionId a = 1; a < static_cast<ActionId>(actions.size()); ++a)
    if (actions[a].value < actions[best].value) best = a;
  return best;
}

ActionId ArgminLower(const std::vector<ActionInfo>& actions) {
  ActionId best = 0;
  double best_lower = actions.empty() ? kInfinity : actions[0].Lower();
  for (ActionId a = 1; a < static_cast<ActionId>(actions.size()); ++a) {
    const double lower = actions[a].Lower();
    if (lower < best_lower) {
      best_lower = lower;
      best = a;
    }
  }
  return best;
}

}  // namespace

void SolverConfig::Validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (max_belief_support < 1)
    throw std::invalid_argument("max_belief_support must be >= 1");
  if (k_fallback_rollouts < 1)
    throw std::invalid_argument("k_fallback_rollouts must be >= 1");
  if (heuristic_depth < 1)
    throw std::invalid_argument("heuristic_depth must be >= 1");
  if (stop_check_interval < 1)
    throw std::invalid_argument("stop_check_interval must be >= 1");
}

void BoundsTrace::Record(TracePoint point) {
  if (!points_.empty() && point.t_seconds <= points_.back().t_seconds)
    point.t_seconds = std::nextafter(points_.back().t_seconds, kInfinity);
  points_.push_back(point);
}

void BoundsTrace::WriteCsv(std::ostream& out) const {
  out << "t_seconds,upper,lower,fsc_nodes\n";
  const auto old_precision = out.precision(17);
  for (const auto& p : points_)
    out << p.t_seconds << ',' << p.upper << ',' << p.lower << ','
        << p.fsc_nodes << '\n';
  out.precision(old_precision);
}

std::string_view ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kRootClosed:
      return "root-closed";
    case SolveStatus::kStopCheck:
      return "stop-check";
    case SolveStatus::kTimeBudget:
      return "time-budget";
    case SolveStatus::kNodeBudget:
      return "node-budget";
    case SolveStatus::kIterationBudget:
      return "iteration-budget";
  }
  return "unknown";
}

DetMcviSolver::DetMcviSolver(const DetPomdpModel& model, Belief initial_belief,
                             SolverConfig config)
    : model_(&model), config_(std::move(config)) {
  config_.Validate();
  if (initial_belief.empty())
    throw std::invalid_argument("initial belief is empty");
  const int rollout_depth = config_.rollout_depth > 0
                                ? config_.rollout_depth
                                : std::max(10 * config_.max_depth, 100);
  std::mt19937_64 rng(config_.seed);
  c_bar_ = UpperBoundUniform(model, initial_belief, rollout_depth,
                             config_.k_fallback_rollouts, rng);
  clamp_ = 10.0 * c_bar_;
  dist_ = std::make_unique<DistCache>(model, config_.heuristic_depth);
  RolloutConfig rollout;
  rollout.depth_bound = rollout_depth;
  rollout.tail_penalty = c_bar_;
  rollout.fallback_rollouts = config_.k_fallback_rollouts;
  rollout.fallback_seed = HashCombine(config_.seed, kFallbackSalt);
  rollout.cache_limit = config_.alpha_cache_limit;
  engine_ = std::make_unique<RolloutEngine>(model, fsc_, rollout);
  root_ = MakeNode(std::move(initial_belief), 0, nullptr);
  if (!root_->terminal) root_->upper = std::max(c_bar_, root_->lower);
}

DetMcviSolver::~DetMcviSolver() = default;

double DetMcviSolver::upper() const { return root_->upper; }
double DetMcviSolver::lower() const { return root_->lower; }
bool DetMcviSolver::finished() const { return finished_; }

std::unique_ptr<BeliefTreeNode> DetMcviSolver::MakeNode(
    Belief belief, int depth, BeliefTreeNode* parent) {
  auto node = std::make_unique<BeliefTreeNode>();
  node->terminal = BeliefIsTerminal(*model_, belief);
  node->belief = std::move(belief);
  node->depth = depth;
  node->parent = parent;
  if (node->terminal) {
    node->upper = 0.0;
    node->lower = 0.0;
    node->closed = true;
  } else {
    node->lower = dist_->LowerBound(node->belief, clamp_);
  }
  ++stats_.tree_nodes;
  return node;
}

void DetMcviSolver::EvaluateBranch(BranchInfo& branch,
                                   const Belief& child_belief,
                                   std::size_t first_node) {
  const auto n = static_cast<NodeIndex>(fsc_.size());
  for (auto v = static_cast<NodeIndex>(first_node); v < n; ++v) {
    const double cutoff = branch.child_value;
    const double value = engine_->AlphaBeliefBounded(v, child_belief, cutoff);
    if (value < cutoff || (branch.best_node == kNoNode && value <= cutoff)) {
      branch.best_node = v;
      branch.child_value = value;
    }
  }
  branch.best_value = branch.prob * branch.child_value;
}

std::vector<BeliefBranch> DetMcviSolver::Successors(const BeliefTreeNode& node,
                                                    ActionId action) const {
  return BeliefSuccessors(*model_, node.belief, action);
}

void DetMcviSolver::RefreshActions(BeliefTreeNode& node) {
  if (node.terminal) return;
  const std::size_t fsc_size = fsc_.size();
  const bool first = node.actions.empty();
  if (!first && node.evaluated_fsc_size == fsc_size) return;
  if (first) node.actions.resize(static_cast<std::size_t>(model_->NumActions()));

  for (ActionId a = 0; a < static_cast<ActionId>(node.actions.size()); ++a) {
    ActionInfo& info = node.actions[a];
    std::vector<BeliefBranch> successors;
    if (first || !info.expanded()) successors = Successors(node, a);
    if (first) {
      info.immediate = ExpectedCost(*model_, node.belief, a);
      info.branches.reserve(successors.size());
      for (const auto& succ : successors) {
        BranchInfo branch;
        branch.obs = succ.observation;
        branch.prob = succ.probability;
        branch.terminal = BeliefIsTerminal(*model_, succ.belief);
        if (!branch.terminal) {
          branch.heuristic = dist_->LowerBound(succ.belief, clamp_);
          branch.child_value =
              engine_->FallbackBelief(succ.observation, succ.belief);
        }
        info.branches.push_back(branch);
      }
    }
    const std::size_t first_node = first ? 0 : node.evaluated_fsc_size;
    double value = info.immediate;
    for (std::size_t i = 0; i < info.branches.size(); ++i) {
      BranchInfo& branch = info.branches[i];
      if (!branch.terminal) {
        const Belief& child_belief = info.expanded()
                                         ? info.children[i]->belief
                                         : successors[i].belief;
        EvaluateBranch(branch, child_belief, first_node);
      }
      value += branch.best_value;
    }
    info.value = value;
  }
  node.evaluated_fsc_size = fsc_size;
}

void DetMcviSolver::Expand(BeliefTreeNode& node, ActionId action) {
  if (node.closed) {
    ++stats_.closed_expansions;
    return;
  }
  ActionInfo& info = node.actions[action];
  if (info.expanded()) return;
  std::vector<BeliefBranch> successors = Successors(node, action);
  info.children.reserve(successors.size());
  for (std::size_t i = 0; i < successors.size(); ++i) {
    auto child =
        MakeNode(std::move(successors[i].belief), node.depth + 1, &node);
    if (!child->terminal) {
      child->upper = info.branches[i].child_value;
      MarkRepeat(*child);
    }
    info.children.push_back(std::move(child));
  }
}

void DetMcviSolver::MarkRepeat(BeliefTreeNode& child) const {
  for (const BeliefTreeNode* ancestor = child.parent; ancestor != nullptr;
       ancestor = ancestor->parent) {
    if (ancestor->belief.size() != child.belief.size() ||
        ancestor->belief != child.belief)
      continue;
    child.repeat_of = ancestor;
    child.closed = true;
    child.lower = std::max(child.lower, ancestor->lower);
    return;
  }
}

void DetMcviSolver::RefreshChildBounds(BeliefTreeNode& node, ActionId action) {
  ActionInfo& info = node.actions[action];
  if (!info.expanded()) return;
  for (std::size_t i = 0; i < info.children.size(); ++i) {
    BeliefTreeNode& child = *info.children[i];
    if (child.terminal) continue;
    child.upper = std::min(child.upper, info.branches[i].child_value);
    if (child.repeat_of != nullptr)
      child.lower = std::max(child.lower, child.repeat_of->lower);
  }
}

DetMcviSolver::Candidate DetMcviSolver::SelectChild(BeliefTreeNode& node,
                                                    ActionId action) const {
  Candidate best;
  const ActionInfo& info = node.actions[action];
  for (std::size_t i = 0; i < info.children.size(); ++i) {
    BeliefTreeNode* child = info.children[i].get();
    if (child->closed) continue;
    const double score =
        info.branches[i].prob * child->ExcessUncertainty(config_.epsilon);
    if (best.child == nullptr || score > best.score) best = {child, score};
  }
  return best;
}

std::vector<BeliefTreeNode*> DetMcviSolver::Traverse() {
  std::vector<BeliefTreeNode*> path{root_.get()};
  BeliefTreeNode* node = root_.get();
  while (!node->closed && node->depth < config_.max_depth) {
    RefreshActions(*node);
    for (ActionId a = 0; a < static_cast<ActionId>(node->actions.size()); ++a)
      RefreshChildBounds(*node, a);

    const ActionId greedy = ArgminValue(node->actions);
    Expand(*node, greedy);
    Candidate candidate = SelectChild(*node, greedy);
    if (node->ExcessUncertainty(config_.epsilon) > 0.0) {
      const ActionId optimistic = ArgminLower(node->actions);
      if (optimistic != greedy) {
        Expand(*node, optimistic);
        const Candidate other = SelectChild(*node, optimistic);
        if (other.child != nullptr &&
            (candidate.child == nullptr || other.score > candidate.score))
          candidate = other;
      }
    }
    if (candidate.child == nullptr) {
      for (ActionId a = 0; a < static_cast<ActionId>(node->actions.size());
           ++a) {
        Expand(*node, a);
        const Candidate other = SelectChild(*node, a);
        if (other.child != nullptr &&
            (candidate.child == nullptr || other.score > candidate.score))
          candidate = other;
      }
    }
    if (candidate.child == nullptr) {
      MarkClosed(*node);
      break;
    }
    node = candidate.child;
    path.push_back(node);
    if (node->ExcessUncertainty(config_.epsilon) <= 0.0) break;
  }
  return path;
}

void DetMcviSolver::Backup(BeliefTreeNode& node) {
  ++stats_.backups;
  if (node.terminal) {
    if (fsc_.empty()) fsc_.AddNode(0, {});
    node.policy_node = 0;
    node.upper = 0.0;
    node.lower = 0.0;
    return;
  }
  RefreshActions(node);
  for (ActionId a = 0; a < static_cast<ActionId>(node.actions.size()); ++a)
    RefreshChildBounds(node, a);

  const ActionId best_action = ArgminValue(node.actions);
  const ActionInfo& info = node.actions[best_action];
  const double backed_up = info.value;
  const auto existing = engine_->BestNode(node.belief);

  double value = backed_up;
  if (existing && existing->second <= backed_up + Tolerance(backed_up)) {
    node.policy_node = existing->first;
    value = existing->second;
    ++stats_.nodes_reused;
  } else {
    std::vector<std::pair<ObservationId, NodeIndex>> edges;
    for (const auto& branch : info.branches)
      if (branch.best_node != kNoNode)
        edges.emplace_back(branch.obs, branch.best_node);
    const auto found = fsc_.FindNode(best_action, edges);
    node.policy_node = found ? *found : fsc_.AddNode(best_action, edges);
    const double realized = engine_->AlphaBelief(node.policy_node, node.belief);
    if (std::abs(realized - backed_up) > 1e-9 * std::max(1.0, backed_up) ||
        (existing && realized > existing->second + Tolerance(realized)))
      ++stats_.monotonicity_violations;
    value = realized;
  }
  node.upper = std::min(node.upper, value);
  node.lower = std::max(node.lower, LowerBoundBackup(node));
  MarkClosed(node);
}

bool DetMcviSolver::Iterate() {
  if (finished_) return false;
  const std::vector<BeliefTreeNode*> path = Traverse();
  for (auto it = path.rbegin(); it != path.rend(); ++it) Backup(**it);
  fsc_.SetStart(root_->policy_node);
  ++stats_.iterations;
  finished_ = root_->closed || root_->ExcessUncertainty(config_.epsilon) <= 0.0;
  return !finished_;
}

SolveResult DetMcviSolver::Solve() {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  SolveResult result;
  result.trace.Record({0.0, root_->upper, root_->lower, fsc_.size()});
  double next_trace = config_.eval_interval;
  bool recorded_last = true;
  while (true) {
    Iterate();
    const double t = elapsed();
    recorded_last = false;
    if (config_.eval_interval <= 0.0 || t >= next_trace) {
      result.trace.Record({t, root_->upper, root_->lower, fsc_.size()});
      next_trace = t + config_.eval_interval;
      recorded_last = true;
    }
    if (finished_) {
      result.status = root_->ExcessUncertainty(config_.epsilon) <= 0.0
                          ? SolveStatus::kConverged
                          : SolveStatus::kRootClosed;
      break;
    }
    if (config_.stop_check &&
        stats_.iterations % config_.stop_check_interval == 0 &&
        config_.stop_check(fsc_)) {
      result.status = SolveStatus::kStopCheck;
      break;
    }
    if (config_.node_budget != 0 && stats_.tree_nodes >= config_.node_budget) {
      result.status = SolveStatus::kNodeBudget;
      break;
    }
    if (config_.iteration_budget != 0 &&
        stats_.iterations >= config_.iteration_budget) {
      result.status = SolveStatus::kIterationBudget;
      break;
    }
    if (config_.time_budget > 0.0 && t >= config_.time_budget) {
      result.status = SolveStatus::kTimeBudget;
      break;
    }
  }
  result.seconds = elapsed();
  if (!recorded_last)
    result.trace.Record(
        {result.seconds, root_->upper, root_->lower, fsc_.size()});
  result.policy = fsc_.Compacted();
  result.upper = root_->upper;
  result.lower = root_->lower;
  result.stats = stats_;
  return result;
}

SolveResult SolveDetMcvi(const DetPomdpModel& model,
                         const SolverConfig& config) {
  Belief belief =
      PlanningBelief(model, config.max_belief_support, config.seed);
  DetMcviSolver solver(model, std::move(belief), config);
  return solver.Solve();
}

}  // namespace detmcvi
