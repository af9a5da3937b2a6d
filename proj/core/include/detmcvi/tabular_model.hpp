#pragma once

#include <vector>

#include "detmcvi/model.hpp"

namespace detmcvi {

/// Explicit DetPOMDP given by dense tables over states 0..n-1. Used for small
/// hand-built instances and as the substrate of randomized test suites.
struct TabularSpec {
  int num_states = 0;
  int num_actions = 0;
  /// next[s][a]
  std::vector<std::vector<int>> next;
  /// observation[s'][a]: observation emitted when entering s' with a.
  std::vector<std::vector<std::uint64_t>> observation;
  /// cost[s][a]; must be 0 exactly on goal states.
  std::vector<std::vector<double>> cost;
  std::vector<bool> goal;
  /// Initial distribution as (state, weight) pairs.
  std::vector<std::pair<int, double>> initial;
};

class TabularModel final : public DetPomdpModel {
 public:
  /// Validates the tables; throws std::invalid_argument on malformed input
  /// (shape mismatch, non-absorbing goal, cost/goal mismatch).
  explicit TabularModel(TabularSpec spec);

  int NumActions() const override { return spec_.num_actions; }
  StateRef Next(StateRef state, ActionId action) const override;
  ObservationId Observe(StateRef next, ActionId action) const override;
  double Cost(StateRef state, ActionId action) const override;
  bool IsGoal(StateRef state) const override;
  StateRef SampleInitialState(std::mt19937_64& rng) const override;
  std::optional<Belief> ExactInitialBelief() const override {
    return initial_;
  }

  int NumStates() const { return spec_.num_states; }
  const TabularSpec& spec() const { return spec_; }

 private:
  int Index(StateRef state) const;

  TabularSpec spec_;
  Belief initial_;
  std::discrete_distribution<int> initial_dist_;
};

/// A line 0 -> 1 -> ... -> n-1 with the goal at the end. Action 0 moves one
/// step right, action 1 stays put; both cost `step_cost` off the goal.
TabularSpec LineSpec(int num_states, double step_cost = 1.0);

}  // namespace detmcvi
