#pragma once

#include <string>
#include <vector>

#include "detmcvi/model.hpp"

namespace detmcvi {

/**
 * @brief Sorting a hidden permutation.
 *
 * State: a permutation of items 0..n-1 (2 <= n <= 9). inspect(i) reveals the
 * item at position i; swap(i, j) exchanges two positions and yields a null
 * observation. Every action costs 1; the goal is the identity permutation and
 * the initial belief is uniform over the n! - 1 other permutations.
 */
class SortModel : public DetPomdpModel {
 public:
  explicit SortModel(int n);

  int NumActions() const override { return num_actions_; }
  StateRef Next(StateRef state, ActionId action) const override;
  ObservationId Observe(StateRef next, ActionId action) const override;
  double Cost(StateRef state, ActionId action) const override;
  bool IsGoal(StateRef state) const override;
  StateRef SampleInitialState(std::mt19937_64& rng) const override;
  std::optional<Belief> ExactInitialBelief() const override;
  std::string ActionName(ActionId action) const override;
  std::string ObservationName(ObservationId obs) const override;

  int n() const { return n_; }
  bool IsInspect(ActionId action) const { return action < n_; }
  /// Positions swapped by a swap action.
  std::pair<int, int> SwapPositions(ActionId action) const;
  StateRef Encode(const std::vector<int>& permutation) const;
  std::vector<int> Decode(StateRef state) const;
  /// Default evaluation horizon, 2n.
  int DefaultHorizon() const { return 2 * n_; }

 private:
  int n_;
  int num_actions_;
  StateRef identity_;
  std::vector<std::pair<int, int>> swaps_;
};

}  // namespace detmcvi
