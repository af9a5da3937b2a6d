#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "detmcvi/model.hpp"

namespace detmcvi {

enum class ObserveMode { kAtNode, kOnTraverse };

std::string_view ToString(ObserveMode mode);
/// Throws std::invalid_argument for unknown names.
ObserveMode ParseObserveMode(std::string_view name);

struct CtpEdge {
  int u = 0;
  int v = 0;
  double cost = 1.0;
  /// Zero for certain edges.
  double block_prob = 0.0;

  friend bool operator==(const CtpEdge&, const CtpEdge&) = default;
};

struct CtpNode {
  int id = 0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const CtpNode&, const CtpNode&) = default;
};

struct CtpInstance {
  std::vector<CtpNode> nodes;
  std::vector<CtpEdge> edges;
  int start = 0;
  int goal = 0;
  ObserveMode observe_mode = ObserveMode::kAtNode;

  int num_stochastic() const;
  /// Throws std::invalid_argument when ids, costs or probabilities are out of
  /// range, or when no all-certain path connects start and goal.
  void Validate() const;

  friend bool operator==(const CtpInstance&, const CtpInstance&) = default;
};

struct CtpParams {
  int n_nodes = 20;
  /// Number of nearest neighbours each node connects to.
  int edge_degree = 4;
  /// Exact number of stochastic edges; when unset, stochastic_fraction of
  /// all edges are made stochastic.
  std::optional<int> stochastic_edges;
  double stochastic_fraction = 0.5;
  double block_prob_min = 0.2;
  double block_prob_max = 0.8;
  ObserveMode observe_mode = ObserveMode::kAtNode;
};

/// Random geometric graph on the unit square joined to k nearest neighbours;
/// start and goal are the two most distant nodes. Edges on the cheapest
/// all-open start-goal routes become stochastic first, skipping any edge
/// whose loss would leave no all-certain start-goal path. Pure in
/// (params, seed).
CtpInstance GenerateCtp(const CtpParams& params, std::uint64_t seed);

std::string CtpToJson(const CtpInstance& instance);
/// Throws FormatError on malformed input.
CtpInstance CtpFromJson(std::string_view text);

/**
 * @brief Canadian Traveller Problem as a DetPOMDP.
 *
 * State: agent location, the blocked/open status of every stochastic edge
 * and a flag recording whether the last move attempt hit a blocked edge.
 * Action k traverses the k-th incident edge of the current location (by
 * neighbour id); slots beyond the degree keep the agent in place at the
 * largest edge cost. A blocked edge keeps the agent in place and charges the
 * edge cost.
 */
class CtpModel : public DetPomdpModel {
 public:
  explicit CtpModel(CtpInstance instance);

  int NumActions() const override { return max_degree_; }
  StateRef Next(StateRef state, ActionId action) const override;
  ObservationId Observe(StateRef next, ActionId action) const override;
  double Cost(StateRef state, ActionId action) const override;
  bool IsGoal(StateRef state) const override;
  StateRef SampleInitialState(std::mt19937_64& rng) const override;
  /// Enumerated when there are at most 16 stochastic edges.
  std::optional<Belief> ExactInitialBelief() const override;
  std::string ActionName(ActionId action) const override;
  std::string ObservationName(ObservationId obs) const override;

  const CtpInstance& instance() const { return instance_; }
  int Location(StateRef state) const;
  bool Blocked(StateRef state, int stochastic_index) const;
  bool LastMoveBlocked(StateRef state) const;
  StateRef MakeState(int location, std::uint64_t status_bits,
                     bool blocked_flag = false) const;
  /// Default evaluation horizon, 2n.
  int DefaultHorizon() const;

 private:
  struct Incident {
    int edge;
    int neighbour;
    int stochastic_index;  // -1 for certain edges
  };

  std::uint64_t Bits(StateRef state) const;

  CtpInstance instance_;
  int n_;
  int max_degree_ = 1;
  double max_cost_ = 0.0;
  std::vector<std::vector<Incident>> incident_;
  std::vector<int> stochastic_edges_;
};

}  // namespace detmcvi
