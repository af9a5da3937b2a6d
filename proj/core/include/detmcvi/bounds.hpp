#pragma once

#include <cstdint>
#include <random>
#include <shared_mutex>
#include <unordered_map>

#include "detmcvi/model.hpp"

namespace detmcvi {

/// Cost of the cheapest action sequence of at most `depth` steps from `state`
/// to a goal, or kInfinity. Forward search over the states reachable from
/// `state`; the state space is never enumerated. Uncached.
double Dist(const DetPomdpModel& model, StateRef state, int depth);

/**
 * @brief Memoized bounded-depth shortest-path distances (the full-observability
 * relaxation), shared by the solvers as admissible heuristic.
 *
 * Safe for concurrent use; insertions are idempotent.
 */
class DistCache {
 public:
  DistCache(const DetPomdpModel& model, int depth);

  double Dist(StateRef state) const;

  /// sum_s b(s) min(dist(s), clamp).
  double LowerBound(const Belief& belief, double clamp) const;

  int depth() const { return depth_; }
  std::size_t cached() const;

 private:
  const DetPomdpModel* model_;
  int depth_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<StateRef, double> cache_;
};

struct WalkResult {
  double cost = 0.0;
  bool reached_goal = false;
  int steps = 0;
};

/**
 * @brief Uniform random action selection used wherever a controller is
 * undefined.
 *
 * The action at each step is a hash of the salt and the observations seen
 * since the walk started, never of the hidden state. A fixed salt therefore
 * names one deterministic history-dependent policy, so belief-weighted walk
 * costs are values of an executable policy and are reproducible.
 */
class UniformWalker {
 public:
  UniformWalker(const DetPomdpModel& model, int depth_bound,
                double tail_penalty);

  /// One walk of at most depth_bound steps; truncated walks add tail_penalty.
  WalkResult Walk(StateRef state, std::uint64_t salt) const;

  /// Mean cost over `repeats` walks with salts derived from `salt`.
  WalkResult MeanWalk(StateRef state, std::uint64_t salt, int repeats) const;

  int depth_bound() const { return depth_bound_; }
  double tail_penalty() const { return tail_penalty_; }

 private:
  const DetPomdpModel* model_;
  int depth_bound_;
  double tail_penalty_;
};

/// C-bar: max over (sampled) support states of the mean uniform-policy cost.
/// Truncated walks are charged depth * (largest immediate cost among the
/// evaluated states). At most
/// `max_states` states are evaluated; larger supports are subsampled by
/// probability with `rng`.
double UpperBoundUniform(const DetPomdpModel& model, const Belief& belief,
                         int depth, int repeats, std::mt19937_64& rng,
                         std::size_t max_states = 512);

}  // namespace detmcvi
