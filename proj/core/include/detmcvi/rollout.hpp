#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "detmcvi/bounds.hpp"
#include "detmcvi/fsc.hpp"
#include "detmcvi/model.hpp"

namespace detmcvi {

struct RolloutConfig {
  /// Step limit of a fallback walk and of a single on-controller segment.
  int depth_bound = 1000;
  /// Added to walks truncated by depth_bound (C-bar in the solver).
  double tail_penalty = 0.0;
  /// Number of fallback walks averaged where the controller is undefined.
  int fallback_rollouts = 16;
  std::uint64_t fallback_seed = 0;
  /// Upper limit on cached (node, state) values; 0 means unlimited.
  std::size_t cache_limit = 0;
};

struct RolloutOutcome {
  double value = 0.0;
  bool reached_goal = false;
  bool stayed_on_fsc = true;
  int steps = 0;
};

/// Memoized alpha_{F,v}(s) values keyed by (node, state).
class AlphaCache {
 public:
  struct Entry {
    double value = 0.0;
    std::int32_t steps = 0;
    bool exact = false;
    bool reached_goal = false;
  };

  const Entry* Find(NodeIndex v, StateRef s) const;
  /// Returns false when the size limit prevented the insert.
  bool Insert(NodeIndex v, StateRef s, const Entry& entry);

  std::size_t size() const { return size_; }
  void set_limit(std::size_t limit) { limit_ = limit; }

 private:
  std::vector<std::unordered_map<std::uint64_t, Entry>> per_node_;
  std::size_t size_ = 0;
  std::size_t limit_ = 0;
};

/**
 * @brief Evaluates alpha_{F,v}(s) for a growing controller.
 *
 * Under deterministic dynamics one rollout gives the exact value as long as
 * the trajectory stays on the controller. Where eta(v, o) is undefined the
 * rollout continues with the UniformWalker keyed by the exit observation, so
 * every value (exact or not) is the cost of an executable policy. Every
 * suffix of a trajectory is cached, which is valid because nodes never change
 * after they are added.
 *
 * Not thread-safe; the referenced controller may grow between calls.
 */
class RolloutEngine {
 public:
  RolloutEngine(const DetPomdpModel& model, const Fsc& fsc,
                RolloutConfig config);

  /// alpha_{F,v}(s). v == kNoNode evaluates the pure fallback policy.
  RolloutOutcome Alpha(NodeIndex v, StateRef s);

  /// sum_{s in Supp(b)} b(s) alpha_{F,v}(s).
  double AlphaBelief(NodeIndex v, const Belief& belief);

  /// As AlphaBelief, but stops summing once the partial sum exceeds
  /// `cutoff` and returns that partial sum.
  double AlphaBeliefBounded(NodeIndex v, const Belief& belief, double cutoff);

  /// Value of continuing with the fallback policy after observing `exit_obs`
  /// in a node that has no edge for it.
  RolloutOutcome Fallback(ObservationId exit_obs, StateRef s);
  double FallbackBelief(ObservationId exit_obs, const Belief& belief);

  /// argmin_v alpha_{F,v}(b), lowest index on ties; nullopt for an empty FSC.
  std::optional<std::pair<NodeIndex, double>> BestNode(const Belief& belief);

  const Fsc& fsc() const { return *fsc_; }
  const AlphaCache& cache() const { return cache_; }
  const RolloutConfig& config() const { return config_; }
  std::uint64_t rollouts() const { return rollouts_; }

 private:
  struct FallbackKey {
    std::uint64_t obs;
    std::uint64_t state;
    friend bool operator==(const FallbackKey&, const FallbackKey&) = default;
  };
  struct FallbackKeyHash {
    std::size_t operator()(const FallbackKey& key) const noexcept;
  };

  const DetPomdpModel* model_;
  const Fsc* fsc_;
  RolloutConfig config_;
  UniformWalker walker_;
  AlphaCache cache_;
  std::unordered_map<FallbackKey, RolloutOutcome, FallbackKeyHash> fallback_;
  std::uint64_t rollouts_ = 0;
};

/// Token used as exit observation when evaluating from no node at all.
inline constexpr ObservationId kNoObservation{
    std::numeric_limits<std::uint64_t>::max()};

}  // namespace detmcvi
