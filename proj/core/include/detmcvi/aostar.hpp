#pragma once

#include <cstdint>

#include "detmcvi/fsc.hpp"
#include "detmcvi/model.hpp"

namespace detmcvi {

struct AoStarConfig {
  /// Beliefs at this depth are not expanded and keep their heuristic value.
  int max_depth = 100;
  int heuristic_depth = 1000;
  /// Heuristic values are clamped to this; infinity disables clamping.
  double heuristic_clamp = kInfinity;
  /// Wall-clock budget in seconds; <= 0 means unlimited.
  double time_budget = 0.0;
  /// Limit on AND/OR tree nodes; 0 means unlimited.
  std::size_t node_budget = 0;
};

struct AoStarResult {
  /// Policy tree of the best solution graph (flagged as a tree).
  Fsc policy;
  /// Cost estimate of the root; exact when converged and no depth cut-off
  /// was hit.
  double value = 0.0;
  bool converged = false;
  bool depth_limited = false;
  std::size_t tree_nodes = 0;
  std::size_t expansions = 0;
  double seconds = 0.0;
};

/// AO* over the AND/OR tree of beliefs (OR over actions, AND over
/// observations) with the shortest-path heuristic. Beliefs are not merged.
AoStarResult SolveAoStar(const DetPomdpModel& model, const Belief& initial,
                         const AoStarConfig& config);

}  // namespace detmcvi
