#pragma once

#include <cstdint>

#include "detmcvi/fsc.hpp"
#include "detmcvi/model.hpp"

namespace detmcvi {

struct QmdpTreeConfig {
  int max_depth = 100;
  int heuristic_depth = 1000;
  double heuristic_clamp = kInfinity;
  /// Limit on policy tree nodes; 0 means unlimited.
  std::size_t node_budget = 0;
};

struct QmdpTreeResult {
  Fsc policy;
  bool truncated = false;
  double seconds = 0.0;
};

/// Policy tree that acts greedily for the full-observability value at every
/// belief, argmin_a sum_s b(s) [c(s, a) + dist(f_T(s, a))], and branches on
/// every observation until the belief is terminal or max_depth is reached.
QmdpTreeResult SolveQmdpTree(const DetPomdpModel& model, const Belief& initial,
                             const QmdpTreeConfig& config);

}  // namespace detmcvi
