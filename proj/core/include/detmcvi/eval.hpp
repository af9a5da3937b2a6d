#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "detmcvi/belief.hpp"
#include "detmcvi/bounds.hpp"
#include "detmcvi/fsc.hpp"
#include "detmcvi/model.hpp"

namespace detmcvi {

/// Weighted sampling without replacement of `count` distinct entries
/// (selection proportional to weight), renormalized. Returns the input when
/// it has at most `count` entries.
Belief WeightedSubset(const Belief& belief, std::size_t count,
                      std::mt19937_64& rng);

/**
 * @brief Planning belief with at most `max_support` states.
 *
 * Draws 10 * max_support states from the model's initial distribution, forms
 * the empirical belief and keeps max_support distinct states by weighted
 * sampling without replacement. When the model exposes its exact initial
 * belief, the exact weights replace the empirical ones, so the result equals
 * the true belief whenever its support fits.
 */
Belief PlanningBelief(const DetPomdpModel& model, int max_support,
                      std::uint64_t seed);

struct TrialResult {
  std::int64_t trial = 0;
  TrialOutcome outcome = TrialOutcome::kUndefined;
  double return_cost = 0.0;
  /// Cost minus the full-observability optimum; absent for undefined trials.
  std::optional<double> regret;
  /// Cost divided by the full-observability optimum; successful trials with a
  /// positive optimum only.
  std::optional<double> competitive_ratio;
  int steps = 0;
};

struct MetricsSummary {
  double success_rate_percent = 0.0;
  /// Mean regret over successful trials.
  double mean_regret = 0.0;
  /// Mean regret over all trials on which the policy stayed defined.
  double mean_regret_defined = 0.0;
  double mean_competitive_ratio = 0.0;
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  std::int64_t undefined = 0;
  std::size_t policy_size = 0;
  std::optional<double> plan_time_seconds;
};

struct TrialReport {
  MetricsSummary summary;
  std::vector<TrialResult> trials;
};

struct TrialConfig {
  std::int64_t trials = 10000;
  int horizon = 100;
  std::uint64_t seed = 0;
  /// Worker threads; results do not depend on this value.
  int jobs = 1;
  /// Depth of the shortest-path search used for regret.
  int dist_depth = 1000;
};

/// Runs independent trials from states drawn from the true initial belief;
/// trial i uses an RNG stream seeded by (seed, i).
TrialReport RunTrials(const Fsc& policy, const DetPomdpModel& model,
                      const TrialConfig& config);

/// Per-trial CSV: trial,outcome,cost,regret,cr,steps.
void WriteTrialsCsv(const std::vector<TrialResult>& trials, std::ostream& out);
/// One-row summary CSV with header.
void WriteSummaryCsv(const MetricsSummary& summary, std::ostream& out);

/// Compensated (Kahan) running sum.
class KahanSum {
 public:
  void Add(double value);
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace detmcvi
