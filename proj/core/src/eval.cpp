#include "detmcvi/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace detmcvi {

void KahanSum::Add(double value) {
  const double y = value - carry_;
  const double t = sum_ + y;
  carry_ = (t - sum_) - y;
  sum_ = t;
}

Belief WeightedSubset(const Belief& belief, std::size_t count,
                      std::mt19937_64& rng) {
  if (count == 0) throw std::invalid_argument("count must be >= 1");
  if (belief.size() <= count) return belief;
  // Exponential-key ordering: the `count` smallest E_i / w_i form a weighted
  // sample without replacement.
  std::exponential_distribution<double> exponential(1.0);
  std::vector<std::pair<double, std::size_t>> keys;
  keys.reserve(belief.size());
  const auto entries = belief.entries();
  for (std::size_t i = 0; i < entries.size(); ++i)
    keys.emplace_back(exponential(rng) / entries[i].second, i);
  std::nth_element(keys.begin(), keys.begin() + static_cast<long>(count) - 1,
                   keys.end());
  std::vector<Belief::Entry> chosen;
  chosen.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    chosen.push_back(entries[keys[k].second]);
  return Belief::FromWeights(std::move(chosen));
}

Belief PlanningBelief(const DetPomdpModel& model, int max_support,
                      std::uint64_t seed) {
  if (max_support < 1) throw std::invalid_argument("max_support must be >= 1");
  const auto count = static_cast<std::size_t>(max_support);
  std::mt19937_64 rng(seed);
  if (auto exact = model.ExactInitialBelief())
    return WeightedSubset(*exact, count, rng);
  std::map<StateRef, double> counts;
  const std::int64_t draws = 10 * static_cast<std::int64_t>(max_support);
  for (std::int64_t i = 0; i < draws; ++i)
    counts[model.SampleInitialState(rng)] += 1.0;
  std::vector<Belief::Entry> weights(counts.begin(), counts.end());
  return WeightedSubset(Belief::FromWeights(std::move(weights)), count, rng);
}

namespace {

TrialResult RunOne(const Fsc& policy, const DetPomdpModel& model,
                   const TrialConfig& config, const DistCache& dist,
                   std::int64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                    static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(
                        static_cast<std::uint64_t>(index) >> 32)};
  std::mt19937_64 rng(seq);
  const StateRef s0 = model.SampleInitialState(rng);
  const TrialRecord record = Simulate(policy, model, s0, config.horizon);
  TrialResult result;
  result.trial = index;
  result.outcome = record.outcome;
  result.return_cost = record.total_cost;
  result.steps = record.steps;
  if (record.outcome != TrialOutcome::kUndefined) {
    const double best = dist.Dist(s0);
    if (std::isfinite(best)) {
      result.regret = record.total_cost - best;
      if (record.outcome == TrialOutcome::kSuccess && best > 0.0)
        result.competitive_ratio = record.total_cost / best;
    }
  }
  return result;
}

}  // namespace

TrialReport RunTrials(const Fsc& policy, const DetPomdpModel& model,
                      const TrialConfig& config) {
  if (config.horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  if (config.trials < 0) throw std::invalid_argument("trials must be >= 0");
  const DistCache dist(model, config.dist_depth);
  TrialReport report;
  report.trials.resize(static_cast<std::size_t>(config.trials));
  const int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    for (std::int64_t i = 0; i < config.trials; ++i)
      report.trials[static_cast<std::size_t>(i)] =
          RunOne(policy, model, config, dist, i);
  } else {
    std::vector<std::thread> workers;
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        for (std::int64_t i = w; i < config.trials; i += jobs)
          report.trials[static_cast<std::size_t>(i)] =
              RunOne(policy, model, config, dist, i);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  MetricsSummary& summary = report.summary;
  summary.trials = config.trials;
  summary.policy_size = policy.size();
  KahanSum regret_success, regret_defined, ratio;
  std::int64_t n_regret_success = 0, n_regret_defined = 0, n_ratio = 0;
  for (const auto& trial : report.trials) {
    if (trial.outcome == TrialOutcome::kSuccess) ++summary.successes;
    if (trial.outcome == TrialOutcome::kUndefined) ++summary.undefined;
    if (trial.regret) {
      regret_defined.Add(*trial.regret);
      ++n_regret_defined;
      if (trial.outcome == TrialOutcome::kSuccess) {
        regret_success.Add(*trial.regret);
        ++n_regret_success;
      }
    }
    if (trial.competitive_ratio) {
      ratio.Add(*trial.competitive_ratio);
      ++n_ratio;
    }
  }
  const auto mean = [](const KahanSum& sum, std::int64_t n) {
    return n == 0 ? 0.0 : sum.value() / static_cast<double>(n);
  };
  summary.success_rate_percent =
      config.trials == 0 ? 0.0
                         : 100.0 * static_cast<double>(summary.successes) /
                               static_cast<double>(config.trials);
  summary.mean_regret = mean(regret_success, n_regret_success);
  summary.mean_regret_defined = mean(regret_defined, n_regret_defined);
  summary.mean_competitive_ratio = mean(ratio, n_ratio);
  return report;
}

void WriteTrialsCsv(const std::vector<TrialResult>& trials, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "trial,outcome,cost,regret,cr,steps\n";
  for (const auto& t : trials) {
    out << t.trial << ',' << ToString(t.outcome) << ',' << t.return_cost << ',';
    if (t.regret) out << *t.regret;
    out << ',';
    if (t.competitive_ratio) out << *t.competitive_ratio;
    out << ',' << t.steps << '\n';
  }
  out.precision(old_precision);
}

void WriteSummaryCsv(const MetricsSummary& s, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "sr_percent,mean_regret,mean_regret_defined,mean_cr,policy_size,"
         "trials,successes,undefined,t_plan\n";
  out << s.success_rate_percent << ',' << s.mean_regret << ','
      << s.mean_regret_defined << ',' << s.mean_competitive_ratio << ','
      << s.policy_size << ',' << s.trials << ',' << s.successes << ','
      << s.undefined << ',';
  if (s.plan_time_seconds) out << *s.plan_time_seconds;
  out << '\n';
  out.precision(old_precision);
}

}  // namespace detmcvi
