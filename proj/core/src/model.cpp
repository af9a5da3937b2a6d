#include "detmcvi/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace detmcvi {

std::string DetPomdpModel::ActionName(ActionId action) const {
  return "a" + std::to_string(action);
}

std::string DetPomdpModel::ObservationName(ObservationId obs) const {
  return std::to_string(obs.token);
}

StepResult Step(const DetPomdpModel& model, StateRef state, ActionId action) {
  if (action < 0 || action >= model.NumActions())
    throw std::out_of_range("action " + std::to_string(action) +
                            " outside [0, " +
                            std::to_string(model.NumActions()) + ")");
  const StateRef next = model.Next(state, action);
  return {next, model.Observe(next, action), model.Cost(state, action)};
}

std::vector<BeliefBranch> BeliefSuccessors(const DetPomdpModel& model,
                                           const Belief& belief,
                                           ActionId action) {
  if (action < 0 || action >= model.NumActions())
    throw std::out_of_range("action outside model range");

  struct Bucket {
    ObservationId obs;
    double mass = 0.0;
    std::vector<Belief::Entry> states;
  };
  std::vector<Bucket> buckets;
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (const auto& [state, prob] : belief) {
    const StateRef next = model.Next(state, action);
    const ObservationId obs = model.Observe(next, action);
    auto [it, inserted] = index.try_emplace(obs.token, buckets.size());
    if (inserted) buckets.push_back({obs, 0.0, {}});
    Bucket& bucket = buckets[it->second];
    bucket.mass += prob;
    bucket.states.emplace_back(next, prob);
  }
  std::sort(buckets.begin(), buckets.end(),
            [](const Bucket& a, const Bucket& b) { return a.obs < b.obs; });

  double total = 0.0;
  for (const auto& bucket : buckets) total += bucket.mass;

  std::vector<BeliefBranch> branches;
  branches.reserve(buckets.size());
  for (auto& bucket : buckets) {
    branches.push_back({bucket.obs, bucket.mass / total,
                        Belief::FromWeights(std::move(bucket.states))});
  }
  return branches;
}

bool BeliefIsTerminal(const DetPomdpModel& model, const Belief& belief) {
  return std::all_of(belief.begin(), belief.end(), [&](const auto& entry) {
    return model.IsGoal(entry.first);
  });
}

double ExpectedCost(const DetPomdpModel& model, const Belief& belief,
                    ActionId action) {
  double total = 0.0;
  for (const auto& [state, prob] : belief)
    total += prob * model.Cost(state, action);
  return total;
}

}  // namespace detmcvi
