#include "detmcvi/tabular_model.hpp"

#include <stdexcept>
#include <string>

namespace detmcvi {

TabularModel::TabularModel(TabularSpec spec) : spec_(std::move(spec)) {
  const auto n = static_cast<std::size_t>(spec_.num_states);
  const auto m = static_cast<std::size_t>(spec_.num_actions);
  if (n == 0 || m == 0)
    throw std::invalid_argument("tabular model needs states and actions");
  if (spec_.next.size() != n || spec_.observation.size() != n ||
      spec_.cost.size() != n || spec_.goal.size() != n)
    throw std::invalid_argument("tabular model table size mismatch");
  for (std::size_t s = 0; s < n; ++s) {
    if (spec_.next[s].size() != m || spec_.observation[s].size() != m ||
        spec_.cost[s].size() != m)
      throw std::invalid_argument("tabular model row size mismatch at state " +
                                  std::to_string(s));
    for (std::size_t a = 0; a < m; ++a) {
      const int target = spec_.next[s][a];
      if (target < 0 || static_cast<std::size_t>(target) >= n)
        throw std::invalid_argument("transition target out of range");
      const double c = spec_.cost[s][a];
      if (spec_.goal[s]) {
        if (c != 0.0 || target != static_cast<int>(s))
          throw std::invalid_argument("goal state " + std::to_string(s) +
                                      " must be absorbing with zero cost");
      } else if (!(c > 0.0)) {
        throw std::invalid_argument("non-goal state " + std::to_string(s) +
                                    " needs positive costs");
      }
    }
  }
  std::vector<Belief::Entry> weights;
  std::vector<double> dist_weights(n, 0.0);
  for (const auto& [s, w] : spec_.initial) {
    if (s < 0 || static_cast<std::size_t>(s) >= n)
      throw std::invalid_argument("initial state out of range");
    weights.emplace_back(StateRef{static_cast<std::uint64_t>(s)}, w);
    dist_weights[static_cast<std::size_t>(s)] += w;
  }
  initial_ = Belief::FromWeights(std::move(weights));
  initial_dist_ =
      std::discrete_distribution<int>(dist_weights.begin(), dist_weights.end());
}

int TabularModel::Index(StateRef state) const {
  if (state.id >= static_cast<std::uint64_t>(spec_.num_states))
    throw std::out_of_range("state outside tabular model");
  return static_cast<int>(state.id);
}

StateRef TabularModel::Next(StateRef state, ActionId action) const {
  return StateRef{static_cast<std::uint64_t>(
      spec_.next[Index(state)][static_cast<std::size_t>(action)])};
}

ObservationId TabularModel::Observe(StateRef next, ActionId action) const {
  return ObservationId{
      spec_.observation[Index(next)][static_cast<std::size_t>(action)]};
}

double TabularModel::Cost(StateRef state, ActionId action) const {
  return spec_.cost[Index(state)][static_cast<std::size_t>(action)];
}

bool TabularModel::IsGoal(StateRef state) const {
  return spec_.goal[Index(state)];
}

StateRef TabularModel::SampleInitialState(std::mt19937_64& rng) const {
  auto dist = initial_dist_;
  return StateRef{static_cast<std::uint64_t>(dist(rng))};
}

TabularSpec LineSpec(int num_states, double step_cost) {
  TabularSpec spec;
  spec.num_states = num_states;
  spec.num_actions = 2;
  const auto n = static_cast<std::size_t>(num_states);
  spec.next.assign(n, std::vector<int>(2));
  spec.observation.assign(n, std::vector<std::uint64_t>(2, 0));
  spec.cost.assign(n, std::vector<double>(2, step_cost));
  spec.goal.assign(n, false);
  for (int s = 0; s < num_states; ++s) {
    const auto i = static_cast<std::size_t>(s);
    spec.next[i][0] = std::min(s + 1, num_states - 1);
    spec.next[i][1] = s;
  }
  spec.goal[n - 1] = true;
  spec.next[n - 1][0] = num_states - 1;
  spec.cost[n - 1] = {0.0, 0.0};
  spec.initial = {{0, 1.0}};
  return spec;
}

}  // namespace detmcvi
