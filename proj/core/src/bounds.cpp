#include "detmcvi/bounds.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "detmcvi/hash.hpp"

namespace detmcvi {

namespace {

struct ReachableSet {
  std::vector<StateRef> states;
  std::vector<bool> goal;
  std::vector<bool> expanded;
  // successors[i] = (index or -1, cost) per action; empty if not expanded.
  std::vector<std::vector<std::pair<int, double>>> successors;
  bool closed = true;
};

ReachableSet Explore(const DetPomdpModel& model, StateRef source, int depth) {
  ReachableSet r;
  std::unordered_map<StateRef, int> index;
  auto add = [&](StateRef s) {
    auto [it, inserted] = index.try_emplace(s, static_cast<int>(r.states.size()));
    if (inserted) {
      r.states.push_back(s);
      r.goal.push_back(model.IsGoal(s));
      r.expanded.push_back(false);
      r.successors.emplace_back();
    }
    return it->second;
  };
  add(source);
  std::vector<int> layer{0};
  const int num_actions = model.NumActions();
  for (int k = 0; k < depth && !layer.empty(); ++k) {
    std::vector<int> next_layer;
    for (int i : layer) {
      if (r.goal[static_cast<std::size_t>(i)]) continue;
      std::vector<std::pair<int, double>> succ;
      succ.reserve(static_cast<std::size_t>(num_actions));
      const StateRef s = r.states[static_cast<std::size_t>(i)];
      for (ActionId a = 0; a < num_actions; ++a) {
        const StateRef n = model.Next(s, a);
        const std::size_t before = r.states.size();
        const int j = add(n);
        if (r.states.size() != before) next_layer.push_back(j);
        succ.emplace_back(j, model.Cost(s, a));
      }
      r.successors[static_cast<std::size_t>(i)] = std::move(succ);
      r.expanded[static_cast<std::size_t>(i)] = true;
    }
    layer = std::move(next_layer);
  }
  for (std::size_t i = 0; i < r.states.size(); ++i)
    if (!r.goal[i] && !r.expanded[i]) r.closed = false;
  return r;
}

// Bounded Bellman-Ford over the explored set. Returns per-state values and
// whether the iteration reached a fixed point before the depth ran out.
std::pair<std::vector<double>, bool> BoundedValues(const ReachableSet& r,
                                                   int depth) {
  const std::size_t n = r.states.size();
  std::vector<double> value(n, kInfinity);
  for (std::size_t i = 0; i < n; ++i)
    if (r.goal[i]) value[i] = 0.0;
  std::vector<double> next = value;
  for (int k = 0; k < depth; ++k) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!r.expanded[i]) continue;
      double best = value[i];
      for (const auto& [j, cost] : r.successors[i]) {
        const double candidate = cost + value[static_cast<std::size_t>(j)];
        if (candidate < best) best = candidate;
      }
      next[i] = best;
      if (best != value[i]) changed = true;
    }
    value.swap(next);
    if (!changed) return {value, true};
  }
  return {value, false};
}

}  // namespace

double Dist(const DetPomdpModel& model, StateRef state, int depth) {
  if (depth < 1) throw std::invalid_argument("dist depth must be >= 1");
  if (model.IsGoal(state)) return 0.0;
  const ReachableSet r = Explore(model, state, depth);
  return BoundedValues(r, depth).first.front();
}

DistCache::DistCache(const DetPomdpModel& model, int depth)
    : model_(&model), depth_(depth) {
  if (depth < 1) throw std::invalid_argument("dist depth must be >= 1");
}

double DistCache::Dist(StateRef state) const {
  if (model_->IsGoal(state)) return 0.0;
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(state); it != cache_.end()) return it->second;
  }
  const ReachableSet r = Explore(*model_, state, depth_);
  const auto [values, converged] = BoundedValues(r, depth_);
  std::unique_lock lock(mutex_);
  if (converged && r.closed) {
    // Fixed point on a closed set: every value is the exact unbounded
    // distance, realized within `depth` steps.
    for (std::size_t i = 0; i < r.states.size(); ++i)
      cache_.try_emplace(r.states[i], values[i]);
  } else {
    cache_.try_emplace(state, values.front());
  }
  return values.front();
}

double DistCache::LowerBound(const Belief& belief, double clamp) const {
  double total = 0.0;
  for (const auto& [state, prob] : belief)
    total += prob * std::min(Dist(state), clamp);
  return total;
}

std::size_t DistCache::cached() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

UniformWalker::UniformWalker(const DetPomdpModel& model, int depth_bound,
                             double tail_penalty)
    : model_(&model), depth_bound_(depth_bound), tail_penalty_(tail_penalty) {
  if (depth_bound < 1) throw std::invalid_argument("depth bound must be >= 1");
}

WalkResult UniformWalker::Walk(StateRef state, std::uint64_t salt) const {
  WalkResult result;
  const auto num_actions = static_cast<std::uint64_t>(model_->NumActions());
  std::uint64_t history = Mix64(salt);
  for (; result.steps < depth_bound_; ++result.steps) {
    if (model_->IsGoal(state)) {
      result.reached_goal = true;
      return result;
    }
    const auto action = static_cast<ActionId>(Mix64(history) % num_actions);
    result.cost += model_->Cost(state, action);
    state = model_->Next(state, action);
    history = HashCombine(history, model_->Observe(state, action).token);
  }
  if (model_->IsGoal(state)) {
    result.reached_goal = true;
  } else {
    result.cost += tail_penalty_;
  }
  return result;
}

WalkResult UniformWalker::MeanWalk(StateRef state, std::uint64_t salt,
                                   int repeats) const {
  WalkResult mean;
  mean.reached_goal = true;
  double total = 0.0;
  for (int r = 0; r < repeats; ++r) {
    const WalkResult walk =
        Walk(state, HashCombine(salt, static_cast<std::uint64_t>(r)));
    total += walk.cost;
    mean.steps = std::max(mean.steps, walk.steps);
    mean.reached_goal = mean.reached_goal && walk.reached_goal;
  }
  mean.cost = total / repeats;
  return mean;
}

double UpperBoundUniform(const DetPomdpModel& model, const Belief& belief,
                         int depth, int repeats, std::mt19937_64& rng,
                         std::size_t max_states) {
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  if (BeliefIsTerminal(model, belief)) return 0.0;

  std::vector<StateRef> states;
  if (belief.size() <= max_states) {
    for (const auto& [s, p] : belief) states.push_back(s);
  } else {
    std::vector<double> weights;
    for (const auto& [s, p] : belief) weights.push_back(p);
    std::discrete_distribution<std::size_t> pick(weights.begin(),
                                                 weights.end());
    for (std::size_t i = 0; i < max_states; ++i)
      states.push_back(belief.entries()[pick(rng)].first);
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
  }

  const std::uint64_t salt = rng();
  const UniformWalker walker(model, depth, 0.0);
  double max_step_cost = 0.0;
  for (ActionId a = 0; a < model.NumActions(); ++a)
    for (StateRef s : states) max_step_cost = std::max(max_step_cost, model.Cost(s, a));

  struct Sample {
    double cost;
    int truncated;
  };
  std::vector<Sample> samples;
  samples.reserve(states.size());
  for (StateRef s : states) {
    Sample sample{0.0, 0};
    for (int r = 0; r < repeats; ++r) {
      const WalkResult walk =
          walker.Walk(s, HashCombine(salt, static_cast<std::uint64_t>(r)));
      sample.cost += walk.cost;
      if (!walk.reached_goal) ++sample.truncated;
    }
    samples.push_back(sample);
  }
  const double penalty = depth * max_step_cost;
  double best = 0.0;
  for (const auto& sample : samples)
    best = std::max(best, (sample.cost + sample.truncated * penalty) / repeats);
  return best;
}

}  // namespace detmcvi
