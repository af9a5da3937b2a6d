#include "detmcvi/rollout.hpp"

#include "detmcvi/hash.hpp"

namespace detmcvi {

const AlphaCache::Entry* AlphaCache::Find(NodeIndex v, StateRef s) const {
  const auto index = static_cast<std::size_t>(v);
  if (index >= per_node_.size()) return nullptr;
  const auto& map = per_node_[index];
  const auto it = map.find(s.id);
  return it == map.end() ? nullptr : &it->second;
}

bool AlphaCache::Insert(NodeIndex v, StateRef s, const Entry& entry) {
  if (limit_ != 0 && size_ >= limit_) return false;
  const auto index = static_cast<std::size_t>(v);
  if (index >= per_node_.size()) per_node_.resize(index + 1);
  if (per_node_[index].try_emplace(s.id, entry).second) ++size_;
  return true;
}

std::size_t RolloutEngine::FallbackKeyHash::operator()(
    const FallbackKey& key) const noexcept {
  return static_cast<std::size_t>(HashCombine(key.obs, key.state));
}

RolloutEngine::RolloutEngine(const DetPomdpModel& model, const Fsc& fsc,
                             RolloutConfig config)
    : model_(&model),
      fsc_(&fsc),
      config_(config),
      walker_(model, config.depth_bound, config.tail_penalty) {
  if (config_.fallback_rollouts < 1)
    throw std::invalid_argument("fallback_rollouts must be >= 1");
  cache_.set_limit(config_.cache_limit);
}

RolloutOutcome RolloutEngine::Fallback(ObservationId exit_obs, StateRef s) {
  if (model_->IsGoal(s)) return {0.0, true, false, 0};
  const FallbackKey key{exit_obs.token, s.id};
  if (auto it = fallback_.find(key); it != fallback_.end()) return it->second;
  const WalkResult walk = walker_.MeanWalk(
      s, HashCombine(config_.fallback_seed, exit_obs.token),
      config_.fallback_rollouts);
  rollouts_ += static_cast<std::uint64_t>(config_.fallback_rollouts);
  const RolloutOutcome outcome{walk.cost, walk.reached_goal, false, walk.steps};
  if (config_.cache_limit == 0 || fallback_.size() < config_.cache_limit)
    fallback_.emplace(key, outcome);
  return outcome;
}

double RolloutEngine::FallbackBelief(ObservationId exit_obs,
                                     const Belief& belief) {
  double total = 0.0;
  for (const auto& [s, p] : belief) total += p * Fallback(exit_obs, s).value;
  return total;
}

RolloutOutcome RolloutEngine::Alpha(NodeIndex v, StateRef s) {
  if (model_->IsGoal(s)) return {0.0, true, true, 0};
  if (v == kNoNode) return Fallback(kNoObservation, s);

  struct Visit {
    NodeIndex node;
    StateRef state;
    double cost;
  };
  std::vector<Visit> path;
  RolloutOutcome tail;
  bool cacheable = true;
  NodeIndex node_index = v;
  StateRef state = s;
  while (true) {
    if (model_->IsGoal(state)) {
      tail = {0.0, true, true, 0};
      break;
    }
    if (const auto* hit = cache_.Find(node_index, state)) {
      tail = {hit->value, hit->reached_goal, hit->exact, hit->steps};
      break;
    }
    if (static_cast<int>(path.size()) >= config_.depth_bound) {
      // Only a cyclic (imported) controller can get here.
      tail = {config_.tail_penalty, false, true, 0};
      cacheable = false;
      break;
    }
    const FscNode& node = fsc_->node(node_index);
    const StateRef next = model_->Next(state, node.action);
    const ObservationId obs = model_->Observe(next, node.action);
    path.push_back({node_index, state, model_->Cost(state, node.action)});
    const NodeIndex successor = node.Successor(obs);
    if (successor == kNoNode) {
      tail = model_->IsGoal(next) ? RolloutOutcome{0.0, true, true, 0}
                                  : Fallback(obs, next);
      break;
    }
    node_index = successor;
    state = next;
  }
  ++rollouts_;

  RolloutOutcome result = tail;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    result.value += it->cost;
    ++result.steps;
    if (cacheable) {
      cache_.Insert(it->node, it->state,
                    {result.value, result.steps, result.stayed_on_fsc,
                     result.reached_goal});
    }
  }
  return result;
}

double RolloutEngine::AlphaBelief(NodeIndex v, const Belief& belief) {
  double total = 0.0;
  for (const auto& [s, p] : belief) total += p * Alpha(v, s).value;
  return total;
}

double RolloutEngine::AlphaBeliefBounded(NodeIndex v, const Belief& belief,
                                         double cutoff) {
  double total = 0.0;
  for (const auto& [s, p] : belief) {
    total += p * Alpha(v, s).value;
    if (total > cutoff) return total;
  }
  return total;
}

std::optional<std::pair<NodeIndex, double>> RolloutEngine::BestNode(
    const Belief& belief) {
  if (fsc_->empty()) return std::nullopt;
  NodeIndex best = kNoNode;
  double best_value = kInfinity;
  const auto n = static_cast<NodeIndex>(fsc_->size());
  for (NodeIndex v = 0; v < n; ++v) {
    const double value = AlphaBeliefBounded(v, belief, best_value);
    if (value < best_value) {
      best_value = value;
      best = v;
    }
  }
  return std::make_pair(best, best_value);
}

}  // namespace detmcvi
