#include "detmcvi/belief.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace detmcvi {

Belief Belief::FromWeights(std::vector<Entry> weights) {
  std::sort(weights.begin(), weights.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  Belief belief;
  belief.entries_.reserve(weights.size());
  double total = 0.0;
  for (const auto& [state, weight] : weights) {
    if (!(weight >= 0.0) || !std::isfinite(weight))
      throw std::invalid_argument("belief weight must be finite and >= 0");
    if (weight == 0.0) continue;
    if (!belief.entries_.empty() && belief.entries_.back().first == state)
      belief.entries_.back().second += weight;
    else
      belief.entries_.emplace_back(state, weight);
    total += weight;
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("belief has no positive mass");
  for (auto& entry : belief.entries_) entry.second /= total;
  return belief;
}

Belief Belief::Point(StateRef state) {
  Belief belief;
  belief.entries_.emplace_back(state, 1.0);
  return belief;
}

double Belief::Probability(StateRef state) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), state,
      [](const Entry& e, StateRef s) { return e.first < s; });
  if (it == entries_.end() || it->first != state) return 0.0;
  return it->second;
}

bool IsValidBelief(const Belief& belief) {
  if (belief.empty()) return false;
  double total = 0.0;
  const auto entries = belief.entries();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].second > 0.0)) return false;
    if (i > 0 && !(entries[i - 1].first < entries[i].first)) return false;
    total += entries[i].second;
  }
  return std::abs(total - 1.0) <= kProbabilityTolerance;
}

}  // namespace detmcvi
