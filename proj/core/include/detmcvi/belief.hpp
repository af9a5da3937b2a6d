#pragma once

#include <span>
#include <utility>
#include <vector>

#include "detmcvi/types.hpp"

namespace detmcvi {

/**
 * @brief Sparse probability distribution over states with finite support.
 *
 * Entries are kept sorted by state id, every stored probability is strictly
 * positive and the probabilities sum to one within kProbabilityTolerance.
 * A default-constructed Belief is empty and is only valid as a placeholder.
 */
class Belief {
 public:
  using Entry = std::pair<StateRef, double>;

  Belief() = default;

  /// Builds a belief from unnormalized non-negative weights. Duplicate states
  /// are merged and zero weights dropped. Throws std::invalid_argument if the
  /// total weight is not positive and finite, or any weight is negative.
  static Belief FromWeights(std::vector<Entry> weights);

  static Belief Point(StateRef state);

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Probability of `state`, 0 when outside the support.
  double Probability(StateRef state) const;
  bool Contains(StateRef state) const { return Probability(state) > 0.0; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Belief&, const Belief&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Checks the belief invariants (positivity, normalization, sorted support).
bool IsValidBelief(const Belief& belief);

}  // namespace detmcvi
