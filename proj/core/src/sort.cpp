#include "detmcvi/sort.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace detmcvi {

namespace {

int ItemAt(StateRef state, int position) {
  return static_cast<int>((state.id >> (4 * position)) & 0xfu);
}

}  // namespace

SortModel::SortModel(int n) : n_(n) {
  if (n < 2 || n > 9) throw std::invalid_argument("sort size must be in [2, 9]");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) swaps_.emplace_back(i, j);
  num_actions_ = n + static_cast<int>(swaps_.size());
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  identity_ = Encode(identity);
}

StateRef SortModel::Encode(const std::vector<int>& permutation) const {
  std::uint64_t id = 0;
  for (std::size_t i = 0; i < permutation.size(); ++i)
    id |= static_cast<std::uint64_t>(permutation[i]) << (4 * i);
  return StateRef{id};
}

std::vector<int> SortModel::Decode(StateRef state) const {
  std::vector<int> permutation(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) permutation[i] = ItemAt(state, i);
  return permutation;
}

std::pair<int, int> SortModel::SwapPositions(ActionId action) const {
  if (action < n_ || action >= num_actions_)
    throw std::out_of_range("not a swap action");
  return swaps_[action - n_];
}

bool SortModel::IsGoal(StateRef state) const { return state == identity_; }

StateRef SortModel::Next(StateRef state, ActionId action) const {
  if (IsGoal(state) || action < n_ || action >= num_actions_) return state;
  const auto [i, j] = swaps_[action - n_];
  const std::uint64_t a = static_cast<std::uint64_t>(ItemAt(state, i));
  const std::uint64_t b = static_cast<std::uint64_t>(ItemAt(state, j));
  std::uint64_t id = state.id;
  id &= ~((0xfULL << (4 * i)) | (0xfULL << (4 * j)));
  id |= (b << (4 * i)) | (a << (4 * j));
  return StateRef{id};
}

ObservationId SortModel::Observe(StateRef next, ActionId action) const {
  if (action < 0 || action >= n_) return ObservationId{0};
  return ObservationId{static_cast<std::uint64_t>(ItemAt(next, action)) + 1};
}

double SortModel::Cost(StateRef state, ActionId /*action*/) const {
  return IsGoal(state) ? 0.0 : 1.0;
}

StateRef SortModel::SampleInitialState(std::mt19937_64& rng) const {
  std::vector<int> permutation(static_cast<std::size_t>(n_));
  std::iota(permutation.begin(), permutation.end(), 0);
  while (true) {
    for (int i = n_ - 1; i > 0; --i) {
      const int j = std::uniform_int_distribution<int>(0, i)(rng);
      std::swap(permutation[i], permutation[j]);
    }
    const StateRef state = Encode(permutation);
    if (!IsGoal(state)) return state;
  }
}

std::optional<Belief> SortModel::ExactInitialBelief() const {
  std::vector<int> permutation(static_cast<std::size_t>(n_));
  std::iota(permutation.begin(), permutation.end(), 0);
  std::vector<Belief::Entry> entries;
  while (std::next_permutation(permutation.begin(), permutation.end()))
    entries.emplace_back(Encode(permutation), 1.0);
  return Belief::FromWeights(std::move(entries));
}

std::string SortModel::ActionName(ActionId action) const {
  if (action >= 0 && action < n_) return "inspect(" + std::to_string(action) + ")";
  if (action >= n_ && action < num_actions_) {
    const auto [i, j] = swaps_[action - n_];
    return "swap(" + std::to_string(i) + "," + std::to_string(j) + ")";
  }
  return "a" + std::to_string(action);
}

std::string SortModel::ObservationName(ObservationId obs) const {
  if (obs.token == 0) return "none";
  return "item" + std::to_string(obs.token - 1);
}

}  // namespace detmcvi
