#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "detmcvi/belief.hpp"
#include "detmcvi/types.hpp"

namespace detmcvi {

/**
 * @brief Generative interface of a goal-oriented deterministic POMDP.
 *
 * Implementations must be immutable after construction: Next and Observe are
 * pure, Cost(s, a) == 0 exactly when IsGoal(s), and goal states are absorbing.
 */
class DetPomdpModel {
 public:
  virtual ~DetPomdpModel() = default;

  virtual int NumActions() const = 0;

  /// f_T(s, a).
  virtual StateRef Next(StateRef state, ActionId action) const = 0;
  /// f_Z(s', a): observation received after entering `next` with `action`.
  virtual ObservationId Observe(StateRef next, ActionId action) const = 0;
  virtual double Cost(StateRef state, ActionId action) const = 0;
  virtual bool IsGoal(StateRef state) const = 0;

  /// Draws a state from the true initial belief.
  virtual StateRef SampleInitialState(std::mt19937_64& rng) const = 0;

  /// The exact initial belief when its support is small enough to enumerate.
  virtual std::optional<Belief> ExactInitialBelief() const = 0;

  virtual std::string ActionName(ActionId action) const;
  virtual std::string ObservationName(ObservationId obs) const;
};

struct StepResult {
  StateRef next;
  ObservationId observation;
  double cost = 0.0;
};

/// Applies one deterministic step. Throws std::out_of_range for an action
/// outside [0, NumActions()).
StepResult Step(const DetPomdpModel& model, StateRef state, ActionId action);

/// One observation bucket of a belief update.
struct BeliefBranch {
  ObservationId observation;
  double probability = 0.0;
  Belief belief;
};

/// Deterministic Bayes update of `belief` under `action`, one branch per
/// observation with positive probability, ordered by observation token.
std::vector<BeliefBranch> BeliefSuccessors(const DetPomdpModel& model,
                                           const Belief& belief,
                                           ActionId action);

bool BeliefIsTerminal(const DetPomdpModel& model, const Belief& belief);

/// Expected immediate cost sum_s b(s) c(s, a).
double ExpectedCost(const DetPomdpModel& model, const Belief& belief,
                    ActionId action);

}  // namespace detmcvi
