#include <cmath>
#include <random>
#include <stdexcept>

#include "detmcvi/belief.hpp"
#include "detmcvi/model.hpp"
#include "detmcvi/tabular_model.hpp"
#include "doctest.h"
#include "random_detpomdp.hpp"

using namespace detmcvi;

namespace {

// Two hidden states that both move to a shared successor; the observation is
// identical, so a single bucket must carry the whole mass.
TabularSpec MergingSpec() {
  TabularSpec spec;
  spec.num_states = 3;
  spec.num_actions = 1;
  spec.next = {{2}, {2}, {2}};
  spec.observation = {{0}, {0}, {7}};
  spec.cost = {{1.0}, {2.0}, {0.0}};
  spec.goal = {false, false, true};
  spec.initial = {{0, 1.0}, {1, 3.0}};
  return spec;
}

}  // namespace

TEST_CASE("belief construction merges, drops zeros and normalizes") {
  const Belief b = Belief::FromWeights(
      {{StateRef{5}, 1.0}, {StateRef{2}, 0.0}, {StateRef{5}, 1.0}, {StateRef{1}, 2.0}});
  CHECK(b.size() == 2);
  CHECK(b.entries()[0].first == StateRef{1});
  CHECK(b.Probability(StateRef{5}) == doctest::Approx(0.5));
  CHECK(b.Probability(StateRef{2}) == 0.0);
  CHECK(IsValidBelief(b));
}

TEST_CASE("belief construction rejects invalid weights") {
  CHECK_THROWS_AS(Belief::FromWeights({}), std::invalid_argument);
  CHECK_THROWS_AS(Belief::FromWeights({{StateRef{1}, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Belief::FromWeights({{StateRef{1}, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Belief::FromWeights({{StateRef{1}, NAN}}), std::invalid_argument);
}

TEST_CASE("point belief") {
  const Belief b = Belief::Point(StateRef{9});
  CHECK(b.size() == 1);
  CHECK(b.Probability(StateRef{9}) == 1.0);
}

TEST_CASE("step applies the deterministic dynamics") {
  const TabularModel model(LineSpec(3));
  const StepResult r = Step(model, StateRef{0}, 0);
  CHECK(r.next == StateRef{1});
  CHECK(r.cost == 1.0);
  CHECK_THROWS_AS(Step(model, StateRef{0}, 2), std::out_of_range);
  CHECK_THROWS_AS(Step(model, StateRef{0}, -1), std::out_of_range);
}

TEST_CASE("belief successors merge mass per observation") {
  const TabularModel model(MergingSpec());
  const Belief b = *model.ExactInitialBelief();
  const auto branches = BeliefSuccessors(model, b, 0);
  REQUIRE(branches.size() == 1);
  CHECK(branches[0].observation == ObservationId{7});
  CHECK(branches[0].probability == doctest::Approx(1.0));
  CHECK(branches[0].belief == Belief::Point(StateRef{2}));
  CHECK(ExpectedCost(model, b, 0) == doctest::Approx(0.25 * 1.0 + 0.75 * 2.0));
  CHECK(BeliefIsTerminal(model, branches[0].belief));
  CHECK_FALSE(BeliefIsTerminal(model, b));
}

TEST_CASE("terminal belief has cost zero for every action") {
  const TabularModel model(LineSpec(3));
  const Belief goal = Belief::Point(StateRef{2});
  for (ActionId a = 0; a < model.NumActions(); ++a)
    CHECK(ExpectedCost(model, goal, a) == 0.0);
}

TEST_CASE("successor supports never grow and probabilities are conserved") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const TabularModel model(testing::RandomDetPomdp(seed));
    const Belief b = *model.ExactInitialBelief();
    for (ActionId a = 0; a < model.NumActions(); ++a) {
      double mass = 0.0;
      ObservationId previous{0};
      bool first = true;
      for (const auto& branch : BeliefSuccessors(model, b, a)) {
        CHECK(branch.belief.size() <= b.size());
        CHECK(IsValidBelief(branch.belief));
        if (!first) CHECK(previous < branch.observation);
        previous = branch.observation;
        first = false;
        mass += branch.probability;
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("tabular model validation") {
  TabularSpec spec = LineSpec(3);
  spec.cost[0][0] = 0.0;
  CHECK_THROWS_AS(TabularModel{spec}, std::invalid_argument);
  spec = LineSpec(3);
  spec.next[2][1] = 0;
  CHECK_THROWS_AS(TabularModel{spec}, std::invalid_argument);
  spec = LineSpec(3);
  spec.next[0].pop_back();
  CHECK_THROWS_AS(TabularModel{spec}, std::invalid_argument);
  spec = LineSpec(3);
  spec.initial = {{5, 1.0}};
  CHECK_THROWS_AS(TabularModel{spec}, std::invalid_argument);
}

TEST_CASE("initial state sampling follows the initial distribution") {
  const TabularModel model(MergingSpec());
  std::mt19937_64 rng(3);
  int ones = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i)
    if (model.SampleInitialState(rng) == StateRef{1}) ++ones;
  CHECK(static_cast<double>(ones) / draws == doctest::Approx(0.75).epsilon(0.02));
}
