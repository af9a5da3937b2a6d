#include <cmath>
#include <set>
#include <stdexcept>

#include "detmcvi/bounds.hpp"
#include "detmcvi/ctp.hpp"
#include "detmcvi/fsc.hpp"
#include "detmcvi/maze.hpp"
#include "detmcvi/sort.hpp"
#include "doctest.h"

using namespace detmcvi;

namespace {

CtpInstance Triangle(ObserveMode mode) {
  CtpInstance instance;
  instance.nodes = {{0, 0.0, 0.0}, {1, 0.5, 0.5}, {2, 1.0, 0.0}};
  instance.edges = {{0, 1, 1.0, 0.0}, {1, 2, 1.0, 0.0}, {0, 2, 0.8, 0.3}};
  instance.start = 0;
  instance.goal = 2;
  instance.observe_mode = mode;
  return instance;
}

}  // namespace

TEST_CASE("CTP generation is deterministic and well formed") {
  CtpParams params;
  params.n_nodes = 20;
  params.stochastic_edges = 12;
  const CtpInstance a = GenerateCtp(params, 9);
  const CtpInstance b = GenerateCtp(params, 9);
  CHECK(a == b);
  CHECK(a.num_stochastic() == 12);
  CHECK(a.nodes.size() == 20);
  CHECK_NOTHROW(a.Validate());
  CHECK_FALSE(GenerateCtp(params, 10) == a);

  const CtpModel model(a);
  const Belief b0 = *model.ExactInitialBelief();
  CHECK(b0.size() == 4096);
  const DistCache dist(model, 1000);
  for (const auto& [s, p] : b0) CHECK(std::isfinite(dist.Dist(s)));
  // Stochastic edges sit on the cheapest routes: all-open beats all-blocked.
  const StateRef all_open = model.MakeState(a.start, 0);
  const StateRef all_blocked = model.MakeState(a.start, (1u << 12) - 1);
  CHECK(dist.Dist(all_open) < dist.Dist(all_blocked));
}

TEST_CASE("CTP with no stochastic edges is fully observable") {
  CtpParams params;
  params.n_nodes = 3;
  params.stochastic_edges = 0;
  const CtpModel model(GenerateCtp(params, 1));
  CHECK(model.ExactInitialBelief()->size() == 1);
}

TEST_CASE("CTP JSON round trip and errors") {
  CtpParams params;
  params.n_nodes = 6;
  params.stochastic_edges = 2;
  params.observe_mode = ObserveMode::kOnTraverse;
  const CtpInstance instance = GenerateCtp(params, 2);
  CHECK(CtpFromJson(CtpToJson(instance)) == instance);
  CHECK_THROWS_AS(CtpFromJson("{"), FormatError);
  CHECK_THROWS_AS(CtpFromJson("{\"nodes\": []}"), FormatError);
  CtpInstance broken = Triangle(ObserveMode::kAtNode);
  broken.edges[0].block_prob = 0.5;
  broken.edges[1].block_prob = 0.5;
  CHECK_THROWS_AS(CtpFromJson(CtpToJson(broken)), FormatError);
}

TEST_CASE("CTP transitions, costs and observations") {
  const CtpModel model(Triangle(ObserveMode::kAtNode));
  const StateRef open = model.MakeState(0, 0);
  const StateRef blocked = model.MakeState(0, 1);
  // Slots at node 0 are sorted by neighbour: slot 0 -> node 1, slot 1 -> node 2.
  CHECK(model.Location(model.Next(open, 0)) == 1);
  CHECK(model.Cost(open, 0) == 1.0);
  CHECK(model.IsGoal(model.Next(open, 1)));
  CHECK(model.Location(model.Next(blocked, 1)) == 0);
  CHECK(model.Cost(blocked, 1) == 0.8);
  // Arriving at node 1 reveals nothing; node 1 has no stochastic edges.
  CHECK(model.Observe(model.Next(open, 0), 0) == model.Observe(model.Next(blocked, 0), 0));
  // Blocked statuses never change.
  CHECK(model.Blocked(model.Next(blocked, 0), 0));
}

TEST_CASE("CTP at-node observation collapses the belief") {
  CtpInstance instance = Triangle(ObserveMode::kAtNode);
  // Start at node 1 so that moving to node 0 observes the risky edge.
  instance.start = 1;
  const CtpModel model(instance);
  const Belief b0 = *model.ExactInitialBelief();
  CHECK(b0.size() == 2);
  const ActionId to_zero = 0;
  const auto branches = BeliefSuccessors(model, b0, to_zero);
  REQUIRE(branches.size() == 2);
  for (const auto& branch : branches) CHECK(branch.belief.size() == 1);
  CHECK(branches[0].probability + branches[1].probability == doctest::Approx(1.0));
}

TEST_CASE("CTP on-traverse blocked edge") {
  const CtpModel model(Triangle(ObserveMode::kOnTraverse));
  const StateRef blocked = model.MakeState(0, 1);
  const StateRef next = model.Next(blocked, 1);
  CHECK(model.Location(next) == 0);
  CHECK(model.LastMoveBlocked(next));
  CHECK(model.Cost(blocked, 1) == 0.8);
  CHECK(model.ObservationName(model.Observe(next, 1)) == "n0 blocked");
  const StateRef moved = model.Next(model.MakeState(0, 1), 0);
  CHECK_FALSE(model.LastMoveBlocked(moved));
  CHECK(model.Observe(moved, 0) != model.Observe(next, 1));
}

TEST_CASE("maze generation and format") {
  const MazeInstance maze = GenerateMaze(5, 3);
  CHECK(maze.width == 11);
  CHECK(maze.height == 11);
  CHECK(GenerateMaze(5, 3) == maze);
  CHECK(MazeFromAscii(MazeToAscii(maze)) == maze);
  const MazeModel model(maze);
  CHECK(model.ExactInitialBelief()->size() == 2 * 25 - 2);
  CHECK_THROWS_AS(MazeFromAscii("#.#\n#x#\n"), FormatError);
  CHECK_THROWS_AS(MazeFromAscii("###\n#.#\n###\n"), FormatError);
  CHECK_THROWS_AS(MazeFromAscii("#####\n#.#G#\n#####\n"), FormatError);
}

TEST_CASE("maze dynamics") {
  const MazeModel model(MazeFromAscii("#####\n#...#\n#...#\n#..G#\n#####\n"));
  const StateRef corner = model.MakeState(1, 1);
  CHECK(model.Next(corner, 0) == corner);
  CHECK(model.Next(corner, 3) == corner);
  CHECK(model.Next(corner, 1) == model.MakeState(1, 2));
  CHECK(model.Observe(model.Next(corner, 0), 0) == model.Observe(corner, 0));
  CHECK(model.IsGoal(model.MakeState(3, 3)));
  CHECK(model.Cost(model.MakeState(3, 3), 0) == 0.0);

  // Open 3x3 room: moving west twice puts every state in the west column.
  const Belief b0 = *model.ExactInitialBelief();
  CHECK(b0.size() == 8);
  std::set<std::uint64_t> reached;
  for (const auto& [s, p] : b0) {
    const StateRef end = model.Next(model.Next(s, 3), 3);
    CHECK(model.Col(end) == 1);
    reached.insert(end.id);
  }
  CHECK(reached.size() == 3);
  for (const auto& first : BeliefSuccessors(model, b0, 3))
    for (const auto& second : BeliefSuccessors(model, first.belief, 3))
      for (const auto& [s, p] : second.belief) {
        CHECK(model.Col(s) == 1);
      }
}

TEST_CASE("sort dynamics") {
  const SortModel model(3);
  CHECK(model.NumActions() == 3 + 3);
  CHECK(model.IsGoal(model.Encode({0, 1, 2})));
  const StateRef s = model.Encode({1, 0, 2});
  const ActionId swap01 = 3;
  CHECK(model.SwapPositions(swap01) == std::make_pair(0, 1));
  CHECK(model.IsGoal(model.Next(s, swap01)));
  CHECK(model.Next(s, 0) == s);
  CHECK(model.Observe(s, 0) == ObservationId{2});
  CHECK(model.Observe(s, swap01) == ObservationId{0});
  CHECK(model.Cost(s, 0) == 1.0);
  CHECK(model.ExactInitialBelief()->size() == 5);
  CHECK(SortModel(5).ExactInitialBelief()->size() == 119);
  CHECK(SortModel(5).DefaultHorizon() == 10);
  CHECK_THROWS(SortModel(1));
  CHECK_THROWS(SortModel(10));
}

TEST_CASE("initial samples lie in the exact belief") {
  CtpParams params;
  params.n_nodes = 8;
  params.stochastic_edges = 4;
  const CtpModel ctp(GenerateCtp(params, 5));
  const MazeModel maze(GenerateMaze(3, 1));
  const SortModel sort(4);
  std::mt19937_64 rng(1);
  for (const DetPomdpModel* model :
       std::initializer_list<const DetPomdpModel*>{&ctp, &maze, &sort}) {
    const Belief exact = *model->ExactInitialBelief();
    for (int i = 0; i < 500; ++i) CHECK(exact.Contains(model->SampleInitialState(rng)));
  }
}
