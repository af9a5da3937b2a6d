#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "detmcvi/model.hpp"

namespace detmcvi {

/// Grid maze: '#' wall, '.' free, 'G' the goal cell.
struct MazeInstance {
  int width = 0;
  int height = 0;
  std::vector<std::string> rows;

  bool IsFree(int row, int col) const;
  int goal_row() const;
  int goal_col() const;
  /// Throws std::invalid_argument unless the grid is rectangular, uses only
  /// '#', '.' and 'G', has exactly one goal and all free cells connected.
  void Validate() const;

  friend bool operator==(const MazeInstance&, const MazeInstance&) = default;
};

/// Perfect maze of n x n rooms (recursive backtracker), rendered as a
/// (2n+1) x (2n+1) grid with the goal in the bottom-right room.
MazeInstance GenerateMaze(int n, std::uint64_t seed);

std::string MazeToAscii(const MazeInstance& maze);
/// Throws FormatError on malformed grids.
MazeInstance MazeFromAscii(std::string_view text);

/**
 * @brief Localization in a known maze.
 *
 * State: the agent's grid position. Actions N, E, S, W move one cell (moves
 * into walls keep the position). The observation is the 4-bit wall mask
 * around the new position plus a goal marker. Unit costs; the initial belief
 * is uniform over all free non-goal positions.
 */
class MazeModel : public DetPomdpModel {
 public:
  explicit MazeModel(MazeInstance maze);

  int NumActions() const override { return 4; }
  StateRef Next(StateRef state, ActionId action) const override;
  ObservationId Observe(StateRef next, ActionId action) const override;
  double Cost(StateRef state, ActionId action) const override;
  bool IsGoal(StateRef state) const override;
  StateRef SampleInitialState(std::mt19937_64& rng) const override;
  std::optional<Belief> ExactInitialBelief() const override;
  std::string ActionName(ActionId action) const override;
  std::string ObservationName(ObservationId obs) const override;

  const MazeInstance& maze() const { return maze_; }
  StateRef MakeState(int row, int col) const;
  int Row(StateRef state) const;
  int Col(StateRef state) const;
  /// Default evaluation horizon, 4n^2 + 2n for n = (width - 1) / 2 rooms.
  int DefaultHorizon() const;

 private:
  MazeInstance maze_;
  StateRef goal_;
  std::vector<StateRef> starts_;
};

}  // namespace detmcvi
