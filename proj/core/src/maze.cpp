#include "detmcvi/maze.hpp"

#include <algorithm>
#include <array>
#include <sstream>
#include <stdexcept>

#include "detmcvi/fsc.hpp"

namespace detmcvi {

namespace {

constexpr std::array<int, 4> kRowDelta{-1, 0, 1, 0};
constexpr std::array<int, 4> kColDelta{0, 1, 0, -1};
constexpr std::array<const char*, 4> kActionNames{"N", "E", "S", "W"};
constexpr std::uint64_t kGoalMarker = 1u << 4;

}  // namespace

bool MazeInstance::IsFree(int row, int col) const {
  if (row < 0 || row >= height || col < 0 || col >= width) return false;
  return rows[row][col] != '#';
}

int MazeInstance::goal_row() const {
  for (int r = 0; r < height; ++r)
    if (rows[r].find('G') != std::string::npos) return r;
  return -1;
}

int MazeInstance::goal_col() const {
  for (const auto& row : rows)
    if (auto c = row.find('G'); c != std::string::npos)
      return static_cast<int>(c);
  return -1;
}

void MazeInstance::Validate() const {
  if (width < 1 || height < 1 || static_cast<int>(rows.size()) != height)
    throw std::invalid_argument("maze dimensions do not match its rows");
  int goals = 0, free_cells = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != width)
      throw std::invalid_argument("maze rows must have equal length");
    for (char c : row) {
      if (c != '#' && c != '.' && c != 'G')
        throw std::invalid_argument("maze contains an unknown character");
      if (c == 'G') ++goals;
      if (c != '#') ++free_cells;
    }
  }
  if (goals != 1) throw std::invalid_argument("maze needs exactly one goal");
  std::vector<bool> seen(static_cast<std::size_t>(width * height), false);
  std::vector<std::pair<int, int>> stack{{goal_row(), goal_col()}};
  seen[goal_row() * width + goal_col()] = true;
  int reached = 0;
  while (!stack.empty()) {
    const auto [r, c] = stack.back();
    stack.pop_back();
    ++reached;
    for (int d = 0; d < 4; ++d) {
      const int nr = r + kRowDelta[d], nc = c + kColDelta[d];
      if (IsFree(nr, nc) && !seen[nr * width + nc]) {
        seen[nr * width + nc] = true;
        stack.emplace_back(nr, nc);
      }
    }
  }
  if (reached != free_cells)
    throw std::invalid_argument("maze free cells are not connected");
}

MazeInstance GenerateMaze(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("maze size must be >= 1");
  const int size = 2 * n + 1;
  MazeInstance maze{size, size,
                    std::vector<std::string>(static_cast<std::size_t>(size),
                                             std::string(size, '#'))};
  std::mt19937_64 rng(seed);
  std::vector<bool> visited(static_cast<std::size_t>(n * n), false);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  visited[0] = true;
  maze.rows[1][1] = '.';
  while (!stack.empty()) {
    const auto [r, c] = stack.back();
    std::vector<int> options;
    for (int d = 0; d < 4; ++d) {
      const int nr = r + kRowDelta[d], nc = c + kColDelta[d];
      if (nr >= 0 && nr < n && nc >= 0 && nc < n && !visited[nr * n + nc])
        options.push_back(d);
    }
    if (options.empty()) {
      stack.pop_back();
      continue;
    }
    const int d = options[std::uniform_int_distribution<std::size_t>(
        0, options.size() - 1)(rng)];
    const int nr = r + kRowDelta[d], nc = c + kColDelta[d];
    visited[nr * n + nc] = true;
    maze.rows[2 * r + 1 + kRowDelta[d]][2 * c + 1 + kColDelta[d]] = '.';
    maze.rows[2 * nr + 1][2 * nc + 1] = '.';
    stack.emplace_back(nr, nc);
  }
  maze.rows[2 * n - 1][2 * n - 1] = 'G';
  return maze;
}

std::string MazeToAscii(const MazeInstance& maze) {
  std::string out;
  for (const auto& row : maze.rows) out += row + "\n";
  return out;
}

MazeInstance MazeFromAscii(std::string_view text) {
  MazeInstance maze;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    maze.rows.push_back(line);
  }
  maze.height = static_cast<int>(maze.rows.size());
  maze.width = maze.rows.empty() ? 0 : static_cast<int>(maze.rows[0].size());
  try {
    maze.Validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid maze: ") + e.what());
  }
  return maze;
}

MazeModel::MazeModel(MazeInstance maze) : maze_(std::move(maze)) {
  maze_.Validate();
  goal_ = MakeState(maze_.goal_row(), maze_.goal_col());
  for (int r = 0; r < maze_.height; ++r)
    for (int c = 0; c < maze_.width; ++c)
      if (maze_.rows[r][c] == '.') starts_.push_back(MakeState(r, c));
}

StateRef MazeModel::MakeState(int row, int col) const {
  return StateRef{static_cast<std::uint64_t>(row * maze_.width + col)};
}

int MazeModel::Row(StateRef state) const {
  return static_cast<int>(state.id / static_cast<std::uint64_t>(maze_.width));
}

int MazeModel::Col(StateRef state) const {
  return static_cast<int>(state.id % static_cast<std::uint64_t>(maze_.width));
}

bool MazeModel::IsGoal(StateRef state) const { return state == goal_; }

StateRef MazeModel::Next(StateRef state, ActionId action) const {
  if (IsGoal(state) || action < 0 || action >= 4) return state;
  const int r = Row(state) + kRowDelta[action];
  const int c = Col(state) + kColDelta[action];
  return maze_.IsFree(r, c) ? MakeState(r, c) : state;
}

ObservationId MazeModel::Observe(StateRef next, ActionId /*action*/) const {
  std::uint64_t mask = 0;
  for (int d = 0; d < 4; ++d)
    if (!maze_.IsFree(Row(next) + kRowDelta[d], Col(next) + kColDelta[d]))
      mask |= 1u << d;
  if (IsGoal(next)) mask |= kGoalMarker;
  return ObservationId{mask};
}

double MazeModel::Cost(StateRef state, ActionId /*action*/) const {
  return IsGoal(state) ? 0.0 : 1.0;
}

StateRef MazeModel::SampleInitialState(std::mt19937_64& rng) const {
  if (starts_.empty()) return goal_;
  return starts_[std::uniform_int_distribution<std::size_t>(
      0, starts_.size() - 1)(rng)];
}

std::optional<Belief> MazeModel::ExactInitialBelief() const {
  if (starts_.empty()) return Belief::Point(goal_);
  std::vector<Belief::Entry> entries;
  for (StateRef s : starts_) entries.emplace_back(s, 1.0);
  return Belief::FromWeights(std::move(entries));
}

std::string MazeModel::ActionName(ActionId action) const {
  return action >= 0 && action < 4 ? kActionNames[action]
                                   : "a" + std::to_string(action);
}

std::string MazeModel::ObservationName(ObservationId obs) const {
  if (obs.token > 0x1f) return std::to_string(obs.token);
  std::string name;
  for (int d = 0; d < 4; ++d)
    if ((obs.token >> d) & 1u) name += kActionNames[d];
  if (name.empty()) name = "-";
  if (obs.token & kGoalMarker) name += " goal";
  return name;
}

int MazeModel::DefaultHorizon() const {
  const int n = (maze_.width - 1) / 2;
  return std::max(1, 4 * n * n + 2 * n);
}

}  // namespace detmcvi
