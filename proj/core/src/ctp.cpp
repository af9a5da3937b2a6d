#include "detmcvi/ctp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "detmcvi/fsc.hpp"
#include "detmcvi/hash.hpp"
#include "json.hpp"

namespace detmcvi {

namespace {

constexpr int kMaxRetries = 100;
constexpr std::uint64_t kLocationShift = 16;

bool CertainPathExists(const CtpInstance& instance) {
  const int n = static_cast<int>(instance.nodes.size());
  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n));
  for (const auto& e : instance.edges) {
    if (e.block_prob > 0.0) continue;
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<int> stack{instance.start};
  seen[instance.start] = true;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (u == instance.goal) return true;
    for (int v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  return false;
}

int FindRoot(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

template <typename Distance>
std::vector<double> OpenDistances(const std::vector<std::pair<int, int>>& pairs,
                                  const Distance& distance, int n, int source) {
  std::vector<std::vector<std::pair<int, double>>> adjacency(
      static_cast<std::size_t>(n));
  for (const auto& [u, v] : pairs) {
    adjacency[u].emplace_back(v, distance(u, v));
    adjacency[v].emplace_back(u, distance(u, v));
  }
  std::vector<double> dist(static_cast<std::size_t>(n),
                           std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, c] : adjacency[u]) {
      if (d + c < dist[v]) {
        dist[v] = d + c;
        queue.emplace(dist[v], v);
      }
    }
  }
  return dist;
}

bool CertainRouteExists(const std::vector<std::pair<int, int>>& pairs,
                        const std::vector<bool>& stochastic, int n, int start,
                        int goal) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    if (stochastic[idx]) continue;
    const int a = FindRoot(parent, pairs[idx].first);
    const int b = FindRoot(parent, pairs[idx].second);
    if (a != b) parent[a] = b;
  }
  return FindRoot(parent, start) == FindRoot(parent, goal);
}

std::optional<CtpInstance> TryGenerate(const CtpParams& params,
                                       std::mt19937_64& rng) {
  const int n = params.n_nodes;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CtpInstance instance;
  instance.observe_mode = params.observe_mode;
  for (int i = 0; i < n; ++i) instance.nodes.push_back({i, unit(rng), unit(rng)});
  const auto distance = [&](int a, int b) {
    return std::hypot(instance.nodes[a].x - instance.nodes[b].x,
                      instance.nodes[a].y - instance.nodes[b].y);
  };

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    std::vector<int> others;
    for (int j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    std::sort(others.begin(), others.end(), [&](int a, int b) {
      const double da = distance(i, a), db = distance(i, b);
      return da != db ? da < db : a < b;
    });
    const int k = std::min(params.edge_degree, n - 1);
    for (int t = 0; t < k; ++t)
      pairs.emplace_back(std::min(i, others[t]), std::max(i, others[t]));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  // All-open connectivity.
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  int components = n;
  for (const auto& [u, v] : pairs) {
    const int a = FindRoot(parent, u);
    const int b = FindRoot(parent, v);
    if (a == b) continue;
    parent[a] = b;
    --components;
  }
  if (components != 1) return std::nullopt;

  double far = -1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (distance(i, j) > far) {
        far = distance(i, j);
        instance.start = i;
        instance.goal = j;
      }
    }
  }

  // Stochastic edges go where they matter: edges on the cheapest all-open
  // routes first, skipping any edge whose loss would cut every certain
  // start-goal path.
  const auto from_start = OpenDistances(pairs, distance, n, instance.start);
  const auto from_goal = OpenDistances(pairs, distance, n, instance.goal);
  std::vector<double> detour(pairs.size());
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto [u, v] = pairs[idx];
    const double c = distance(u, v);
    detour[idx] = std::min(from_start[u] + c + from_goal[v],
                           from_start[v] + c + from_goal[u]);
  }
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detour[a] < detour[b];
  });
  const std::size_t n_stochastic =
      params.stochastic_edges
          ? static_cast<std::size_t>(*params.stochastic_edges)
          : static_cast<std::size_t>(std::llround(
                params.stochastic_fraction * static_cast<double>(pairs.size())));
  std::vector<bool> stochastic(pairs.size(), false);
  std::size_t chosen = 0;
  for (std::size_t idx : order) {
    if (chosen == n_stochastic) break;
    stochastic[idx] = true;
    if (CertainRouteExists(pairs, stochastic, n, instance.start, instance.goal)) {
      ++chosen;
    } else {
      stochastic[idx] = false;
    }
  }
  if (chosen != n_stochastic) return std::nullopt;

  std::uniform_real_distribution<double> block(params.block_prob_min,
                                               params.block_prob_max);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto [u, v] = pairs[idx];
    CtpEdge edge{u, v, distance(u, v), 0.0};
    if (stochastic[idx]) edge.block_prob = block(rng);
    instance.edges.push_back(edge);
  }

  return instance;
}

}  // namespace

std::string_view ToString(ObserveMode mode) {
  return mode == ObserveMode::kAtNode ? "at-node" : "on-traverse";
}

ObserveMode ParseObserveMode(std::string_view name) {
  if (name == "at-node") return ObserveMode::kAtNode;
  if (name == "on-traverse") return ObserveMode::kOnTraverse;
  throw std::invalid_argument("unknown observe mode: " + std::string(name));
}

int CtpInstance::num_stochastic() const {
  return static_cast<int>(std::count_if(
      edges.begin(), edges.end(),
      [](const CtpEdge& e) { return e.block_prob > 0.0; }));
}

void CtpInstance::Validate() const {
  const int n = static_cast<int>(nodes.size());
  if (n < 1) throw std::invalid_argument("CTP instance has no nodes");
  for (int i = 0; i < n; ++i)
    if (nodes[i].id != i)
      throw std::invalid_argument("CTP node ids must be 0..n-1 in order");
  if (start < 0 || start >= n || goal < 0 || goal >= n)
    throw std::invalid_argument("CTP start/goal out of range");
  std::vector<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v)
      throw std::invalid_argument("CTP edge endpoints invalid");
    if (!(e.cost > 0.0) || !std::isfinite(e.cost))
      throw std::invalid_argument("CTP edge cost must be positive");
    if (!(e.block_prob >= 0.0 && e.block_prob < 1.0))
      throw std::invalid_argument("CTP block probability must be in [0, 1)");
    seen.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw std::invalid_argument("CTP graph has parallel edges");
  const int m = num_stochastic();
  const int location_bits = static_cast<int>(std::bit_width(
      static_cast<unsigned>(n)));
  if (m + location_bits + 1 > 64)
    throw std::invalid_argument("too many stochastic edges for the encoding");
  if (!CertainPathExists(*this))
    throw std::invalid_argument("no all-certain path from start to goal");
}

CtpInstance GenerateCtp(const CtpParams& params, std::uint64_t seed) {
  if (params.n_nodes < 3) throw std::invalid_argument("n_nodes must be >= 3");
  if (params.edge_degree < 1)
    throw std::invalid_argument("edge_degree must be >= 1");
  if (!(params.block_prob_min > 0.0 &&
        params.block_prob_min <= params.block_prob_max &&
        params.block_prob_max < 1.0))
    throw std::invalid_argument("block probability range must be in (0, 1)");
  if (params.stochastic_edges && *params.stochastic_edges < 0)
    throw std::invalid_argument("stochastic_edges must be >= 0");
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    std::mt19937_64 rng(HashCombine(seed, static_cast<std::uint64_t>(attempt)));
    if (auto instance = TryGenerate(params, rng)) {
      instance->Validate();
      return *instance;
    }
  }
  throw std::runtime_error("CTP generation failed; increase edge_degree");
}

std::string CtpToJson(const CtpInstance& instance) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& node : instance.nodes)
    j["nodes"].push_back({{"id", node.id}, {"x", node.x}, {"y", node.y}});
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : instance.edges)
    j["edges"].push_back(
        {{"u", e.u}, {"v", e.v}, {"cost", e.cost}, {"block_prob", e.block_prob}});
  j["start"] = instance.start;
  j["goal"] = instance.goal;
  j["observe_mode"] = std::string(ToString(instance.observe_mode));
  return j.dump(1) + "\n";
}

CtpInstance CtpFromJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("CTP JSON syntax error at byte " +
                      std::to_string(e.byte));
  }
  try {
    CtpInstance instance;
    for (const auto& node : j.at("nodes")) {
      instance.nodes.push_back({node.at("id").get<int>(),
                                node.value("x", 0.0), node.value("y", 0.0)});
    }
    for (const auto& e : j.at("edges")) {
      instance.edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(),
                                e.at("cost").get<double>(),
                                e.value("block_prob", 0.0)});
    }
    instance.start = j.at("start").get<int>();
    instance.goal = j.at("goal").get<int>();
    instance.observe_mode =
        ParseObserveMode(j.value("observe_mode", std::string("at-node")));
    instance.Validate();
    return instance;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("CTP JSON schema error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid CTP instance: ") + e.what());
  }
}

CtpModel::CtpModel(CtpInstance instance) : instance_(std::move(instance)) {
  instance_.Validate();
  n_ = static_cast<int>(instance_.nodes.size());
  incident_.resize(static_cast<std::size_t>(n_));
  for (int e = 0; e < static_cast<int>(instance_.edges.size()); ++e) {
    const CtpEdge& edge = instance_.edges[e];
    int stochastic_index = -1;
    if (edge.block_prob > 0.0) {
      stochastic_index = static_cast<int>(stochastic_edges_.size());
      stochastic_edges_.push_back(e);
    }
    incident_[edge.u].push_back({e, edge.v, stochastic_index});
    incident_[edge.v].push_back({e, edge.u, stochastic_index});
    max_cost_ = std::max(max_cost_, edge.cost);
  }
  for (auto& list : incident_) {
    std::sort(list.begin(), list.end(), [](const Incident& a, const Incident& b) {
      return a.neighbour < b.neighbour;
    });
    max_degree_ = std::max(max_degree_, static_cast<int>(list.size()));
  }
  if (max_cost_ == 0.0) max_cost_ = 1.0;
}

StateRef CtpModel::MakeState(int location, std::uint64_t status_bits,
                             bool blocked_flag) const {
  return StateRef{((status_bits * static_cast<std::uint64_t>(n_) +
                    static_cast<std::uint64_t>(location))
                   << 1) |
                  (blocked_flag ? 1u : 0u)};
}

int CtpModel::Location(StateRef state) const {
  return static_cast<int>((state.id >> 1) % static_cast<std::uint64_t>(n_));
}

std::uint64_t CtpModel::Bits(StateRef state) const {
  return (state.id >> 1) / static_cast<std::uint64_t>(n_);
}

bool CtpModel::Blocked(StateRef state, int stochastic_index) const {
  return (Bits(state) >> stochastic_index) & 1u;
}

bool CtpModel::LastMoveBlocked(StateRef state) const { return state.id & 1u; }

bool CtpModel::IsGoal(StateRef state) const {
  return Location(state) == instance_.goal;
}

StateRef CtpModel::Next(StateRef state, ActionId action) const {
  if (IsGoal(state)) return state;
  const int loc = Location(state);
  const auto& list = incident_[loc];
  if (action < 0 || action >= static_cast<int>(list.size()))
    return MakeState(loc, Bits(state), false);
  const Incident& slot = list[action];
  if (slot.stochastic_index >= 0 && Blocked(state, slot.stochastic_index))
    return MakeState(loc, Bits(state), true);
  return MakeState(slot.neighbour, Bits(state), false);
}

ObservationId CtpModel::Observe(StateRef next, ActionId /*action*/) const {
  const auto loc = static_cast<std::uint64_t>(Location(next));
  if (instance_.observe_mode == ObserveMode::kOnTraverse)
    return ObservationId{loc | (LastMoveBlocked(next) ? 1ULL << kLocationShift
                                                      : 0ULL)};
  std::uint64_t statuses = 0;
  int bit = 0;
  for (const Incident& slot : incident_[loc]) {
    if (slot.stochastic_index < 0) continue;
    if (Blocked(next, slot.stochastic_index)) statuses |= 1ULL << bit;
    ++bit;
  }
  return ObservationId{(statuses << kLocationShift) | loc};
}

double CtpModel::Cost(StateRef state, ActionId action) const {
  if (IsGoal(state)) return 0.0;
  const auto& list = incident_[Location(state)];
  if (action < 0 || action >= static_cast<int>(list.size())) return max_cost_;
  return instance_.edges[list[action].edge].cost;
}

StateRef CtpModel::SampleInitialState(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < stochastic_edges_.size(); ++i)
    if (unit(rng) < instance_.edges[stochastic_edges_[i]].block_prob)
      bits |= 1ULL << i;
  return MakeState(instance_.start, bits, false);
}

std::optional<Belief> CtpModel::ExactInitialBelief() const {
  const std::size_t m = stochastic_edges_.size();
  if (m > 16) return std::nullopt;
  std::vector<Belief::Entry> entries;
  entries.reserve(std::size_t{1} << m);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    double p = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double q = instance_.edges[stochastic_edges_[i]].block_prob;
      p *= ((bits >> i) & 1u) ? q : 1.0 - q;
    }
    entries.emplace_back(MakeState(instance_.start, bits, false), p);
  }
  return Belief::FromWeights(std::move(entries));
}

std::string CtpModel::ActionName(ActionId action) const {
  return "slot" + std::to_string(action);
}

std::string CtpModel::ObservationName(ObservationId obs) const {
  const std::uint64_t loc = obs.token & ((1ULL << kLocationShift) - 1);
  const std::uint64_t rest = obs.token >> kLocationShift;
  if (loc >= static_cast<std::uint64_t>(n_)) return std::to_string(obs.token);
  if (instance_.observe_mode == ObserveMode::kOnTraverse)
    return "n" + std::to_string(loc) + (rest ? " blocked" : "");
  std::string name = "n" + std::to_string(loc);
  std::string statuses;
  int bit = 0;
  for (const Incident& slot : incident_[loc]) {
    if (slot.stochastic_index < 0) continue;
    statuses += ((rest >> bit) & 1u) ? 'x' : 'o';
    ++bit;
  }
  if (!statuses.empty()) name += " [" + statuses + "]";
  return name;
}

int CtpModel::DefaultHorizon() const { return 2 * n_; }

}  // namespace detmcvi
