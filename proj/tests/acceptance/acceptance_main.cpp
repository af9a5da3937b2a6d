#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "detmcvi/aostar.hpp"
#include "detmcvi/bounds.hpp"
#include "detmcvi/ctp.hpp"
#include "detmcvi/eval.hpp"
#include "detmcvi/hash.hpp"
#include "detmcvi/maze.hpp"
#include "detmcvi/rollout.hpp"
#include "detmcvi/solver.hpp"
#include "detmcvi/sort.hpp"
#include "detmcvi/tabular_model.hpp"
#include "oracles.hpp"
#include "random_detpomdp.hpp"

using namespace detmcvi;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Format(double value, int precision = 6) {
  std::ostringstream out;
  out << std::setprecision(precision) << value;
  return out.str();
}

constexpr int kSmallSuite = 25;
constexpr int kCtpInstances = 10;
constexpr int kCtpNodes = 20;
constexpr int kCtpStochastic = 12;
constexpr std::int64_t kTrials = 10000;
constexpr double kPlanBudget = 120.0;
constexpr std::uint64_t kEvalSeed = 2024;
constexpr std::uint64_t kCheckSeed = 77;

// ---------------------------------------------------------------------------
// Small-instance oracle suite (criteria 1 and 2).

struct SmallRun {
  double exact = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  double aostar = 0.0;
  bool converged = false;
  bool aostar_converged = false;
  double seconds = 0.0;
  std::int64_t iterations = 0;
  int sandwich_violations = 0;
  int monotonicity_violations = 0;
};

std::vector<TabularSpec> RandomSpecs(std::uint64_t first_seed, int count) {
  std::vector<TabularSpec> specs;
  for (int i = 0; i < count; ++i)
    specs.push_back(testing::RandomDetPomdp(first_seed + static_cast<std::uint64_t>(i)));
  return specs;
}

/// Small CTP, Maze and Sort instances in tabular form, for per-iteration bound
/// checks on runs that take many iterations.
std::vector<TabularSpec> DomainSpecs() {
  std::vector<TabularSpec> specs;
  const auto add = [&](const DetPomdpModel& model) {
    if (auto spec = testing::Tabulate(model, 4000)) specs.push_back(std::move(*spec));
  };
  for (int i = 0; i < 12; ++i) {
    CtpParams params;
    params.n_nodes = 6 + i % 4;
    params.stochastic_edges = 3 + i % 3;
    params.observe_mode = i % 2 == 0 ? ObserveMode::kAtNode : ObserveMode::kOnTraverse;
    add(CtpModel(GenerateCtp(params, 300 + static_cast<std::uint64_t>(i))));
  }
  add(SortModel(3));
  for (std::uint64_t i = 0; i < 3; ++i) add(MazeModel(GenerateMaze(3, i)));
  return specs;
}

std::vector<SmallRun> RunSmallSuite(const std::vector<TabularSpec>& specs) {
  std::vector<SmallRun> runs;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const TabularSpec& spec = specs[i];
    const TabularModel model(spec);
    SmallRun run;
    run.exact = testing::SolveBeliefMdp(spec).value;

    SolverConfig config;
    config.epsilon = 1e-6;
    config.max_depth = 100;
    config.rollout_depth = 2000;
    config.seed = i;
    const auto start = Clock::now();
    DetMcviSolver solver(model, *model.ExactInitialBelief(), config);
    double last_upper = kInfinity;
    double last_lower = -kInfinity;
    while (Seconds(start) < 10.0) {
      const bool more = solver.Iterate();
      if (solver.lower() > run.exact + 1e-9 || run.exact > solver.upper() + 1e-6)
        ++run.sandwich_violations;
      if (solver.upper() > last_upper || solver.lower() < last_lower)
        ++run.monotonicity_violations;
      last_upper = solver.upper();
      last_lower = solver.lower();
      if (!more) break;
    }
    run.seconds = Seconds(start);
    run.converged = solver.finished();
    run.upper = solver.upper();
    run.lower = solver.lower();
    run.iterations = solver.stats().iterations;

    AoStarConfig ao;
    ao.max_depth = 100;
    const AoStarResult aostar = SolveAoStar(model, *model.ExactInitialBelief(), ao);
    run.aostar = aostar.value;
    run.aostar_converged = aostar.converged && !aostar.depth_limited;
    runs.push_back(run);
  }
  return runs;
}

Verdict CriterionOracle(const std::vector<SmallRun>& runs, const fs::path& out_dir) {
  std::ofstream csv(out_dir / "oracle_suite.csv");
  csv << std::setprecision(17)
      << "instance,exact,upper,lower,aostar,converged,iterations,seconds\n";
  int ok = 0, aostar_ok = 0;
  double worst_gap = 0.0, worst_time = 0.0, worst_aostar = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const SmallRun& r = runs[i];
    csv << i << ',' << r.exact << ',' << r.upper << ',' << r.lower << ',' << r.aostar
        << ',' << r.converged << ',' << r.iterations << ',' << r.seconds << '\n';
    const double gap = std::abs(r.upper - r.exact);
    worst_gap = std::max(worst_gap, gap);
    worst_time = std::max(worst_time, r.seconds);
    worst_aostar = std::max(worst_aostar, std::abs(r.aostar - r.exact));
    if (r.converged && gap <= 1e-6 && r.seconds < 10.0) ++ok;
    if (r.aostar_converged && std::abs(r.aostar - r.exact) <= 1e-9) ++aostar_ok;
  }
  const int n = static_cast<int>(runs.size());
  return {ok == n && aostar_ok == n,
          "detmcvi " + std::to_string(ok) + "/" + std::to_string(n) +
              " converged within 1e-6 (max |V-V*| " + Format(worst_gap) +
              ", max time " + Format(worst_time, 3) + " s); AO* " +
              std::to_string(aostar_ok) + "/" + std::to_string(n) +
              " exact (max error " + Format(worst_aostar) + ")"};
}

Verdict CriterionSandwich(const std::vector<SmallRun>& runs) {
  std::int64_t iterations = 0;
  int sandwich = 0, monotone = 0;
  for (const auto& r : runs) {
    iterations += r.iterations;
    sandwich += r.sandwich_violations;
    monotone += r.monotonicity_violations;
  }
  return {sandwich == 0 && monotone == 0,
          std::to_string(runs.size()) + " instances, " + std::to_string(iterations) +
              " iterations, " + std::to_string(sandwich) +
              " sandwich violations, " + std::to_string(monotone) +
              " monotonicity violations"};
}

// ---------------------------------------------------------------------------
// Planning runs on CTP and Sort (criteria 3, 4, 8 and 9).

struct PlanRun {
  std::string name;
  std::string policy_json;
  std::string summary_csv;
  MetricsSummary summary;
  SolveStatus status = SolveStatus::kIterationBudget;
  double plan_seconds = 0.0;
  std::size_t fsc_nodes = 0;
  std::size_t aostar_nodes = 0;
  bool aostar_converged = false;
  /// Whether the AO* plan ever chooses differently after different observations.
  bool aostar_branches = false;
  double min_regret = kInfinity;
  double min_ratio = kInfinity;
};

SolverConfig PlanConfig(int horizon, std::uint64_t seed) {
  SolverConfig config;
  config.epsilon = 0.01;
  config.max_depth = horizon;
  config.max_belief_support = 10000;
  config.time_budget = kPlanBudget;
  config.seed = seed;
  config.eval_interval = 5.0;
  config.stop_check_interval = 10;
  return config;
}

PlanRun PlanAndEvaluate(const std::string& name, const DetPomdpModel& model,
                        int horizon, std::uint64_t seed, bool with_aostar) {
  PlanRun run;
  run.name = name;
  SolverConfig config = PlanConfig(horizon, seed);
  config.stop_check = [&](const Fsc& fsc) {
    TrialConfig check;
    check.trials = kTrials;
    check.horizon = horizon;
    check.seed = kCheckSeed;
    return RunTrials(fsc, model, check).summary.successes == kTrials;
  };
  const auto start = Clock::now();
  const SolveResult result = SolveDetMcvi(model, config);
  run.plan_seconds = Seconds(start);
  run.status = result.status;
  run.fsc_nodes = result.policy.size();
  run.policy_json = ExportJson(result.policy);

  TrialConfig eval;
  eval.trials = kTrials;
  eval.horizon = horizon;
  eval.seed = kEvalSeed;
  const TrialReport report = RunTrials(result.policy, model, eval);
  run.summary = report.summary;
  std::ostringstream summary;
  WriteSummaryCsv(report.summary, summary);
  run.summary_csv = summary.str();
  for (const auto& t : report.trials) {
    if (t.outcome != TrialOutcome::kSuccess) continue;
    if (t.regret) run.min_regret = std::min(run.min_regret, *t.regret);
    if (t.competitive_ratio) run.min_ratio = std::min(run.min_ratio, *t.competitive_ratio);
  }

  if (with_aostar) {
    AoStarConfig ao;
    ao.max_depth = horizon;
    ao.time_budget = 600.0;
    const AoStarResult aostar =
        SolveAoStar(model, PlanningBelief(model, config.max_belief_support, seed), ao);
    run.aostar_nodes = aostar.policy.size();
    run.aostar_converged = aostar.converged;
    for (std::size_t v = 0; v < aostar.policy.size(); ++v)
      if (aostar.policy.node(static_cast<NodeIndex>(v)).edges.size() > 1)
        run.aostar_branches = true;
  }
  return run;
}

CtpInstance CtpSuiteInstance(int index) {
  CtpParams params;
  params.n_nodes = kCtpNodes;
  params.stochastic_edges = kCtpStochastic;
  return GenerateCtp(params, 500 + static_cast<std::uint64_t>(index));
}

std::vector<PlanRun> RunCtpSuite() {
  std::vector<PlanRun> runs;
  for (int i = 0; i < kCtpInstances; ++i) {
    const CtpModel model(CtpSuiteInstance(i));
    runs.push_back(PlanAndEvaluate("ctp" + std::to_string(i), model, model.DefaultHorizon(),
                                   static_cast<std::uint64_t>(i), true));
  }
  return runs;
}

void WritePlanCsv(const std::vector<PlanRun>& runs, const fs::path& path) {
  std::ofstream csv(path);
  csv << std::setprecision(10)
      << "instance,status,plan_seconds,sr_percent,mean_regret,mean_cr,fsc_nodes,"
         "aostar_nodes,aostar_branches\n";
  for (const auto& r : runs)
    csv << r.name << ',' << ToString(r.status) << ',' << r.plan_seconds << ','
        << r.summary.success_rate_percent << ',' << r.summary.mean_regret << ','
        << r.summary.mean_competitive_ratio << ',' << r.fsc_nodes << ',' << r.aostar_nodes
        << ',' << r.aostar_branches << '\n';
}

Verdict CriterionCtp(const std::vector<PlanRun>& runs, const fs::path& out_dir) {
  WritePlanCsv(runs, out_dir / "ctp_suite.csv");
  int success_ok = 0, size_ok = 0;
  double worst_sr = 100.0, worst_ratio = 0.0, worst_time = 0.0;
  double fsc_total = 0.0, aostar_total = 0.0;
  std::size_t smallest_tree = 0;
  for (const auto& r : runs) {
    const auto fsc = static_cast<double>(r.fsc_nodes);
    const auto tree = static_cast<double>(r.aostar_nodes);
    const double ratio = tree > 0.0 ? fsc / tree : kInfinity;
    fsc_total += fsc;
    aostar_total += tree;
    worst_sr = std::min(worst_sr, r.summary.success_rate_percent);
    worst_time = std::max(worst_time, r.plan_seconds);
    worst_ratio = std::max(worst_ratio, ratio);
    if (smallest_tree == 0 || r.aostar_nodes < smallest_tree) smallest_tree = r.aostar_nodes;
    if (r.summary.success_rate_percent >= 99.0 && r.plan_seconds <= kPlanBudget) ++success_ok;
    if (ratio <= 0.25) ++size_ok;
  }
  const int n = static_cast<int>(runs.size());
  return {success_ok == n && size_ok == n,
          "success rate and time met on " + std::to_string(success_ok) + "/" +
              std::to_string(n) + " (min SR " + Format(worst_sr, 5) + "%, max plan time " +
              Format(worst_time, 3) + " s); FSC <= 0.25 x AO* nodes on " +
              std::to_string(size_ok) + "/" + std::to_string(n) + " (max ratio " +
              Format(worst_ratio, 3) + ", smallest AO* plan " + std::to_string(smallest_tree) +
              " nodes, total ratio " +
              Format(aostar_total > 0.0 ? fsc_total / aostar_total : kInfinity, 3) + ")"};
}

Verdict CriterionSort(const PlanRun& run) {
  const bool pass = run.summary.success_rate_percent == 100.0 &&
                    run.plan_seconds <= kPlanBudget;
  return {pass, "SR " + Format(run.summary.success_rate_percent, 6) + "% over " +
                    std::to_string(run.summary.trials) + " trials, plan time " +
                    Format(run.plan_seconds, 3) + " s, " + std::to_string(run.fsc_nodes) +
                    " FSC nodes, status " + std::string(ToString(run.status))};
}

// ---------------------------------------------------------------------------
// Criterion 5: rollout exactness.

Fsc RandomCompleteFsc(std::mt19937_64& rng, int nodes, int actions,
                      const std::vector<std::uint64_t>& observations) {
  std::vector<FscNode> list(static_cast<std::size_t>(nodes));
  std::uniform_int_distribution<int> pick_action(0, actions - 1);
  std::uniform_int_distribution<int> pick_node(0, nodes - 1);
  for (auto& node : list) {
    node.action = pick_action(rng);
    for (std::uint64_t o : observations)
      node.edges.emplace_back(ObservationId{o}, pick_node(rng));
  }
  return Fsc::FromNodes(std::move(list), 0);
}

Verdict CriterionRolloutExactness() {
  constexpr int kPairs = 10000;
  int checked = 0, mismatches = 0, attempts = 0;
  std::mt19937_64 rng(5);
  std::uint64_t model_seed = 0;
  while (checked < kPairs && attempts < 50 * kPairs) {
    const auto spec = testing::RandomDetPomdp(9000 + model_seed++);
    const TabularModel model(spec);
    std::set<std::uint64_t> obs_set;
    for (const auto& row : spec.observation) obs_set.insert(row.begin(), row.end());
    const std::vector<std::uint64_t> observations(obs_set.begin(), obs_set.end());
    const Fsc fsc = RandomCompleteFsc(rng, 1 + static_cast<int>(rng() % 6),
                                      spec.num_actions, observations);
    RolloutConfig a, b;
    a.fallback_seed = rng();
    b.fallback_seed = rng();
    a.depth_bound = b.depth_bound = 200;
    RolloutEngine first(model, fsc, a), second(model, fsc, b);
    for (int k = 0; k < 20 && checked < kPairs; ++k) {
      ++attempts;
      const auto v = static_cast<NodeIndex>(rng() % fsc.size());
      const StateRef s{rng() % static_cast<std::uint64_t>(spec.num_states)};
      // Independent trajectory: must reach a goal while staying on the FSC.
      double cost = 0.0;
      StateRef state = s;
      NodeIndex node = v;
      bool reached = false;
      for (int t = 0; t < 200; ++t) {
        if (model.IsGoal(state)) {
          reached = true;
          break;
        }
        const ActionId action = fsc.node(node).action;
        cost += model.Cost(state, action);
        state = model.Next(state, action);
        node = fsc.node(node).Successor(model.Observe(state, action));
      }
      if (!reached) continue;
      const RolloutOutcome x = first.Alpha(v, s);
      const RolloutOutcome y = second.Alpha(v, s);
      const RolloutOutcome cached = first.Alpha(v, s);
      RolloutEngine fresh(model, fsc, a);
      const RolloutOutcome z = fresh.Alpha(v, s);
      ++checked;
      if (!(x.value == y.value && x.value == cached.value && x.value == z.value &&
            x.value == cost && x.stayed_on_fsc && x.reached_goal))
        ++mismatches;
    }
  }
  return {checked == kPairs && mismatches == 0,
          std::to_string(checked) + " on-controller pairs, " + std::to_string(mismatches) +
              " mismatches between seeds, cache, fresh engines and direct simulation"};
}

// ---------------------------------------------------------------------------
// Criterion 6: support monotonicity.

Verdict CriterionSupportMonotonicity() {
  constexpr int kPairs = 100000;
  std::vector<std::unique_ptr<DetPomdpModel>> models;
  for (std::uint64_t i = 0; i < 8; ++i)
    models.push_back(std::make_unique<TabularModel>(testing::RandomDetPomdp(7000 + i)));
  models.push_back(std::make_unique<CtpModel>(CtpSuiteInstance(0)));
  {
    CtpParams params;
    params.n_nodes = 12;
    params.stochastic_edges = 6;
    params.observe_mode = ObserveMode::kOnTraverse;
    models.push_back(std::make_unique<CtpModel>(GenerateCtp(params, 3)));
  }
  models.push_back(std::make_unique<MazeModel>(GenerateMaze(5, 1)));
  models.push_back(std::make_unique<SortModel>(5));

  std::mt19937_64 rng(11);
  int pairs = 0, violations = 0;
  while (pairs < kPairs) {
    for (const auto& model : models) {
      Belief belief = *model->ExactInitialBelief();
      if (belief.size() > 256) belief = WeightedSubset(belief, 1 + rng() % 256, rng);
      const int depth = static_cast<int>(rng() % 6);
      for (int d = 0; d <= depth && pairs < kPairs; ++d) {
        const auto action = static_cast<ActionId>(rng() % model->NumActions());
        const auto branches = BeliefSuccessors(*model, belief, action);
        ++pairs;
        for (const auto& branch : branches)
          if (branch.belief.size() > belief.size()) ++violations;
        belief = branches[rng() % branches.size()].belief;
      }
    }
  }
  return {violations == 0, std::to_string(pairs) + " belief/action pairs over " +
                               std::to_string(models.size()) + " models, " +
                               std::to_string(violations) + " support increases"};
}

// ---------------------------------------------------------------------------
// Criterion 7: downsampling.

Verdict CriterionDownsampling(const fs::path& out_dir) {
  CtpParams params;
  params.n_nodes = kCtpNodes;
  params.stochastic_edges = 11;
  const CtpModel model(GenerateCtp(params, 42));
  const Belief exact = *model.ExactInitialBelief();
  const bool exact_size = exact.size() == 2048;
  const bool full = PlanningBelief(model, 4096, 1) == exact;
  const Belief small = PlanningBelief(model, 256, 1);
  double mass = 0.0;
  for (const auto& [s, p] : small) mass += p;
  const bool small_ok = small.size() == 256 && std::abs(mass - 1.0) <= 1e-9;

  std::ofstream csv(out_dir / "downsampling.csv");
  csv << std::setprecision(10) << "max_support,planning_support,sr_percent,fsc_nodes,plan_seconds\n";
  for (int n : {8, 32, 128, 512, 2048}) {
    SolverConfig config = PlanConfig(model.DefaultHorizon(), 3);
    config.max_belief_support = n;
    config.time_budget = 20.0;
    const auto start = Clock::now();
    const SolveResult result = SolveDetMcvi(model, config);
    const double seconds = Seconds(start);
    TrialConfig eval;
    eval.trials = kTrials;
    eval.horizon = model.DefaultHorizon();
    eval.seed = kEvalSeed;
    const TrialReport report = RunTrials(result.policy, model, eval);
    csv << n << ',' << PlanningBelief(model, n, 3).size() << ','
        << report.summary.success_rate_percent << ',' << result.policy.size() << ','
        << seconds << '\n';
  }
  return {exact_size && full && small_ok,
          "exact support " + std::to_string(exact.size()) + ", N=4096 " +
              (full ? "equals" : "differs from") + " the exact belief, N=256 gives " +
              std::to_string(small.size()) + " states with mass " + Format(mass, 15) +
              "; SR-vs-N curve in downsampling.csv"};
}

// ---------------------------------------------------------------------------
// Criterion 8: metric contracts and heuristic admissibility.

int CheckDistAgainstDijkstra(const DetPomdpModel& model, int* instances) {
  const DistCache dist(model, 1000);
  int violations = 0;
  bool counted = false;
  const Belief initial = *model.ExactInitialBelief();
  for (const auto& [s, p] : initial) {
    const auto oracle = testing::DijkstraDistances(model, s, 5000);
    if (!oracle) continue;
    counted = true;
    const double expected = oracle->at(s.id);
    const double got = dist.Dist(s);
    if (got > expected + 1e-9 || std::abs(got - expected) > 1e-9 * std::max(1.0, expected))
      ++violations;
  }
  if (counted) ++*instances;
  return violations;
}

Verdict CriterionMetrics(const std::vector<PlanRun>& ctp, const PlanRun& sort) {
  double min_regret = kInfinity, min_ratio = kInfinity;
  for (const auto* r : [&] {
         std::vector<const PlanRun*> all;
         for (const auto& c : ctp) all.push_back(&c);
         all.push_back(&sort);
         return all;
       }()) {
    min_regret = std::min(min_regret, r->min_regret);
    min_ratio = std::min(min_ratio, r->min_ratio);
  }
  int instances = 0, violations = 0;
  for (int i = 0; i < kCtpInstances; ++i)
    violations += CheckDistAgainstDijkstra(CtpModel(CtpSuiteInstance(i)), &instances);
  violations += CheckDistAgainstDijkstra(SortModel(5), &instances);
  violations += CheckDistAgainstDijkstra(MazeModel(GenerateMaze(5, 1)), &instances);
  for (int i = 0; i < kSmallSuite; ++i)
    violations += CheckDistAgainstDijkstra(
        TabularModel(testing::RandomDetPomdp(1000 + static_cast<std::uint64_t>(i))),
        &instances);
  const bool pass = min_regret >= -1e-9 && min_ratio >= 1.0 - 1e-9 && violations == 0;
  return {pass, "min regret " + Format(min_regret) + ", min competitive ratio " +
                    Format(min_ratio) + ", dist checked on " + std::to_string(instances) +
                    " instances with " + std::to_string(violations) + " mismatches"};
}

// ---------------------------------------------------------------------------
// Criterion 9: determinism.

Verdict CriterionDeterminism(const std::vector<PlanRun>& first, const fs::path& out_dir) {
  const std::vector<PlanRun> second = RunCtpSuite();
  int identical = 0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i].policy_json == second[i].policy_json &&
        first[i].summary_csv == second[i].summary_csv)
      ++identical;
    std::ofstream(out_dir / (first[i].name + "_policy.json")) << first[i].policy_json;
    std::ofstream(out_dir / (first[i].name + "_summary.csv")) << first[i].summary_csv;
  }
  return {identical == static_cast<int>(first.size()),
          std::to_string(identical) + "/" + std::to_string(first.size()) +
              " CTP runs byte-identical (policy JSON and summary CSV)"};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path out_dir = "acceptance_out";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--out-dir" && i + 1 < argc) {
      out_dir = argv[++i];
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      std::string item;
      while (std::getline(list, item, ',')) only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--out-dir DIR] [--only 1,2,...]\n";
      return 64;
    }
  }
  fs::create_directories(out_dir);
  const auto wanted = [&](int c) { return only.empty() || only.count(c) > 0; };

  int failures = 0;
  const auto report = [&](int id, const std::string& title, const Verdict& v) {
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << id << " (" << title
              << "): " << v.detail << std::endl;
    if (!v.pass) ++failures;
  };

  if (wanted(1) || wanted(2)) {
    auto runs = RunSmallSuite(RandomSpecs(1000, kSmallSuite));
    if (wanted(1)) report(1, "oracle equivalence", CriterionOracle(runs, out_dir));
    if (wanted(2)) {
      for (const auto& specs : {RandomSpecs(2000, 8 * kSmallSuite), DomainSpecs()}) {
        const auto extra = RunSmallSuite(specs);
        runs.insert(runs.end(), extra.begin(), extra.end());
      }
      report(2, "bound sandwich and monotonicity", CriterionSandwich(runs));
    }
  }
  std::vector<PlanRun> ctp;
  PlanRun sort;
  if (wanted(3) || wanted(8) || wanted(9)) ctp = RunCtpSuite();
  if (wanted(4) || wanted(8)) {
    const SortModel model(5);
    sort = PlanAndEvaluate("sort5", model, model.DefaultHorizon(), 0, false);
    WritePlanCsv({sort}, out_dir / "sort.csv");
  }
  if (wanted(3)) report(3, "CTP n=20 success rate and controller size", CriterionCtp(ctp, out_dir));
  if (wanted(4)) report(4, "Sort n=5 success rate", CriterionSort(sort));
  if (wanted(5)) report(5, "rollout exactness", CriterionRolloutExactness());
  if (wanted(6)) report(6, "support monotonicity", CriterionSupportMonotonicity());
  if (wanted(7)) report(7, "downsampling soundness", CriterionDownsampling(out_dir));
  if (wanted(8)) report(8, "metric contracts", CriterionMetrics(ctp, sort));
  if (wanted(9)) report(9, "determinism", CriterionDeterminism(ctp, out_dir));
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
