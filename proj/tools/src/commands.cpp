#include "detmcvi_cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "detmcvi/aostar.hpp"
#include "detmcvi/ctp.hpp"
#include "detmcvi/eval.hpp"
#include "detmcvi/fsc.hpp"
#include "detmcvi/maze.hpp"
#include "detmcvi/qmdp_tree.hpp"
#include "detmcvi/solver.hpp"
#include "detmcvi/sort.hpp"
#include "detmcvi_cli/instance.hpp"
#include "json.hpp"

namespace detmcvi::cli {

namespace {

struct GenOptions {
  std::string domain;
  int n = 5;
  std::uint64_t seed = 0;
  std::string out;
  int degree = 4;
  std::optional<int> stochastic_edges;
  double stochastic_fraction = 0.5;
  double block_min = 0.2;
  double block_max = 0.8;
  std::string observe = "at-node";
};

struct SolveOptions {
  std::string instance;
  std::string solver = "detmcvi";
  double epsilon = 0.01;
  int max_support = 10000;
  int max_depth = 0;
  double time_budget = 0.0;
  std::size_t node_budget = 0;
  std::int64_t iteration_budget = 0;
  int k_rollouts = 16;
  std::uint64_t seed = 0;
  double eval_interval = 5.0;
  int check_trials = 0;
  int check_every = 10;
  std::string policy_out;
  std::string trace_out;
  std::string manifest_out;
};

struct EvalOptions {
  std::string policy;
  std::string instance;
  std::int64_t trials = 10000;
  int horizon = 0;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string trials_csv;
  std::string summary_csv;
  std::optional<double> plan_time;
};

struct ExportOptions {
  std::string policy;
  std::string format = "json";
  std::string instance;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int CmdGen(const GenOptions& opt, std::ostream& out) {
  std::string contents;
  if (opt.domain == "ctp") {
    CtpParams params;
    params.n_nodes = opt.n;
    params.edge_degree = opt.degree;
    params.stochastic_edges = opt.stochastic_edges;
    params.stochastic_fraction = opt.stochastic_fraction;
    params.block_prob_min = opt.block_min;
    params.block_prob_max = opt.block_max;
    params.observe_mode = ParseObserveMode(opt.observe);
    contents = CtpToJson(GenerateCtp(params, opt.seed));
  } else if (opt.domain == "maze") {
    contents = MazeToAscii(GenerateMaze(opt.n, opt.seed));
  } else if (opt.domain == "sort") {
    SortModel check(opt.n);
    contents = nlohmann::json{{"n", opt.n}}.dump() + "\n";
  } else {
    throw UsageError("unknown domain: " + opt.domain);
  }
  if (opt.out.empty() || opt.out == "-") {
    out << contents;
  } else {
    WriteFile(opt.out, contents);
  }
  return kExitOk;
}

std::optional<std::size_t> CacheLimitFromEnv() {
  const char* value = std::getenv("DETMCVI_ALPHA_CACHE_LIMIT");
  if (value == nullptr || *value == '\0') return std::nullopt;
  try {
    return static_cast<std::size_t>(std::stoull(value));
  } catch (const std::exception&) {
    throw UsageError("DETMCVI_ALPHA_CACHE_LIMIT must be a non-negative integer");
  }
}

nlohmann::ordered_json Manifest(const SolveOptions& opt,
                                const LoadedInstance& loaded, int depth) {
  nlohmann::ordered_json j;
  j["domain"] = loaded.domain;
  j["instance"] = opt.instance;
  j["solver"] = opt.solver;
  j["config"] = {{"epsilon", opt.epsilon},
                 {"max_depth", depth},
                 {"max_belief_support", opt.max_support},
                 {"time_budget", opt.time_budget},
                 {"node_budget", opt.node_budget},
                 {"iteration_budget", opt.iteration_budget},
                 {"k_fallback_rollouts", opt.k_rollouts},
                 {"eval_interval", opt.eval_interval},
                 {"check_trials", opt.check_trials},
                 {"check_every", opt.check_every}};
  j["seed"] = opt.seed;
  j["outputs"] = {{"policy", opt.policy_out}, {"trace", opt.trace_out}};
  return j;
}

int CmdSolve(const SolveOptions& opt, std::ostream& out) {
  if (opt.solver != "detmcvi" && opt.solver != "aostar" &&
      opt.solver != "qmdp-tree")
    throw UsageError("unknown solver: " + opt.solver);
  const LoadedInstance loaded = LoadInstance(opt.instance);
  const DetPomdpModel& model = *loaded.model;
  const int depth = opt.max_depth > 0 ? opt.max_depth : loaded.default_horizon;
  const Belief belief = PlanningBelief(model, opt.max_support, opt.seed);

  Fsc policy;
  bool converged = false;
  std::ostringstream summary;
  summary.precision(17);
  if (opt.solver == "detmcvi") {
    SolverConfig config;
    config.epsilon = opt.epsilon;
    config.max_depth = depth;
    config.max_belief_support = opt.max_support;
    config.time_budget = opt.time_budget;
    config.node_budget = opt.node_budget;
    config.iteration_budget = opt.iteration_budget;
    config.k_fallback_rollouts = opt.k_rollouts;
    config.seed = opt.seed;
    config.eval_interval = opt.eval_interval;
    if (auto limit = CacheLimitFromEnv()) config.alpha_cache_limit = *limit;
    if (opt.check_trials > 0) {
      config.stop_check_interval = std::max(1, opt.check_every);
      config.stop_check = [&](const Fsc& fsc) {
        TrialConfig trials;
        trials.trials = opt.check_trials;
        trials.horizon = loaded.default_horizon;
        trials.seed = opt.seed;
        return RunTrials(fsc, model, trials).summary.successes ==
               opt.check_trials;
      };
    }
    DetMcviSolver solver(model, belief, config);
    const SolveResult result = solver.Solve();
    policy = result.policy;
    converged = result.converged();
    if (!opt.trace_out.empty()) {
      std::ofstream trace(opt.trace_out);
      if (!trace) throw std::runtime_error("cannot write " + opt.trace_out);
      result.trace.WriteCsv(trace);
    }
    summary << "status=" << ToString(result.status) << " upper=" << result.upper
            << " lower=" << result.lower
            << " iterations=" << result.stats.iterations;
  } else if (opt.solver == "aostar") {
    AoStarConfig config;
    config.max_depth = depth;
    config.time_budget = opt.time_budget;
    config.node_budget = opt.node_budget;
    const AoStarResult result = SolveAoStar(model, belief, config);
    policy = result.policy;
    converged = result.converged;
    summary << "status=" << (converged ? "converged" : "budget")
            << " value=" << result.value
            << " expansions=" << result.expansions;
  } else {
    QmdpTreeConfig config;
    config.max_depth = depth;
    config.node_budget = opt.node_budget;
    const QmdpTreeResult result = SolveQmdpTree(model, belief, config);
    policy = result.policy;
    converged = !result.truncated || opt.node_budget == 0;
    summary << "status=" << (converged ? "complete" : "budget");
  }
  if (!opt.policy_out.empty()) WriteFile(opt.policy_out, ExportJson(policy));
  if (!opt.manifest_out.empty())
    WriteFile(opt.manifest_out, Manifest(opt, loaded, depth).dump(1) + "\n");
  out << summary.str() << " fsc_nodes=" << policy.size() << "\n";
  return converged ? kExitOk : kExitBudgetExhausted;
}

int CmdEval(const EvalOptions& opt, std::ostream& out) {
  const LoadedInstance loaded = LoadInstance(opt.instance);
  const Fsc policy = ImportJson(ReadFile(opt.policy));
  TrialConfig config;
  config.trials = opt.trials;
  config.horizon = opt.horizon > 0 ? opt.horizon : loaded.default_horizon;
  config.seed = opt.seed;
  config.jobs = opt.jobs;
  TrialReport report = RunTrials(policy, *loaded.model, config);
  report.summary.plan_time_seconds = opt.plan_time;
  if (!opt.trials_csv.empty()) {
    std::ofstream csv(opt.trials_csv);
    if (!csv) throw std::runtime_error("cannot write " + opt.trials_csv);
    WriteTrialsCsv(report.trials, csv);
  }
  if (!opt.summary_csv.empty()) {
    std::ofstream csv(opt.summary_csv);
    if (!csv) throw std::runtime_error("cannot write " + opt.summary_csv);
    WriteSummaryCsv(report.summary, csv);
  }
  WriteSummaryCsv(report.summary, out);
  return kExitOk;
}

int CmdExport(const ExportOptions& opt, std::ostream& out) {
  const Fsc policy = ImportJson(ReadFile(opt.policy));
  if (opt.format == "json") {
    out << ExportJson(policy);
  } else if (opt.format == "dot") {
    std::optional<LoadedInstance> loaded;
    if (!opt.instance.empty()) loaded = LoadInstance(opt.instance);
    out << ExportDot(policy, loaded ? loaded->model.get() : nullptr);
  } else {
    throw UsageError("unknown format: " + opt.format);
  }
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Finite-state controller planning for deterministic POMDPs",
               "detmcvi"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a problem instance");
  gen_cmd->add_option("domain", gen.domain, "ctp, maze or sort")
      ->required()
      ->check(CLI::IsMember({"ctp", "maze", "sort"}));
  gen_cmd->add_option("--n", gen.n, "Size: CTP nodes, maze rooms per side, sort items")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--out,-o", gen.out, "Output file (stdout if omitted)");
  gen_cmd->add_option("--degree", gen.degree, "CTP nearest-neighbour degree")
      ->capture_default_str();
  gen_cmd->add_option("--stochastic-edges", gen.stochastic_edges,
                      "CTP number of stochastic edges");
  gen_cmd->add_option("--stochastic-fraction", gen.stochastic_fraction,
                      "CTP fraction of edges made stochastic")
      ->capture_default_str();
  gen_cmd->add_option("--block-min", gen.block_min, "CTP minimum block probability")
      ->capture_default_str();
  gen_cmd->add_option("--block-max", gen.block_max, "CTP maximum block probability")
      ->capture_default_str();
  gen_cmd->add_option("--observe", gen.observe, "CTP observation mode")
      ->check(CLI::IsMember({"at-node", "on-traverse"}))
      ->capture_default_str();

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Plan a policy for an instance");
  solve_cmd->add_option("instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--solver", solve.solver, "detmcvi, aostar or qmdp-tree")
      ->capture_default_str();
  solve_cmd->add_option("--epsilon", solve.epsilon, "Convergence gap")
      ->capture_default_str();
  solve_cmd->add_option("--max-support", solve.max_support,
                        "Planning belief support limit N")
      ->capture_default_str();
  solve_cmd->add_option("--max-depth", solve.max_depth,
                        "Search depth (default: domain horizon)");
  solve_cmd->add_option("--time-budget", solve.time_budget,
                        "Seconds (0 = unlimited)")
      ->capture_default_str();
  solve_cmd->add_option("--node-budget", solve.node_budget,
                        "Search tree nodes (0 = unlimited)")
      ->capture_default_str();
  solve_cmd->add_option("--iteration-budget", solve.iteration_budget,
                        "Solver iterations (0 = unlimited)")
      ->capture_default_str();
  solve_cmd->add_option("--k-rollouts", solve.k_rollouts,
                        "Fallback walks per evaluation")
      ->capture_default_str();
  solve_cmd->add_option("--seed", solve.seed, "Seed")->capture_default_str();
  solve_cmd->add_option("--eval-interval", solve.eval_interval,
                        "Seconds between trace points")
      ->capture_default_str();
  solve_cmd->add_option("--check-trials", solve.check_trials,
                        "Stop once this many trials all succeed (0 = off)")
      ->capture_default_str();
  solve_cmd->add_option("--check-every", solve.check_every,
                        "Iterations between success checks")
      ->capture_default_str();
  solve_cmd->add_option("--policy-out", solve.policy_out, "Policy JSON file");
  solve_cmd->add_option("--trace-out", solve.trace_out, "Bounds trace CSV file");
  solve_cmd->add_option("--manifest-out", solve.manifest_out, "Run manifest JSON");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a policy by simulation");
  eval_cmd->add_option("policy", eval.policy, "Policy JSON file")->required();
  eval_cmd->add_option("instance", eval.instance, "Instance file")->required();
  eval_cmd->add_option("--trials", eval.trials, "Number of trials")
      ->capture_default_str();
  eval_cmd->add_option("--horizon", eval.horizon,
                       "Trial horizon (default: domain horizon)");
  eval_cmd->add_option("--seed", eval.seed, "Seed")->capture_default_str();
  eval_cmd->add_option("--jobs", eval.jobs, "Worker threads")->capture_default_str();
  eval_cmd->add_option("--trials-csv", eval.trials_csv, "Per-trial CSV file");
  eval_cmd->add_option("--summary-csv", eval.summary_csv, "Summary CSV file");
  eval_cmd->add_option("--plan-time", eval.plan_time,
                       "Planning time to record in the summary");

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export", "Print a policy as JSON or DOT");
  export_cmd->add_option("policy", exp.policy, "Policy JSON file")->required();
  export_cmd->add_option("--format", exp.format, "json or dot")
      ->check(CLI::IsMember({"json", "dot"}))
      ->capture_default_str();
  export_cmd->add_option("--instance", exp.instance,
                         "Instance supplying action and observation labels");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) return CmdGen(gen, out);
    if (solve_cmd->parsed()) return CmdSolve(solve, out);
    if (eval_cmd->parsed()) return CmdEval(eval, out);
    if (export_cmd->parsed()) return CmdExport(exp, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace detmcvi::cli
