// Command-line front end. Talks to the library only through rapidlearn.h.
#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rapidlearn.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitError = 3;

int report(rl_status s) {
  std::fprintf(stderr, "error: %s: %s\n", rl_status_name(s), rl_last_error());
  return kExitError;
}

std::string default_out() {
  const char* env = std::getenv("RAPIDLEARN_OUT");
  return env && *env ? env : "results";
}

int cmd_plan(const std::string& domain, const std::string& problem, std::size_t budget, const std::string& novelty) {
  rl_task* task = nullptr;
  rl_status s = rl_task_load(domain.c_str(), problem.c_str(), novelty.empty() ? nullptr : novelty.c_str(), &task);
  if (s != RL_OK) return report(s);
  rl_plan* plan = nullptr;
  int found = 0;
  s = rl_plan_search(task, budget, &plan, &found);
  rl_task_free(task);
  if (s == RL_E_PLANNER_TIMEOUT) {
    std::printf("timeout: %s\n", rl_last_error());
    return 2;
  }
  if (s != RL_OK) return report(s);
  int code = 1;
  if (found) {
    for (std::size_t i = 0; i < rl_plan_length(plan); ++i) std::printf("%zu: (%s)\n", i, rl_plan_step(plan, i));
    std::printf("; %zu steps, %zu expansions\n", rl_plan_length(plan), rl_plan_expanded(plan));
    code = 0;
  } else {
    std::printf("no plan\n");
  }
  rl_plan_free(plan);
  return code;
}

int cmd_novelties() {
  for (std::size_t i = 0; i < rl_novelty_count(); ++i)
    std::printf("%-14s %s\n", rl_novelty_id(i), rl_novelty_description(i));
  return 0;
}

struct RunArgs {
  std::string scenario;
  std::string strategy = "kge-ucb";
  int seeds = 10;
  std::uint64_t seed_base = 0;
  std::string out;
  int workers = 1;
  int eval_episodes = 100;
  int eval_budget = 300;
  std::uint64_t max_timesteps = 0;
  std::uint64_t max_episodes = 0;
  std::string optimizer;
  double lr = 0.0;
};

int cmd_run(const RunArgs& a) {
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < a.seeds; ++i) seeds.push_back(a.seed_base + static_cast<std::uint64_t>(i));
  std::string out = a.out.empty() ? default_out() : a.out;
  fs::create_directories(out);
  rl_run_options o;
  rl_run_options_init(&o);
  o.scenario = a.scenario.c_str();
  o.strategy = a.strategy.c_str();
  o.seeds = seeds.data();
  o.seed_count = seeds.size();
  o.out_dir = out.c_str();
  o.workers = a.workers;
  o.eval_episodes = a.eval_episodes;
  o.eval_budget = a.eval_budget;
  o.max_timesteps = a.max_timesteps;
  o.max_episodes = a.max_episodes;
  o.optimizer = a.optimizer.empty() ? nullptr : a.optimizer.c_str();
  o.learning_rate = a.lr;
  rl_results* res = nullptr;
  rl_status s = rl_run(&o, &res);
  if (s != RL_OK) return report(s);
  std::string path = (fs::path(out) / ("results_" + a.scenario + "_" + a.strategy + ".csv")).string();
  s = rl_results_write(res, path.c_str());
  if (s != RL_OK) {
    rl_results_free(res);
    return report(s);
  }
  std::printf("%-6s %10s %5s %8s  %s\n", "seed", "timesteps", "conv", "success", "discoveries");
  for (std::size_t i = 0; i < rl_results_count(res); ++i) {
    rl_record r;
    rl_results_get(res, i, &r);
    if (*r.error) std::printf("%-6llu error: %s\n", static_cast<unsigned long long>(r.seed), r.error);
    else
      std::printf("%-6llu %10llu %5d %8.3f  %s\n", static_cast<unsigned long long>(r.seed),
                  static_cast<unsigned long long>(r.time_to_adapt), r.converged, r.post_novelty_success,
                  r.discoveries);
  }
  std::printf("wrote %s\n", path.c_str());
  rl_results_free(res);
  return 0;
}

int cmd_eval(const std::vector<std::string>& files, const std::string& scenario, int episodes, int budget,
             std::uint64_t seed) {
  std::vector<const char*> paths;
  for (const auto& f : files) paths.push_back(f.c_str());
  double success = 0.0;
  rl_status s = rl_executor_eval(paths.data(), paths.size(), scenario.empty() ? nullptr : scenario.c_str(), episodes,
                                 budget, seed, &success);
  if (s != RL_OK) return report(s);
  std::printf("post-novelty success %.3f over %d episodes\n", success, episodes);
  return 0;
}

int cmd_stats(const std::string& in) {
  std::string dir = in.empty() ? default_out() : in;
  rl_results* all = rl_results_new();
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& e : fs::directory_iterator(dir)) {
      auto name = e.path().filename().string();
      if (name.rfind("results_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    rl_results_free(all);
    std::fprintf(stderr, "error: no results_*.csv under %s\n", dir.c_str());
    return kExitError;
  }
  for (const auto& f : files) {
    rl_results* r = nullptr;
    rl_status s = rl_results_read(f.string().c_str(), &r);
    if (s != RL_OK) {
      rl_results_free(all);
      return report(s);
    }
    rl_results_append(all, r);
    rl_results_free(r);
  }
  rl_stats* st = nullptr;
  rl_status s = rl_stats_compute(all, &st);
  if (s != RL_OK) {
    rl_results_free(all);
    return report(s);
  }
  std::printf("%-14s %-8s %4s %4s %12s %12s %8s %8s\n", "scenario", "strategy", "runs", "conv", "tta_mean", "tta_sd",
              "succ", "succ_sd");
  std::ofstream csv(fs::path(dir) / "stats.csv");
  csv << "scenario,strategy,runs,converged,tta_mean,tta_sd,success_mean,success_sd\n";
  for (std::size_t i = 0; i < rl_stats_group_count(st); ++i) {
    rl_group g;
    rl_stats_group(st, i, &g);
    csv << g.scenario << ',' << g.strategy << ',' << g.runs << ',' << g.converged << ',' << g.tta_mean << ','
        << g.tta_sd << ',' << g.success_mean << ',' << g.success_sd << '\n';
    if (g.converged == 0)
      std::printf("%-14s %-8s %4zu %4zu %12s %12s %8.3f %8.3f\n", g.scenario, g.strategy, g.runs, g.converged,
                  "-", "-", g.success_mean, g.success_sd);
    else
      std::printf("%-14s %-8s %4zu %4zu %12.1f %12.1f %8.3f %8.3f\n", g.scenario, g.strategy, g.runs, g.converged,
                  g.tta_mean, g.tta_sd, g.success_mean, g.success_sd);
  }
  rl_stats_free(st);

  // Pairwise Welch tests on time-to-adapt within each scenario.
  std::map<std::string, std::map<std::string, std::vector<double>>> tta;
  for (std::size_t i = 0; i < rl_results_count(all); ++i) {
    rl_record r;
    rl_results_get(all, i, &r);
    if (!*r.error && r.converged) tta[r.scenario][r.strategy].push_back(static_cast<double>(r.time_to_adapt));
  }
  for (const auto& [scenario, by] : tta) {
    for (auto a = by.begin(); a != by.end(); ++a) {
      for (auto b = std::next(a); b != by.end(); ++b) {
        double t, df, p;
        rl_status ts = rl_welch_ttest(a->second.data(), a->second.size(), b->second.data(), b->second.size(), &t, &df, &p);
        if (ts == RL_OK)
          std::printf("welch %-14s %s vs %s: t=%.3f df=%.1f p=%.4g\n", scenario.c_str(), a->first.c_str(),
                      b->first.c_str(), t, df, p);
        else
          std::printf("welch %-14s %s vs %s: %s\n", scenario.c_str(), a->first.c_str(), b->first.c_str(),
                      rl_last_error());
      }
    }
  }
  rl_results_free(all);
  return 0;
}

int cmd_curve(const std::string& in, const std::string& out, std::uint64_t bin) {
  std::string dir = in.empty() ? default_out() : in;
  rl_status s = rl_curve_emit(dir.c_str(), out.c_str(), bin);
  if (s != RL_OK) return report(s);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rapidlearn: planning with learned executors in a crafting gridworld"};
  app.require_subcommand(1);

  auto* plan = app.add_subcommand("plan", "plan for a PDDL domain/problem (exit 0 plan, 1 no plan, 2 timeout)");
  std::string domain, problem, plan_novelty;
  std::size_t budget = 0;
  plan->add_option("--domain", domain, "domain file")->required()->check(CLI::ExistingFile);
  plan->add_option("--problem", problem, "problem file")->required()->check(CLI::ExistingFile);
  plan->add_option("--budget", budget, "node expansion budget (default 200000)");
  plan->add_option("--novelty", plan_novelty, "patch the domain with a novelty's symbols");

  auto* nov = app.add_subcommand("novelties", "novelty catalogue");
  nov->require_subcommand(1);
  nov->add_subcommand("list", "list novelty ids");

  auto* run = app.add_subcommand("run", "discover executors for a scenario over several seeds");
  RunArgs ra;
  auto* scen = run->add_option("--scenario", ra.scenario, "novelty id or 'none'");
  run->add_option("--novelty", ra.scenario, "alias for --scenario")->excludes(scen);
  run->add_option("--strategy", ra.strategy, "kge-ucb, kge-uab or eg")
      ->check(CLI::IsMember({"kge-ucb", "kge-uab", "eg"}));
  run->add_option("--seeds", ra.seeds, "number of seeds")->check(CLI::PositiveNumber);
  run->add_option("--seed-base", ra.seed_base, "first seed");
  run->add_option("--out", ra.out, "output directory (default $RAPIDLEARN_OUT or ./results)");
  run->add_option("--workers", ra.workers, "parallel seeds")->check(CLI::PositiveNumber);
  run->add_option("--eval-episodes", ra.eval_episodes, "evaluation episodes per seed");
  run->add_option("--eval-budget", ra.eval_budget, "primitive steps per evaluation episode");
  run->add_option("--max-timesteps", ra.max_timesteps, "cap on training timesteps per discovery");
  run->add_option("--max-episodes", ra.max_episodes, "cap on training episodes per discovery");
  run->add_option("--optimizer", ra.optimizer, "sgd, rmsprop or adam")
      ->check(CLI::IsMember({"sgd", "rmsprop", "adam"}));
  run->add_option("--lr", ra.lr, "learning rate");

  auto* ev = app.add_subcommand("eval", "evaluate saved executors");
  std::vector<std::string> exec_files;
  std::string ev_scenario;
  int ev_episodes = 100, ev_budget = 300;
  std::uint64_t ev_seed = 0;
  ev->add_option("--executor", exec_files, "executor JSON (repeatable)")->required()->check(CLI::ExistingFile);
  ev->add_option("--scenario,--novelty", ev_scenario, "override the scenario stored in the file");
  ev->add_option("--episodes", ev_episodes, "episodes");
  ev->add_option("--budget", ev_budget, "primitive steps per episode");
  ev->add_option("--seed", ev_seed, "evaluation seed");

  auto* stats = app.add_subcommand("stats", "aggregate results and run Welch t-tests");
  std::string stats_in;
  stats->add_option("--in", stats_in, "results directory");

  auto* curve = app.add_subcommand("curve", "learning curves from training logs");
  std::string curve_in, curve_out;
  std::uint64_t bin = 500;
  curve->add_option("--in", curve_in, "results directory");
  curve->add_option("--out", curve_out, "output CSV")->required();
  curve->add_option("--bin", bin, "timestep grid spacing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; usage errors share the error code.
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  if (*plan) return cmd_plan(domain, problem, budget, plan_novelty);
  if (*nov) return cmd_novelties();
  if (*run) {
    if (ra.scenario.empty()) {
      std::fprintf(stderr, "error: --scenario is required\n");
      return kExitError;
    }
    return cmd_run(ra);
  }
  if (*ev) return cmd_eval(exec_files, ev_scenario, ev_episodes, ev_budget, ev_seed);
  if (*stats) return cmd_stats(stats_in);
  if (*curve) return cmd_curve(curve_in, curve_out, bin);
  return kExitError;
}
