#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rapidlearn/discovery.hpp"

namespace rapidlearn::harness {

struct ExperimentConfig {
  std::string scenario = "ATB-easy";
  learner::Strategy strategy = learner::Strategy::KgeUcb;
  std::vector<std::uint64_t> seeds{0};
  discovery::DiscoveryConfig discovery;
  world::WorldConfig world;
  int eval_episodes = 100;
  int eval_budget = 300;  // primitive steps per evaluation episode
  int workers = 1;
  // Empty: keep nothing on disk. Otherwise training logs go to <out>/logs and
  // executors to <out>/executors.
  std::string out_dir;
  // Called at the start of each seed's run, inside its error boundary.
  std::function<void(std::uint64_t seed)> on_seed_start;
};

struct RunRecord {
  std::string scenario;
  std::string strategy;
  std::uint64_t seed = 0;
  std::uint64_t time_to_adapt = 0;
  bool converged = false;
  double post_novelty_success = 0.0;
  std::vector<std::string> discoveries;
  double wall_clock = 0.0;  // seconds
  std::string error;        // non-empty when the run threw
};

// One seed end to end: detect the impasse, discover, then evaluate.
RunRecord run_seed(const ExperimentConfig& cfg, const bridge::Scenario& sc, std::uint64_t seed);

// Every seed in its own run; an exception in one seed becomes that seed's
// error column. Records come back in seed-list order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

// Success fraction of the current registry over fresh episodes.
double evaluate(const bridge::Scenario& sc, const bridge::ExecutorRegistry& registry, int episodes, int budget,
                std::uint64_t seed);

inline constexpr const char* kResultsHeader = "# rapidlearn-results v1";

void write_results(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_results(std::istream& in);
void write_results_file(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_results_file(const std::string& path);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;  // sample (n-1); reported as 0 when n < 2
  std::size_t n = 0;
  bool sd_defined() const { return n >= 2; }
};

Summary summarize(const std::vector<double>& xs);

struct Aggregate {
  std::string scenario;
  std::string strategy;
  std::size_t runs = 0;
  std::size_t converged = 0;
  Summary time_to_adapt;  // converged runs only
  std::size_t did_not_converge() const { return runs - converged; }
  Summary success;
};

// Groups by (scenario, strategy), sorted. Errored runs are skipped. Throws
// EmptyGroup when nothing is left to aggregate.
std::vector<Aggregate> aggregate(const std::vector<RunRecord>& records);

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

// Welch's unequal-variance t-test. Throws DegenerateVariance when either
// group has fewer than two values or both variances are zero.
TTest welch_ttest(const std::vector<double>& a, const std::vector<double>& b);

// Mean rolling success across seeds on a shared timestep grid, one series
// per (scenario, strategy). Reads <in>/logs.
struct CurvePoint {
  std::string scenario;
  std::string strategy;
  std::uint64_t timesteps = 0;
  double mean_success = 0.0;
  double sd_success = 0.0;
  std::size_t runs = 0;
};

std::vector<CurvePoint> learning_curve(const std::string& in_dir, std::uint64_t bin = 500, std::size_t window = 100);
void emit_learning_curve(const std::string& in_dir, const std::string& out_file, std::uint64_t bin = 500);

// "<scenario>__<strategy>__<seed>__<k>.csv"
std::string training_log_name(const std::string& scenario, const std::string& strategy, std::uint64_t seed,
                              std::size_t k);

}  // namespace rapidlearn::harness
