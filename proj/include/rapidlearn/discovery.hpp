#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "rapidlearn/bridge.hpp"
#include "rapidlearn/learner.hpp"

namespace rapidlearn::discovery {

using bridge::ExecutorRegistry;
using bridge::Scenario;
using planner::Plan;
using symbolic::GroundCondition;
using symbolic::SymbolicState;

struct DiscoveryConfig {
  double phi1 = 1000.0;
  double phi2 = -350.0;
  double step_reward = -1.0;
  double rho_max = 0.3, rho_min = 0.05;
  double eps_max = 0.3, eps_min = 0.05;
  double decay = std::log(0.01) / 2000.0;
  double c = 0.0005;
  double mu = 2.0;
  std::uint64_t e_max = 100000;
  int U = 300;  // decisions per episode
  int update_rate = 10;
  double delta_R = 900.0;
  int delta_G = 100;
  int eta = 96;
  int upsilon = 100;
  // Network and optimizer.
  std::size_t hidden = 24;
  learner::UpdateConfig update;
  // Extra stop rule on total training timesteps; 0 disables it.
  std::uint64_t max_timesteps = 0;
  int macro_decisions = 50;
  int prefix_retries = 50;

  // Throws InvalidArgument when the invariants above are broken.
  void validate() const;
};

// Disjunction of termination conditions for one failed plan step.
struct PlannableStateSet {
  std::vector<GroundCondition> clauses;
  bool satisfied_by(const SymbolicState& s) const;
};

PlannableStateSet plannable_states(const Plan& plan, std::size_t index, const SymbolicState& base);
// First occurrence of `op_name`. Throws OperatorNotInPlan.
PlannableStateSet plannable_states(const Plan& plan, const std::string& op_name, const SymbolicState& base);

struct RewardResult {
  double reward = 0.0;
  bool done = false;
  bool success = false;
  planner::Plannability plannability = planner::Plannability::False;  // only meaningful when a clause held
  bool clause_held = false;
};

// step_count is the number of decisions taken so far in the episode.
RewardResult reward(const PlannableStateSet& sr, const SymbolicState& next, int step_count,
                    planner::PlannabilityOracle& oracle, const DiscoveryConfig& cfg);

struct FailurePoint {
  Plan plan;
  std::size_t index = 0;
  SymbolicState base;
  int prefix_steps = 0;
};

// Resets w with world_seed, plans, and runs the plan (using registered
// executors) until the operator named op_name is about to fail. Throws
// PrefixExecutionFailed when that point is never reached.
FailurePoint reach_failed_operator(world::World& w, const Scenario& sc, ExecutorRegistry& registry,
                                   const std::string& op_name, std::uint64_t world_seed);

struct CurriculumStep {
  std::vector<double> observation;
  world::Action action;
};

struct CurriculumResult {
  world::Item target = world::Item::Air;
  std::vector<CurriculumStep> steps;
  bool reached = false;
};

// Navigates to a uniformly drawn novel entity. Throws NoNovelEntity.
CurriculumResult curriculum_reset(world::World& w, const std::vector<world::Item>& novel, std::mt19937_64& rng);

bool converged(const std::vector<bool>& successes, const std::vector<double>& returns, const DiscoveryConfig& cfg);

struct TrainingRecord {
  std::uint64_t episode = 0;
  int steps = 0;
  double episode_return = 0.0;
  bool done = false;
  double epsilon = 0.0;
  double rho = 0.0;
  bool converged = false;
};

void write_training_header(std::ostream& out);
void write_training_record(std::ostream& out, const TrainingRecord& r);

struct DiscoveryResult {
  std::shared_ptr<bridge::Executor> executor;
  bool converged = false;
  std::uint64_t timesteps = 0;
  std::uint64_t episodes = 0;
  std::vector<TrainingRecord> log;
  // States that earned phi1, kept when audit is requested.
  std::vector<SymbolicState> rewarded_states;
};

struct DiscoveryOptions {
  std::ostream* training_log = nullptr;
  bool audit = false;
};

// Learner action space for a discovery run: scenario actions as primitives
// plus every registered executor as a macro.
std::vector<bridge::LearnerAction> discovery_actions(const Scenario& sc, const ExecutorRegistry& registry);

// Bias set: novel actions and the realization of the failed operator.
std::vector<bool> bias_mask(const std::vector<bridge::LearnerAction>& actions, const Scenario& sc,
                            const symbolic::GroundOperator& failed);

DiscoveryResult discover_executor(const std::string& op_name, const Scenario& sc, ExecutorRegistry& registry,
                                  learner::Strategy strategy, const DiscoveryConfig& cfg, std::uint64_t seed,
                                  const DiscoveryOptions& options = {});

// Plan, execute, and learn an executor at every impasse that has none.
struct AgentReport {
  bridge::EpisodeOutcome outcome;
  std::vector<DiscoveryResult> discoveries;
  std::uint64_t timesteps() const;
  bool all_converged() const;
};

AgentReport rapid_learn(world::World& w, const Scenario& sc, ExecutorRegistry& registry, learner::Strategy strategy,
                        const DiscoveryConfig& cfg, std::uint64_t seed, const DiscoveryOptions& options = {});

}  // namespace rapidlearn::discovery
