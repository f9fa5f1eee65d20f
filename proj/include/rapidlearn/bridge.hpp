#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rapidlearn/learner.hpp"
#include "rapidlearn/novelty.hpp"
#include "rapidlearn/planner.hpp"
#include "rapidlearn/symbolic.hpp"
#include "rapidlearn/world.hpp"

namespace rapidlearn::bridge {

using planner::Plan;
using planner::PlannabilityOracle;
using symbolic::GroundCondition;
using symbolic::GroundOperator;
using symbolic::PlanningTask;
using symbolic::SymbolicState;

// Parsed once from the embedded domain text.
std::shared_ptr<const symbolic::Domain> pogostick_domain();

// The nine physical objects of the pre-novelty problem.
std::vector<symbolic::TypedObject> base_objects();

// (>= (inventory pogo_stick) 1)
symbolic::Condition pogo_goal();

// Symbolic knowledge for one scenario: domain plus objects, with a task
// template whose initial state is filled in from the detector.
struct Knowledge {
  std::shared_ptr<const symbolic::Domain> domain;
  PlanningTask task;

  static Knowledge build(const symbolic::Domain& domain, const std::vector<symbolic::TypedObject>& extra_objects = {});
  PlanningTask task_from(const SymbolicState& s) const { return task.with_initial(s); }
  const symbolic::Universe& universe() const { return *task.universe; }
};

class Detector {
 public:
  explicit Detector(std::shared_ptr<const symbolic::Universe> universe) : universe_(std::move(universe)) {}

  SymbolicState detect(const world::World& w) const;
  const symbolic::Universe& universe() const { return *universe_; }

 private:
  std::shared_ptr<const symbolic::Universe> universe_;
};

// Symbolic object a simulator item is perceived as (rubber trees look like
// trees); nullopt for things with no symbol.
std::optional<std::string> perceived_as(world::Item item);

// Primitive or hierarchical realization of a ground operator.
std::optional<world::Action> realize(const GroundOperator& op);

// omega_o checked against the pre-state: adds present, deletes absent,
// increases reached, decreases applied.
bool effects_hold(const GroundOperator& op, const SymbolicState& before, const SymbolicState& after);

// omega_o as a condition relative to `base`: increases become lower bounds
// above base, decreases are dropped.
GroundCondition effect_condition(const GroundOperator& op, const SymbolicState& base);

// Operators after position i whose preconditions put a lower bound on a
// fluent that o_i increases (the dependent plan tail).
std::vector<GroundOperator> dependent_tail(const Plan& plan, std::size_t i);

// Termination clauses for the executor of plan step i: omega_i, and the
// conjunction of the dependent tail's effects when the tail is non-empty.
std::vector<GroundCondition> termination_clauses(const Plan& plan, std::size_t i, const SymbolicState& base);

// Conjunction; numeric bounds on the same fluent keep the tighter one.
GroundCondition conjoin(const GroundCondition& a, const GroundCondition& b);

struct ExecResult {
  bool success = false;
  std::vector<world::Transition> transitions;
  SymbolicState before;
  SymbolicState after;
};

// Throws PreconditionUnmet when d(w) does not satisfy the precondition.
ExecResult execute_operator(const GroundOperator& op, world::World& w, const Detector& d);

// Executor termination: (omega_i or every omega of the dependent tail) and a
// plan to the goal exists. Unknown plannability counts as no.
int executor_beta(const SymbolicState& base, const SymbolicState& s, const GroundOperator& oi,
                  const std::vector<GroundOperator>& tail, PlannabilityOracle& oracle);
int executor_beta(const std::vector<GroundCondition>& clauses, const SymbolicState& s, PlannabilityOracle& oracle);

struct LearnerAction {
  enum class Kind { Primitive, Macro };
  Kind kind = Kind::Primitive;
  world::Action action;
  std::string macro;  // operator name of a learned executor

  static LearnerAction primitive(world::Action a) { return {Kind::Primitive, a, {}}; }
  static LearnerAction executor(std::string op) { return {Kind::Macro, {}, std::move(op)}; }
  std::string name() const;
  bool operator==(const LearnerAction&) const = default;
};

struct ExecutorMeta {
  std::string scenario;
  std::string strategy;
  std::uint64_t seed = 0;
  bool converged = false;
  std::uint64_t timesteps = 0;
  std::uint64_t episodes = 0;
};

// <I, pi, beta> bound to a failed operator. beta is evaluated by the runner
// from the plan context at invocation time.
struct Executor {
  std::string id;
  std::string operator_name;
  std::vector<LearnerAction> actions;
  std::vector<world::Item> entities;
  learner::Policy policy;
  ExecutorMeta meta;

  bool initiation(const SymbolicState& s, const PlanningTask& task) const;
  std::uint64_t entity_hash() const;
};

std::uint64_t entity_set_hash(const std::vector<world::Item>& entities);

std::string executor_to_json(const Executor& x);
Executor executor_from_json(const std::string& text);
void save_executor(const Executor& x, const std::string& path);
Executor load_executor(const std::string& path);

class ExecutorRegistry {
 public:
  // Throws InvalidArgument if the operator already has an executor.
  void add(std::shared_ptr<const Executor> x);
  const Executor* find(const std::string& operator_name) const;
  std::shared_ptr<const Executor> get(const std::string& operator_name) const;
  std::size_t size() const { return map_.size(); }
  std::vector<std::string> operators() const;

 private:
  std::map<std::string, std::shared_ptr<const Executor>> map_;
};

// Everything fixed for one scenario: world rules, symbolic knowledge,
// action space and the shared plannability oracle.
struct Scenario {
  std::string id = "none";
  std::optional<novelty::NoveltySpec> novelty;
  world::WorldConfig config;
  Knowledge knowledge;
  std::vector<world::Action> actions;
  std::vector<world::Action> novel_actions;
  std::shared_ptr<PlannabilityOracle> oracle;

  static Scenario make(const std::string& id, const world::WorldConfig& base = {});
  Detector detector() const { return Detector(knowledge.task.universe); }
  std::vector<world::Item> novel_world_entities(const world::World& w) const;
};

// Runs a learned executor, drawing actions from its policy, until beta holds
// (clauses + plannable), the decision cap is hit, or the world horizon ends.
struct ExecutorRun {
  bool terminated = false;
  int decisions = 0;
};

ExecutorRun run_executor(const Executor& x, world::World& w, const Scenario& sc, const ExecutorRegistry& registry,
                         const std::vector<GroundCondition>& clauses, int max_decisions, std::mt19937_64& rng);

// Macro use of an executor inside a learner's action space: runs until its
// own operator's effect condition holds, at most `max_decisions`.
int run_macro(const Executor& x, world::World& w, const Scenario& sc, const ExecutorRegistry& registry,
              int max_decisions, std::mt19937_64& rng, int depth = 0);

// One learner decision. Returns the number of primitive transitions taken.
std::size_t execute_learner_action(const LearnerAction& a, world::World& w, const Scenario& sc,
                                   const ExecutorRegistry& registry, std::mt19937_64& rng, int depth = 0);

struct PlanStep {
  const GroundOperator* op;
  std::size_t index;
};

// Hooks into plan execution. Return false from before_operator to stop.
struct PlanHooks {
  std::function<bool(const Plan&, std::size_t, world::World&)> before_operator;
  // Called on an impasse with no registered executor. Returns the executor
  // to register, or null to give up.
  std::function<std::shared_ptr<const Executor>(const Plan&, std::size_t, const SymbolicState& base)> on_impasse;
};

struct EpisodeOutcome {
  bool success = false;
  bool stopped = false;  // a hook asked to stop
  int primitive_steps = 0;
  int replans = 0;
  std::vector<std::string> discoveries;
  std::vector<std::string> executor_calls;
  std::string failure;
};

// Plan from d(w), execute operators in order; on an impasse use the
// registered executor or ask the hook; replan when the next operator's
// precondition does not hold.
EpisodeOutcome execute_plan(world::World& w, const Scenario& sc, ExecutorRegistry& registry, const PlanHooks& hooks,
                            int executor_decisions = 300, int max_replans = 20);

}  // namespace rapidlearn::bridge
