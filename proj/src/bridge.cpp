#include "rapidlearn/bridge.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>

namespace rapidlearn::bridge {

using json = nlohmann::json;
using symbolic::Cmp;
using symbolic::GroundComparison;
using world::Action;
using world::ActionKind;
using world::Item;
using world::World;

std::shared_ptr<const symbolic::Domain> pogostick_domain() {
  static const auto kDomain =
      std::make_shared<const symbolic::Domain>(symbolic::parse_domain(symbolic::pogostick_domain_text()));
  return kDomain;
}

std::vector<symbolic::TypedObject> base_objects() {
  std::vector<symbolic::TypedObject> out;
  for (const char* n :
       {"air", "crafting_table", "plank", "pogo_stick", "rubber", "stick", "tree_log", "tree_tap", "wall"})
    out.push_back({n, n});
  return out;
}

symbolic::Condition pogo_goal() {
  symbolic::Condition c;
  c.comparisons.push_back({{"inventory", {"pogo_stick"}}, 1});
  return c;
}

Knowledge Knowledge::build(const symbolic::Domain& domain, const std::vector<symbolic::TypedObject>& extra_objects) {
  Knowledge k;
  k.domain = std::make_shared<const symbolic::Domain>(domain);
  auto objects = base_objects();
  for (const auto& o : extra_objects) {
    if (std::find(objects.begin(), objects.end(), o) == objects.end()) objects.push_back(o);
  }
  k.task = symbolic::make_task(k.domain, "pogo", std::move(objects), {"facing air", "holding air"}, {}, pogo_goal());
  return k;
}

std::optional<std::string> perceived_as(Item item) {
  switch (item) {
    case Item::RubberTree: return std::string("tree_log");
    case Item::Fire: return std::nullopt;
    default: return std::string(world::item_name(item));
  }
}

SymbolicState Detector::detect(const World& w) const {
  const auto& u = *universe_;
  SymbolicState s = SymbolicState::empty_for(u);
  auto set_fact = [&](const std::string& atom) {
    int id = u.fact_id(atom);
    if (id >= 0) s.facts[static_cast<std::size_t>(id)] = 1;
  };
  auto add_fluent = [&](const std::string& f, std::int64_t v) {
    int id = u.fluent_id(f);
    if (id >= 0) s.fluents[static_cast<std::size_t>(id)] += v;
  };
  if (auto f = perceived_as(w.front_cell().item)) set_fact("facing " + *f);
  auto sel = w.selected();
  std::optional<std::string> held = sel ? perceived_as(*sel) : std::string("air");
  set_fact("holding " + held.value_or("air"));

  std::array<std::int64_t, world::kItemCount> counts{};
  for (int y = 0; y < w.height(); ++y) {
    for (int x = 0; x < w.width(); ++x) ++counts[static_cast<std::size_t>(w.cell(x, y).item)];
  }
  for (std::size_t i = 0; i < world::kItemCount; ++i) {
    auto item = static_cast<Item>(i);
    auto name = perceived_as(item);
    if (!name) continue;
    if (counts[i]) add_fluent("world " + *name, counts[i]);
    if (int n = w.inventory(item)) add_fluent("inventory " + *name, n);
  }
  return s;
}

std::optional<Action> realize(const GroundOperator& op) {
  const std::string& k = op.schema;
  if (k == "approach") {
    if (op.args.size() != 2) return std::nullopt;
    auto target = world::parse_item(op.args[1]);
    if (!target || *target == Item::Air) return std::nullopt;
    return Action{ActionKind::Approach, *target};
  }
  if (k == "select") {
    if (op.args.size() != 1) return std::nullopt;
    auto target = world::parse_item(op.args[0]);
    if (!target || *target == Item::Air) return std::nullopt;
    return Action{ActionKind::Select, *target};
  }
  if (k == "break") return Action{ActionKind::Break, Item::Air};
  if (k == "craftplank") return Action{ActionKind::CraftPlanks, Item::Air};
  if (k == "craftstick") return Action{ActionKind::CraftStick, Item::Air};
  if (k == "crafttree_tap") return Action{ActionKind::CraftTreeTap, Item::Air};
  if (k == "craftpogo_stick") return Action{ActionKind::CraftPogostick, Item::Air};
  if (k == "extractrubber") return Action{ActionKind::ExtractRubber, Item::Air};
  if (k == "spray") return Action{ActionKind::Spray, Item::Air};
  if (k == "place_tree_tap") return Action{ActionKind::PlaceTreeTap, Item::Air};
  if (k == "scrape_plank") return Action{ActionKind::ScrapePlank, Item::Air};
  return std::nullopt;
}

namespace {

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

bool effects_hold(const GroundOperator& op, const SymbolicState& before, const SymbolicState& after) {
  for (int id : op.add) {
    if (!after.facts[static_cast<std::size_t>(id)]) return false;
  }
  for (int id : op.del) {
    if (!contains(op.add, id) && after.facts[static_cast<std::size_t>(id)]) return false;
  }
  for (const auto& n : op.numeric) {
    auto f = static_cast<std::size_t>(n.fluent);
    std::int64_t target = before.fluents[f] + n.delta;
    if (n.delta > 0 && after.fluents[f] < target) return false;
    if (n.delta < 0 && after.fluents[f] > target) return false;
  }
  return true;
}

GroundCondition effect_condition(const GroundOperator& op, const SymbolicState& base) {
  GroundCondition c;
  c.positive = op.add;
  for (int id : op.del) {
    if (!contains(op.add, id)) c.negative.push_back(id);
  }
  for (const auto& n : op.numeric) {
    if (n.delta > 0)
      c.numeric.push_back({n.fluent, Cmp::GreaterEqual, base.fluents[static_cast<std::size_t>(n.fluent)] + n.delta});
  }
  std::sort(c.positive.begin(), c.positive.end());
  std::sort(c.negative.begin(), c.negative.end());
  return c;
}

GroundCondition conjoin(const GroundCondition& a, const GroundCondition& b) {
  GroundCondition c = a;
  for (int id : b.positive) {
    if (!contains(c.positive, id)) c.positive.push_back(id);
  }
  for (int id : b.negative) {
    if (!contains(c.negative, id)) c.negative.push_back(id);
  }
  for (const auto& n : b.numeric) {
    auto it = std::find_if(c.numeric.begin(), c.numeric.end(),
                           [&](const GroundComparison& m) { return m.fluent == n.fluent && m.cmp == n.cmp; });
    if (it == c.numeric.end()) c.numeric.push_back(n);
    else if (n.cmp == Cmp::GreaterEqual) it->value = std::max(it->value, n.value);
    else it->value = std::min(it->value, n.value);
  }
  std::sort(c.positive.begin(), c.positive.end());
  std::sort(c.negative.begin(), c.negative.end());
  return c;
}

std::vector<GroundOperator> dependent_tail(const Plan& plan, std::size_t i) {
  if (i >= plan.steps.size()) throw Error(ErrorCode::InvalidArgument, "plan index out of range");
  const auto& oi = plan.steps[i];
  std::vector<GroundOperator> out;
  for (std::size_t j = i + 1; j < plan.steps.size(); ++j) {
    const auto& o = plan.steps[j];
    bool depends = false;
    for (const auto& prod : oi.numeric) {
      if (prod.delta <= 0) continue;
      depends |= std::any_of(o.precondition.numeric.begin(), o.precondition.numeric.end(), [&](const auto& c) {
        return c.fluent == prod.fluent && c.cmp == Cmp::GreaterEqual;
      });
    }
    if (depends) out.push_back(o);
  }
  return out;
}

std::vector<GroundCondition> termination_clauses(const Plan& plan, std::size_t i, const SymbolicState& base) {
  std::vector<GroundCondition> out{effect_condition(plan.steps.at(i), base)};
  auto tail = dependent_tail(plan, i);
  if (tail.empty()) return out;
  GroundCondition all = effect_condition(tail.front(), base);
  for (std::size_t k = 1; k < tail.size(); ++k) all = conjoin(all, effect_condition(tail[k], base));
  if (!(all == out.front())) out.push_back(std::move(all));
  return out;
}

ExecResult execute_operator(const GroundOperator& op, World& w, const Detector& d) {
  ExecResult r;
  r.before = d.detect(w);
  if (!symbolic::applicable(r.before, op))
    throw Error(ErrorCode::PreconditionUnmet, "precondition of '" + op.name + "' does not hold");
  auto a = realize(op);
  if (a) {
    try {
      r.transitions = w.execute(*a);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPath && e.code() != ErrorCode::NoTarget) throw;
    }
  }
  r.after = d.detect(w);
  r.success = a.has_value() && effects_hold(op, r.before, r.after);
  return r;
}

int executor_beta(const std::vector<GroundCondition>& clauses, const SymbolicState& s, PlannabilityOracle& oracle) {
  bool any = std::any_of(clauses.begin(), clauses.end(), [&](const GroundCondition& c) { return c.satisfied_by(s); });
  if (!any) return 0;
  return oracle.query(s) == planner::Plannability::True ? 1 : 0;
}

int executor_beta(const SymbolicState& base, const SymbolicState& s, const GroundOperator& oi,
                  const std::vector<GroundOperator>& tail, PlannabilityOracle& oracle) {
  std::vector<GroundCondition> clauses{effect_condition(oi, base)};
  if (!tail.empty()) {
    GroundCondition all = effect_condition(tail.front(), base);
    for (std::size_t k = 1; k < tail.size(); ++k) all = conjoin(all, effect_condition(tail[k], base));
    clauses.push_back(std::move(all));
  }
  return executor_beta(clauses, s, oracle);
}

std::string LearnerAction::name() const { return kind == Kind::Primitive ? action.name() : "executor:" + macro; }

bool Executor::initiation(const SymbolicState& s, const PlanningTask& task) const {
  const GroundOperator* op = task.find_operator(operator_name);
  return op && symbolic::applicable(s, *op);
}

std::uint64_t entity_set_hash(const std::vector<Item>& entities) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (Item i : entities) {
    for (char ch : world::item_name(i)) {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ULL;
    }
    h ^= '|';
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t Executor::entity_hash() const { return entity_set_hash(entities); }

std::string executor_to_json(const Executor& x) {
  json j;
  j["format"] = "rapidlearn-executor";
  j["version"] = 1;
  j["id"] = x.id;
  j["operator"] = x.operator_name;
  std::vector<std::string> actions, entities;
  for (const auto& a : x.actions) actions.push_back(a.name());
  for (Item i : x.entities) entities.emplace_back(world::item_name(i));
  j["actions"] = actions;
  j["entities"] = entities;
  j["entity_hash"] = x.entity_hash();
  j["policy"] = {{"inputs", x.policy.inputs()},
                 {"hidden", x.policy.hidden()},
                 {"outputs", x.policy.outputs()},
                 {"params", x.policy.params()}};
  j["meta"] = {{"scenario", x.meta.scenario},   {"strategy", x.meta.strategy},
               {"seed", x.meta.seed},           {"converged", x.meta.converged},
               {"timesteps", x.meta.timesteps}, {"episodes", x.meta.episodes}};
  return j.dump();
}

Executor executor_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("executor file: ") + e.what());
  }
  try {
    if (j.at("format") != "rapidlearn-executor")
      throw Error(ErrorCode::Parse, "executor file: unexpected format tag");
    Executor x;
    x.id = j.at("id").get<std::string>();
    x.operator_name = j.at("operator").get<std::string>();
    for (const auto& n : j.at("actions")) {
      std::string s = n.get<std::string>();
      if (s.rfind("executor:", 0) == 0) x.actions.push_back(LearnerAction::executor(s.substr(9)));
      else x.actions.push_back(LearnerAction::primitive(Action::parse(s)));
    }
    for (const auto& n : j.at("entities")) {
      auto item = world::parse_item(n.get<std::string>());
      if (!item) throw Error(ErrorCode::Parse, "executor file: unknown entity " + n.dump());
      x.entities.push_back(*item);
    }
    if (j.at("entity_hash").get<std::uint64_t>() != x.entity_hash())
      throw Error(ErrorCode::ExecutorMismatch, "executor file: entity hash does not match its entity list");
    const auto& p = j.at("policy");
    x.policy = learner::Policy(p.at("inputs").get<std::size_t>(), p.at("outputs").get<std::size_t>(),
                               p.at("hidden").get<std::size_t>());
    x.policy.set_params(p.at("params").get<std::vector<double>>());
    if (x.policy.outputs() != x.actions.size())
      throw Error(ErrorCode::DimensionMismatch, "executor file: policy outputs do not match the action list");
    const auto& m = j.at("meta");
    x.meta.scenario = m.value("scenario", "");
    x.meta.strategy = m.value("strategy", "");
    x.meta.seed = m.value("seed", std::uint64_t{0});
    x.meta.converged = m.value("converged", false);
    x.meta.timesteps = m.value("timesteps", std::uint64_t{0});
    x.meta.episodes = m.value("episodes", std::uint64_t{0});
    return x;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("executor file: ") + e.what());
  }
}

void save_executor(const Executor& x, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  f << executor_to_json(x) << "\n";
  if (!f) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

Executor load_executor(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return executor_from_json(ss.str());
}

void ExecutorRegistry::add(std::shared_ptr<const Executor> x) {
  if (!x) throw Error(ErrorCode::InvalidArgument, "null executor");
  if (map_.count(x->operator_name))
    throw Error(ErrorCode::InvalidArgument, "operator '" + x->operator_name + "' already has an executor");
  map_.emplace(x->operator_name, std::move(x));
}

const Executor* ExecutorRegistry::find(const std::string& op) const {
  auto it = map_.find(op);
  return it == map_.end() ? nullptr : it->second.get();
}

std::shared_ptr<const Executor> ExecutorRegistry::get(const std::string& op) const {
  auto it = map_.find(op);
  return it == map_.end() ? nullptr : it->second;
}

std::vector<std::string> ExecutorRegistry::operators() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : map_) out.push_back(k);
  return out;
}

Scenario Scenario::make(const std::string& id, const world::WorldConfig& base) {
  Scenario sc;
  sc.id = id;
  sc.config = base;
  symbolic::Domain domain = *pogostick_domain();
  std::vector<symbolic::TypedObject> extra;
  if (id != "none") {
    const auto& spec = novelty::find_novelty(id);
    sc.novelty = spec;
    sc.config = novelty::patch_config(base, spec);
    domain = novelty::patch_domain(domain, spec);
    extra = spec.new_objects;
    sc.novel_actions = spec.new_actions;
  }
  sc.knowledge = Knowledge::build(domain, extra);
  sc.actions = world::base_actions();
  for (const auto& a : sc.novel_actions) {
    if (std::find(sc.actions.begin(), sc.actions.end(), a) == sc.actions.end()) sc.actions.push_back(a);
  }
  sc.oracle = std::make_shared<PlannabilityOracle>(sc.knowledge.task);
  return sc;
}

std::vector<Item> Scenario::novel_world_entities(const World& w) const {
  if (!novelty) return {};
  return novelty::novel_world_entities(w, *novelty);
}

namespace {

constexpr int kMaxMacroDepth = 3;

void check_compatible(const Executor& x, const World& w) {
  if (x.entities != w.entities())
    throw Error(ErrorCode::ExecutorMismatch, "executor '" + x.id + "' was trained on a different entity set");
  if (x.policy.inputs() != w.observe().size())
    throw Error(ErrorCode::ExecutorMismatch, "executor '" + x.id + "' expects a different observation size");
}

std::size_t draw(const learner::Policy& pi, const World& w, std::mt19937_64& rng) {
  auto p = pi.probs(w.observe().flatten());
  return std::discrete_distribution<std::size_t>(p.begin(), p.end())(rng);
}

}  // namespace

std::size_t execute_learner_action(const LearnerAction& a, World& w, const Scenario& sc,
                                   const ExecutorRegistry& registry, std::mt19937_64& rng, int depth) {
  if (a.kind == LearnerAction::Kind::Primitive) {
    int before = w.step_count();
    try {
      w.execute(a.action);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoPath && e.code() != ErrorCode::NoTarget) throw;
    }
    return static_cast<std::size_t>(w.step_count() - before);
  }
  const Executor* x = registry.find(a.macro);
  if (!x) throw Error(ErrorCode::InvalidArgument, "no executor registered for '" + a.macro + "'");
  int before = w.step_count();
  run_macro(*x, w, sc, registry, 50, rng, depth + 1);
  return static_cast<std::size_t>(w.step_count() - before);
}

int run_macro(const Executor& x, World& w, const Scenario& sc, const ExecutorRegistry& registry, int max_decisions,
              std::mt19937_64& rng, int depth) {
  if (depth > kMaxMacroDepth) return 0;
  check_compatible(x, w);
  const GroundOperator* op = sc.knowledge.task.find_operator(x.operator_name);
  if (!op) throw Error(ErrorCode::ExecutorMismatch, "executor operator '" + x.operator_name + "' is not in the task");
  Detector d = sc.detector();
  GroundCondition goal = effect_condition(*op, d.detect(w));
  int decisions = 0;
  while (decisions < max_decisions && !w.episode_over() && !goal.satisfied_by(d.detect(w))) {
    std::size_t a = draw(x.policy, w, rng);
    execute_learner_action(x.actions[a], w, sc, registry, rng, depth);
    ++decisions;
  }
  return decisions;
}

ExecutorRun run_executor(const Executor& x, World& w, const Scenario& sc, const ExecutorRegistry& registry,
                         const std::vector<GroundCondition>& clauses, int max_decisions, std::mt19937_64& rng) {
  check_compatible(x, w);
  Detector d = sc.detector();
  ExecutorRun run;
  while (true) {
    if (executor_beta(clauses, d.detect(w), *sc.oracle)) {
      run.terminated = true;
      return run;
    }
    if (run.decisions >= max_decisions || w.episode_over()) return run;
    std::size_t a = draw(x.policy, w, rng);
    try {
      execute_learner_action(x.actions[a], w, sc, registry, rng);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EpisodeOver) throw;
      return run;
    }
    ++run.decisions;
  }
}

EpisodeOutcome execute_plan(World& w, const Scenario& sc, ExecutorRegistry& registry, const PlanHooks& hooks,
                            int executor_decisions, int max_replans) {
  EpisodeOutcome out;
  Detector d = sc.detector();
  const int start = w.step_count();
  const auto& goal = sc.knowledge.task.goal;
  auto finish = [&](bool success, std::string failure) {
    out.success = success;
    out.failure = std::move(failure);
    out.primitive_steps = w.step_count() - start;
    return out;
  };
  auto make_plan = [&](Plan& p) -> std::string {
    auto r = sc.oracle->plan_from(d.detect(w));
    if (r.status == planner::SearchStatus::Found) {
      p = std::move(r.plan);
      return {};
    }
    return r.status == planner::SearchStatus::Timeout ? "planner timeout" : "no plan";
  };

  std::mt19937_64 rng(w.seed() * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(start));
  Plan plan;
  if (auto err = make_plan(plan); !err.empty()) return finish(false, err);
  std::size_t i = 0;
  try {
    while (true) {
      SymbolicState s = d.detect(w);
      if (goal.satisfied_by(s)) return finish(true, {});
      if (w.episode_over()) return finish(false, "horizon reached");
      bool need_replan = i >= plan.steps.size() || !symbolic::applicable(s, plan.steps[i]);
      if (need_replan) {
        if (out.replans >= max_replans) return finish(false, "replan limit reached");
        ++out.replans;
        if (auto err = make_plan(plan); !err.empty()) return finish(false, err);
        i = 0;
        continue;
      }
      if (hooks.before_operator && !hooks.before_operator(plan, i, w)) {
        out.stopped = true;
        return finish(false, "stopped");
      }
      const GroundOperator& op = plan.steps[i];
      ExecResult r = execute_operator(op, w, d);
      if (r.success) {
        ++i;
        continue;
      }
      auto x = registry.get(op.name);
      if (!x && hooks.on_impasse) {
        x = hooks.on_impasse(plan, i, r.before);
        if (x) {
          registry.add(x);
          out.discoveries.push_back(op.name);
        }
      }
      if (!x) return finish(false, "impasse at '" + op.name + "'");
      auto clauses = termination_clauses(plan, i, r.before);
      out.executor_calls.push_back(op.name);
      ExecutorRun run = run_executor(*x, w, sc, registry, clauses, executor_decisions, rng);
      if (!run.terminated) return finish(false, "executor for '" + op.name + "' did not terminate");
      ++i;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EpisodeOver) throw;
    return finish(false, "horizon reached");
  }
}

}  // namespace rapidlearn::bridge
