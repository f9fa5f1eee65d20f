#include "rapidlearn/discovery.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace rapidlearn::discovery {

using bridge::Detector;
using bridge::LearnerAction;
using planner::Plannability;
using world::Action;
using world::ActionKind;
using world::Item;
using world::World;

void DiscoveryConfig::validate() const {
  if (!(phi1 > 0.0 && phi2 < 0.0)) throw Error(ErrorCode::InvalidArgument, "rewards need phi1 > 0 > phi2");
  if (e_max == 0 || U <= 0 || update_rate <= 0 || delta_G <= 0 || eta <= 0 || upsilon < 0)
    throw Error(ErrorCode::InvalidArgument, "episode budget, U and windows must be positive");
  if (eta > delta_G) throw Error(ErrorCode::InvalidArgument, "eta cannot exceed the success window");
}

bool PlannableStateSet::satisfied_by(const SymbolicState& s) const {
  return std::any_of(clauses.begin(), clauses.end(), [&](const GroundCondition& c) { return c.satisfied_by(s); });
}

PlannableStateSet plannable_states(const Plan& plan, std::size_t index, const SymbolicState& base) {
  if (index >= plan.steps.size())
    throw Error(ErrorCode::OperatorNotInPlan, "plan has no step " + std::to_string(index));
  return {bridge::termination_clauses(plan, index, base)};
}

PlannableStateSet plannable_states(const Plan& plan, const std::string& op_name, const SymbolicState& base) {
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (plan.steps[i].name == op_name) return plannable_states(plan, i, base);
  }
  throw Error(ErrorCode::OperatorNotInPlan, "'" + op_name + "' is not in the plan");
}

RewardResult reward(const PlannableStateSet& sr, const SymbolicState& next, int step_count,
                    planner::PlannabilityOracle& oracle, const DiscoveryConfig& cfg) {
  RewardResult r;
  if (sr.satisfied_by(next)) {
    r.clause_held = true;
    r.plannability = oracle.query(next);
    r.done = true;
    r.success = r.plannability == Plannability::True;
    r.reward = r.success ? cfg.phi1 : cfg.phi2;
    return r;
  }
  r.reward = cfg.step_reward;
  r.done = step_count >= cfg.U;
  return r;
}

FailurePoint reach_failed_operator(World& w, const Scenario& sc, ExecutorRegistry& registry,
                                   const std::string& op_name, std::uint64_t world_seed) {
  w.reset(world_seed);
  Detector d = sc.detector();
  FailurePoint fp;
  bool reached = false;
  bridge::PlanHooks hooks;
  hooks.before_operator = [&](const Plan& plan, std::size_t i, World& live) {
    if (plan.steps[i].name != op_name) return true;
    World probe = live;
    if (bridge::execute_operator(plan.steps[i], probe, d).success) return true;
    fp.plan = plan;
    fp.index = i;
    fp.base = d.detect(live);
    fp.prefix_steps = live.step_count();
    reached = true;
    return false;
  };
  auto out = bridge::execute_plan(w, sc, registry, hooks);
  if (!reached) {
    throw Error(ErrorCode::PrefixExecutionFailed,
                "could not reach a failing '" + op_name + "' (" + (out.success ? "plan succeeded" : out.failure) + ")");
  }
  return fp;
}

CurriculumResult curriculum_reset(World& w, const std::vector<Item>& novel, std::mt19937_64& rng) {
  if (novel.empty()) throw Error(ErrorCode::NoNovelEntity, "no novel entity in the world");
  CurriculumResult r;
  r.target = novel[std::uniform_int_distribution<std::size_t>(0, novel.size() - 1)(rng)];
  World replay = w;
  world::ApproachResult a;
  try {
    a = w.approach(r.target);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoPath && e.code() != ErrorCode::NoTarget) throw;
    return r;
  }
  for (const auto& t : a.transitions) {
    r.steps.push_back({replay.observe().flatten(), t.action});
    replay.step(t.action);
  }
  r.reached = a.reached;
  return r;
}

bool converged(const std::vector<bool>& successes, const std::vector<double>& returns, const DiscoveryConfig& cfg) {
  if (successes.size() != returns.size()) throw Error(ErrorCode::InvalidArgument, "history lengths differ");
  const std::size_t n = successes.size();
  const auto window = static_cast<std::size_t>(cfg.delta_G);
  if (n < window) return false;
  auto rate = [&](std::size_t k) {
    k = std::min(k, n);
    auto c = std::count(successes.end() - static_cast<std::ptrdiff_t>(k), successes.end(), true);
    return static_cast<double>(c) / static_cast<double>(k);
  };
  auto wins = std::count(successes.end() - static_cast<std::ptrdiff_t>(window), successes.end(), true);
  if (wins < cfg.eta) return false;
  double mean =
      std::accumulate(returns.end() - static_cast<std::ptrdiff_t>(window), returns.end(), 0.0) / static_cast<double>(window);
  if (mean < cfg.delta_R) return false;
  return rate(static_cast<std::size_t>(cfg.eta + cfg.upsilon)) == rate(static_cast<std::size_t>(cfg.eta));
}

void write_training_header(std::ostream& out) { out << "episode,steps,return,done,epsilon,rho,converged\n"; }

void write_training_record(std::ostream& out, const TrainingRecord& r) {
  out << r.episode << ',' << r.steps << ',' << r.episode_return << ',' << (r.done ? 1 : 0) << ','
      << std::setprecision(6) << r.epsilon << ',' << r.rho << ',' << (r.converged ? 1 : 0) << '\n';
}

std::vector<LearnerAction> discovery_actions(const Scenario& sc, const ExecutorRegistry& registry) {
  std::vector<LearnerAction> out;
  for (const auto& a : sc.actions) out.push_back(LearnerAction::primitive(a));
  for (const auto& op : registry.operators()) out.push_back(LearnerAction::executor(op));
  return out;
}

std::vector<bool> bias_mask(const std::vector<LearnerAction>& actions, const Scenario& sc,
                            const symbolic::GroundOperator& failed) {
  auto realized = bridge::realize(failed);
  std::vector<bool> mask(actions.size(), false);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].kind != LearnerAction::Kind::Primitive) continue;
    const Action& a = actions[i].action;
    bool novel = std::find(sc.novel_actions.begin(), sc.novel_actions.end(), a) != sc.novel_actions.end();
    mask[i] = novel || (realized && *realized == a);
  }
  return mask;
}

namespace {

std::size_t index_of(const std::vector<LearnerAction>& actions, const Action& a) {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].kind == LearnerAction::Kind::Primitive && actions[i].action == a) return i;
  }
  throw Error(ErrorCode::InvariantViolation, "curriculum used an action outside the learner's action space");
}

// Success rate over the last `window` episodes (or fewer at the start).
double rolling_rate(const std::vector<bool>& s, std::size_t window) {
  std::size_t k = std::min(window, s.size());
  if (k == 0) return 0.0;
  return static_cast<double>(std::count(s.end() - static_cast<std::ptrdiff_t>(k), s.end(), true)) /
         static_cast<double>(k);
}

}  // namespace

DiscoveryResult discover_executor(const std::string& op_name, const Scenario& sc, ExecutorRegistry& registry,
                                  learner::Strategy strategy, const DiscoveryConfig& cfg, std::uint64_t seed,
                                  const DiscoveryOptions& options) {
  cfg.validate();
  const auto* failed = sc.knowledge.task.find_operator(op_name);
  if (!failed) throw Error(ErrorCode::OperatorNotInPlan, "'" + op_name + "' is not a ground operator of the task");
  std::mt19937_64 rng(seed);
  Detector d = sc.detector();

  world::WorldConfig wc = sc.config;
  wc.horizon = 1 << 30;  // the episode cap is U, not the world horizon
  World w(wc);

  auto actions = discovery_actions(sc, registry);
  auto mask = bias_mask(actions, sc, *failed);
  learner::ExplorationState expl(strategy, mask, cfg.eps_max, cfg.c, cfg.mu);
  const std::size_t obs_size = w.observe().size();
  learner::Policy policy = learner::Policy::random(obs_size, actions.size(), rng, 0.1, cfg.hidden);
  learner::Policy best = policy;
  double best_rate = -1.0;
  learner::EpisodeBuffer buffer;
  learner::Optimizer optimizer(cfg.update);
  std::vector<bool> successes;
  std::vector<double> returns;
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  DiscoveryResult result;
  double rho = cfg.rho_max;
  if (options.training_log) write_training_header(*options.training_log);

  for (std::uint64_t e = 0; e < cfg.e_max; ++e) {
    if (cfg.max_timesteps && result.timesteps >= cfg.max_timesteps) break;
    FailurePoint fp;
    for (int attempt = 0;; ++attempt) {
      try {
        fp = reach_failed_operator(w, sc, registry, op_name, rng());
        break;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::PrefixExecutionFailed || attempt + 1 >= cfg.prefix_retries) throw;
      }
    }
    PlannableStateSet sr = plannable_states(fp.plan, fp.index, fp.base);
    const int start_steps = w.step_count();
    int t = 0;
    double ep_return = 0.0;
    bool done = false, success = false;

    if (strategy != learner::Strategy::EG && coin(rng) < rho) {
      auto novel = sc.novel_world_entities(w);
      if (!novel.empty()) {
        auto cur = curriculum_reset(w, novel, rng);
        for (const auto& st : cur.steps) {
          ++t;
          buffer.append(st.observation, index_of(actions, st.action), cfg.step_reward, false);
          ep_return += cfg.step_reward;
        }
      }
    }

    while (!done && t < cfg.U) {
      auto obs = w.observe().flatten();
      auto probs = policy.probs(obs);
      std::size_t a = learner::select_action(probs, expl, rng);
      bridge::execute_learner_action(actions[a], w, sc, registry, rng);
      ++t;
      SymbolicState next = d.detect(w);
      RewardResult rr = reward(sr, next, t, *sc.oracle, cfg);
      if (options.audit && rr.success) result.rewarded_states.push_back(next);
      buffer.append(std::move(obs), a, rr.reward, rr.done || t >= cfg.U);
      ep_return += rr.reward;
      done = rr.done;
      success = rr.success;
    }
    if (!buffer.empty() && !buffer.dones.back()) buffer.dones.back() = true;

    result.timesteps += static_cast<std::uint64_t>(w.step_count() - start_steps);
    result.episodes = e + 1;
    successes.push_back(success);
    returns.push_back(ep_return);

    if ((e + 1) % static_cast<std::uint64_t>(cfg.update_rate) == 0 && !buffer.empty())
      learner::update_network(policy, buffer, cfg.update, optimizer);

    expl.epsilon = learner::decayed(cfg.eps_max, cfg.eps_min, cfg.decay, e + 1);
    rho = learner::decayed(cfg.rho_max, cfg.rho_min, cfg.decay, e + 1);

    bool conv = converged(successes, returns, cfg);
    double r100 = rolling_rate(successes, static_cast<std::size_t>(cfg.delta_G));
    if (r100 > best_rate) {
      best_rate = r100;
      best = policy;
    }
    TrainingRecord rec{e, t, ep_return, success, expl.epsilon, rho, conv};
    result.log.push_back(rec);
    if (options.training_log) write_training_record(*options.training_log, rec);
    if (conv) {
      result.converged = true;
      best = policy;
      break;
    }
  }

  auto x = std::make_shared<bridge::Executor>();
  x->operator_name = op_name;
  x->id = sc.id + ":" + op_name;
  x->actions = actions;
  x->entities = w.entities();
  x->policy = result.converged ? policy : best;
  x->meta = {sc.id, learner::strategy_name(strategy), seed, result.converged, result.timesteps, result.episodes};
  result.executor = x;
  return result;
}

std::uint64_t AgentReport::timesteps() const {
  std::uint64_t t = 0;
  for (const auto& d : discoveries) t += d.timesteps;
  return t;
}

bool AgentReport::all_converged() const {
  return std::all_of(discoveries.begin(), discoveries.end(), [](const DiscoveryResult& d) { return d.converged; });
}

AgentReport rapid_learn(World& w, const Scenario& sc, ExecutorRegistry& registry, learner::Strategy strategy,
                        const DiscoveryConfig& cfg, std::uint64_t seed, const DiscoveryOptions& options) {
  AgentReport report;
  bridge::PlanHooks hooks;
  hooks.on_impasse = [&](const Plan& plan, std::size_t i, const SymbolicState&) -> std::shared_ptr<const bridge::Executor> {
    auto res = discover_executor(plan.steps[i].name, sc, registry, strategy, cfg, seed + report.discoveries.size(),
                                 options);
    auto x = res.executor;
    report.discoveries.push_back(std::move(res));
    return x;
  };
  report.outcome = bridge::execute_plan(w, sc, registry, hooks);
  return report;
}

}  // namespace rapidlearn::discovery
