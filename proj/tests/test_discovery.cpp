#include <doctest.h>

#include <sstream>

#include "rapidlearn/discovery.hpp"
#include "support.hpp"

using namespace rapidlearn;
using namespace rapidlearn::discovery;
using testsupport::NamedCondition;

namespace {

// Clause oracle written in name space straight from the ground operators:
// clause one is the failed operator's effect relative to the base state;
// clause two conjoins the effects of every later step whose precondition
// puts a lower bound on a fluent the failed operator increases.
std::vector<NamedCondition> clause_oracle(const Plan& plan, std::size_t i, const SymbolicState& base,
                                          const symbolic::Universe& u) {
  auto effect = [&](const symbolic::GroundOperator& op) {
    NamedCondition c;
    std::set<std::string> adds;
    for (int id : op.add) adds.insert(u.fact_name(id));
    c.pos = adds;
    for (int id : op.del)
      if (!adds.count(u.fact_name(id))) c.neg.insert(u.fact_name(id));
    for (const auto& n : op.numeric)
      if (n.delta > 0) c.lower[u.fluent_name(n.fluent)] = base.fluents[static_cast<std::size_t>(n.fluent)] + n.delta;
    return c;
  };
  std::set<std::string> produced;
  for (const auto& n : plan.steps[i].numeric)
    if (n.delta > 0) produced.insert(u.fluent_name(n.fluent));

  std::vector<NamedCondition> out{effect(plan.steps[i])};
  NamedCondition all;
  bool any = false;
  for (std::size_t j = i + 1; j < plan.steps.size(); ++j) {
    bool reads = false;
    for (const auto& c : plan.steps[j].precondition.numeric)
      reads |= c.cmp == symbolic::Cmp::GreaterEqual && produced.count(u.fluent_name(c.fluent)) > 0;
    if (!reads) continue;
    auto e = effect(plan.steps[j]);
    all.pos.insert(e.pos.begin(), e.pos.end());
    all.neg.insert(e.neg.begin(), e.neg.end());
    for (const auto& [f, v] : e.lower) all.lower[f] = std::max(all.lower.count(f) ? all.lower[f] : v, v);
    any = true;
  }
  if (any && !(all == out.front())) out.push_back(all);
  return out;
}

FailurePoint failure_for(const Scenario& sc, const std::string& op, std::uint64_t seed = 11) {
  ExecutorRegistry reg;
  world::World w(sc.config);
  return reach_failed_operator(w, sc, reg, op, seed);
}

}  // namespace

TEST_CASE("plannable states match the clause oracle on every scenario plan") {
  for (const auto& id : testsupport::scenario_ids()) {
    CAPTURE(id);
    auto sc = Scenario::make(id);
    const auto& u = sc.knowledge.universe();
    auto fp = failure_for(sc, testsupport::first_failure(id));
    for (std::size_t i = 0; i < fp.plan.steps.size(); ++i) {
      CAPTURE(fp.plan.steps[i].name);
      auto sr = plannable_states(fp.plan, i, fp.base);
      std::vector<NamedCondition> got;
      for (const auto& c : sr.clauses) got.push_back(testsupport::named(c, u));
      CHECK(got == clause_oracle(fp.plan, i, fp.base, u));
    }
  }
}

TEST_CASE("plannable state examples from the pre-novelty plan") {
  auto sc = Scenario::make("none");
  const auto& u = sc.knowledge.universe();
  world::World w(sc.config);
  w.reset(0);
  auto base = sc.detector().detect(w);
  auto plan = *planner::plan(sc.knowledge.task_from(base));

  auto rubber = plannable_states(plan, "extractrubber", base);
  REQUIRE(rubber.clauses.size() == 2);
  CHECK(testsupport::named(rubber.clauses[0], u).lower == std::map<std::string, std::int64_t>{{"inventory rubber", 1}});
  CHECK(testsupport::named(rubber.clauses[1], u).lower ==
        std::map<std::string, std::int64_t>{{"inventory pogo_stick", 1}});

  auto brk = plannable_states(plan, "break", base);
  REQUIRE(brk.clauses.size() == 2);
  CHECK(testsupport::named(brk.clauses[0], u).lower.at("inventory tree_log") == 1);
  CHECK(testsupport::named(brk.clauses[1], u).lower.at("inventory plank") == 4);

  auto last = plannable_states(plan, plan.steps.size() - 1, base);
  CHECK(last.clauses.size() == 1);

  CHECK_THROWS_AS(plannable_states(plan, "scrape_plank", base), Error);
  try {
    plannable_states(plan, "scrape_plank", base);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OperatorNotInPlan);
  }
}

TEST_CASE("sparse reward cases") {
  auto k = bridge::Knowledge::build(*bridge::pogostick_domain());
  planner::PlannabilityOracle oracle(k.task);
  DiscoveryConfig cfg;
  auto base = testsupport::state(k, {"facing tree_log", "holding tree_tap"},
                                 {{"inventory plank", 2}, {"inventory stick", 4}, {"inventory tree_tap", 1},
                                  {"world tree_log", 3}, {"world crafting_table", 1}});
  PlannableStateSet sr;
  symbolic::GroundCondition rubber;
  rubber.numeric.push_back({k.universe().require_fluent("inventory rubber"), symbolic::Cmp::GreaterEqual, 1});
  sr.clauses.push_back(rubber);

  auto intact = base;
  intact.set_value(k.universe(), "inventory rubber", 1);
  auto r = reward(sr, intact, 5, oracle, cfg);
  CHECK(r.reward == 1000.0);
  CHECK(r.done);
  CHECK(r.success);

  auto wasted = intact;
  wasted.set_value(k.universe(), "inventory plank", 0);
  wasted.set_value(k.universe(), "inventory stick", 8);
  wasted.set_value(k.universe(), "world tree_log", 0);
  r = reward(sr, wasted, 5, oracle, cfg);
  CHECK(r.reward == -350.0);
  CHECK(r.done);
  CHECK_FALSE(r.success);

  r = reward(sr, base, 5, oracle, cfg);
  CHECK(r.reward == -1.0);
  CHECK_FALSE(r.done);
  r = reward(sr, base, cfg.U, oracle, cfg);
  CHECK(r.reward == -1.0);
  CHECK(r.done);
}

TEST_CASE("reach_failed_operator stops right before the failing step") {
  SUBCASE("RT-hard is poised at extractrubber") {
    auto sc = Scenario::make("RT-hard");
    auto fp = failure_for(sc, "extractrubber");
    const auto& op = fp.plan.steps[fp.index];
    CHECK(op.name == "extractrubber");
    CHECK(symbolic::applicable(fp.base, op));
    const auto& u = sc.knowledge.universe();
    CHECK(fp.base.holds(u, "holding tree_tap"));
    CHECK(fp.base.holds(u, "facing tree_log"));
  }
  SUBCASE("ATB-easy is facing a tree at break") {
    auto sc = Scenario::make("ATB-easy");
    auto fp = failure_for(sc, "break");
    CHECK(fp.plan.steps[fp.index].name == "break");
    CHECK(fp.base.holds(sc.knowledge.universe(), "facing tree_log"));
  }
  SUBCASE("no failing step in the closed world") {
    auto sc = Scenario::make("none");
    try {
      failure_for(sc, "break");
      FAIL("expected PrefixExecutionFailed");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PrefixExecutionFailed);
    }
  }
}

TEST_CASE("curriculum reset") {
  SUBCASE("ATB-hard reaches the axe") {
    auto sc = Scenario::make("ATB-hard");
    world::World w(sc.config);
    w.reset(8);
    std::mt19937_64 rng(1);
    auto r = curriculum_reset(w, sc.novel_world_entities(w), rng);
    CHECK(r.target == world::Item::Axe);
    CHECK(r.reached);
    CHECK(w.front_cell().item == world::Item::Axe);
    CHECK(r.steps.size() == static_cast<std::size_t>(w.step_count()));
  }
  SUBCASE("SP has nothing novel to visit") {
    auto sc = Scenario::make("SP");
    world::World w(sc.config);
    w.reset(8);
    std::mt19937_64 rng(1);
    CHECK(sc.novel_world_entities(w).empty());
    CHECK_THROWS_AS(curriculum_reset(w, sc.novel_world_entities(w), rng), Error);
  }
  SUBCASE("FCT-hard choice is seeded") {
    auto sc = Scenario::make("FCT-hard");
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      world::World a(sc.config), b(sc.config);
      a.reset(3);
      b.reset(3);
      std::mt19937_64 r1(seed), r2(seed);
      auto x = curriculum_reset(a, sc.novel_world_entities(a), r1);
      auto y = curriculum_reset(b, sc.novel_world_entities(b), r2);
      CHECK(x.target == y.target);
      CHECK(a.ascii() == b.ascii());
    }
  }
}

TEST_CASE("convergence rule") {
  DiscoveryConfig cfg;
  std::vector<bool> wins(100, true);
  std::vector<double> rets(100, 950.0);
  CHECK(converged(wins, rets, cfg));

  std::vector<bool> some(wins);
  for (int i = 0; i < 5; ++i) some[static_cast<std::size_t>(i) * 7] = false;
  CHECK_FALSE(converged(some, rets, cfg));

  CHECK_FALSE(converged(std::vector<bool>(50, true), std::vector<double>(50, 990.0), cfg));
  CHECK_FALSE(converged(wins, std::vector<double>(100, 850.0), cfg));

  // Still climbing: the longer window has a lower rate than the last 96.
  std::vector<bool> climb(250, false);
  std::vector<double> climb_r(250, -300.0);
  for (std::size_t i = 150; i < 250; ++i) climb[i] = true, climb_r[i] = 990.0;
  CHECK_FALSE(converged(climb, climb_r, cfg));
  std::vector<bool> flat(300, true);
  CHECK(converged(flat, std::vector<double>(300, 990.0), cfg));
}

TEST_CASE("one-episode budget returns an unconverged executor") {
  auto sc = Scenario::make("ATB-easy");
  ExecutorRegistry reg;
  DiscoveryConfig cfg;
  cfg.e_max = 1;
  auto r = discover_executor("break", sc, reg, learner::Strategy::KgeUcb, cfg, 4);
  CHECK(r.episodes == 1);
  CHECK_FALSE(r.converged);
  REQUIRE(r.executor);
  CHECK(r.executor->operator_name == "break");
  CHECK(r.log.size() == 1);
}

TEST_CASE("every phi1 emission is on a plannable state") {
  for (const char* id : {"SP", "ATB-easy"}) {
    CAPTURE(id);
    auto sc = Scenario::make(id);
    ExecutorRegistry reg;
    DiscoveryConfig cfg;
    cfg.e_max = 1000;
    cfg.delta_G = cfg.eta = 1000000;  // never stop early
    DiscoveryOptions opt;
    opt.audit = true;
    auto r = discover_executor("break", sc, reg, learner::Strategy::KgeUab, cfg, 21, opt);
    CHECK(r.episodes == 1000);
    std::size_t wins = 0;
    for (const auto& rec : r.log) wins += rec.episode_return > 0 ? 1 : 0;
    CHECK(r.rewarded_states.size() == wins);
    CHECK(wins > 100);
    for (const auto& s : r.rewarded_states) {
      // Fresh search, no cache.
      CHECK(planner::exists_plan(s, sc.knowledge.task) == planner::Plannability::True);
    }
  }
}

TEST_CASE("discovery is deterministic for a seed") {
  auto sc = Scenario::make("SP");
  DiscoveryConfig cfg;
  cfg.e_max = 150;
  ExecutorRegistry r1, r2;
  auto a = discover_executor("break", sc, r1, learner::Strategy::KgeUcb, cfg, 9);
  auto b = discover_executor("break", sc, r2, learner::Strategy::KgeUcb, cfg, 9);
  CHECK(a.timesteps == b.timesteps);
  CHECK(a.executor->policy.params() == b.executor->policy.params());
  std::ostringstream la, lb;
  for (const auto& rec : a.log) write_training_record(la, rec);
  for (const auto& rec : b.log) write_training_record(lb, rec);
  CHECK(la.str() == lb.str());
}

TEST_CASE("training episodes stay within U decisions") {
  auto sc = Scenario::make("FCT-easy");
  ExecutorRegistry reg;
  DiscoveryConfig cfg;
  cfg.e_max = 40;
  auto r = discover_executor("crafttree_tap", sc, reg, learner::Strategy::EG, cfg, 2);
  for (const auto& rec : r.log) {
    CHECK(rec.steps >= 1);
    CHECK(rec.steps <= cfg.U);
  }
}

TEST_CASE("ATB-easy needs exactly one executor") {
  auto sc = Scenario::make("ATB-easy");
  world::World w(sc.config);
  w.reset(1);
  ExecutorRegistry reg;
  DiscoveryConfig cfg;
  auto rep = rapid_learn(w, sc, reg, learner::Strategy::KgeUcb, cfg, 1);
  REQUIRE(rep.discoveries.size() == 1);
  CHECK(rep.discoveries[0].executor->operator_name == "break");
  CHECK(rep.discoveries[0].converged);
  CHECK(rep.outcome.success);
}

TEST_CASE("ATB+FCT-easy needs two independent executors") {
  auto sc = Scenario::make("ATB+FCT-easy");
  world::World w(sc.config);
  w.reset(1);
  ExecutorRegistry reg;
  DiscoveryConfig cfg;
  cfg.max_timesteps = 20000;
  auto rep = rapid_learn(w, sc, reg, learner::Strategy::KgeUcb, cfg, 1);
  REQUIRE(rep.discoveries.size() == 2);
  CHECK(rep.discoveries[0].executor->operator_name == "break");
  CHECK(rep.discoveries[1].executor->operator_name == "crafttree_tap");
  CHECK(reg.size() == 2);
}
