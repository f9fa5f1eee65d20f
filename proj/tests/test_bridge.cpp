#include <doctest.h>

#include <filesystem>

#include "rapidlearn/discovery.hpp"
#include "support.hpp"

using namespace rapidlearn;
using namespace rapidlearn::bridge;
using world::ActionKind;
using world::Item;

namespace {

world::World empty_arena(const Scenario& sc) {
  world::World w(sc.config);
  w.reset(0);
  for (int y = 1; y < w.height() - 1; ++y)
    for (int x = 1; x < w.width() - 1; ++x) w.mutable_cell(x, y) = world::Cell{};
  return w;
}

}  // namespace

TEST_CASE("detector reads facing, holding and counts") {
  auto sc = Scenario::make("none");
  auto d = sc.detector();
  const auto& u = d.universe();
  auto w = empty_arena(sc);
  w.mutable_cell(5, 4).item = Item::TreeLog;
  w.mutable_cell(2, 2).item = Item::CraftingTable;
  w.place_agent(5, 5, world::Heading::North);

  auto s = d.detect(w);
  CHECK(s.holds(u, "facing tree_log"));
  CHECK(s.holds(u, "holding air"));
  CHECK(s.value(u, "world tree_log") == 1);
  CHECK(s.value(u, "world crafting_table") == 1);

  w.step({ActionKind::Break});
  s = d.detect(w);
  CHECK(s.holds(u, "facing air"));
  CHECK_FALSE(s.holds(u, "facing tree_log"));
  CHECK(s.value(u, "inventory tree_log") == 1);

  w.set_inventory(Item::TreeTap, 1);
  w.step({ActionKind::Select, Item::TreeTap});
  s = d.detect(w);
  CHECK(s.holds(u, "holding tree_tap"));
  CHECK_FALSE(s.holds(u, "holding air"));
  symbolic::check_state_invariants(s, u);
}

TEST_CASE("rubber trees look like trees and fire has no symbol") {
  CHECK(perceived_as(Item::RubberTree) == std::optional<std::string>("tree_log"));
  CHECK_FALSE(perceived_as(Item::Fire).has_value());
  CHECK(perceived_as(Item::CraftingTable) == std::optional<std::string>("crafting_table"));
}

TEST_CASE("operators realize as simulator actions") {
  auto sc = Scenario::make("RT-hard");
  const auto& t = sc.knowledge.task;
  auto a = realize(*t.find_operator("approach air tree_log"));
  REQUIRE(a);
  CHECK(a->kind == ActionKind::Approach);
  CHECK(a->arg == Item::TreeLog);
  CHECK(realize(*t.find_operator("select tree_tap"))->kind == ActionKind::Select);
  CHECK(realize(*t.find_operator("break"))->kind == ActionKind::Break);
  CHECK(realize(*t.find_operator("place_tree_tap"))->kind == ActionKind::PlaceTreeTap);
}

TEST_CASE("operator execution and impasses") {
  SUBCASE("pre-novelty break succeeds") {
    auto sc = Scenario::make("none");
    auto w = empty_arena(sc);
    w.mutable_cell(5, 4).item = Item::TreeLog;
    w.place_agent(5, 5, world::Heading::North);
    auto r = execute_operator(*sc.knowledge.task.find_operator("break"), w, sc.detector());
    CHECK(r.success);
    CHECK(r.after.value(sc.knowledge.universe(), "inventory tree_log") == 1);
  }
  SUBCASE("break without the axe is an impasse") {
    auto sc = Scenario::make("ATB-easy");
    auto w = empty_arena(sc);
    w.mutable_cell(5, 4).item = Item::TreeLog;
    w.place_agent(5, 5, world::Heading::North);
    CHECK_FALSE(execute_operator(*sc.knowledge.task.find_operator("break"), w, sc.detector()).success);
  }
  SUBCASE("extractrubber without a placed tap is an impasse") {
    auto sc = Scenario::make("RT-hard");
    auto w = empty_arena(sc);
    w.mutable_cell(5, 4).item = Item::RubberTree;
    w.place_agent(5, 5, world::Heading::North);
    w.set_inventory(Item::TreeTap, 1);
    w.step({ActionKind::Select, Item::TreeTap});
    CHECK_FALSE(execute_operator(*sc.knowledge.task.find_operator("extractrubber"), w, sc.detector()).success);
  }
  SUBCASE("unmet precondition throws") {
    auto sc = Scenario::make("none");
    auto w = empty_arena(sc);
    try {
      execute_operator(*sc.knowledge.task.find_operator("craftpogo_stick"), w, sc.detector());
      FAIL("expected PreconditionUnmet");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PreconditionUnmet);
    }
  }
}

TEST_CASE("effects_hold and effect_condition agree on the operator effect") {
  auto k = Knowledge::build(*pogostick_domain());
  const auto& u = k.universe();
  const auto& brk = *k.task.find_operator("break");
  auto before = testsupport::state(k, {"facing tree_log"}, {{"world tree_log", 3}});
  auto after = symbolic::apply(before, brk, u);
  CHECK(effects_hold(brk, before, after));
  CHECK(effect_condition(brk, before).satisfied_by(after));
  CHECK_FALSE(effects_hold(brk, before, before));
  CHECK_FALSE(effect_condition(brk, before).satisfied_by(before));
}

// Three rows per scenario: the impasse state itself, the state the failed
// operator would have produced, and that state with every other resource
// removed so no plan remains.
TEST_CASE("executor termination truth table for every scenario") {
  for (const auto& id : testsupport::scenario_ids()) {
    CAPTURE(id);
    auto sc = Scenario::make(id);
    const auto& u = sc.knowledge.universe();
    ExecutorRegistry reg;
    world::World w(sc.config);
    auto fp = discovery::reach_failed_operator(w, sc, reg, testsupport::first_failure(id), 11);
    const auto& oi = fp.plan.steps[fp.index];
    auto clauses = termination_clauses(fp.plan, fp.index, fp.base);
    auto tail = dependent_tail(fp.plan, fp.index);
    planner::PlannabilityOracle oracle(sc.knowledge.task);

    auto produced = symbolic::apply_unchecked(fp.base, oi);
    auto stripped = produced;
    for (std::size_t f = 0; f < u.fluent_count(); ++f) {
      const auto& name = u.fluent_name(static_cast<int>(f));
      if (name.rfind("inventory ", 0) == 0 || name == "world tree_log") stripped.fluents[f] = 0;
    }
    for (const auto& c : clauses.front().numeric) stripped.fluents[static_cast<std::size_t>(c.fluent)] = c.value;
    REQUIRE(clauses.front().satisfied_by(stripped));

    struct Row {
      const char* name;
      const symbolic::SymbolicState* s;
      int want;
    };
    for (const auto& row : {Row{"impasse", &fp.base, 0}, Row{"effects", &produced, 1}, Row{"stripped", &stripped, 0}}) {
      CAPTURE(row.name);
      CHECK(executor_beta(clauses, *row.s, oracle) == row.want);
      CHECK(executor_beta(fp.base, *row.s, oi, tail, oracle) == row.want);
    }
  }
}

TEST_CASE("executor json round trip and mismatch checks") {
  auto sc = Scenario::make("ATB-easy");
  world::World w(sc.config);
  w.reset(0);
  std::mt19937_64 rng(3);
  Executor x;
  x.id = "break@ATB-easy";
  x.operator_name = "break";
  for (const auto& a : sc.actions) x.actions.push_back(LearnerAction::primitive(a));
  x.entities = w.entities();
  x.policy = learner::Policy::random(w.observe().size(), x.actions.size(), rng);
  x.meta.scenario = "ATB-easy";
  x.meta.seed = 3;

  Executor y = executor_from_json(executor_to_json(x));
  CHECK(y.id == x.id);
  CHECK(y.actions == x.actions);
  CHECK(y.entities == x.entities);
  CHECK(y.policy.params() == x.policy.params());
  CHECK(y.entity_hash() == x.entity_hash());

  auto path = std::filesystem::temp_directory_path() / "rl_exec_roundtrip.json";
  save_executor(x, path.string());
  CHECK(load_executor(path.string()).policy.params() == x.policy.params());

  std::string text = executor_to_json(x);
  auto pos = text.find("\"axe\"");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 5, "\"air\"");
  CHECK_THROWS_AS(executor_from_json(text), Error);

  // Run against a world with a different entity set.
  auto other = Scenario::make("FCT-easy");
  world::World w2(other.config);
  w2.reset(0);
  ExecutorRegistry reg;
  try {
    run_executor(x, w2, other, reg, {}, 5, rng);
    FAIL("expected ExecutorMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ExecutorMismatch);
  }

  reg.add(std::make_shared<const Executor>(x));
  CHECK_THROWS_AS(reg.add(std::make_shared<const Executor>(x)), Error);
  CHECK(reg.find("break") != nullptr);
  CHECK(reg.find("craftplank") == nullptr);
}

TEST_CASE("closed world plan execution never needs an executor") {
  auto sc = Scenario::make("none");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    world::World w(sc.config);
    w.reset(seed);
    ExecutorRegistry reg;
    auto out = execute_plan(w, sc, reg, {});
    CAPTURE(seed);
    CHECK(out.success);
    CHECK(out.discoveries.empty());
    CHECK(out.executor_calls.empty());
  }
}
