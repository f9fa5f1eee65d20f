#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rapidlearn/novelty.hpp"
#include "rapidlearn/symbolic.hpp"
#include "support.hpp"

using namespace rapidlearn;
using namespace rapidlearn::symbolic;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> names_of(const std::vector<Schema>& xs) {
  std::vector<std::string> out;
  for (const auto& x : xs) out.push_back(x.name);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("shipped domain parses with the expected signature") {
  Domain d = parse_domain(pogostick_domain_text());
  std::vector<std::string> ops;
  for (const auto& o : d.operators) ops.push_back(o.name);
  std::sort(ops.begin(), ops.end());
  CHECK(ops == std::vector<std::string>{"approach", "break", "craftplank", "craftpogo_stick", "craftstick",
                                        "crafttree_tap", "extractrubber", "select"});
  CHECK(names_of(d.predicates) == std::vector<std::string>{"facing", "floating", "holding"});
  CHECK(names_of(d.functions) == std::vector<std::string>{"inventory", "world"});
}

TEST_CASE("the data file and the embedded text are the same domain") {
  Domain file = parse_domain(slurp(fs::path(RL_DATA_DIR) / "domains" / "pogostick.pddl"));
  CHECK(file == parse_domain(pogostick_domain_text()));
}

TEST_CASE("grounding counts match enumeration") {
  auto d = bridge::pogostick_domain();
  auto objects = bridge::base_objects();
  REQUIRE(objects.size() == 9);
  auto u = build_universe(*d, objects);
  GroundingOptions raw;
  raw.prune_repeated_args = false;
  auto ops = ground(*d, objects, *u, raw);
  auto count = [&](const std::string& schema) {
    return std::count_if(ops.begin(), ops.end(), [&](const GroundOperator& o) { return o.schema == schema; });
  };
  // Oracle: 9 physobj for each approach parameter, 9 for select, 1 per
  // parameterless schema.
  CHECK(count("approach") == 81);
  CHECK(count("select") == 9);
  for (const char* s : {"break", "craftplank", "craftstick", "crafttree_tap", "extractrubber", "craftpogo_stick"})
    CHECK(count(s) == 1);
  auto pruned = ground(*d, objects, *u);
  CHECK(std::count_if(pruned.begin(), pruned.end(), [](const GroundOperator& o) { return o.schema == "approach"; }) ==
        72);
}

TEST_CASE("applicability and application follow the operator definitions") {
  auto k = bridge::Knowledge::build(*bridge::pogostick_domain());
  const auto& u = k.universe();
  const auto* craftplank = k.task.find_operator("craftplank");
  const auto* brk = k.task.find_operator("break");
  const auto* craftstick = k.task.find_operator("craftstick");
  REQUIRE(craftplank);
  REQUIRE(brk);
  REQUIRE(craftstick);

  CHECK(applicable(testsupport::state(k, {}, {{"inventory tree_log", 1}}), *craftplank));
  CHECK_FALSE(applicable(testsupport::state(k, {"facing tree_log", "floating tree_log"}, {{"world tree_log", 3}}), *brk));

  auto s = testsupport::state(k, {"facing tree_log"}, {{"world tree_log", 5}});
  auto t = apply(s, *brk, u);
  CHECK(t.holds(u, "facing air"));
  CHECK_FALSE(t.holds(u, "facing tree_log"));
  CHECK(t.value(u, "inventory tree_log") == 1);
  CHECK(t.value(u, "world air") == 1);
  CHECK(t.value(u, "world tree_log") == 4);

  auto p = apply(testsupport::state(k, {}, {{"inventory plank", 2}}), *craftstick, u);
  CHECK(p.value(u, "inventory plank") == 0);
  CHECK(p.value(u, "inventory stick") == 4);

  CHECK_THROWS_AS(apply(testsupport::state(k, {}, {}), *craftstick, u), Error);
  try {
    apply(testsupport::state(k, {}, {}), *craftstick, u);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InapplicableOperator);
  }
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_domain("(define (domain x) (:predicates (p ?a - nosuchtype)"), ParseError);
  try {
    parse_domain("(define (domain x)\n  (:types a - object)\n  (:predicates (p ?v - b)))");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownType);
  }
}

TEST_CASE("round trip over the PDDL corpus") {
  std::vector<Domain> domains{parse_domain(pogostick_domain_text())};
  for (const auto& n : novelty::list_novelties()) domains.push_back(novelty::patch_domain(domains.front(), n));
  for (const auto& d : domains) {
    CAPTURE(d.name);
    Domain again = parse_domain(serialize_domain(d));
    CHECK(again == d);
    CHECK(serialize_domain(again) == serialize_domain(d));
  }

  auto dom = bridge::pogostick_domain();
  int problems = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(RL_DATA_DIR) / "problems")) {
    CAPTURE(entry.path().string());
    std::string text = slurp(entry.path());
    // Problems that mention novel objects need the patched domain.
    auto d = dom;
    if (text.find("rubber_tree") != std::string::npos)
      d = std::make_shared<const Domain>(novelty::patch_domain(*dom, novelty::find_novelty("RT-hard")));
    PlanningTask t = parse_problem(text, d);
    PlanningTask again = parse_problem(serialize_problem(t), d);
    CHECK(again.initial == t.initial);
    CHECK(again.goal == t.goal);
    CHECK(again.objects == t.objects);
    ++problems;
  }
  CHECK(problems >= 2);
}

TEST_CASE("state invariants reject two facing atoms") {
  auto k = bridge::Knowledge::build(*bridge::pogostick_domain());
  auto s = testsupport::state(k, {"facing air", "facing tree_log"}, {});
  CHECK_THROWS_AS(check_state_invariants(s, k.universe()), Error);
}
