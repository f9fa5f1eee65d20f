#include <doctest.h>

#include <algorithm>

#include "rapidlearn/novelty.hpp"
#include "support.hpp"

using namespace rapidlearn;
using namespace rapidlearn::world;

namespace {

bool has_action(const std::vector<Action>& xs, Action a) { return std::find(xs.begin(), xs.end(), a) != xs.end(); }

World fresh(const std::string& id, std::uint64_t seed = 0) {
  World w(novelty::patch_config({}, novelty::find_novelty(id)));
  w.reset(seed);
  return w;
}

}  // namespace

TEST_CASE("catalogue lists eight novelties in a stable order") {
  const auto& all = novelty::list_novelties();
  std::vector<std::string> ids;
  for (const auto& n : all) ids.push_back(n.id);
  CHECK(ids == testsupport::scenario_ids());
  CHECK_THROWS_AS(novelty::find_novelty("XYZ"), Error);
  try {
    novelty::find_novelty("XYZ");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownNovelty);
  }
}

TEST_CASE("ATB-easy puts the axe in the inventory") {
  const auto& n = novelty::find_novelty("ATB-easy");
  World w = fresh("ATB-easy");
  CHECK(w.inventory(Item::Axe) == 1);
  CHECK(w.count(Item::Axe) == 0);
  CHECK(has_action(novelty::patch_actions(base_actions(), n), {ActionKind::Select, Item::Axe}));
}

TEST_CASE("ATB-hard places the axe in the arena") {
  World w = fresh("ATB-hard");
  CHECK(w.inventory(Item::Axe) == 0);
  CHECK(w.count(Item::Axe) == 1);
  CHECK(has_action(novelty::patch_actions(base_actions(), novelty::find_novelty("ATB-hard")),
                   {ActionKind::Approach, Item::Axe}));
}

TEST_CASE("FCT-hard sets the table on fire and spraying clears it") {
  const auto& n = novelty::find_novelty("FCT-hard");
  auto acts = novelty::patch_actions(base_actions(), n);
  CHECK(has_action(acts, {ActionKind::Select, Item::Water}));
  CHECK(has_action(acts, {ActionKind::Spray, Item::Air}));
  CHECK(has_action(acts, {ActionKind::Approach, Item::Water}));

  World w = fresh("FCT-hard", 4);
  CHECK(w.count(Item::Water) == 1);
  w.approach(Item::Water);
  w.step({ActionKind::Break});  // picks the water up
  REQUIRE(w.inventory(Item::Water) == 1);
  w.approach(Item::CraftingTable);
  REQUIRE(w.front_cell().fire);
  w.set_inventory(Item::Plank, 5);
  w.set_inventory(Item::Stick, 1);
  CHECK(w.step({ActionKind::CraftTreeTap}).failed());
  CHECK(w.inventory(Item::TreeTap) == 0);
  w.step({ActionKind::Select, Item::Water});
  CHECK_FALSE(w.step({ActionKind::Spray}).failed());
  CHECK_FALSE(w.front_cell().fire);
  CHECK_FALSE(w.step({ActionKind::CraftTreeTap}).failed());
  CHECK(w.inventory(Item::TreeTap) == 1);
}

TEST_CASE("SP disables break and adds scrape-plank") {
  World w = fresh("SP", 2);
  w.approach(Item::TreeLog);
  CHECK(w.step({ActionKind::Break}).failed());
  CHECK(w.inventory(Item::TreeLog) == 0);
  CHECK_FALSE(w.step({ActionKind::ScrapePlank}).failed());
  CHECK(w.inventory(Item::Plank) == 4);
}

TEST_CASE("RT-hard adds place-tree-tap and tap-gated extraction") {
  const auto& n = novelty::find_novelty("RT-hard");
  CHECK(has_action(novelty::patch_actions(base_actions(), n), {ActionKind::PlaceTreeTap, Item::Air}));
  World w = fresh("RT-hard", 5);
  CHECK(w.count(Item::RubberTree) == 1);
  w.approach(Item::RubberTree);
  w.set_inventory(Item::TreeTap, 1);
  w.step({ActionKind::Select, Item::TreeTap});
  CHECK(w.step({ActionKind::ExtractRubber}).failed());
  CHECK(w.step({ActionKind::Break}).failed());  // rubber trees cannot be broken
  CHECK_FALSE(w.step({ActionKind::PlaceTreeTap}).failed());
  CHECK_FALSE(w.step({ActionKind::ExtractRubber}).failed());
  CHECK(w.inventory(Item::Rubber) == 1);
}

TEST_CASE("composite novelty applies both components") {
  World w = fresh("ATB+FCT-easy");
  CHECK(w.inventory(Item::Axe) == 1);
  CHECK(w.inventory(Item::Water) == 1);
  CHECK(w.config().dynamics.break_requires_axe);
  CHECK(w.config().dynamics.fire_blocks_crafting);
}

TEST_CASE("apply_novelty keeps the seed and patches the domain") {
  World w;
  w.reset(9);
  auto inj = novelty::apply_novelty(w, *bridge::pogostick_domain(), base_actions(), novelty::find_novelty("SP"));
  CHECK(inj.world.seed() == 9);
  CHECK(inj.domain.find_operator("scrape_plank") != nullptr);
  CHECK(inj.actions.size() == base_actions().size() + 1);
}

TEST_CASE("curriculum targets are novel entities present in the world") {
  CHECK(novelty::novel_world_entities(fresh("SP"), novelty::find_novelty("SP")).empty());
  CHECK(novelty::novel_world_entities(fresh("ATB-easy"), novelty::find_novelty("ATB-easy")).empty());
  auto hard = novelty::novel_world_entities(fresh("ATB-hard"), novelty::find_novelty("ATB-hard"));
  CHECK(hard == std::vector<Item>{Item::Axe});
  auto fct = novelty::novel_world_entities(fresh("FCT-hard"), novelty::find_novelty("FCT-hard"));
  CHECK(fct.size() == 2);
}
