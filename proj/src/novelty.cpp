#include "rapidlearn/novelty.hpp"

#include <algorithm>

namespace rapidlearn::novelty {

using symbolic::Atom;
using symbolic::Comparison;
using symbolic::Literal;
using symbolic::NumericEffect;
using symbolic::NumericOp;
using symbolic::OperatorSchema;
using world::Action;
using world::ActionKind;
using world::Item;

namespace {

OperatorSchema spray_operator() {
  OperatorSchema op;
  op.name = "spray";
  op.precondition.literals = {{Atom{"facing", {"crafting_table"}}, true}, {Atom{"holding", {"water"}}, true}};
  op.precondition.comparisons = {{Atom{"inventory", {"water"}}, 1}};
  op.effect.numeric = {{NumericOp::Decrease, Atom{"inventory", {"water"}}, 1}};
  return op;
}

OperatorSchema place_tree_tap_operator() {
  OperatorSchema op;
  op.name = "place_tree_tap";
  op.precondition.literals = {{Atom{"facing", {"tree_log"}}, true}};
  op.precondition.comparisons = {{Atom{"inventory", {"tree_tap"}}, 1}};
  op.effect.numeric = {{NumericOp::Decrease, Atom{"inventory", {"tree_tap"}}, 1}};
  return op;
}

OperatorSchema scrape_plank_operator() {
  OperatorSchema op;
  op.name = "scrape_plank";
  op.precondition.literals = {{Atom{"facing", {"tree_log"}}, true}};
  return op;
}

void patch_component(const std::string& id, world::WorldConfig& c) {
  auto add_entity = [&](Item i) {
    if (std::find(c.extra_entities.begin(), c.extra_entities.end(), i) == c.extra_entities.end())
      c.extra_entities.push_back(i);
  };
  auto& inv = c.inventory;
  if (id == "ATB-easy" || id == "ATB-hard") {
    add_entity(Item::Axe);
    c.dynamics.break_requires_axe = true;
    if (id == "ATB-easy") inv[static_cast<std::size_t>(Item::Axe)] += 1;
    else c.axes += 1;
  } else if (id == "FCT-easy" || id == "FCT-hard") {
    add_entity(Item::Fire);
    add_entity(Item::Water);
    c.fire_on_table = true;
    c.dynamics.fire_blocks_crafting = true;
    if (id == "FCT-easy") inv[static_cast<std::size_t>(Item::Water)] += 1;
    else c.waters += 1;
  } else if (id == "RT-easy" || id == "RT-hard") {
    add_entity(Item::RubberTree);
    c.rubber_trees += 1;
    c.dynamics.rubber_tree_only = true;
    c.dynamics.tap_placement = id == "RT-hard";
  } else if (id == "SP") {
    c.dynamics.break_disabled = true;
    c.dynamics.scrape_plank = true;
  } else {
    throw Error(ErrorCode::UnknownNovelty, "unknown novelty '" + id + "'");
  }
}

NoveltySpec make(std::string id, std::string description) {
  NoveltySpec s;
  s.id = std::move(id);
  s.description = std::move(description);
  s.components = {s.id};
  return s;
}

std::vector<NoveltySpec> build_catalogue() {
  std::vector<NoveltySpec> out;

  auto atb_easy = make("ATB-easy", "break a tree only while holding the axe; axe starts in the inventory");
  atb_easy.new_entities = {Item::Axe};
  atb_easy.new_actions = {{ActionKind::Select, Item::Axe}};
  atb_easy.new_objects = {{"axe", "axe"}};
  out.push_back(atb_easy);

  auto atb_hard = make("ATB-hard", "break a tree only while holding the axe; axe lies somewhere in the arena");
  atb_hard.new_entities = {Item::Axe};
  atb_hard.new_actions = {{ActionKind::Select, Item::Axe}, {ActionKind::Approach, Item::Axe}};
  atb_hard.new_objects = {{"axe", "axe"}};
  out.push_back(atb_hard);

  auto fct_easy = make("FCT-easy", "crafting table is on fire until sprayed with water; water starts in the inventory");
  fct_easy.new_entities = {Item::Fire, Item::Water};
  fct_easy.new_actions = {{ActionKind::Select, Item::Water}, {ActionKind::Spray, Item::Air}};
  fct_easy.new_objects = {{"water", "water"}};
  fct_easy.new_operators = {spray_operator()};
  out.push_back(fct_easy);

  auto fct_hard = make("FCT-hard", "crafting table is on fire until sprayed with water; water lies somewhere in the arena");
  fct_hard.new_entities = {Item::Fire, Item::Water};
  fct_hard.new_actions = {{ActionKind::Select, Item::Water},
                          {ActionKind::Spray, Item::Air},
                          {ActionKind::Approach, Item::Water}};
  fct_hard.new_objects = {{"water", "water"}};
  fct_hard.new_operators = {spray_operator()};
  out.push_back(fct_hard);

  auto rt_easy = make("RT-easy", "rubber comes only from the new rubber tree, which cannot be broken");
  rt_easy.new_entities = {Item::RubberTree};
  rt_easy.new_actions = {{ActionKind::Approach, Item::RubberTree}};
  out.push_back(rt_easy);

  auto rt_hard = make("RT-hard", "rubber comes only from a rubber tree fitted with a placed tree tap; rubber trees cannot be broken");
  rt_hard.new_entities = {Item::RubberTree};
  rt_hard.new_actions = {{ActionKind::PlaceTreeTap, Item::Air}, {ActionKind::Approach, Item::RubberTree}};
  rt_hard.new_operators = {place_tree_tap_operator()};
  out.push_back(rt_hard);

  auto sp = make("SP", "break yields nothing; scrape-plank on a tree gives 4 planks");
  sp.new_actions = {{ActionKind::ScrapePlank, Item::Air}};
  sp.new_operators = {scrape_plank_operator()};
  out.push_back(sp);

  NoveltySpec combo = make("ATB+FCT-easy", "ATB-easy and FCT-easy together");
  combo.components = {"ATB-easy", "FCT-easy"};
  for (const auto* part : {&out[0], &out[2]}) {
    combo.new_entities.insert(combo.new_entities.end(), part->new_entities.begin(), part->new_entities.end());
    combo.new_actions.insert(combo.new_actions.end(), part->new_actions.begin(), part->new_actions.end());
    combo.new_objects.insert(combo.new_objects.end(), part->new_objects.begin(), part->new_objects.end());
    combo.new_operators.insert(combo.new_operators.end(), part->new_operators.begin(), part->new_operators.end());
  }
  out.push_back(combo);
  return out;
}

}  // namespace

void NoveltySpec::patch_world(world::WorldConfig& config) const {
  for (const auto& c : components) patch_component(c, config);
}

const std::vector<NoveltySpec>& list_novelties() {
  static const std::vector<NoveltySpec> kCatalogue = build_catalogue();
  return kCatalogue;
}

const NoveltySpec& find_novelty(const std::string& id) {
  for (const auto& s : list_novelties()) {
    if (s.id == id) return s;
  }
  throw Error(ErrorCode::UnknownNovelty, "unknown novelty '" + id + "'");
}

symbolic::Domain patch_domain(const symbolic::Domain& domain, const NoveltySpec& spec) {
  symbolic::Domain d = domain;
  for (const auto& o : spec.new_objects) {
    if (!d.has_type(o.type)) d.types.push_back({o.type, "physobj"});
  }
  for (const auto& op : spec.new_operators) {
    if (!d.find_operator(op.name)) d.operators.push_back(op);
  }
  return d;
}

world::WorldConfig patch_config(const world::WorldConfig& config, const NoveltySpec& spec) {
  world::WorldConfig c = config;
  spec.patch_world(c);
  return c;
}

std::vector<Action> patch_actions(const std::vector<Action>& actions, const NoveltySpec& spec) {
  std::vector<Action> out = actions;
  for (const auto& a : spec.new_actions) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  return out;
}

Injected apply_novelty(const world::World& w, const symbolic::Domain& domain, const std::vector<Action>& actions,
                       const NoveltySpec& spec) {
  world::World patched(patch_config(w.config(), spec));
  patched.reset(w.seed());
  return {std::move(patched), patch_domain(domain, spec), patch_actions(actions, spec)};
}

std::vector<Item> novel_world_entities(const world::World& w, const NoveltySpec& spec) {
  std::vector<Item> out;
  for (Item i : spec.new_entities) {
    bool present = false;
    for (int y = 0; y < w.height() && !present; ++y) {
      for (int x = 0; x < w.width() && !present; ++x) {
        const auto& c = w.cell(x, y);
        present = c.item == i || (i == Item::Fire && c.fire);
      }
    }
    if (present) out.push_back(i);
  }
  return out;
}

}  // namespace rapidlearn::novelty
