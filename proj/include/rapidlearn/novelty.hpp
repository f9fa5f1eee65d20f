#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rapidlearn/symbolic.hpp"
#include "rapidlearn/world.hpp"

namespace rapidlearn::novelty {

struct NoveltySpec {
  std::string id;
  std::string description;
  std::vector<world::Item> new_entities;  // extra observation channels
  std::vector<world::Action> new_actions;
  std::vector<symbolic::TypedObject> new_objects;  // symbolic objects; types are added as physobj
  std::vector<symbolic::OperatorSchema> new_operators;
  // Component ids for composites, in application order.
  std::vector<std::string> components;

  void patch_world(world::WorldConfig& config) const;
};

// Stable order: ATB-easy, ATB-hard, FCT-easy, FCT-hard, RT-easy, RT-hard,
// SP, ATB+FCT-easy.
const std::vector<NoveltySpec>& list_novelties();

// Throws UnknownNovelty.
const NoveltySpec& find_novelty(const std::string& id);

struct Injected {
  world::World world;
  symbolic::Domain domain;
  std::vector<world::Action> actions;
};

// The returned world keeps the input world's seed and is reset under the new
// rules. Actions extend `actions` in catalogue order.
Injected apply_novelty(const world::World& w, const symbolic::Domain& domain,
                       const std::vector<world::Action>& actions, const NoveltySpec& spec);

symbolic::Domain patch_domain(const symbolic::Domain& domain, const NoveltySpec& spec);
world::WorldConfig patch_config(const world::WorldConfig& config, const NoveltySpec& spec);
std::vector<world::Action> patch_actions(const std::vector<world::Action>& actions, const NoveltySpec& spec);

// Novel entities with world instances at the start of an episode (the
// curriculum targets).
std::vector<world::Item> novel_world_entities(const world::World& w, const NoveltySpec& spec);

}  // namespace rapidlearn::novelty
