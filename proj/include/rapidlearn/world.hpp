#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "rapidlearn/error.hpp"

namespace rapidlearn::world {

enum class Item : std::uint8_t {
  Air = 0,
  Wall,
  TreeLog,
  CraftingTable,
  Plank,
  Stick,
  TreeTap,
  Rubber,
  PogoStick,
  Axe,
  Water,
  Fire,
  RubberTree,
};

inline constexpr std::size_t kItemCount = 13;

std::string_view item_name(Item item);
std::optional<Item> parse_item(std::string_view name);

// Entity set observed before any novelty.
const std::vector<Item>& base_entities();

enum class Heading : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };

std::string_view heading_name(Heading h);

enum class ActionKind : std::uint8_t {
  TurnLeft,
  TurnRight,
  MoveForward,
  Break,
  ExtractRubber,
  CraftPlanks,
  CraftStick,
  CraftTreeTap,
  CraftPogostick,
  Select,
  Approach,
  Spray,
  PlaceTreeTap,
  ScrapePlank,
};

struct Action {
  ActionKind kind = ActionKind::TurnLeft;
  Item arg = Item::Air;  // Select / Approach target

  bool operator==(const Action&) const = default;
  bool hierarchical() const { return kind == ActionKind::Approach; }
  std::string name() const;
  static Action parse(std::string_view name);
};

// Turn-by-turn rule overrides. All false describes the pre-novelty world.
struct Dynamics {
  bool break_requires_axe = false;
  bool fire_blocks_crafting = false;
  bool break_disabled = false;
  bool scrape_plank = false;
  // Rubber only from rubber trees; rubber trees cannot be broken.
  bool rubber_tree_only = false;
  // Extraction needs a tap placed on the rubber tree.
  bool tap_placement = false;

  bool operator==(const Dynamics&) const = default;
};

struct WorldConfig {
  int width = 12;
  int height = 12;
  int trees = 6;
  int crafting_tables = 1;
  int horizon = 300;
  int rubber_trees = 0;
  int axes = 0;    // placed in the world
  int waters = 0;  // placed in the world
  bool fire_on_table = false;
  std::array<int, kItemCount> inventory{};
  // Extra observation channels beyond the base entities, in order.
  std::vector<Item> extra_entities;
  Dynamics dynamics;

  bool operator==(const WorldConfig&) const = default;

  std::vector<Item> entities() const;

  // key=value lines; '#' comments. Unknown keys are errors.
  static WorldConfig load(const std::string& path);
  static WorldConfig parse(std::string_view text);
};

struct Event {
  std::string kind;  // moved, turned, blocked, broke, picked-up, crafted, ...
  std::string detail;
  bool failed() const { return kind == "action-failed" || kind == "blocked"; }
};

struct Observation {
  std::vector<double> lidar;      // 8 * |E|
  std::vector<double> inventory;  // |E|
  std::vector<double> selected;   // |E| + 1, last slot = nothing selected

  std::vector<double> flatten() const;
  std::size_t size() const { return lidar.size() + inventory.size() + selected.size(); }
};

struct Transition {
  Action action;
  Event event;
};

struct ApproachResult {
  std::vector<Transition> transitions;
  bool reached = false;
};

struct Cell {
  Item item = Item::Air;
  bool fire = false;
  bool tap_placed = false;
};

class World {
 public:
  explicit World(WorldConfig config = {});

  Observation reset(std::uint64_t seed);
  // Single primitive action. Throws EpisodeOver at the horizon and
  // InvalidArgument for approach (use approach()).
  Event step(const Action& a);
  // A* over (x, y, heading) to a cell facing the nearest reachable target.
  ApproachResult approach(Item target);
  // Primitive or hierarchical; returns every primitive transition taken.
  std::vector<Transition> execute(const Action& a);

  Observation observe() const;

  const WorldConfig& config() const { return config_; }
  const std::vector<Item>& entities() const { return entities_; }
  int width() const { return config_.width; }
  int height() const { return config_.height; }
  const Cell& cell(int x, int y) const { return grid_.at(index(x, y)); }
  Cell& mutable_cell(int x, int y) { return grid_.at(index(x, y)); }
  int agent_x() const { return ax_; }
  int agent_y() const { return ay_; }
  Heading heading() const { return heading_; }
  void place_agent(int x, int y, Heading h);
  int inventory(Item i) const { return inv_[static_cast<std::size_t>(i)]; }
  void set_inventory(Item i, int count);
  std::optional<Item> selected() const { return selected_; }
  int step_count() const { return steps_; }
  void set_horizon(int horizon) { config_.horizon = horizon; }
  bool episode_over() const { return steps_ >= config_.horizon; }
  std::uint64_t seed() const { return seed_; }

  // Cell in front of the agent (always in range: the border is wall).
  std::pair<int, int> front() const;
  const Cell& front_cell() const;
  int count(Item i) const;

  std::string ascii() const;
  void set_trace(std::ostream* trace) { trace_ = trace; }

 private:
  std::size_t index(int x, int y) const;
  bool reachable_layout() const;
  void log(const Action& a, const Event& e) const;
  Event apply(const Action& a);

  WorldConfig config_;
  std::vector<Item> entities_;
  std::vector<Cell> grid_;
  std::array<int, kItemCount> inv_{};
  std::optional<Item> selected_;
  int ax_ = 1, ay_ = 1;
  Heading heading_ = Heading::North;
  int steps_ = 0;
  std::uint64_t seed_ = 0;
  std::ostream* trace_ = nullptr;
};

// Learner-facing actions before any novelty: primitives, select per
// craftable item, and approach for the two placed entity kinds.
std::vector<Action> base_actions();

// Arena diagonal used to normalize beam lengths.
double lidar_normalizer(int width, int height);

}  // namespace rapidlearn::world
