#include "rapidlearn/world.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace rapidlearn::world {
namespace {

constexpr std::array<std::string_view, kItemCount> kItemNames{
    "air", "wall", "tree_log", "crafting_table", "plank", "stick", "tree_tap",
    "rubber", "pogo_stick", "axe", "water", "fire", "rubber_tree"};

constexpr int kDx[4] = {0, 1, 0, -1};
constexpr int kDy[4] = {-1, 0, 1, 0};

// Eight beam directions clockwise from north.
constexpr int kBeamDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kBeamDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

Event ok(std::string kind, std::string detail = {}) { return {std::move(kind), std::move(detail)}; }
Event failed(std::string detail) { return {"action-failed", std::move(detail)}; }

int& slot(std::array<int, kItemCount>& inv, Item i) { return inv[static_cast<std::size_t>(i)]; }

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string_view item_name(Item item) { return kItemNames[static_cast<std::size_t>(item)]; }

std::optional<Item> parse_item(std::string_view name) {
  for (std::size_t i = 0; i < kItemNames.size(); ++i) {
    if (kItemNames[i] == name) return static_cast<Item>(i);
  }
  return std::nullopt;
}

const std::vector<Item>& base_entities() {
  static const std::vector<Item> kBase{Item::Wall,  Item::TreeLog, Item::CraftingTable, Item::Plank,
                                       Item::Stick, Item::TreeTap, Item::Rubber,        Item::PogoStick};
  return kBase;
}

std::vector<Action> base_actions() {
  std::vector<Action> out{
      {ActionKind::TurnLeft, Item::Air},     {ActionKind::TurnRight, Item::Air},
      {ActionKind::MoveForward, Item::Air},  {ActionKind::Break, Item::Air},
      {ActionKind::ExtractRubber, Item::Air}, {ActionKind::CraftPlanks, Item::Air},
      {ActionKind::CraftStick, Item::Air},   {ActionKind::CraftTreeTap, Item::Air},
      {ActionKind::CraftPogostick, Item::Air}};
  for (Item i : {Item::Plank, Item::Stick, Item::TreeLog, Item::TreeTap, Item::Rubber, Item::PogoStick})
    out.push_back({ActionKind::Select, i});
  out.push_back({ActionKind::Approach, Item::TreeLog});
  out.push_back({ActionKind::Approach, Item::CraftingTable});
  return out;
}

std::string_view heading_name(Heading h) {
  static constexpr std::string_view kNames[4] = {"N", "E", "S", "W"};
  return kNames[static_cast<int>(h)];
}

std::string Action::name() const {
  switch (kind) {
    case ActionKind::TurnLeft: return "turn-left";
    case ActionKind::TurnRight: return "turn-right";
    case ActionKind::MoveForward: return "move-forward";
    case ActionKind::Break: return "break";
    case ActionKind::ExtractRubber: return "extract-rubber";
    case ActionKind::CraftPlanks: return "craft-planks";
    case ActionKind::CraftStick: return "craft-stick";
    case ActionKind::CraftTreeTap: return "craft-tree-tap";
    case ActionKind::CraftPogostick: return "craft-pogostick";
    case ActionKind::Select: return "select-" + std::string(item_name(arg));
    case ActionKind::Approach: return "approach-" + std::string(item_name(arg));
    case ActionKind::Spray: return "spray";
    case ActionKind::PlaceTreeTap: return "place-tree-tap";
    case ActionKind::ScrapePlank: return "scrape-plank";
  }
  return "?";
}

Action Action::parse(std::string_view name) {
  static const std::map<std::string, ActionKind, std::less<>> kFixed{
      {"turn-left", ActionKind::TurnLeft},         {"turn-right", ActionKind::TurnRight},
      {"move-forward", ActionKind::MoveForward},   {"break", ActionKind::Break},
      {"extract-rubber", ActionKind::ExtractRubber}, {"craft-planks", ActionKind::CraftPlanks},
      {"craft-stick", ActionKind::CraftStick},     {"craft-tree-tap", ActionKind::CraftTreeTap},
      {"craft-pogostick", ActionKind::CraftPogostick}, {"spray", ActionKind::Spray},
      {"place-tree-tap", ActionKind::PlaceTreeTap}, {"scrape-plank", ActionKind::ScrapePlank}};
  if (auto it = kFixed.find(name); it != kFixed.end()) return {it->second, Item::Air};
  for (auto [prefix, kind] : {std::pair{std::string_view("select-"), ActionKind::Select},
                              std::pair{std::string_view("approach-"), ActionKind::Approach}}) {
    if (name.starts_with(prefix)) {
      if (auto item = parse_item(name.substr(prefix.size()))) return {kind, *item};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown action '" + std::string(name) + "'");
}

std::vector<Item> WorldConfig::entities() const {
  std::vector<Item> out = base_entities();
  for (Item i : extra_entities) {
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
  return out;
}

WorldConfig WorldConfig::parse(std::string_view text) {
  WorldConfig c;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto as_int = [&](const std::string& v, const std::string& key) {
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
      throw Error(ErrorCode::InvalidArgument,
                  "config line " + std::to_string(lineno) + ": '" + key + "' expects an integer");
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "width") c.width = as_int(value, key);
    else if (key == "height") c.height = as_int(value, key);
    else if (key == "trees") c.trees = as_int(value, key);
    else if (key == "crafting_tables") c.crafting_tables = as_int(value, key);
    else if (key == "horizon") c.horizon = as_int(value, key);
    else if (key == "rubber_trees") c.rubber_trees = as_int(value, key);
    else if (key == "axes") c.axes = as_int(value, key);
    else if (key == "waters") c.waters = as_int(value, key);
    else if (key == "fire_on_table") c.fire_on_table = as_int(value, key) != 0;
    else if (key.starts_with("inventory.")) {
      auto item = parse_item(key.substr(10));
      if (!item) throw Error(ErrorCode::InvalidArgument, "config: unknown item in '" + key + "'");
      slot(c.inventory, *item) = as_int(value, key);
    } else {
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (c.width < 3 || c.height < 3) throw Error(ErrorCode::InvalidArgument, "arena must be at least 3x3");
  if (c.horizon <= 0) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  return c;
}

WorldConfig WorldConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot open world config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::vector<double> Observation::flatten() const {
  std::vector<double> out;
  out.reserve(size());
  out.insert(out.end(), lidar.begin(), lidar.end());
  out.insert(out.end(), inventory.begin(), inventory.end());
  out.insert(out.end(), selected.begin(), selected.end());
  return out;
}

double lidar_normalizer(int width, int height) {
  return std::sqrt(static_cast<double>(width) * width + static_cast<double>(height) * height);
}

// ---------------------------------------------------------------------------

World::World(WorldConfig config) : config_(std::move(config)), entities_(config_.entities()) {
  grid_.assign(static_cast<std::size_t>(config_.width * config_.height), Cell{});
}

std::size_t World::index(int x, int y) const {
  if (x < 0 || y < 0 || x >= config_.width || y >= config_.height)
    throw Error(ErrorCode::InvalidArgument, "cell out of range");
  return static_cast<std::size_t>(y * config_.width + x);
}

void World::place_agent(int x, int y, Heading h) {
  if (cell(x, y).item != Item::Air) throw Error(ErrorCode::InvalidArgument, "agent must stand on an air cell");
  ax_ = x;
  ay_ = y;
  heading_ = h;
}

void World::set_inventory(Item i, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "inventory counts are non-negative");
  slot(inv_, i) = n;
  if (n == 0 && selected_ == i) selected_.reset();
}

std::pair<int, int> World::front() const {
  int h = static_cast<int>(heading_);
  return {ax_ + kDx[h], ay_ + kDy[h]};
}

const Cell& World::front_cell() const {
  auto [x, y] = front();
  return cell(x, y);
}

int World::count(Item i) const {
  int n = 0;
  for (const auto& c : grid_) n += c.item == i ? 1 : 0;
  return n;
}

// Every placed entity must have a free neighbour the agent can walk to.
bool World::reachable_layout() const {
  std::vector<char> seen(grid_.size(), 0);
  std::queue<std::pair<int, int>> q;
  q.push({ax_, ay_});
  seen[index(ax_, ay_)] = 1;
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop();
    for (int d = 0; d < 4; ++d) {
      int nx = x + kDx[d], ny = y + kDy[d];
      if (cell(nx, ny).item != Item::Air || seen[index(nx, ny)]) continue;
      seen[index(nx, ny)] = 1;
      q.push({nx, ny});
    }
  }
  for (int y = 1; y < config_.height - 1; ++y) {
    for (int x = 1; x < config_.width - 1; ++x) {
      if (cell(x, y).item == Item::Air) continue;
      bool ok = false;
      for (int d = 0; d < 4 && !ok; ++d) ok = seen[index(x + kDx[d], y + kDy[d])] != 0;
      if (!ok) return false;
    }
  }
  return true;
}

Observation World::reset(std::uint64_t seed) {
  seed_ = seed;
  std::mt19937_64 rng(seed);
  std::vector<Item> to_place;
  auto add = [&](Item i, int n) {
    for (int k = 0; k < n; ++k) to_place.push_back(i);
  };
  add(Item::TreeLog, config_.trees);
  add(Item::CraftingTable, config_.crafting_tables);
  add(Item::RubberTree, config_.rubber_trees);
  add(Item::Axe, config_.axes);
  add(Item::Water, config_.waters);
  std::size_t interior = static_cast<std::size_t>((config_.width - 2) * (config_.height - 2));
  if (to_place.size() + 1 > interior)
    throw Error(ErrorCode::PlacementOverflow, std::to_string(to_place.size()) + " entities and the agent do not fit in " +
                                                  std::to_string(interior) + " free cells");

  std::vector<std::pair<int, int>> free_cells;
  for (int y = 1; y < config_.height - 1; ++y) {
    for (int x = 1; x < config_.width - 1; ++x) free_cells.push_back({x, y});
  }
  for (int attempt = 0;; ++attempt) {
    if (attempt == 1000) throw Error(ErrorCode::PlacementOverflow, "no placement leaves every entity reachable");
    grid_.assign(grid_.size(), Cell{});
    for (int x = 0; x < config_.width; ++x) {
      grid_[index(x, 0)].item = Item::Wall;
      grid_[index(x, config_.height - 1)].item = Item::Wall;
    }
    for (int y = 0; y < config_.height; ++y) {
      grid_[index(0, y)].item = Item::Wall;
      grid_[index(config_.width - 1, y)].item = Item::Wall;
    }
    std::vector<std::pair<int, int>> cells = free_cells;
    std::shuffle(cells.begin(), cells.end(), rng);
    for (std::size_t k = 0; k < to_place.size(); ++k) {
      Cell& c = grid_[index(cells[k].first, cells[k].second)];
      c.item = to_place[k];
      c.fire = config_.fire_on_table && to_place[k] == Item::CraftingTable;
    }
    ax_ = cells[to_place.size()].first;
    ay_ = cells[to_place.size()].second;
    heading_ = static_cast<Heading>(std::uniform_int_distribution<int>(0, 3)(rng));
    if (reachable_layout()) break;
  }
  inv_ = config_.inventory;
  selected_.reset();
  steps_ = 0;
  return observe();
}

Observation World::observe() const {
  Observation o;
  const std::size_t n = entities_.size();
  o.lidar.assign(8 * n, 1.0);
  o.inventory.assign(n, 0.0);
  o.selected.assign(n + 1, 0.0);
  const double norm = lidar_normalizer(config_.width, config_.height);
  const int h = static_cast<int>(heading_);
  for (int beam = 0; beam < 8; ++beam) {
    int dir = (2 * h + beam) % 8;
    int dx = kBeamDx[dir], dy = kBeamDy[dir];
    double unit = std::sqrt(static_cast<double>(dx * dx + dy * dy));
    std::vector<char> hit(n, 0);
    int x = ax_, y = ay_;
    for (int k = 1;; ++k) {
      x += dx;
      y += dy;
      if (x < 0 || y < 0 || x >= config_.width || y >= config_.height) break;
      const Cell& c = cell(x, y);
      for (std::size_t e = 0; e < n; ++e) {
        if (hit[e]) continue;
        Item ent = entities_[e];
        bool present = c.item == ent || (ent == Item::Fire && c.fire) || (ent == Item::TreeTap && c.tap_placed);
        if (present) {
          hit[e] = 1;
          o.lidar[static_cast<std::size_t>(beam) * n + e] = k * unit / norm;
        }
      }
      if (c.item == Item::Wall) break;
    }
  }
  for (std::size_t e = 0; e < n; ++e) {
    o.inventory[e] = inv_[static_cast<std::size_t>(entities_[e])];
    if (selected_ == entities_[e]) o.selected[e] = 1.0;
  }
  bool any = std::any_of(o.selected.begin(), o.selected.end() - 1, [](double v) { return v != 0.0; });
  if (!any) o.selected[n] = 1.0;
  return o;
}

Event World::apply(const Action& a) {
  auto [fx, fy] = front();
  Cell& f = grid_[index(fx, fy)];
  auto has = [&](Item i, int k) { return inv_[static_cast<std::size_t>(i)] >= k; };
  auto take = [&](Item i, int k) {
    slot(inv_, i) -= k;
    if (slot(inv_, i) == 0 && selected_ == i) selected_.reset();
  };
  auto give = [&](Item i, int k) { slot(inv_, i) += k; };
  auto at_table = [&] { return f.item == Item::CraftingTable; };

  switch (a.kind) {
    case ActionKind::TurnLeft:
      heading_ = static_cast<Heading>((static_cast<int>(heading_) + 3) % 4);
      return ok("turned", "left");
    case ActionKind::TurnRight:
      heading_ = static_cast<Heading>((static_cast<int>(heading_) + 1) % 4);
      return ok("turned", "right");
    case ActionKind::MoveForward:
      if (f.item != Item::Air) return ok("blocked", std::string(item_name(f.item)));
      ax_ = fx;
      ay_ = fy;
      return ok("moved");
    case ActionKind::Break:
      if (f.item == Item::TreeLog) {
        if (config_.dynamics.break_disabled) return failed("break has no effect");
        if (config_.dynamics.break_requires_axe && selected_ != Item::Axe) return failed("needs axe");
        f = Cell{};
        give(Item::TreeLog, 1);
        return ok("broke", "tree_log");
      }
      if (f.item == Item::Axe || f.item == Item::Water) {
        Item picked = f.item;
        f = Cell{};
        give(picked, 1);
        return ok("picked-up", std::string(item_name(picked)));
      }
      return failed("nothing breakable");
    case ActionKind::ExtractRubber: {
      const auto& d = config_.dynamics;
      if (d.tap_placement) {
        if (f.item == Item::RubberTree && f.tap_placed) {
          give(Item::Rubber, 1);
          return ok("extracted");
        }
        return failed("needs a placed tree tap");
      }
      Item source = d.rubber_tree_only ? Item::RubberTree : Item::TreeLog;
      if (f.item == source && selected_ == Item::TreeTap && has(Item::TreeTap, 1)) {
        give(Item::Rubber, 1);
        return ok("extracted");
      }
      return failed("cannot extract here");
    }
    case ActionKind::CraftPlanks:
      if (!has(Item::TreeLog, 1)) return failed("needs tree_log");
      take(Item::TreeLog, 1);
      give(Item::Plank, 4);
      return ok("crafted", "plank");
    case ActionKind::CraftStick:
      if (!has(Item::Plank, 2)) return failed("needs plank");
      take(Item::Plank, 2);
      give(Item::Stick, 4);
      return ok("crafted", "stick");
    case ActionKind::CraftTreeTap:
      if (!at_table() || !has(Item::Plank, 5) || !has(Item::Stick, 1)) return failed("tree tap recipe unmet");
      if (config_.dynamics.fire_blocks_crafting && f.fire) return failed("table is on fire");
      take(Item::Plank, 5);
      take(Item::Stick, 1);
      give(Item::TreeTap, 1);
      return ok("crafted", "tree_tap");
    case ActionKind::CraftPogostick:
      if (!at_table() || !has(Item::Plank, 2) || !has(Item::Stick, 4) || !has(Item::Rubber, 1))
        return failed("pogo stick recipe unmet");
      if (config_.dynamics.fire_blocks_crafting && f.fire) return failed("table is on fire");
      take(Item::Plank, 2);
      take(Item::Stick, 4);
      take(Item::Rubber, 1);
      give(Item::PogoStick, 1);
      return ok("crafted", "pogo_stick");
    case ActionKind::Select:
      if (!has(a.arg, 1)) return failed("not in inventory");
      selected_ = a.arg;
      return ok("selected", std::string(item_name(a.arg)));
    case ActionKind::Spray:
      if (selected_ != Item::Water || !has(Item::Water, 1) || !f.fire) return failed("nothing to spray");
      f.fire = false;
      take(Item::Water, 1);
      return ok("sprayed");
    case ActionKind::PlaceTreeTap:
      if (f.item != Item::RubberTree || f.tap_placed || !has(Item::TreeTap, 1)) return failed("cannot place tap");
      f.tap_placed = true;
      take(Item::TreeTap, 1);
      return ok("placed", "tree_tap");
    case ActionKind::ScrapePlank:
      if (!config_.dynamics.scrape_plank || f.item != Item::TreeLog) return failed("nothing to scrape");
      f = Cell{};
      give(Item::Plank, 4);
      return ok("scraped");
    case ActionKind::Approach:
      break;
  }
  throw Error(ErrorCode::InvalidArgument, "approach is not a primitive action");
}

void World::log(const Action& a, const Event& e) const {
  if (!trace_) return;
  nlohmann::json j{{"step", steps_},
                   {"action", a.name()},
                   {"event", e.kind},
                   {"detail", e.detail},
                   {"x", ax_},
                   {"y", ay_},
                   {"heading", std::string(heading_name(heading_))}};
  *trace_ << j.dump() << '\n';
}

Event World::step(const Action& a) {
  if (a.hierarchical()) throw Error(ErrorCode::InvalidArgument, "approach is not a primitive action");
  if (episode_over()) throw Error(ErrorCode::EpisodeOver, "episode horizon of " + std::to_string(config_.horizon) + " reached");
  Event e = apply(a);
  ++steps_;
  log(a, e);
  return e;
}

ApproachResult World::approach(Item target) {
  ApproachResult result;
  auto matches = [target](const Cell& c) { return c.item == target || (target == Item::Fire && c.fire); };
  if (std::none_of(grid_.begin(), grid_.end(), matches))
    throw Error(ErrorCode::NoTarget, "no " + std::string(item_name(target)) + " in the world");
  if (matches(front_cell())) {
    result.reached = true;
    return result;
  }
  std::vector<std::pair<int, int>> targets;
  for (int y = 0; y < config_.height; ++y) {
    for (int x = 0; x < config_.width; ++x) {
      if (matches(cell(x, y))) targets.push_back({x, y});
    }
  }
  auto heuristic = [&](int x, int y) {
    int best = 1 << 30;
    for (auto [tx, ty] : targets) best = std::min(best, std::abs(tx - x) + std::abs(ty - y) - 1);
    return std::max(best, 0);
  };
  // State id = (y * width + x) * 4 + heading.
  const int n_states = config_.width * config_.height * 4;
  std::vector<int> g(static_cast<std::size_t>(n_states), -1);
  std::vector<int> parent(static_cast<std::size_t>(n_states), -1);
  std::vector<std::int8_t> via(static_cast<std::size_t>(n_states), -1);
  using Entry = std::tuple<int, std::uint64_t, int>;  // f, order, state
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t order = 0;
  auto sid = [&](int x, int y, int h) { return (y * config_.width + x) * 4 + h; };
  int start = sid(ax_, ay_, static_cast<int>(heading_));
  g[static_cast<std::size_t>(start)] = 0;
  open.push({heuristic(ax_, ay_), order++, start});
  int goal = -1;
  std::vector<char> closed(static_cast<std::size_t>(n_states), 0);
  while (!open.empty()) {
    auto [fv, ord, s] = open.top();
    open.pop();
    if (closed[static_cast<std::size_t>(s)]) continue;
    closed[static_cast<std::size_t>(s)] = 1;
    int h = s % 4, cellid = s / 4, x = cellid % config_.width, y = cellid / config_.width;
    if (matches(cell(x + kDx[h], y + kDy[h]))) {
      goal = s;
      break;
    }
    // 0 = turn-left, 1 = turn-right, 2 = move-forward
    for (int m = 0; m < 3; ++m) {
      int nx = x, ny = y, nh = h;
      if (m == 0) nh = (h + 3) % 4;
      else if (m == 1) nh = (h + 1) % 4;
      else {
        nx += kDx[h];
        ny += kDy[h];
        if (cell(nx, ny).item != Item::Air) continue;
      }
      int ns = sid(nx, ny, nh);
      int ng = g[static_cast<std::size_t>(s)] + 1;
      if (g[static_cast<std::size_t>(ns)] >= 0 && g[static_cast<std::size_t>(ns)] <= ng) continue;
      g[static_cast<std::size_t>(ns)] = ng;
      parent[static_cast<std::size_t>(ns)] = s;
      via[static_cast<std::size_t>(ns)] = static_cast<std::int8_t>(m);
      open.push({ng + heuristic(nx, ny), order++, ns});
    }
  }
  if (goal < 0) throw Error(ErrorCode::NoPath, "no path to " + std::string(item_name(target)));
  std::vector<int> moves;
  for (int s = goal; s != start; s = parent[static_cast<std::size_t>(s)]) moves.push_back(via[static_cast<std::size_t>(s)]);
  std::reverse(moves.begin(), moves.end());
  static const Action kMoves[3] = {{ActionKind::TurnLeft, Item::Air},
                                   {ActionKind::TurnRight, Item::Air},
                                   {ActionKind::MoveForward, Item::Air}};
  for (int m : moves) {
    if (episode_over()) return result;
    Event e = step(kMoves[m]);
    result.transitions.push_back({kMoves[m], e});
  }
  result.reached = matches(front_cell());
  return result;
}

std::vector<Transition> World::execute(const Action& a) {
  if (a.hierarchical()) {
    if (episode_over()) throw Error(ErrorCode::EpisodeOver, "episode horizon reached");
    return approach(a.arg).transitions;
  }
  Event e = step(a);
  return {{a, e}};
}

std::string World::ascii() const {
  std::string out;
  for (int y = 0; y < config_.height; ++y) {
    for (int x = 0; x < config_.width; ++x) {
      if (x == ax_ && y == ay_) {
        out.push_back("^>v<"[static_cast<int>(heading_)]);
        continue;
      }
      const Cell& c = cell(x, y);
      char ch = '.';
      switch (c.item) {
        case Item::Wall: ch = '#'; break;
        case Item::TreeLog: ch = 'T'; break;
        case Item::CraftingTable: ch = c.fire ? 'F' : 'C'; break;
        case Item::Axe: ch = 'a'; break;
        case Item::Water: ch = 'w'; break;
        case Item::RubberTree: ch = c.tap_placed ? 'P' : 'R'; break;
        default: ch = '.'; break;
      }
      out.push_back(ch);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace rapidlearn::world
