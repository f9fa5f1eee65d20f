#include "rapidlearn/planner.hpp"

#include <algorithm>
#include <cstring>
#include <queue>
#include <string>
#include <unordered_set>

namespace rapidlearn::planner {

using symbolic::Cmp;
using symbolic::GroundCondition;

std::vector<std::string> Plan::names() const {
  std::vector<std::string> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.name);
  return out;
}

double goal_count(const SymbolicState& s, const GroundCondition& goal) {
  double h = 0.0;
  for (int id : goal.positive) h += s.facts[static_cast<std::size_t>(id)] ? 0.0 : 1.0;
  for (int id : goal.negative) h += s.facts[static_cast<std::size_t>(id)] ? 1.0 : 0.0;
  for (const auto& c : goal.numeric) {
    std::int64_t v = s.fluents[static_cast<std::size_t>(c.fluent)];
    if (c.cmp == Cmp::GreaterEqual && v < c.value) {
      h += c.value > 0 ? std::min(1.0, static_cast<double>(c.value - v) / static_cast<double>(c.value)) : 1.0;
    } else if (c.cmp == Cmp::LessEqual && v > c.value) {
      h += std::min(1.0, static_cast<double>(v - c.value) / static_cast<double>(std::max<std::int64_t>(v, 1)));
    }
  }
  return h;
}

namespace {

constexpr std::size_t kMaxCacheEntries = 200000;

// Duplicate detection only looks at facts that some precondition or the goal
// reads, and at fluents that are read or consumed. A fluent that no operator
// decreases is capped at the largest threshold tested on it.
class Projection {
 public:
  explicit Projection(const PlanningTask& task) {
    const auto& u = *task.universe;
    std::vector<char> fact_used(u.fact_count(), 0);
    std::vector<char> fluent_used(u.fluent_count(), 0);
    std::vector<char> decreased(u.fluent_count(), 0);
    std::vector<std::int64_t> cap(u.fluent_count(), 0);
    auto read = [&](const GroundCondition& c) {
      for (int id : c.positive) fact_used[static_cast<std::size_t>(id)] = 1;
      for (int id : c.negative) fact_used[static_cast<std::size_t>(id)] = 1;
      for (const auto& n : c.numeric) {
        auto f = static_cast<std::size_t>(n.fluent);
        fluent_used[f] = 1;
        cap[f] = std::max(cap[f], n.cmp == Cmp::GreaterEqual ? n.value : n.value + 1);
        if (n.cmp == Cmp::LessEqual) decreased[f] = 1;  // upper bounds need exact values
      }
    };
    for (const auto& op : *task.operators) {
      read(op.precondition);
      for (const auto& n : op.numeric) {
        if (n.delta < 0) {
          decreased[static_cast<std::size_t>(n.fluent)] = 1;
          fluent_used[static_cast<std::size_t>(n.fluent)] = 1;
        }
      }
    }
    read(task.goal);
    for (std::size_t i = 0; i < fact_used.size(); ++i) {
      if (fact_used[i]) facts_.push_back(i);
    }
    for (std::size_t i = 0; i < fluent_used.size(); ++i) {
      if (fluent_used[i]) fluents_.push_back({i, decreased[i] ? -1 : cap[i]});
    }
  }

  std::string key(const SymbolicState& s) const {
    std::string k;
    k.reserve(facts_.size() + fluents_.size() * sizeof(std::int64_t));
    for (std::size_t i : facts_) k.push_back(static_cast<char>(s.facts[i]));
    for (const auto& [i, c] : fluents_) {
      std::int64_t v = s.fluents[i];
      if (c >= 0) v = std::min(v, c);
      char buf[sizeof v];
      std::memcpy(buf, &v, sizeof v);
      k.append(buf, sizeof v);
    }
    return k;
  }

 private:
  std::vector<std::size_t> facts_;
  std::vector<std::pair<std::size_t, std::int64_t>> fluents_;
};

struct Node {
  SymbolicState state;
  std::int64_t parent;
  std::int32_t op;
  std::int32_t g;
};

struct QueueEntry {
  double f;
  std::uint64_t order;
  std::size_t node;
  bool operator>(const QueueEntry& o) const { return f != o.f ? f > o.f : order > o.order; }
};

void extract(const std::vector<Node>& nodes, std::size_t leaf, const PlanningTask& task, SearchResult& r) {
  for (auto i = static_cast<std::int64_t>(leaf); nodes[static_cast<std::size_t>(i)].parent >= 0;
       i = nodes[static_cast<std::size_t>(i)].parent) {
    r.indices.push_back(static_cast<std::uint32_t>(nodes[static_cast<std::size_t>(i)].op));
  }
  std::reverse(r.indices.begin(), r.indices.end());
  for (auto idx : r.indices) r.plan.steps.push_back((*task.operators)[idx]);
}

}  // namespace

SearchResult search(const PlanningTask& task, const SearchConfig& cfg) {
  if (cfg.node_budget == 0) throw Error(ErrorCode::InvalidArgument, "node budget must be positive");
  SearchResult result;
  if (task.goal.satisfied_by(task.initial)) {
    result.status = SearchStatus::Found;
    return result;
  }
  Projection proj(task);
  auto h = [&](const SymbolicState& s) {
    return cfg.heuristic == Heuristic::GoalCount ? goal_count(s, task.goal) : 0.0;
  };

  std::vector<Node> nodes;
  nodes.push_back({task.initial, -1, -1, 0});
  std::unordered_set<std::string> seen;
  seen.insert(proj.key(task.initial));
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> open;
  std::uint64_t order = 0;
  open.push({cfg.weight * h(task.initial), order++, 0});

  const auto& ops = *task.operators;
  while (!open.empty()) {
    if (result.expanded >= cfg.node_budget) {
      result.status = SearchStatus::Timeout;
      return result;
    }
    std::size_t cur = open.top().node;
    open.pop();
    ++result.expanded;
    for (std::size_t oi = 0; oi < ops.size(); ++oi) {
      const auto& op = ops[oi];
      const SymbolicState& s = nodes[cur].state;
      if (!symbolic::applicable(s, op)) continue;
      SymbolicState next;
      try {
        next = symbolic::apply_unchecked(s, op);
      } catch (const Error&) {
        continue;  // unguarded consumption
      }
      if (!seen.insert(proj.key(next)).second) continue;
      ++result.generated;
      std::int32_t g = nodes[cur].g + 1;
      nodes.push_back({std::move(next), static_cast<std::int64_t>(cur), static_cast<std::int32_t>(oi), g});
      std::size_t id = nodes.size() - 1;
      if (task.goal.satisfied_by(nodes[id].state)) {
        result.status = SearchStatus::Found;
        extract(nodes, id, task, result);
        return result;
      }
      open.push({g + cfg.weight * h(nodes[id].state), order++, id});
    }
  }
  result.status = SearchStatus::NoPlan;
  return result;
}

std::optional<Plan> plan(const PlanningTask& task, const SearchConfig& cfg) {
  SearchResult r = search(task, cfg);
  switch (r.status) {
    case SearchStatus::Found: return std::move(r.plan);
    case SearchStatus::NoPlan: return std::nullopt;
    case SearchStatus::Timeout: break;
  }
  throw Error(ErrorCode::PlannerTimeout,
              "node budget of " + std::to_string(cfg.node_budget) + " expansions exhausted");
}

Validation validate(const Plan& p, const PlanningTask& task) {
  SymbolicState s = task.initial;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    if (!symbolic::applicable(s, p.steps[i])) return {false, static_cast<std::ptrdiff_t>(i)};
    try {
      s = symbolic::apply(s, p.steps[i], *task.universe);
    } catch (const Error&) {
      return {false, static_cast<std::ptrdiff_t>(i)};
    }
  }
  if (!task.goal.satisfied_by(s)) return {false, static_cast<std::ptrdiff_t>(p.steps.size())};
  return {true, -1};
}

Validation validate(const std::vector<std::string>& ground_names, const PlanningTask& task) {
  Plan p;
  for (std::size_t i = 0; i < ground_names.size(); ++i) {
    const GroundOperator* op = task.find_operator(ground_names[i]);
    if (!op) return {false, static_cast<std::ptrdiff_t>(i)};
    p.steps.push_back(*op);
  }
  return validate(p, task);
}

const char* to_string(Plannability p) {
  switch (p) {
    case Plannability::False: return "false";
    case Plannability::True: return "true";
    case Plannability::Unknown: return "unknown";
  }
  return "unknown";
}

Plannability exists_plan(const SymbolicState& s, const PlanningTask& task, const SearchConfig& cfg) {
  SearchResult r = search(task.with_initial(s), cfg);
  switch (r.status) {
    case SearchStatus::Found: return Plannability::True;
    case SearchStatus::NoPlan: return Plannability::False;
    case SearchStatus::Timeout: break;
  }
  return Plannability::Unknown;
}

PlannabilityOracle::PlannabilityOracle(PlanningTask task, SearchConfig cfg)
    : task_(std::move(task)), cfg_(cfg) {}

SearchResult PlannabilityOracle::plan_from(const SymbolicState& s) {
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(s);
    if (it != cache_.end()) {
      ++hits_;
      SearchResult r;
      r.status = it->second.status;
      r.indices = it->second.indices;
      for (auto idx : r.indices) r.plan.steps.push_back((*task_.operators)[idx]);
      return r;
    }
  }
  SearchResult r = search(task_.with_initial(s), cfg_);
  std::lock_guard lock(mu_);
  ++searches_;
  if (cache_.size() >= kMaxCacheEntries) cache_.clear();
  cache_.emplace(s, Entry{r.status, r.indices});
  return r;
}

std::size_t PlannabilityOracle::cache_size() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

void PlannabilityOracle::clear() {
  std::lock_guard lock(mu_);
  cache_.clear();
}

Plannability PlannabilityOracle::query(const SymbolicState& s) {
  switch (plan_from(s).status) {
    case SearchStatus::Found: return Plannability::True;
    case SearchStatus::NoPlan: return Plannability::False;
    case SearchStatus::Timeout: break;
  }
  return Plannability::Unknown;
}

std::size_t PlannabilityOracle::searches() const {
  std::lock_guard lock(mu_);
  return searches_;
}

std::size_t PlannabilityOracle::cache_hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

}  // namespace rapidlearn::planner
