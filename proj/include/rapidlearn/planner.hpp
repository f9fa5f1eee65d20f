#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "rapidlearn/symbolic.hpp"

namespace rapidlearn::planner {

using symbolic::GroundOperator;
using symbolic::PlanningTask;
using symbolic::SymbolicState;

struct Plan {
  std::vector<GroundOperator> steps;

  std::size_t cost() const { return steps.size(); }
  std::vector<std::string> names() const;
};

enum class Heuristic { GoalCount, Blind };

struct SearchConfig {
  double weight = 2.0;
  Heuristic heuristic = Heuristic::GoalCount;
  std::size_t node_budget = 200000;
};

enum class SearchStatus { Found, NoPlan, Timeout };

struct SearchResult {
  SearchStatus status = SearchStatus::NoPlan;
  Plan plan;
  std::vector<std::uint32_t> indices;  // positions of plan steps in task.operators
  std::size_t expanded = 0;
  std::size_t generated = 0;
};

// Weighted best-first search, f = g + w*h, FIFO among equal f.
SearchResult search(const PlanningTask& task, const SearchConfig& cfg = {});

// nullopt means no plan exists. Throws PlannerTimeout on budget exhaustion.
std::optional<Plan> plan(const PlanningTask& task, const SearchConfig& cfg = {});

struct Validation {
  bool ok = false;
  // First inapplicable step, or steps.size() when only the goal test failed.
  std::ptrdiff_t failing_index = -1;
};

Validation validate(const Plan& plan, const PlanningTask& task);
Validation validate(const std::vector<std::string>& ground_names, const PlanningTask& task);

// Goal-count estimate: one per unsatisfied literal, numeric shortfall
// normalized to [0, 1] per comparison.
double goal_count(const SymbolicState& s, const symbolic::GroundCondition& goal);

enum class Plannability { False, True, Unknown };

const char* to_string(Plannability p);

Plannability exists_plan(const SymbolicState& s, const PlanningTask& task, const SearchConfig& cfg = {});

// Memoizes searches from different start states of one task. Safe to share
// between threads.
class PlannabilityOracle {
 public:
  explicit PlannabilityOracle(PlanningTask task, SearchConfig cfg = {});

  Plannability query(const SymbolicState& s);
  // Status plus plan (empty unless Found).
  SearchResult plan_from(const SymbolicState& s);

  const PlanningTask& task() const { return task_; }
  std::size_t searches() const;
  std::size_t cache_size() const;
  void clear();
  std::size_t cache_hits() const;

 private:
  PlanningTask task_;
  SearchConfig cfg_;
  mutable std::mutex mu_;
  struct Entry {
    SearchStatus status;
    std::vector<std::uint32_t> indices;
  };
  std::unordered_map<SymbolicState, Entry, symbolic::SymbolicStateHash> cache_;
  std::size_t searches_ = 0;
  std::size_t hits_ = 0;
};

}  // namespace rapidlearn::planner
