#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rapidlearn/error.hpp"

namespace rapidlearn::symbolic {

// ---------------------------------------------------------------------------
// Lifted domain model
// ---------------------------------------------------------------------------

struct TypedParam {
  std::string name;
  std::string type;
  bool operator==(const TypedParam&) const = default;
};

// Predicate or function declaration.
struct Schema {
  std::string name;
  std::vector<TypedParam> params;
  bool operator==(const Schema&) const = default;
};

// Arguments are variables ("?x") or constants.
struct Atom {
  std::string name;
  std::vector<std::string> args;
  bool operator==(const Atom&) const = default;
  std::string to_string() const;
};

struct Literal {
  Atom atom;
  bool positive = true;
  bool operator==(const Literal&) const = default;
};

// (>= (fluent ...) value)
struct Comparison {
  Atom fluent;
  std::int64_t value = 0;
  bool operator==(const Comparison&) const = default;
};

struct Condition {
  std::vector<Literal> literals;
  std::vector<Comparison> comparisons;
  bool operator==(const Condition&) const = default;
  bool empty() const { return literals.empty() && comparisons.empty(); }
};

enum class NumericOp { Increase, Decrease };

struct NumericEffect {
  NumericOp op = NumericOp::Increase;
  Atom fluent;
  std::int64_t amount = 0;
  bool operator==(const NumericEffect&) const = default;
};

struct Effect {
  std::vector<Literal> literals;
  std::vector<NumericEffect> numeric;
  bool operator==(const Effect&) const = default;
};

struct OperatorSchema {
  std::string name;
  std::vector<TypedParam> params;
  Condition precondition;
  Effect effect;
  bool operator==(const OperatorSchema&) const = default;
};

struct TypeDecl {
  std::string name;
  std::string parent;
  bool operator==(const TypeDecl&) const = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;
  std::vector<Schema> predicates;
  std::vector<Schema> functions;
  std::vector<OperatorSchema> operators;
  // Validator notes (e.g. tightened preconditions). Not part of equality.
  std::vector<std::string> warnings;

  bool operator==(const Domain& other) const {
    return name == other.name && requirements == other.requirements &&
           types == other.types && predicates == other.predicates &&
           functions == other.functions && operators == other.operators;
  }

  bool has_type(std::string_view type) const;
  // True when `type` equals `ancestor` or descends from it.
  bool is_subtype(std::string_view type, std::string_view ancestor) const;
  const Schema* find_predicate(std::string_view name) const;
  const Schema* find_function(std::string_view name) const;
  const OperatorSchema* find_operator(std::string_view name) const;
};

struct TypedObject {
  std::string name;
  std::string type;
  bool operator==(const TypedObject&) const = default;
};

// ---------------------------------------------------------------------------
// Ground model
// ---------------------------------------------------------------------------

// Interned ground atoms ("facing tree_log") and ground fluents
// ("inventory plank") for one object universe. Immutable once built.
class Universe {
 public:
  class Builder;

  int fact_id(std::string_view ground_atom) const;
  int fluent_id(std::string_view ground_fluent) const;
  int require_fact(std::string_view ground_atom) const;
  int require_fluent(std::string_view ground_fluent) const;

  const std::string& fact_name(int id) const { return fact_names_.at(static_cast<std::size_t>(id)); }
  const std::string& fluent_name(int id) const { return fluent_names_.at(static_cast<std::size_t>(id)); }
  std::size_t fact_count() const { return fact_names_.size(); }
  std::size_t fluent_count() const { return fluent_names_.size(); }
  const std::vector<std::string>& objects() const { return objects_; }

  // Groups of facts of which at most one may be true (e.g. all `facing` atoms).
  const std::vector<std::vector<int>>& exclusive_groups() const { return exclusive_; }

 private:
  std::vector<std::string> fact_names_;
  std::vector<std::string> fluent_names_;
  std::unordered_map<std::string, int> fact_index_;
  std::unordered_map<std::string, int> fluent_index_;
  std::vector<std::string> objects_;
  std::vector<std::vector<int>> exclusive_;
};

struct SymbolicState {
  std::vector<std::uint8_t> facts;
  std::vector<std::int64_t> fluents;

  bool operator==(const SymbolicState&) const = default;

  static SymbolicState empty_for(const Universe& universe);

  bool holds(const Universe& u, std::string_view atom) const;
  std::int64_t value(const Universe& u, std::string_view fluent) const;
  SymbolicState& set(const Universe& u, std::string_view atom, bool truth = true);
  SymbolicState& set_value(const Universe& u, std::string_view fluent, std::int64_t value);

  std::size_t hash() const noexcept;
  std::string to_string(const Universe& u) const;
};

struct SymbolicStateHash {
  std::size_t operator()(const SymbolicState& s) const noexcept { return s.hash(); }
};

enum class Cmp { GreaterEqual, LessEqual };

struct GroundComparison {
  int fluent = 0;
  Cmp cmp = Cmp::GreaterEqual;
  std::int64_t value = 0;
  bool operator==(const GroundComparison&) const = default;
};

struct GroundCondition {
  std::vector<int> positive;
  std::vector<int> negative;
  std::vector<GroundComparison> numeric;

  bool operator==(const GroundCondition&) const = default;
  bool satisfied_by(const SymbolicState& s) const;
  bool empty() const { return positive.empty() && negative.empty() && numeric.empty(); }
  std::string to_string(const Universe& u) const;
};

struct GroundNumericEffect {
  int fluent = 0;
  std::int64_t delta = 0;  // signed: decrease is negative
  bool operator==(const GroundNumericEffect&) const = default;
};

struct GroundOperator {
  std::string name;  // "approach air tree_log"
  std::string schema;
  std::vector<std::string> args;
  GroundCondition precondition;
  std::vector<int> add;
  std::vector<int> del;
  std::vector<GroundNumericEffect> numeric;

  bool operator==(const GroundOperator&) const = default;
};

struct GroundingOptions {
  // Multi-parameter operators skip bindings that repeat an object
  // (self-approach is a no-op).
  bool prune_repeated_args = true;
};

struct TaskOptions {
  std::vector<std::string> exclusive_predicates{"facing"};
  GroundingOptions grounding;
};

// T = (E, F, O, s0, sg). Copies share the immutable domain/universe/operators.
struct PlanningTask {
  std::shared_ptr<const Domain> domain;
  std::string problem_name;
  std::vector<TypedObject> objects;
  std::shared_ptr<const Universe> universe;
  std::shared_ptr<const std::vector<GroundOperator>> operators;
  SymbolicState initial;
  Condition goal_lifted;
  GroundCondition goal;

  PlanningTask with_initial(SymbolicState s) const {
    PlanningTask copy = *this;
    copy.initial = std::move(s);
    return copy;
  }
  const GroundOperator* find_operator(std::string_view ground_name) const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

Domain parse_domain(std::string_view text);
std::string serialize_domain(const Domain& domain);

// Builds a task from already-validated pieces. `init_facts` are ground atom
// strings; `init_fluents` maps ground fluent strings to values.
PlanningTask make_task(std::shared_ptr<const Domain> domain, std::string problem_name,
                       std::vector<TypedObject> objects, const std::vector<std::string>& init_facts,
                       const std::vector<std::pair<std::string, std::int64_t>>& init_fluents,
                       Condition goal, const TaskOptions& options = {});

PlanningTask parse_problem(std::string_view text, std::shared_ptr<const Domain> domain,
                           const TaskOptions& options = {});
std::string serialize_problem(const PlanningTask& task);

std::shared_ptr<const Universe> build_universe(const Domain& domain,
                                               const std::vector<TypedObject>& objects,
                                               const TaskOptions& options = {});

std::vector<GroundOperator> ground(const Domain& domain, const std::vector<TypedObject>& objects,
                                   const Universe& universe, const GroundingOptions& options = {});

GroundCondition ground_condition(const Condition& condition, const Universe& universe);

bool applicable(const SymbolicState& s, const GroundOperator& op);

// Throws InapplicableOperator, NegativeFluent, or InvariantViolation.
SymbolicState apply(const SymbolicState& s, const GroundOperator& op, const Universe& universe);

// Delete-then-add application without the applicability check. Still throws
// NegativeFluent.
SymbolicState apply_unchecked(const SymbolicState& s, const GroundOperator& op);

void check_state_invariants(const SymbolicState& s, const Universe& universe);

// The pogo-stick crafting domain as shipped in data/domains/pogostick.pddl.
std::string_view pogostick_domain_text();

}  // namespace rapidlearn::symbolic
