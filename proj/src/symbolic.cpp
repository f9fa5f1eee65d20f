#include "rapidlearn/symbolic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace rapidlearn {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Validation: return "ValidationError";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorCode::InapplicableOperator: return "InapplicableOperator";
    case ErrorCode::NegativeFluent: return "NegativeFluent";
    case ErrorCode::PlannerTimeout: return "PlannerTimeout";
    case ErrorCode::PlacementOverflow: return "PlacementOverflow";
    case ErrorCode::EpisodeOver: return "EpisodeOver";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::NoTarget: return "NoTarget";
    case ErrorCode::UnknownNovelty: return "UnknownNovelty";
    case ErrorCode::PreconditionUnmet: return "PreconditionUnmet";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyBiasSet: return "EmptyBiasSet";
    case ErrorCode::EmptyBuffer: return "EmptyBuffer";
    case ErrorCode::OperatorNotInPlan: return "OperatorNotInPlan";
    case ErrorCode::PrefixExecutionFailed: return "PrefixExecutionFailed";
    case ErrorCode::NoNovelEntity: return "NoNovelEntity";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::DiscoveryBudgetExhausted: return "DiscoveryBudgetExhausted";
    case ErrorCode::ExecutorMismatch: return "ExecutorMismatch";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace rapidlearn

namespace rapidlearn::symbolic {

bool Domain::has_type(std::string_view type) const {
  if (type == "object") return true;
  return std::any_of(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == type; });
}

bool Domain::is_subtype(std::string_view type, std::string_view ancestor) const {
  std::string cur(type);
  for (std::size_t guard = 0; guard <= types.size() + 1; ++guard) {
    if (cur == ancestor) return true;
    if (cur == "object") return false;
    auto it = std::find_if(types.begin(), types.end(), [&](const TypeDecl& t) { return t.name == cur; });
    if (it == types.end()) return false;
    cur = it->parent;
  }
  return false;
}

const Schema* Domain::find_predicate(std::string_view n) const {
  auto it = std::find_if(predicates.begin(), predicates.end(), [&](const Schema& s) { return s.name == n; });
  return it == predicates.end() ? nullptr : &*it;
}

const Schema* Domain::find_function(std::string_view n) const {
  auto it = std::find_if(functions.begin(), functions.end(), [&](const Schema& s) { return s.name == n; });
  return it == functions.end() ? nullptr : &*it;
}

const OperatorSchema* Domain::find_operator(std::string_view n) const {
  auto it = std::find_if(operators.begin(), operators.end(), [&](const OperatorSchema& s) { return s.name == n; });
  return it == operators.end() ? nullptr : &*it;
}

// ---------------------------------------------------------------------------

class Universe::Builder {
 public:
  int add_fact(const std::string& name) { return add(u_.fact_names_, u_.fact_index_, name); }
  int add_fluent(const std::string& name) { return add(u_.fluent_names_, u_.fluent_index_, name); }
  void add_object(const std::string& name) {
    if (std::find(u_.objects_.begin(), u_.objects_.end(), name) == u_.objects_.end())
      u_.objects_.push_back(name);
  }
  void add_group(std::vector<int> ids) {
    if (ids.size() > 1) u_.exclusive_.push_back(std::move(ids));
  }
  std::shared_ptr<const Universe> finish() { return std::make_shared<const Universe>(std::move(u_)); }

 private:
  static int add(std::vector<std::string>& names, std::unordered_map<std::string, int>& index,
                 const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(names.size());
    names.push_back(name);
    index.emplace(name, id);
    return id;
  }

  Universe u_;
};

int Universe::fact_id(std::string_view ground_atom) const {
  auto it = fact_index_.find(std::string(ground_atom));
  return it == fact_index_.end() ? -1 : it->second;
}

int Universe::fluent_id(std::string_view ground_fluent) const {
  auto it = fluent_index_.find(std::string(ground_fluent));
  return it == fluent_index_.end() ? -1 : it->second;
}

int Universe::require_fact(std::string_view ground_atom) const {
  int id = fact_id(ground_atom);
  if (id < 0) throw Error(ErrorCode::Validation, "unknown ground atom '" + std::string(ground_atom) + "'");
  return id;
}

int Universe::require_fluent(std::string_view ground_fluent) const {
  int id = fluent_id(ground_fluent);
  if (id < 0) throw Error(ErrorCode::Validation, "unknown ground fluent '" + std::string(ground_fluent) + "'");
  return id;
}

namespace {

std::string join_atom(const std::string& name, const std::vector<std::string>& args) {
  std::string out = name;
  for (const auto& a : args) out += " " + a;
  return out;
}

// Constants written directly in operator bodies, with the declared type of
// the position they occupy.
void collect_constants(const Domain& d, std::vector<TypedObject>& out) {
  auto note = [&](const Atom& atom, const Schema* schema) {
    if (!schema) return;
    for (std::size_t i = 0; i < atom.args.size() && i < schema->params.size(); ++i) {
      const std::string& a = atom.args[i];
      if (a.starts_with("?")) continue;
      if (std::none_of(out.begin(), out.end(), [&](const TypedObject& o) { return o.name == a; }))
        out.push_back({a, schema->params[i].type});
    }
  };
  for (const auto& op : d.operators) {
    for (const auto& l : op.precondition.literals) note(l.atom, d.find_predicate(l.atom.name));
    for (const auto& c : op.precondition.comparisons) note(c.fluent, d.find_function(c.fluent.name));
    for (const auto& l : op.effect.literals) note(l.atom, d.find_predicate(l.atom.name));
    for (const auto& n : op.effect.numeric) note(n.fluent, d.find_function(n.fluent.name));
  }
}

void enumerate(const Domain& d, const std::vector<TypedObject>& objects, const Schema& schema,
               const std::function<void(const std::vector<std::string>&)>& emit) {
  std::vector<std::vector<const TypedObject*>> domains;
  for (const auto& p : schema.params) {
    std::vector<const TypedObject*> candidates;
    for (const auto& o : objects) {
      if (d.is_subtype(o.type, p.type)) candidates.push_back(&o);
    }
    if (candidates.empty()) return;
    domains.push_back(std::move(candidates));
  }
  std::vector<std::size_t> idx(domains.size(), 0);
  std::vector<std::string> args(domains.size());
  for (;;) {
    for (std::size_t i = 0; i < domains.size(); ++i) args[i] = domains[i][idx[i]]->name;
    emit(args);
    std::size_t k = domains.size();
    while (k > 0) {
      --k;
      if (++idx[k] < domains[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (domains.empty()) return;
  }
}

std::string bind(const std::string& arg, const std::map<std::string, std::string>& binding) {
  if (!arg.starts_with("?")) return arg;
  auto it = binding.find(arg);
  if (it == binding.end()) throw Error(ErrorCode::Validation, "unbound parameter '" + arg + "'");
  return it->second;
}

std::string bind_atom(const Atom& atom, const std::map<std::string, std::string>& binding) {
  std::vector<std::string> args;
  args.reserve(atom.args.size());
  for (const auto& a : atom.args) args.push_back(bind(a, binding));
  return join_atom(atom.name, args);
}

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::shared_ptr<const Universe> build_universe(const Domain& domain, const std::vector<TypedObject>& objects,
                                               const TaskOptions& options) {
  std::vector<TypedObject> all = objects;
  collect_constants(domain, all);
  Universe::Builder b;
  for (const auto& o : all) b.add_object(o.name);
  for (const auto& p : domain.predicates) {
    std::vector<int> ids;
    enumerate(domain, all, p, [&](const std::vector<std::string>& args) {
      ids.push_back(b.add_fact(join_atom(p.name, args)));
    });
    if (std::find(options.exclusive_predicates.begin(), options.exclusive_predicates.end(), p.name) !=
        options.exclusive_predicates.end())
      b.add_group(std::move(ids));
  }
  for (const auto& f : domain.functions) {
    enumerate(domain, all, f, [&](const std::vector<std::string>& args) { b.add_fluent(join_atom(f.name, args)); });
  }
  return b.finish();
}

std::vector<GroundOperator> ground(const Domain& domain, const std::vector<TypedObject>& objects,
                                   const Universe& universe, const GroundingOptions& options) {
  std::vector<GroundOperator> out;
  for (const auto& op : domain.operators) {
    Schema params{op.name, op.params};
    enumerate(domain, objects, params, [&](const std::vector<std::string>& args) {
      if (options.prune_repeated_args && args.size() > 1) {
        std::set<std::string> distinct(args.begin(), args.end());
        if (distinct.size() != args.size()) return;
      }
      std::map<std::string, std::string> binding;
      for (std::size_t i = 0; i < args.size(); ++i) binding[op.params[i].name] = args[i];

      GroundOperator g;
      g.name = join_atom(op.name, args);
      g.schema = op.name;
      g.args = args;
      for (const auto& l : op.precondition.literals) {
        int id = universe.require_fact(bind_atom(l.atom, binding));
        (l.positive ? g.precondition.positive : g.precondition.negative).push_back(id);
      }
      for (const auto& c : op.precondition.comparisons) {
        g.precondition.numeric.push_back(
            {universe.require_fluent(bind_atom(c.fluent, binding)), Cmp::GreaterEqual, c.value});
      }
      for (const auto& l : op.effect.literals) {
        int id = universe.require_fact(bind_atom(l.atom, binding));
        (l.positive ? g.add : g.del).push_back(id);
      }
      std::map<int, std::int64_t> deltas;
      for (const auto& n : op.effect.numeric) {
        int id = universe.require_fluent(bind_atom(n.fluent, binding));
        deltas[id] += n.op == NumericOp::Increase ? n.amount : -n.amount;
      }
      for (const auto& [id, delta] : deltas) g.numeric.push_back({id, delta});
      sort_unique(g.precondition.positive);
      sort_unique(g.precondition.negative);
      sort_unique(g.add);
      sort_unique(g.del);
      out.push_back(std::move(g));
    });
  }
  return out;
}

GroundCondition ground_condition(const Condition& condition, const Universe& universe) {
  GroundCondition g;
  std::map<std::string, std::string> none;
  for (const auto& l : condition.literals) {
    int id = universe.require_fact(bind_atom(l.atom, none));
    (l.positive ? g.positive : g.negative).push_back(id);
  }
  for (const auto& c : condition.comparisons)
    g.numeric.push_back({universe.require_fluent(bind_atom(c.fluent, none)), Cmp::GreaterEqual, c.value});
  sort_unique(g.positive);
  sort_unique(g.negative);
  return g;
}

// ---------------------------------------------------------------------------

SymbolicState SymbolicState::empty_for(const Universe& u) {
  SymbolicState s;
  s.facts.assign(u.fact_count(), 0);
  s.fluents.assign(u.fluent_count(), 0);
  return s;
}

bool SymbolicState::holds(const Universe& u, std::string_view atom) const {
  int id = u.fact_id(atom);
  return id >= 0 && facts[static_cast<std::size_t>(id)] != 0;
}

std::int64_t SymbolicState::value(const Universe& u, std::string_view fluent) const {
  int id = u.fluent_id(fluent);
  return id < 0 ? 0 : fluents[static_cast<std::size_t>(id)];
}

SymbolicState& SymbolicState::set(const Universe& u, std::string_view atom, bool truth) {
  facts[static_cast<std::size_t>(u.require_fact(atom))] = truth ? 1 : 0;
  return *this;
}

SymbolicState& SymbolicState::set_value(const Universe& u, std::string_view fluent, std::int64_t v) {
  if (v < 0) throw Error(ErrorCode::NegativeFluent, "negative value for " + std::string(fluent));
  fluents[static_cast<std::size_t>(u.require_fluent(fluent))] = v;
  return *this;
}

std::size_t SymbolicState::hash() const noexcept {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (facts[i]) mix(i);
  }
  mix(0xfeedull);
  for (auto v : fluents) mix(static_cast<std::uint64_t>(v));
  return h;
}

std::string SymbolicState::to_string(const Universe& u) const {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    if (facts[i]) parts.push_back("(" + u.fact_name(static_cast<int>(i)) + ")");
  }
  std::sort(parts.begin(), parts.end());
  std::vector<std::string> nums;
  for (std::size_t i = 0; i < fluents.size(); ++i) {
    if (fluents[i] != 0)
      nums.push_back("(" + u.fluent_name(static_cast<int>(i)) + ")=" + std::to_string(fluents[i]));
  }
  std::sort(nums.begin(), nums.end());
  std::string out = "{";
  for (const auto& p : parts) out += (out.size() > 1 ? " " : "") + p;
  for (const auto& p : nums) out += (out.size() > 1 ? " " : "") + p;
  return out + "}";
}

bool GroundCondition::satisfied_by(const SymbolicState& s) const {
  for (int id : positive) {
    if (!s.facts[static_cast<std::size_t>(id)]) return false;
  }
  for (int id : negative) {
    if (s.facts[static_cast<std::size_t>(id)]) return false;
  }
  for (const auto& c : numeric) {
    std::int64_t v = s.fluents[static_cast<std::size_t>(c.fluent)];
    if (c.cmp == Cmp::GreaterEqual ? v < c.value : v > c.value) return false;
  }
  return true;
}

std::string GroundCondition::to_string(const Universe& u) const {
  std::vector<std::string> parts;
  for (int id : positive) parts.push_back("(" + u.fact_name(id) + ")");
  for (int id : negative) parts.push_back("(not (" + u.fact_name(id) + "))");
  for (const auto& c : numeric) {
    parts.push_back(std::string(c.cmp == Cmp::GreaterEqual ? "(>= (" : "(<= (") + u.fluent_name(c.fluent) + ") " +
                    std::to_string(c.value) + ")");
  }
  std::string out = "(and";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

const GroundOperator* PlanningTask::find_operator(std::string_view ground_name) const {
  for (const auto& op : *operators) {
    if (op.name == ground_name) return &op;
  }
  return nullptr;
}

bool applicable(const SymbolicState& s, const GroundOperator& op) { return op.precondition.satisfied_by(s); }

SymbolicState apply_unchecked(const SymbolicState& s, const GroundOperator& op) {
  SymbolicState next = s;
  for (int id : op.del) next.facts[static_cast<std::size_t>(id)] = 0;
  for (int id : op.add) next.facts[static_cast<std::size_t>(id)] = 1;
  for (const auto& n : op.numeric) {
    auto& v = next.fluents[static_cast<std::size_t>(n.fluent)];
    if (v + n.delta < 0)
      throw Error(ErrorCode::NegativeFluent, "operator '" + op.name + "' drives a fluent below zero");
    v += n.delta;
  }
  return next;
}

void check_state_invariants(const SymbolicState& s, const Universe& u) {
  if (s.facts.size() != u.fact_count() || s.fluents.size() != u.fluent_count())
    throw Error(ErrorCode::InvariantViolation, "state does not match its universe");
  for (std::size_t i = 0; i < s.fluents.size(); ++i) {
    if (s.fluents[i] < 0)
      throw Error(ErrorCode::InvariantViolation, "negative fluent " + u.fluent_name(static_cast<int>(i)));
  }
  for (const auto& group : u.exclusive_groups()) {
    int count = 0;
    for (int id : group) count += s.facts[static_cast<std::size_t>(id)] ? 1 : 0;
    if (count > 1)
      throw Error(ErrorCode::InvariantViolation,
                  "more than one of a mutually exclusive group holds (" + u.fact_name(group.front()) + ", ...)");
  }
}

SymbolicState apply(const SymbolicState& s, const GroundOperator& op, const Universe& universe) {
  if (!applicable(s, op))
    throw Error(ErrorCode::InapplicableOperator, "operator '" + op.name + "' is not applicable");
  SymbolicState next = apply_unchecked(s, op);
  check_state_invariants(next, universe);
  return next;
}

PlanningTask make_task(std::shared_ptr<const Domain> domain, std::string problem_name,
                       std::vector<TypedObject> objects, const std::vector<std::string>& init_facts,
                       const std::vector<std::pair<std::string, std::int64_t>>& init_fluents, Condition goal,
                       const TaskOptions& options) {
  if (!domain) throw Error(ErrorCode::InvalidArgument, "make_task requires a domain");
  for (const auto& o : objects) {
    if (!domain->has_type(o.type))
      throw Error(ErrorCode::UnknownType, "unknown type '" + o.type + "' for object '" + o.name + "'");
  }
  PlanningTask task;
  task.domain = domain;
  task.problem_name = std::move(problem_name);
  task.objects = std::move(objects);
  task.universe = build_universe(*domain, task.objects, options);
  task.operators = std::make_shared<const std::vector<GroundOperator>>(
      ground(*domain, task.objects, *task.universe, options.grounding));
  task.initial = SymbolicState::empty_for(*task.universe);
  for (const auto& f : init_facts) task.initial.set(*task.universe, f);
  for (const auto& [f, v] : init_fluents) task.initial.set_value(*task.universe, f, v);
  check_state_invariants(task.initial, *task.universe);
  task.goal_lifted = std::move(goal);
  task.goal = ground_condition(task.goal_lifted, *task.universe);
  return task;
}

}  // namespace rapidlearn::symbolic
