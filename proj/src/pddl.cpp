// PDDL subset reader/writer: typing, strips, non-negative integer fluents
// with >=, increase and decrease.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

#include "rapidlearn/symbolic.hpp"

namespace rapidlearn::symbolic {
namespace {

struct Node {
  bool is_list = false;
  std::string token;
  std::vector<Node> children;
  int line = 0;
  int column = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Node parse_document() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty document", line_, col_);
    Node root = parse_node();
    skip_space();
    if (pos_ < text_.size()) throw ParseError("trailing content after top-level expression", line_, col_);
    return root;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Node parse_node() {
    Node node;
    node.line = line_;
    node.column = col_;
    char c = text_[pos_];
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '(') {
      node.is_list = true;
      advance();
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unterminated list opened", node.line, node.column);
        if (text_[pos_] == ')') {
          advance();
          break;
        }
        node.children.push_back(parse_node());
      }
      return node;
    }
    std::string token;
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(ch)) || ch == '(' || ch == ')' || ch == ';') break;
      token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
      advance();
    }
    node.token = std::move(token);
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

[[noreturn]] void fail_at(const Node& n, const std::string& message) {
  throw ParseError(message, n.line, n.column);
}

[[noreturn]] void unsupported(const Node& n, const std::string& what) {
  throw Error(ErrorCode::UnsupportedConstruct,
              "unsupported construct '" + what + "' at line " + std::to_string(n.line) +
                  ", column " + std::to_string(n.column));
}

[[noreturn]] void invalid(const Node& n, const std::string& message) {
  throw Error(ErrorCode::Validation, message + " at line " + std::to_string(n.line) + ", column " +
                                         std::to_string(n.column));
}

const Node& expect_list(const Node& n, const char* what) {
  if (!n.is_list) fail_at(n, std::string("expected ") + what + ", found '" + n.token + "'");
  return n;
}

const std::string& expect_symbol(const Node& n, const char* what) {
  if (n.is_list) fail_at(n, std::string("expected ") + what + ", found a list");
  return n.token;
}

bool head_is(const Node& n, std::string_view head) {
  return n.is_list && !n.children.empty() && !n.children[0].is_list && n.children[0].token == head;
}

std::int64_t parse_integer(const Node& n) {
  const std::string& tok = expect_symbol(n, "integer");
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    if (tok.find('.') != std::string::npos) unsupported(n, "non-integer number " + tok);
    fail_at(n, "expected integer, found '" + tok + "'");
  }
  return value;
}

// "a b - t c - u" with trailing untyped names getting `default_type`.
std::vector<TypedParam> parse_typed_list(const std::vector<Node>& items, std::size_t begin,
                                         const std::string& default_type) {
  std::vector<TypedParam> out;
  std::vector<std::string> pending;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const std::string& tok = expect_symbol(items[i], "name");
    if (tok == "-") {
      if (i + 1 >= items.size()) fail_at(items[i], "dangling '-' in typed list");
      const Node& type_node = items[++i];
      if (type_node.is_list) {
        if (head_is(type_node, "either")) unsupported(type_node, "either");
        fail_at(type_node, "expected type name");
      }
      if (pending.empty()) fail_at(items[i], "type without names in typed list");
      for (auto& name : pending) out.push_back({std::move(name), type_node.token});
      pending.clear();
    } else {
      pending.push_back(tok);
    }
  }
  for (auto& name : pending) out.push_back({std::move(name), default_type});
  return out;
}

Atom parse_atom(const Node& n) {
  expect_list(n, "atom");
  if (n.children.empty()) fail_at(n, "empty atom");
  Atom atom;
  atom.name = expect_symbol(n.children[0], "predicate or function name");
  for (std::size_t i = 1; i < n.children.size(); ++i) {
    if (n.children[i].is_list) fail_at(n.children[i], "nested term in atom '" + atom.name + "'");
    atom.args.push_back(n.children[i].token);
  }
  return atom;
}

const std::set<std::string>& unsupported_heads() {
  static const std::set<std::string> heads{
      "or", "imply", "exists", "forall", "when", "assign", "scale-up", "scale-down",
      "<=", "<", ">", "=", "at", "over", "either", "preference"};
  return heads;
}

class DomainReader {
 public:
  explicit DomainReader(Domain& d) : d_(d) {}

  void read(const Node& root) {
    expect_list(root, "(define ...)");
    if (root.children.empty() || root.children[0].is_list || root.children[0].token != "define")
      fail_at(root, "expected 'define'");
    if (root.children.size() < 2 || !head_is(root.children[1], "domain"))
      fail_at(root.children.size() > 1 ? root.children[1] : root, "expected (domain <name>)");
    const Node& header = root.children[1];
    if (header.children.size() != 2) fail_at(header, "expected (domain <name>)");
    d_.name = expect_symbol(header.children[1], "domain name");

    for (std::size_t i = 2; i < root.children.size(); ++i) {
      const Node& section = expect_list(root.children[i], "domain section");
      if (section.children.empty() || section.children[0].is_list)
        fail_at(section, "expected section keyword");
      const std::string& key = section.children[0].token;
      if (key == ":requirements") {
        read_requirements(section);
      } else if (key == ":types") {
        read_types(section);
      } else if (key == ":predicates") {
        for (std::size_t j = 1; j < section.children.size(); ++j)
          d_.predicates.push_back(read_schema(section.children[j]));
      } else if (key == ":functions") {
        for (std::size_t j = 1; j < section.children.size(); ++j) {
          if (!section.children[j].is_list) {
            if (section.children[j].token == "-") unsupported(section.children[j], "typed function");
            fail_at(section.children[j], "expected function declaration");
          }
          d_.functions.push_back(read_schema(section.children[j]));
        }
      } else if (key == ":action") {
        actions_.push_back(&section);
      } else if (key.starts_with(":")) {
        static const std::set<std::string> known_unsupported{
            ":constants", ":durative-action", ":derived", ":constraints", ":process", ":event"};
        if (known_unsupported.contains(key)) unsupported(section.children[0], key);
        fail_at(section.children[0], "unexpected token '" + key + "'");
      } else {
        fail_at(section.children[0], "unexpected token '" + key + "'");
      }
    }
    finish_types();
    check_schemas();
    for (const Node* action : actions_) d_.operators.push_back(read_action(*action));
  }

 private:
  void read_requirements(const Node& section) {
    static const std::set<std::string> allowed{":typing", ":strips", ":fluents", ":numeric-fluents",
                                               ":negative-preconditions"};
    for (std::size_t j = 1; j < section.children.size(); ++j) {
      const std::string& r = expect_symbol(section.children[j], "requirement");
      if (!allowed.contains(r)) unsupported(section.children[j], r);
      d_.requirements.push_back(r);
    }
  }

  void read_types(const Node& section) {
    for (auto& p : parse_typed_list(section.children, 1, "object")) {
      if (p.name == "object") invalid(section, "type 'object' is built in");
      auto dup = std::find_if(d_.types.begin(), d_.types.end(),
                              [&](const TypeDecl& t) { return t.name == p.name; });
      if (dup != d_.types.end()) invalid(section, "duplicate type '" + p.name + "'");
      d_.types.push_back({p.name, p.type});
    }
  }

  // Parents that are only mentioned on the right of '-' are implicitly object.
  void finish_types() {
    std::vector<TypeDecl> implicit;
    for (const auto& t : d_.types) {
      if (t.parent == "object") continue;
      bool declared = std::any_of(d_.types.begin(), d_.types.end(),
                                  [&](const TypeDecl& o) { return o.name == t.parent; }) ||
                      std::any_of(implicit.begin(), implicit.end(),
                                  [&](const TypeDecl& o) { return o.name == t.parent; });
      if (!declared) implicit.push_back({t.parent, "object"});
    }
    d_.types.insert(d_.types.end(), implicit.begin(), implicit.end());
    // Reject cycles.
    for (const auto& t : d_.types) {
      std::string cur = t.name;
      for (std::size_t steps = 0; cur != "object"; ++steps) {
        if (steps > d_.types.size())
          throw Error(ErrorCode::Validation, "cyclic type hierarchy at '" + t.name + "'");
        auto it = std::find_if(d_.types.begin(), d_.types.end(),
                               [&](const TypeDecl& o) { return o.name == cur; });
        cur = it->parent;
      }
    }
  }

  Schema read_schema(const Node& n) {
    expect_list(n, "declaration");
    if (n.children.empty()) fail_at(n, "empty declaration");
    Schema s;
    s.name = expect_symbol(n.children[0], "name");
    s.params = parse_typed_list(n.children, 1, "object");
    for (const auto& p : s.params) {
      if (!p.name.starts_with("?")) fail_at(n, "parameter '" + p.name + "' must start with '?'");
    }
    return s;
  }

  void check_schemas() {
    std::set<std::string> seen;
    auto check = [&](const Schema& s, const char* kind) {
      if (!seen.insert(s.name).second)
        throw Error(ErrorCode::Validation, std::string("duplicate ") + kind + " '" + s.name + "'");
      for (const auto& p : s.params) {
        if (!d_.has_type(p.type))
          throw Error(ErrorCode::UnknownType, "unknown type '" + p.type + "' in " + kind + " '" + s.name + "'");
      }
    };
    for (const auto& p : d_.predicates) check(p, "predicate");
    for (const auto& f : d_.functions) check(f, "function");
  }

  void check_atom(const Node& at, const Atom& atom, const Schema* schema, const char* kind,
                  const std::vector<TypedParam>& params) {
    if (!schema) invalid(at, std::string("undeclared ") + kind + " '" + atom.name + "'");
    if (schema->params.size() != atom.args.size())
      invalid(at, std::string("arity mismatch for ") + kind + " '" + atom.name + "'");
    for (const auto& arg : atom.args) {
      if (arg.starts_with("?")) {
        bool declared = std::any_of(params.begin(), params.end(),
                                    [&](const TypedParam& p) { return p.name == arg; });
        if (!declared) invalid(at, "undeclared parameter '" + arg + "'");
      }
    }
  }

  void read_condition(const Node& n, Condition& out, const std::vector<TypedParam>& params) {
    expect_list(n, "condition");
    if (n.children.empty()) fail_at(n, "empty condition");
    const Node& head = n.children[0];
    if (head.is_list) fail_at(head, "expected condition keyword");
    if (head.token == "and") {
      for (std::size_t i = 1; i < n.children.size(); ++i) read_condition(n.children[i], out, params);
    } else if (head.token == "not") {
      if (n.children.size() != 2) fail_at(n, "'not' takes exactly one atom");
      const Node& inner = n.children[1];
      if (inner.is_list && !inner.children.empty() && !inner.children[0].is_list) {
        const std::string& h = inner.children[0].token;
        if (h == "and" || h == "not" || unsupported_heads().contains(h) || h == ">=")
          unsupported(inner, "not over '" + h + "'");
      }
      Atom atom = parse_atom(inner);
      check_atom(inner, atom, d_.find_predicate(atom.name), "predicate", params);
      out.literals.push_back({std::move(atom), false});
    } else if (head.token == ">=") {
      if (n.children.size() != 3) fail_at(n, "'>=' takes a fluent and a number");
      Atom fluent = parse_atom(n.children[1]);
      check_atom(n.children[1], fluent, d_.find_function(fluent.name), "function", params);
      out.comparisons.push_back({std::move(fluent), parse_integer(n.children[2])});
    } else if (unsupported_heads().contains(head.token)) {
      unsupported(head, head.token);
    } else {
      Atom atom = parse_atom(n);
      check_atom(n, atom, d_.find_predicate(atom.name), "predicate", params);
      out.literals.push_back({std::move(atom), true});
    }
  }

  void read_effect(const Node& n, Effect& out, const std::vector<TypedParam>& params) {
    expect_list(n, "effect");
    if (n.children.empty()) fail_at(n, "empty effect");
    const Node& head = n.children[0];
    if (head.is_list) fail_at(head, "expected effect keyword");
    if (head.token == "and") {
      for (std::size_t i = 1; i < n.children.size(); ++i) read_effect(n.children[i], out, params);
    } else if (head.token == "not") {
      if (n.children.size() != 2) fail_at(n, "'not' takes exactly one atom");
      Atom atom = parse_atom(n.children[1]);
      check_atom(n.children[1], atom, d_.find_predicate(atom.name), "predicate", params);
      out.literals.push_back({std::move(atom), false});
    } else if (head.token == "increase" || head.token == "decrease") {
      if (n.children.size() != 3) fail_at(n, "'" + head.token + "' takes a fluent and a number");
      Atom fluent = parse_atom(n.children[1]);
      check_atom(n.children[1], fluent, d_.find_function(fluent.name), "function", params);
      std::int64_t amount = parse_integer(n.children[2]);
      if (amount < 0) invalid(n, "negative amount in '" + head.token + "'");
      out.numeric.push_back({head.token == "increase" ? NumericOp::Increase : NumericOp::Decrease,
                             std::move(fluent), amount});
    } else if (unsupported_heads().contains(head.token) || head.token == ">=") {
      unsupported(head, head.token);
    } else {
      Atom atom = parse_atom(n);
      check_atom(n, atom, d_.find_predicate(atom.name), "predicate", params);
      out.literals.push_back({std::move(atom), true});
    }
  }

  OperatorSchema read_action(const Node& section) {
    OperatorSchema op;
    if (section.children.size() < 2) fail_at(section, "expected action name");
    op.name = expect_symbol(section.children[1], "action name");
    if (d_.find_operator(op.name) ||
        std::any_of(d_.operators.begin(), d_.operators.end(),
                    [&](const OperatorSchema& o) { return o.name == op.name; }))
      invalid(section, "duplicate action '" + op.name + "'");
    bool have_effect = false;
    for (std::size_t i = 2; i < section.children.size(); ++i) {
      const Node& key = section.children[i];
      if (key.is_list) fail_at(key, "expected action keyword");
      if (i + 1 >= section.children.size()) fail_at(key, "missing value after '" + key.token + "'");
      const Node& value = section.children[++i];
      if (key.token == ":parameters") {
        expect_list(value, "parameter list");
        op.params = parse_typed_list(value.children, 0, "object");
        for (const auto& p : op.params) {
          if (!p.name.starts_with("?")) fail_at(value, "parameter '" + p.name + "' must start with '?'");
          if (!d_.has_type(p.type))
            throw Error(ErrorCode::UnknownType,
                        "unknown type '" + p.type + "' in action '" + op.name + "'");
        }
      } else if (key.token == ":precondition") {
        read_condition(value, op.precondition, op.params);
      } else if (key.token == ":effect") {
        read_effect(value, op.effect, op.params);
        have_effect = true;
      } else {
        fail_at(key, "unexpected token '" + key.token + "'");
      }
    }
    if (!have_effect) fail_at(section, "action '" + op.name + "' has no :effect");
    return op;
  }

  Domain& d_;
  std::vector<const Node*> actions_;
};

// Consumption guarded by the operator's own precondition: tighten any
// `>=` bound that is lower than what the operator removes.
void tighten_consumption(Domain& d) {
  for (auto& op : d.operators) {
    for (const auto& eff : op.effect.numeric) {
      if (eff.op != NumericOp::Decrease || eff.amount == 0) continue;
      auto it = std::find_if(op.precondition.comparisons.begin(), op.precondition.comparisons.end(),
                             [&](const Comparison& c) { return c.fluent == eff.fluent; });
      if (it == op.precondition.comparisons.end()) {
        op.precondition.comparisons.push_back({eff.fluent, eff.amount});
        d.warnings.push_back("action '" + op.name + "': added precondition (>= " +
                             eff.fluent.to_string() + " " + std::to_string(eff.amount) +
                             ") to guard its decrease");
      } else if (it->value < eff.amount) {
        d.warnings.push_back("action '" + op.name + "': precondition (>= " + eff.fluent.to_string() +
                             " " + std::to_string(it->value) + ") raised to " +
                             std::to_string(eff.amount) + " to match its decrease");
        it->value = eff.amount;
      }
    }
  }
}

void write_atom(std::ostream& os, const Atom& a) {
  os << '(' << a.name;
  for (const auto& arg : a.args) os << ' ' << arg;
  os << ')';
}

void write_literal(std::ostream& os, const Literal& l) {
  if (!l.positive) os << "(not ";
  write_atom(os, l.atom);
  if (!l.positive) os << ')';
}

void write_condition(std::ostream& os, const Condition& c) {
  os << "(and";
  for (const auto& cmp : c.comparisons) {
    os << " (>= ";
    write_atom(os, cmp.fluent);
    os << ' ' << cmp.value << ')';
  }
  for (const auto& l : c.literals) {
    os << ' ';
    write_literal(os, l);
  }
  os << ')';
}

void write_params(std::ostream& os, const std::vector<TypedParam>& params) {
  bool first = true;
  for (const auto& p : params) {
    if (!first) os << ' ';
    first = false;
    os << p.name << " - " << p.type;
  }
}

}  // namespace

std::string Atom::to_string() const {
  std::string out = "(" + name;
  for (const auto& a : args) out += " " + a;
  return out + ")";
}

Domain parse_domain(std::string_view text) {
  Node root = Lexer(text).parse_document();
  Domain d;
  DomainReader(d).read(root);
  tighten_consumption(d);
  return d;
}

std::string serialize_domain(const Domain& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << ' ' << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types\n";
    for (const auto& t : d.types) os << "    " << t.name << " - " << t.parent << "\n";
    os << "  )\n";
  }
  auto write_schemas = [&](const char* key, const std::vector<Schema>& schemas) {
    os << "  (" << key << "\n";
    for (const auto& s : schemas) {
      os << "    (" << s.name;
      if (!s.params.empty()) {
        os << ' ';
        write_params(os, s.params);
      }
      os << ")\n";
    }
    os << "  )\n";
  };
  write_schemas(":predicates", d.predicates);
  write_schemas(":functions", d.functions);
  for (const auto& op : d.operators) {
    os << "  (:action " << op.name << "\n    :parameters (";
    write_params(os, op.params);
    os << ")\n";
    if (!op.precondition.empty()) {
      os << "    :precondition ";
      write_condition(os, op.precondition);
      os << "\n";
    }
    os << "    :effect (and";
    for (const auto& l : op.effect.literals) {
      os << ' ';
      write_literal(os, l);
    }
    for (const auto& n : op.effect.numeric) {
      os << (n.op == NumericOp::Increase ? " (increase " : " (decrease ");
      write_atom(os, n.fluent);
      os << ' ' << n.amount << ')';
    }
    os << ")\n  )\n";
  }
  os << ")\n";
  return os.str();
}

PlanningTask parse_problem(std::string_view text, std::shared_ptr<const Domain> domain,
                           const TaskOptions& options) {
  if (!domain) throw Error(ErrorCode::InvalidArgument, "parse_problem requires a parsed domain");
  Node root = Lexer(text).parse_document();
  expect_list(root, "(define ...)");
  if (root.children.empty() || root.children[0].is_list || root.children[0].token != "define")
    fail_at(root, "expected 'define'");
  if (root.children.size() < 2 || !head_is(root.children[1], "problem"))
    fail_at(root.children.size() > 1 ? root.children[1] : root, "expected (problem <name>)");
  std::string name = expect_symbol(root.children[1].children.at(1), "problem name");

  std::vector<TypedObject> objects;
  std::vector<std::string> facts;
  std::vector<std::pair<std::string, std::int64_t>> fluents;
  Condition goal;
  const Node* goal_node = nullptr;
  const Node* init_node = nullptr;

  for (std::size_t i = 2; i < root.children.size(); ++i) {
    const Node& section = expect_list(root.children[i], "problem section");
    if (section.children.empty() || section.children[0].is_list) fail_at(section, "expected section keyword");
    const std::string& key = section.children[0].token;
    if (key == ":domain") {
      if (section.children.size() != 2) fail_at(section, "expected (:domain <name>)");
      if (section.children[1].token != domain->name)
        invalid(section, "problem is for domain '" + section.children[1].token + "', not '" +
                             domain->name + "'");
    } else if (key == ":objects") {
      for (auto& p : parse_typed_list(section.children, 1, "object")) {
        if (!domain->has_type(p.type))
          throw Error(ErrorCode::UnknownType, "unknown type '" + p.type + "' for object '" + p.name + "'");
        if (std::any_of(objects.begin(), objects.end(), [&](const TypedObject& o) { return o.name == p.name; }))
          invalid(section, "duplicate object '" + p.name + "'");
        objects.push_back({p.name, p.type});
      }
    } else if (key == ":init") {
      init_node = &section;
    } else if (key == ":goal") {
      if (section.children.size() != 2) fail_at(section, "expected a single goal condition");
      goal_node = &section.children[1];
    } else {
      fail_at(section.children[0], "unexpected token '" + key + "'");
    }
  }

  auto known_object = [&](const std::string& n) {
    return std::any_of(objects.begin(), objects.end(), [&](const TypedObject& o) { return o.name == n; });
  };
  auto check_ground = [&](const Node& at, const Atom& atom, const Schema* schema, const char* kind) {
    if (!schema) invalid(at, std::string("undeclared ") + kind + " '" + atom.name + "'");
    if (schema->params.size() != atom.args.size())
      invalid(at, std::string("arity mismatch for ") + kind + " '" + atom.name + "'");
    for (const auto& a : atom.args) {
      if (a.starts_with("?")) invalid(at, "variable '" + a + "' in problem");
      if (!known_object(a)) invalid(at, "undeclared object '" + a + "'");
    }
  };

  if (init_node) {
    for (std::size_t j = 1; j < init_node->children.size(); ++j) {
      const Node& item = expect_list(init_node->children[j], "init entry");
      if (head_is(item, "=")) {
        if (item.children.size() != 3) fail_at(item, "expected (= (<fluent>) <value>)");
        Atom f = parse_atom(item.children[1]);
        check_ground(item.children[1], f, domain->find_function(f.name), "function");
        std::int64_t v = parse_integer(item.children[2]);
        if (v < 0) throw Error(ErrorCode::NegativeFluent, "negative initial value for " + f.to_string());
        std::string key = f.name;
        for (const auto& a : f.args) key += " " + a;
        fluents.emplace_back(std::move(key), v);
      } else if (head_is(item, "not") || (head_is(item, "and"))) {
        unsupported(item, item.children[0].token + " in :init");
      } else {
        Atom a = parse_atom(item);
        check_ground(item, a, domain->find_predicate(a.name), "predicate");
        std::string key = a.name;
        for (const auto& arg : a.args) key += " " + arg;
        facts.push_back(std::move(key));
      }
    }
  }

  if (goal_node) {
    std::function<void(const Node&)> read = [&](const Node& n) {
      expect_list(n, "goal condition");
      if (n.children.empty()) fail_at(n, "empty goal condition");
      const Node& head = n.children[0];
      if (head.is_list) fail_at(head, "expected condition keyword");
      if (head.token == "and") {
        for (std::size_t i = 1; i < n.children.size(); ++i) read(n.children[i]);
      } else if (head.token == "not") {
        if (n.children.size() != 2) fail_at(n, "'not' takes exactly one atom");
        Atom a = parse_atom(n.children[1]);
        check_ground(n.children[1], a, domain->find_predicate(a.name), "predicate");
        goal.literals.push_back({std::move(a), false});
      } else if (head.token == ">=") {
        if (n.children.size() != 3) fail_at(n, "'>=' takes a fluent and a number");
        Atom f = parse_atom(n.children[1]);
        check_ground(n.children[1], f, domain->find_function(f.name), "function");
        goal.comparisons.push_back({std::move(f), parse_integer(n.children[2])});
      } else if (unsupported_heads().contains(head.token)) {
        unsupported(head, head.token);
      } else {
        Atom a = parse_atom(n);
        check_ground(n, a, domain->find_predicate(a.name), "predicate");
        goal.literals.push_back({std::move(a), true});
      }
    };
    read(*goal_node);
  }

  return make_task(std::move(domain), std::move(name), std::move(objects), facts, fluents, std::move(goal),
                   options);
}

std::string serialize_problem(const PlanningTask& task) {
  std::ostringstream os;
  const Universe& u = *task.universe;
  os << "(define (problem " << task.problem_name << ")\n";
  os << "  (:domain " << task.domain->name << ")\n";
  os << "  (:objects\n";
  for (const auto& o : task.objects) os << "    " << o.name << " - " << o.type << "\n";
  os << "  )\n  (:init\n";
  for (std::size_t i = 0; i < task.initial.facts.size(); ++i) {
    if (task.initial.facts[i]) os << "    (" << u.fact_name(static_cast<int>(i)) << ")\n";
  }
  for (std::size_t i = 0; i < task.initial.fluents.size(); ++i) {
    if (task.initial.fluents[i] != 0)
      os << "    (= (" << u.fluent_name(static_cast<int>(i)) << ") " << task.initial.fluents[i] << ")\n";
  }
  os << "  )\n  (:goal ";
  write_condition(os, task.goal_lifted);
  os << ")\n)\n";
  return os.str();
}

}  // namespace rapidlearn::symbolic
