#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "rapidlearn/bridge.hpp"

namespace testsupport {

using namespace rapidlearn;

inline const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids{"ATB-easy", "ATB-hard", "FCT-easy", "FCT-hard",
                                            "RT-easy",  "RT-hard",  "SP",       "ATB+FCT-easy"};
  return ids;
}

// First operator that fails in each scenario.
inline std::string first_failure(const std::string& id) {
  if (id.rfind("ATB", 0) == 0 || id == "SP") return "break";
  if (id.rfind("FCT", 0) == 0) return "crafttree_tap";
  return "extractrubber";
}

// Pre-novelty symbolic state built by hand.
inline symbolic::SymbolicState state(const bridge::Knowledge& k, const std::vector<std::string>& facts,
                                     const std::map<std::string, std::int64_t>& fluents) {
  auto s = symbolic::SymbolicState::empty_for(k.universe());
  for (const auto& f : facts) s.set(k.universe(), f);
  for (const auto& [f, v] : fluents) s.set_value(k.universe(), f, v);
  return s;
}

// A condition in name space: facts that must hold, facts that must not,
// lower bounds per fluent.
struct NamedCondition {
  std::set<std::string> pos, neg;
  std::map<std::string, std::int64_t> lower;
  bool operator==(const NamedCondition&) const = default;
};

inline NamedCondition named(const symbolic::GroundCondition& c, const symbolic::Universe& u) {
  NamedCondition n;
  for (int id : c.positive) n.pos.insert(u.fact_name(id));
  for (int id : c.negative) n.neg.insert(u.fact_name(id));
  for (const auto& m : c.numeric) {
    REQUIRE(m.cmp == symbolic::Cmp::GreaterEqual);
    n.lower[u.fluent_name(m.fluent)] = m.value;
  }
  return n;
}

}  // namespace testsupport
