// Reference engine and witness checker. Both work directly on role names
// and share no evaluation code with the bit-packed engines.

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "arbac/analyzer.hpp"
#include "compiled_policy.hpp"

namespace arbac {

namespace {

using NameSet = std::set<std::string>;

NameSet closure(const NameSet& assigned, const Policy& policy) {
  NameSet out = assigned;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : policy.hierarchy.edges)
      if (out.contains(e.senior.str()) && out.insert(e.junior.str()).second) grew = true;
  }
  return out;
}

bool holds(const Precondition& pre, const NameSet& authorized) {
  return std::all_of(pre.positive.begin(), pre.positive.end(),
                     [&](const RoleId& r) { return authorized.contains(r.str()); }) &&
         std::none_of(pre.negative.begin(), pre.negative.end(),
                      [&](const RoleId& r) { return authorized.contains(r.str()); });
}

}  // namespace

Verdict oracle_reach(const Policy& policy, const SafetyQuery& query, std::size_t role_cap) {
  detail::check_inputs(policy, query);
  if (policy.roles.size() > role_cap)
    throw AnalysisError(AnalysisErrc::TooLarge,
                        "oracle limited to " + std::to_string(role_cap) + " roles, policy has " +
                            std::to_string(policy.roles.size()));

  NameSet start;
  for (const auto& a : policy.ua)
    if (a.user == query.user) start.insert(a.role.str());

  std::vector<NameSet> states{start};
  std::vector<std::pair<std::size_t, ActionStep>> how{{0, {}}};
  std::map<NameSet, std::size_t> index{{start, 0}};
  const auto add = [&](NameSet next, std::size_t from, ActionStep step) {
    if (index.contains(next)) return;
    index.emplace(next, states.size());
    states.push_back(std::move(next));
    how.emplace_back(from, std::move(step));
  };

  for (std::size_t i = 0; i < states.size(); ++i) {
    const NameSet s = states[i];
    const NameSet authorized = closure(s, policy);
    for (std::size_t r = 0; r < policy.ca.size(); ++r) {
      const auto& rule = policy.ca[r];
      if (s.contains(rule.target.str()) || !holds(rule.pre, authorized)) continue;
      NameSet next = s;
      next.insert(rule.target.str());
      add(std::move(next), i, {ActionKind::Assign, r, rule.target});
    }
    for (std::size_t r = 0; r < policy.cr.size(); ++r) {
      const auto& rule = policy.cr[r];
      if (!s.contains(rule.target.str())) continue;
      NameSet next = s;
      next.erase(rule.target.str());
      add(std::move(next), i, {ActionKind::Revoke, r, rule.target});
    }
  }

  Verdict v;
  v.states_explored = states.size();
  v.sliced_role_count = policy.roles.size();
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!closure(states[i], policy).contains(query.target.str())) continue;
    v.outcome = Outcome::Reachable;
    for (std::size_t at = i; at != 0; at = how[at].first) v.witness.steps.push_back(how[at].second);
    std::reverse(v.witness.steps.begin(), v.witness.steps.end());
    v.exhausted = true;
    return v;
  }
  v.outcome = Outcome::Unreachable;
  v.exhausted = true;
  return v;
}

bool replay(const Policy& policy, const SafetyQuery& query, const Witness& witness) {
  UserState state{policy.initial_roles(query.user)};
  for (const auto& step : witness.steps) {
    const bool assign = step.kind == ActionKind::Assign;
    const std::size_t limit = assign ? policy.ca.size() : policy.cr.size();
    if (step.rule_index >= limit) return false;
    const RoleId& target = assign ? policy.ca[step.rule_index].target : policy.cr[step.rule_index].target;
    if (target != step.role) return false;
    try {
      state = apply_action(policy, state, {step.kind, step.rule_index});
    } catch (const ActionError&) {
      return false;
    }
  }
  return authorized_roles(state, policy.hierarchy).contains(query.target);
}

}  // namespace arbac
