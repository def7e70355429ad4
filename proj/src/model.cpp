#include "arbac/model.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace arbac {

namespace {

bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '-';
}

std::vector<RoleId> sorted_unique(std::vector<RoleId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string describe(const CanAssignRule& rule) {
  std::string out = "<" + rule.admin.str() + ", ";
  if (rule.pre.is_true()) {
    out += "TRUE";
  } else {
    bool first = true;
    for (const auto& r : rule.pre.positive) {
      out += (first ? "" : "&") + r.str();
      first = false;
    }
    for (const auto& r : rule.pre.negative) {
      out += (first ? "-" : "&-") + r.str();
      first = false;
    }
  }
  return out + ", " + rule.target.str() + ">";
}

}  // namespace

bool is_identifier(std::string_view name) {
  if (name.empty() || !is_ident_start(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(), is_ident_char);
}

bool operator==(const Precondition& a, const Precondition& b) {
  return sorted_unique(a.positive) == sorted_unique(b.positive) &&
         sorted_unique(a.negative) == sorted_unique(b.negative);
}

RoleSet Policy::initial_roles(const UserId& user) const {
  RoleSet out;
  for (const auto& a : ua)
    if (a.user == user) out.insert(a.role);
  return out;
}

RoleSet authorized_roles(const UserState& state, const RoleHierarchy& hierarchy) {
  if (hierarchy.empty()) return state.assigned;

  std::multimap<RoleId, RoleId> juniors;
  for (const auto& e : hierarchy.edges) juniors.emplace(e.senior, e.junior);

  RoleSet out = state.assigned;
  std::vector<RoleId> work(state.assigned.begin(), state.assigned.end());
  while (!work.empty()) {
    RoleId r = std::move(work.back());
    work.pop_back();
    auto [lo, hi] = juniors.equal_range(r);
    for (auto it = lo; it != hi; ++it)
      if (out.insert(it->second).second) work.push_back(it->second);
  }
  return out;
}

bool satisfies(const Precondition& pre, const RoleSet& authorized) {
  for (const auto& r : pre.positive)
    if (!authorized.contains(r)) return false;
  for (const auto& r : pre.negative)
    if (authorized.contains(r)) return false;
  return true;
}

UserState apply_assign(const UserState& state, const CanAssignRule& rule,
                       const RoleHierarchy& hierarchy) {
  if (state.assigned.contains(rule.target))
    throw ActionError(ActionErrc::AlreadyAssigned,
                      "role " + rule.target.str() + " is already assigned");
  if (!satisfies(rule.pre, authorized_roles(state, hierarchy)))
    throw ActionError(ActionErrc::PreconditionUnsatisfied,
                      "precondition of " + describe(rule) + " does not hold");
  UserState next = state;
  next.assigned.insert(rule.target);
  return next;
}

UserState apply_revoke(const UserState& state, const CanRevokeRule& rule) {
  if (!state.assigned.contains(rule.target))
    throw ActionError(ActionErrc::NotAssigned,
                      "role " + rule.target.str() + " is not assigned");
  UserState next = state;
  next.assigned.erase(rule.target);
  return next;
}

std::vector<Action> applicable_actions(const Policy& policy, const UserState& state) {
  std::vector<Action> out;
  const RoleSet authorized = authorized_roles(state, policy.hierarchy);
  for (std::size_t i = 0; i < policy.ca.size(); ++i) {
    const auto& rule = policy.ca[i];
    if (!state.assigned.contains(rule.target) && satisfies(rule.pre, authorized))
      out.push_back({ActionKind::Assign, i});
  }
  for (std::size_t i = 0; i < policy.cr.size(); ++i)
    if (state.assigned.contains(policy.cr[i].target))
      out.push_back({ActionKind::Revoke, i});
  return out;
}

UserState apply_action(const Policy& policy, const UserState& state, const Action& action) {
  if (action.kind == ActionKind::Assign)
    return apply_assign(state, policy.ca.at(action.rule_index), policy.hierarchy);
  return apply_revoke(state, policy.cr.at(action.rule_index));
}

std::vector<Diagnostic> validate(const Policy& policy) {
  std::vector<Diagnostic> diags;
  auto error = [&](std::string msg) { diags.push_back({Severity::Error, std::move(msg)}); };

  std::unordered_set<std::string> roles;
  for (const auto& r : policy.roles) {
    if (!is_identifier(r.str())) error("role name '" + r.str() + "' is not a valid identifier");
    if (r.str() == "TRUE") error("role name 'TRUE' is reserved");
    if (!roles.insert(r.str()).second) error("role " + r.str() + " is declared more than once");
  }
  std::unordered_set<std::string> users;
  for (const auto& u : policy.users) {
    if (!is_identifier(u.str())) error("user name '" + u.str() + "' is not a valid identifier");
    if (!users.insert(u.str()).second) error("user " + u.str() + " is declared more than once");
  }
  std::unordered_set<std::string> admins;
  for (const auto& a : policy.admin_roles) {
    if (!roles.contains(a.str())) error("ADMIN: undeclared role " + a.str());
    admins.insert(a.str());
  }

  auto check_role = [&](const RoleId& r, const std::string& where) {
    if (!roles.contains(r.str())) error(where + ": undeclared role " + r.str());
  };
  auto check_user = [&](const UserId& u, const std::string& where) {
    if (!users.contains(u.str())) error(where + ": undeclared user " + u.str());
  };

  for (std::size_t i = 0; i < policy.ua.size(); ++i) {
    const std::string where = "UA entry " + std::to_string(i);
    check_user(policy.ua[i].user, where);
    check_role(policy.ua[i].role, where);
  }

  std::map<std::pair<std::string, std::vector<RoleId>>, std::size_t> seen_ca;
  for (std::size_t i = 0; i < policy.ca.size(); ++i) {
    const auto& rule = policy.ca[i];
    const std::string where = "CA rule " + std::to_string(i) + " " + describe(rule);
    check_role(rule.admin, where);
    check_role(rule.target, where);
    if (roles.contains(rule.admin.str()) && !admins.contains(rule.admin.str()))
      error(where + ": administrator " + rule.admin.str() + " is not listed in ADMIN");
    if (admins.contains(rule.target.str()))
      error(where + ": target " + rule.target.str() + " is an administrative role");
    for (const auto& r : rule.pre.positive) check_role(r, where);
    for (const auto& r : rule.pre.negative) check_role(r, where);

    const auto pos = sorted_unique(rule.pre.positive);
    const auto neg = sorted_unique(rule.pre.negative);
    std::vector<RoleId> both;
    std::set_intersection(pos.begin(), pos.end(), neg.begin(), neg.end(),
                          std::back_inserter(both));
    for (const auto& r : both)
      error(where + ": role " + r.str() + " is both a positive and a negative precondition");
    if (std::binary_search(pos.begin(), pos.end(), rule.target) ||
        std::binary_search(neg.begin(), neg.end(), rule.target))
      error(where + ": target appears in its own precondition");

    std::vector<RoleId> key = pos;
    key.emplace_back("");  // separator: "" is never a valid role name
    key.insert(key.end(), neg.begin(), neg.end());
    key.push_back(rule.target);
    auto [it, fresh] = seen_ca.emplace(std::make_pair(rule.admin.str(), std::move(key)), i);
    if (!fresh)
      diags.push_back({Severity::Info, where + ": duplicate of CA rule " + std::to_string(it->second)});
  }

  std::map<std::pair<std::string, std::string>, std::size_t> seen_cr;
  for (std::size_t i = 0; i < policy.cr.size(); ++i) {
    const auto& rule = policy.cr[i];
    const std::string where = "CR rule " + std::to_string(i) + " <" + rule.admin.str() + ", " +
                              rule.target.str() + ">";
    check_role(rule.admin, where);
    check_role(rule.target, where);
    if (roles.contains(rule.admin.str()) && !admins.contains(rule.admin.str()))
      error(where + ": administrator " + rule.admin.str() + " is not listed in ADMIN");
    if (admins.contains(rule.target.str()))
      error(where + ": target " + rule.target.str() + " is an administrative role");
    auto [it, fresh] = seen_cr.emplace(std::make_pair(rule.admin.str(), rule.target.str()), i);
    if (!fresh)
      diags.push_back({Severity::Info, where + ": duplicate of CR rule " + std::to_string(it->second)});
  }

  // Hierarchy: endpoints declared, then one diagnostic per cycle (strongly
  // connected component with more than one node, or a self-loop).
  std::unordered_map<std::string, std::vector<std::string>> succ;
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < policy.hierarchy.edges.size(); ++i) {
    const auto& e = policy.hierarchy.edges[i];
    const std::string where = "RH edge " + std::to_string(i);
    check_role(e.senior, where);
    check_role(e.junior, where);
    for (const auto* r : {&e.senior, &e.junior})
      if (!succ.contains(r->str())) {
        succ[r->str()];
        nodes.push_back(r->str());
      }
    succ[e.senior.str()].push_back(e.junior.str());
  }
  {
    std::unordered_map<std::string, int> index, low;
    std::unordered_set<std::string> on_stack;
    std::vector<std::string> stack;
    int counter = 0;
    std::function<void(const std::string&)> strongconnect = [&](const std::string& v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      bool self_loop = false;
      for (const auto& w : succ[v]) {
        if (w == v) self_loop = true;
        if (!index.contains(w)) {
          strongconnect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack.contains(w)) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::vector<std::string> scc;
        std::string w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack.erase(w);
          scc.push_back(w);
        } while (w != v);
        if (scc.size() > 1 || self_loop) {
          std::sort(scc.begin(), scc.end());
          std::string msg = "RH: cycle among roles";
          for (const auto& r : scc) msg += " " + r;
          error(std::move(msg));
        }
      }
    };
    for (const auto& v : nodes)
      if (!index.contains(v)) strongconnect(v);
  }

  for (std::size_t i = 0; i < policy.queries.size(); ++i) {
    const std::string where = "SPEC " + std::to_string(i);
    check_user(policy.queries[i].user, where);
    check_role(policy.queries[i].target, where);
  }
  return diags;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace arbac
