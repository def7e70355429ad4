#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "arbac/analyzer.hpp"
#include "compiled_policy.hpp"

namespace arbac {

PolicySlice slice(const Policy& policy, const SafetyQuery& query) {
  detail::check_inputs(policy, query);

  std::unordered_multimap<std::string, std::string> seniors;  // junior -> direct seniors
  std::unordered_multimap<std::string, std::string> juniors;
  for (const auto& e : policy.hierarchy.edges) {
    seniors.emplace(e.junior.str(), e.senior.str());
    juniors.emplace(e.senior.str(), e.junior.str());
  }
  std::unordered_multimap<std::string, std::size_t> rules_by_target;
  for (std::size_t i = 0; i < policy.ca.size(); ++i)
    rules_by_target.emplace(policy.ca[i].target.str(), i);

  std::unordered_set<std::string> relevant;
  std::vector<std::string> work;
  const auto add = [&](const std::string& r) {
    if (relevant.insert(r).second) work.push_back(r);
  };
  add(query.target.str());
  while (!work.empty()) {
    const std::string r = std::move(work.back());
    work.pop_back();
    auto [slo, shi] = seniors.equal_range(r);
    for (auto it = slo; it != shi; ++it) add(it->second);
    auto [rlo, rhi] = rules_by_target.equal_range(r);
    for (auto it = rlo; it != rhi; ++it) {
      const auto& pre = policy.ca[it->second].pre;
      for (const auto& p : pre.positive) add(p.str());
      for (const auto& n : pre.negative) add(n.str());
    }
  }

  PolicySlice out;
  Policy& s = out.policy;
  std::unordered_set<std::string> negative_literals;
  for (std::size_t i = 0; i < policy.ca.size(); ++i) {
    if (!relevant.contains(policy.ca[i].target.str())) continue;
    s.ca.push_back(policy.ca[i]);
    out.ca_origin.push_back(i);
    for (const auto& n : policy.ca[i].pre.negative) negative_literals.insert(n.str());
  }

  // A revoke is only useful if it can drop a negative literal from the
  // authorized set, i.e. its target confers one.
  const auto confers_negative = [&](const std::string& role) {
    std::unordered_set<std::string> seen{role};
    std::vector<std::string> stack{role};
    while (!stack.empty()) {
      const std::string r = std::move(stack.back());
      stack.pop_back();
      if (negative_literals.contains(r)) return true;
      auto [lo, hi] = juniors.equal_range(r);
      for (auto it = lo; it != hi; ++it)
        if (seen.insert(it->second).second) stack.push_back(it->second);
    }
    return false;
  };
  for (std::size_t i = 0; i < policy.cr.size(); ++i) {
    if (!relevant.contains(policy.cr[i].target.str())) continue;
    if (!confers_negative(policy.cr[i].target.str())) continue;
    s.cr.push_back(policy.cr[i]);
    out.cr_origin.push_back(i);
  }

  std::unordered_set<std::string> keep = relevant;
  for (const auto& a : policy.ua)
    if (a.user == query.user) keep.insert(a.role.str());
  for (const auto& r : s.ca) keep.insert(r.admin.str());
  for (const auto& r : s.cr) keep.insert(r.admin.str());

  for (const auto& r : policy.roles)
    if (keep.contains(r.str())) s.roles.push_back(r);
  s.users.push_back(query.user);
  for (const auto& a : policy.ua)
    if (a.user == query.user && keep.contains(a.role.str())) s.ua.push_back(a);
  for (const auto& e : policy.hierarchy.edges)
    if (keep.contains(e.senior.str()) && keep.contains(e.junior.str())) s.hierarchy.edges.push_back(e);
  for (const auto& a : policy.admin_roles)
    if (keep.contains(a.str())) s.admin_roles.push_back(a);
  s.queries.push_back(query);
  return out;
}

}  // namespace arbac
