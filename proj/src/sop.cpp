#include "arbac/sop.hpp"

#include <algorithm>
#include <set>

namespace arbac {

namespace {

// Calls `visit` with every k-subset of [0, n) as ascending index vectors,
// in lexicographic order.
template <typename Visit>
void for_each_combination(std::size_t n, std::size_t k, Visit visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    visit(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<CanAssignRule> SopCompilation::rules_for(const RoleId& target) const {
  std::vector<CanAssignRule> out;
  std::copy_if(assign_rules.begin(), assign_rules.end(), std::back_inserter(out),
               [&](const CanAssignRule& r) { return r.target == target; });
  return out;
}

void check_constraint(const SopConstraint& constraint) {
  if (constraint.roles.empty())
    throw SopError(SopErrc::InvalidConstraint, "SOP role set is empty");
  std::set<RoleId> distinct(constraint.roles.begin(), constraint.roles.end());
  if (distinct.size() != constraint.roles.size())
    throw SopError(SopErrc::InvalidConstraint, "SOP role set contains duplicates");
  if (constraint.limit < 1 || constraint.limit > constraint.roles.size())
    throw SopError(SopErrc::InvalidConstraint,
                   "SOP limit " + std::to_string(constraint.limit) + " is outside [1, " +
                       std::to_string(constraint.roles.size()) + "]");
}

std::size_t sop_rules_per_target(std::size_t set_size, std::size_t limit) {
  std::size_t total = 0;
  for (std::size_t k = 0; k < limit; ++k) total += binomial(set_size - 1, k);
  return total;
}

SopCompilation compile_sop(const SopConstraint& constraint, std::span<const RoleId> guard,
                           const RoleId& admin) {
  check_constraint(constraint);
  const auto& s = constraint.roles;
  const auto in_set = [&](const RoleId& r) { return std::find(s.begin(), s.end(), r) != s.end(); };
  for (const auto& g : guard)
    if (in_set(g))
      throw SopError(SopErrc::GuardOverlap, "guard role " + g.str() + " is in the SOP role set");
  if (admin.str().empty() || in_set(admin))
    throw SopError(SopErrc::InvalidAdmin, "administrator '" + admin.str() + "' is invalid");

  SopCompilation out{{}, {guard.begin(), guard.end()}, admin};
  for (std::size_t t = 0; t < s.size(); ++t) {
    std::vector<RoleId> others;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (i != t) others.push_back(s[i]);

    for (std::size_t k = 0; k < constraint.limit && k <= others.size(); ++k) {
      for_each_combination(others.size(), k, [&](const std::vector<std::size_t>& chosen) {
        CanAssignRule rule{admin, {{guard.begin(), guard.end()}, {}}, s[t]};
        std::size_t next = 0;
        for (std::size_t i = 0; i < others.size(); ++i) {
          if (next < chosen.size() && chosen[next] == i) {
            rule.pre.positive.push_back(others[i]);
            ++next;
          } else {
            rule.pre.negative.push_back(others[i]);
          }
        }
        out.assign_rules.push_back(std::move(rule));
      });
    }
  }
  return out;
}

std::vector<CanAssignRule> compile_sop_monitor(const SopConstraint& constraint,
                                               const RoleId& monitor, const RoleId& admin) {
  check_constraint(constraint);
  const auto& s = constraint.roles;
  if (std::find(s.begin(), s.end(), monitor) != s.end())
    throw SopError(SopErrc::MonitorInSet, "monitor role " + monitor.str() + " is in the SOP role set");
  if (admin.str().empty() || admin == monitor || std::find(s.begin(), s.end(), admin) != s.end())
    throw SopError(SopErrc::InvalidAdmin, "administrator '" + admin.str() + "' is invalid");

  std::vector<CanAssignRule> out;
  for_each_combination(s.size(), constraint.limit + 1, [&](const std::vector<std::size_t>& chosen) {
    CanAssignRule rule{admin, {}, monitor};
    for (auto i : chosen) rule.pre.positive.push_back(s[i]);
    out.push_back(std::move(rule));
  });
  return out;
}

}  // namespace arbac
