#include "arbac/bank.hpp"

#include <stdexcept>

#include "arbac/sop.hpp"

namespace arbac::bank {

namespace {

std::string suffix(int branch) { return "_" + std::to_string(branch); }

std::vector<RoleId> non_managerial(std::string_view div, int branch) {
  std::vector<RoleId> out;
  for (auto pos : kNonManagerial) out.push_back(position(div, pos, branch));
  return out;
}

void emit_branch(Policy& p, int b, HierarchyMode mode) {
  const RoleId emp = employee(b);
  p.ca.push_back({kAdmin, {}, emp});

  for (auto div : kDivisions) {
    const RoleId d = division(div, b);
    const auto staff = non_managerial(div, b);

    p.ca.push_back({kAdmin, {{emp}, {}}, d});

    const auto sop = compile_sop({staff, kSopLimit}, std::span<const RoleId>(&d, 1), kAdmin);
    p.ca.insert(p.ca.end(), sop.assign_rules.begin(), sop.assign_rules.end());

    for (auto mgr : kManagerial) p.ca.push_back({kAdmin, {{d}, staff}, position(div, mgr, b)});

    if (mode == HierarchyMode::Hierarchical) {
      for (auto mgr : kManagerial) p.hierarchy.edges.push_back({position(div, mgr, b), d});
      for (const auto& r : staff) p.hierarchy.edges.push_back({r, d});
      p.hierarchy.edges.push_back({d, emp});
    }
  }
}

}  // namespace

RoleId employee(int branch) { return RoleId("Employee" + suffix(branch)); }

RoleId division(std::string_view div, int branch) {
  return RoleId(std::string(div) + suffix(branch));
}

RoleId position(std::string_view div, std::string_view pos, int branch) {
  return RoleId(std::string(div) + "-" + std::string(pos) + suffix(branch));
}

RoleId any_four(int branch) { return RoleId("AnyFour" + suffix(branch)); }

RoleId branch_helper(int branch) { return RoleId("Branch" + suffix(branch)); }

std::vector<RoleId> branch_roles(int branch) {
  std::vector<RoleId> out{employee(branch)};
  for (auto div : kDivisions) {
    out.push_back(division(div, branch));
    for (auto mgr : kManagerial) out.push_back(position(div, mgr, branch));
    for (auto pos : kNonManagerial) out.push_back(position(div, pos, branch));
  }
  return out;
}

void check_config(const BankConfig& config) {
  if (config.branches < 1)
    throw std::invalid_argument("branch count must be at least 1, got " +
                                std::to_string(config.branches));
  if (!is_identifier(config.analysis_user.str()))
    throw std::invalid_argument("analysis user '" + config.analysis_user.str() +
                                "' is not a valid identifier");
}

Policy generate_bank(const BankConfig& config) {
  check_config(config);
  const int n = config.branches;
  const bool q1 = config.instrumentation == Instrumentation::Q1 ||
                  config.instrumentation == Instrumentation::Both;
  const bool q2 = config.instrumentation == Instrumentation::Q2 ||
                  config.instrumentation == Instrumentation::Both;
  const bool instrumented = q1 || q2;
  const RoleId q2_target = config.q2_encoding == Q2Encoding::Chain ? kTargetQ2 : kTargetQ2Direct;

  Policy p;
  p.roles.push_back(kAdmin);
  p.admin_roles.push_back(kAdmin);
  p.users.push_back(config.analysis_user);

  for (int b = 1; b <= n; ++b) {
    auto roles = branch_roles(b);
    p.roles.insert(p.roles.end(), roles.begin(), roles.end());
    emit_branch(p, b, config.hierarchy_mode);
  }
  for (const auto& r : p.roles)
    if (r != kAdmin) p.cr.push_back({kAdmin, r});

  if (!instrumented) return p;

  for (int b = 1; b <= n; ++b) {
    p.roles.push_back(any_four(b));
    p.roles.push_back(branch_helper(b));
  }
  for (int b = 1; b <= n; ++b) {
    for (auto div : kDivisions) {
      auto monitor = compile_sop_monitor({non_managerial(div, b), kSopLimit}, any_four(b), kAdmin);
      p.ca.insert(p.ca.end(), monitor.begin(), monitor.end());
    }
    p.ca.push_back({kAdmin, {{any_four(b)}, {}}, branch_helper(b)});
    if (b < n) p.ca.push_back({kAdmin, {{branch_helper(b + 1)}, {}}, branch_helper(b)});
  }

  if (q1) {
    p.roles.push_back(kTargetQ1);
    p.ca.push_back({kAdmin, {{branch_helper(1)}, {}}, kTargetQ1});
    p.queries.push_back({config.analysis_user, kTargetQ1});
  }
  if (q2) {
    p.roles.push_back(q2_target);
    CanAssignRule rule{kAdmin, {}, q2_target};
    for (int b = 1; b <= n; ++b)
      rule.pre.positive.push_back(config.q2_encoding == Q2Encoding::Chain ? branch_helper(b)
                                                                          : any_four(b));
    p.ca.push_back(std::move(rule));
    p.queries.push_back({config.analysis_user, q2_target});
  }
  return p;
}

}  // namespace arbac::bank
