#include <gtest/gtest.h>

#include <set>

#include "arbac/bank.hpp"
#include "arbac/policy_text.hpp"
#include "test_support.hpp"

namespace arbac {
namespace {

using bank::BankConfig;
using bank::Instrumentation;

std::size_t choose(std::size_t n, std::size_t k) {
  std::size_t count = 0;
  for (unsigned mask = 0; mask < (1U << n); ++mask)
    if (static_cast<std::size_t>(__builtin_popcount(mask)) == k) ++count;
  return count;
}

// Independent count of the per-branch construction: per division 5 targets
// times admissible staff subsets, 2 managerial rules, 1 bootstrap; plus the
// branch's employee bootstrap.
std::size_t expected_ca_per_branch() {
  std::size_t per_target = 0;
  for (std::size_t k = 0; k < 3; ++k) per_target += choose(4, k);
  return 4 * (5 * per_target + 2 + 1) + 1;
}

int branch_of(const RoleId& r) {
  const auto& s = r.str();
  const auto at = s.rfind('_');
  if (at == std::string::npos) return 0;
  return std::stoi(s.substr(at + 1));
}

TEST(BranchRoles, ThirtyThree) {
  const auto roles = bank::branch_roles(3);
  EXPECT_EQ(roles.size(), 33u);
  EXPECT_EQ(std::set<RoleId>(roles.begin(), roles.end()).size(), 33u);
  EXPECT_EQ(roles[0], RoleId("Employee_3"));
  EXPECT_NE(std::find(roles.begin(), roles.end(), RoleId("FA-Clerk_3")), roles.end());
  EXPECT_NE(std::find(roles.begin(), roles.end(), RoleId("SE-HOD_3")), roles.end());
}

TEST(GenerateBank, CaseStudyCounts) {
  const Policy p = bank::generate_bank({.branches = 18});
  EXPECT_EQ(p.roles.size(), 595u);
  EXPECT_EQ(std::count_if(p.roles.begin(), p.roles.end(), [](const RoleId& r) { return branch_of(r) > 0; }), 594);
  EXPECT_EQ(p.cr.size(), 594u);
  EXPECT_EQ(p.ca.size(), 18 * expected_ca_per_branch());
  EXPECT_TRUE(p.queries.empty());
  EXPECT_TRUE(p.ua.empty());
  EXPECT_EQ(p.users, std::vector<UserId>{UserId("newUser")});
}

TEST(GenerateBank, SingleBranchRuleCount) {
  EXPECT_EQ(expected_ca_per_branch(), 233u);
  EXPECT_EQ(bank::generate_bank({.branches = 1}).ca.size(), 233u);
}

TEST(GenerateBank, InstrumentationCounts) {
  const std::size_t base = 18 * expected_ca_per_branch();
  const Policy both = bank::generate_bank({.branches = 18, .instrumentation = Instrumentation::Both});
  EXPECT_EQ(both.ca.size() - base, 20u * 18 + 18 + 17 + 2);
  EXPECT_EQ(both.roles.size(), 595u + 2 * 18 + 2);
  EXPECT_EQ(both.queries.size(), 2u);

  const Policy q1 = bank::generate_bank({.branches = 1, .instrumentation = Instrumentation::Q1});
  EXPECT_EQ(q1.ca.size() - 233, 22u);
  ASSERT_EQ(q1.queries.size(), 1u);
  EXPECT_EQ(q1.queries[0].target, bank::kTargetQ1);
  for (const char* r : {"AnyFour_1", "Branch_1", "TargetQ1"})
    EXPECT_NE(std::find(q1.roles.begin(), q1.roles.end(), RoleId(r)), q1.roles.end());
}

TEST(GenerateBank, Q2Encodings) {
  const Policy chain = bank::generate_bank({.branches = 3, .instrumentation = Instrumentation::Q2});
  const auto& rule = chain.ca.back();
  EXPECT_EQ(rule.target, bank::kTargetQ2);
  EXPECT_EQ(rule.pre.positive, (std::vector<RoleId>{RoleId("Branch_1"), RoleId("Branch_2"), RoleId("Branch_3")}));

  const Policy direct = bank::generate_bank(
      {.branches = 3, .instrumentation = Instrumentation::Q2, .q2_encoding = bank::Q2Encoding::Direct});
  EXPECT_EQ(direct.ca.back().target, bank::kTargetQ2Direct);
  EXPECT_EQ(direct.ca.back().pre.positive,
            (std::vector<RoleId>{RoleId("AnyFour_1"), RoleId("AnyFour_2"), RoleId("AnyFour_3")}));
  EXPECT_EQ(direct.queries[0].target, bank::kTargetQ2Direct);
}

TEST(GenerateBank, ValidForAllSizesAndModes) {
  for (int b = 1; b <= 18; ++b)
    for (auto inst : {Instrumentation::None, Instrumentation::Q1, Instrumentation::Q2, Instrumentation::Both})
      for (auto mode : {bank::HierarchyMode::Flat, bank::HierarchyMode::Hierarchical}) {
        const Policy p = bank::generate_bank({.branches = b, .instrumentation = inst, .hierarchy_mode = mode});
        const auto d = validate(p);
        ASSERT_TRUE(d.empty()) << b << ": " << d.front().message;
      }
}

TEST(GenerateBank, Deterministic) {
  const BankConfig c{.branches = 5, .instrumentation = Instrumentation::Both};
  EXPECT_EQ(serialize_policy(bank::generate_bank(c)), serialize_policy(bank::generate_bank(c)));
}

TEST(GenerateBank, ManagerialRuleShape) {
  const Policy p = bank::generate_bank({.branches = 2});
  int managerial = 0;
  for (const auto& r : p.ca) {
    const auto& name = r.target.str();
    if (name.find("-HOD_") == std::string::npos && name.find("-GM_") == std::string::npos) continue;
    ++managerial;
    EXPECT_EQ(r.pre.positive.size(), 1u);
    EXPECT_EQ(r.pre.negative.size(), 5u);
    const auto div = name.substr(0, name.find('-'));
    EXPECT_EQ(r.pre.positive[0], bank::division(div, branch_of(r.target)));
  }
  EXPECT_EQ(managerial, 2 * 4 * 2);
}

TEST(GenerateBank, ClerkRulesPresentPerBranch) {
  const Policy p = bank::generate_bank({.branches = 2});
  for (const auto& row : testing::clerk_rules()) {
    CanAssignRule renamed{bank::kAdmin, {}, RoleId(row.target.str() + "_2")};
    for (const auto& r : row.pre.positive) renamed.pre.positive.emplace_back(r.str() + "_2");
    for (const auto& r : row.pre.negative) renamed.pre.negative.emplace_back(r.str() + "_2");
    EXPECT_NE(std::find(p.ca.begin(), p.ca.end(), renamed), p.ca.end()) << format_rule(renamed);
  }
}

TEST(GenerateBank, BranchIsolation) {
  const Policy p = bank::generate_bank({.branches = 4, .instrumentation = Instrumentation::Both});
  for (const auto& rule : p.ca) {
    const int home = branch_of(rule.target);
    if (home == 0) continue;  // query targets
    const bool chain = rule.target.str().rfind("Branch_", 0) == 0;
    for (const auto* lits : {&rule.pre.positive, &rule.pre.negative})
      for (const auto& r : *lits) {
        if (chain && r == bank::branch_helper(home + 1)) continue;
        EXPECT_EQ(branch_of(r), home) << format_rule(rule);
      }
  }
}

TEST(GenerateBank, HierarchyMode) {
  const Policy flat = bank::generate_bank({.branches = 2});
  EXPECT_TRUE(flat.hierarchy.empty());
  const Policy h = bank::generate_bank({.branches = 2, .hierarchy_mode = bank::HierarchyMode::Hierarchical});
  EXPECT_EQ(h.hierarchy.edges.size(), 2u * 4 * (7 + 1));
  EXPECT_EQ(h.ca.size(), flat.ca.size());
  const auto auth = authorized_roles({{RoleId("FA-Clerk_2")}}, h.hierarchy);
  EXPECT_EQ(auth, (RoleSet{RoleId("FA-Clerk_2"), RoleId("FA_2"), RoleId("Employee_2")}));
}

TEST(GenerateBank, InvalidConfig) {
  EXPECT_THROW(bank::generate_bank({.branches = 0}), std::invalid_argument);
  EXPECT_THROW(bank::generate_bank({.branches = 1, .analysis_user = UserId("")}), std::invalid_argument);
}

}  // namespace
}  // namespace arbac
