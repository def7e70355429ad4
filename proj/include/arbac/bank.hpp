#pragma once

#include <array>
#include <string>
#include <string_view>

#include "arbac/model.hpp"

namespace arbac::bank {

enum class Instrumentation { None, Q1, Q2, Both };
enum class HierarchyMode { Flat, Hierarchical };

/// How the "violation in every branch" question is encoded.
///  Chain:  <Admin, Branch_1 & ... & Branch_B, TargetQ2>, where Branch_i is
///          assignable from AnyFour_i or Branch_(i+1). Any single violating
///          branch satisfies it.
///  Direct: <Admin, AnyFour_1 & ... & AnyFour_B, TargetQ2Direct>.
enum class Q2Encoding { Chain, Direct };

struct BankConfig {
  int branches = 18;
  Instrumentation instrumentation = Instrumentation::None;
  HierarchyMode hierarchy_mode = HierarchyMode::Flat;
  Q2Encoding q2_encoding = Q2Encoding::Chain;
  UserId analysis_user{"newUser"};
};

inline constexpr std::array<std::string_view, 4> kDivisions = {"FA", "ST", "OB", "SE"};
inline constexpr std::array<std::string_view, 2> kManagerial = {"HOD", "GM"};
inline constexpr std::array<std::string_view, 5> kNonManagerial = {"Asst", "Specialist", "Senior",
                                                                    "Junior", "Clerk"};
inline constexpr int kRolesPerBranch = 33;
inline constexpr std::size_t kSopLimit = 3;

inline const RoleId kAdmin{"Admin"};
inline const RoleId kTargetQ1{"TargetQ1"};
inline const RoleId kTargetQ2{"TargetQ2"};
inline const RoleId kTargetQ2Direct{"TargetQ2Direct"};

/// Branch-qualified names: `Employee_3`, `FA_3`, `FA-Clerk_3`, ...
RoleId employee(int branch);
RoleId division(std::string_view div, int branch);
RoleId position(std::string_view div, std::string_view pos, int branch);
RoleId any_four(int branch);
RoleId branch_helper(int branch);

/// The 33 roles of one branch: Employee, then per division the division
/// role, the two managerial and the five non-managerial roles.
std::vector<RoleId> branch_roles(int branch);

/// Throws std::invalid_argument for branches < 1 or an invalid user name.
void check_config(const BankConfig& config);

/// The bank case-study policy for `config.branches` branches.
Policy generate_bank(const BankConfig& config);

}  // namespace arbac::bank
