#pragma once

#include <cstddef>
#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arbac {

/// True iff `name` matches `[A-Za-z_][A-Za-z0-9_-]*`.
bool is_identifier(std::string_view name);

/// Role names are compared by exact, case-sensitive string equality.
class RoleId {
 public:
  RoleId() = default;
  explicit RoleId(std::string name) : name_(std::move(name)) {}

  const std::string& str() const { return name_; }

  friend bool operator==(const RoleId&, const RoleId&) = default;
  friend auto operator<=>(const RoleId&, const RoleId&) = default;

 private:
  std::string name_;
};

class UserId {
 public:
  UserId() = default;
  explicit UserId(std::string name) : name_(std::move(name)) {}

  const std::string& str() const { return name_; }

  friend bool operator==(const UserId&, const UserId&) = default;
  friend auto operator<=>(const UserId&, const UserId&) = default;

 private:
  std::string name_;
};

using RoleSet = std::set<RoleId>;

/// Conjunction of positive and negated role literals. Both lists empty is
/// the unconditional precondition (TRUE). Literal order is kept for
/// printing; equality is set equality.
struct Precondition {
  std::vector<RoleId> positive;
  std::vector<RoleId> negative;

  bool is_true() const { return positive.empty() && negative.empty(); }
  bool is_mixed() const { return !positive.empty() && !negative.empty(); }

  friend bool operator==(const Precondition& a, const Precondition& b);
};

struct CanAssignRule {
  RoleId admin;
  Precondition pre;
  RoleId target;

  friend bool operator==(const CanAssignRule&, const CanAssignRule&) = default;
};

struct CanRevokeRule {
  RoleId admin;
  RoleId target;

  friend bool operator==(const CanRevokeRule&, const CanRevokeRule&) = default;
};

struct HierarchyEdge {
  RoleId senior;
  RoleId junior;

  friend bool operator==(const HierarchyEdge&, const HierarchyEdge&) = default;
};

/// Membership in a senior role confers membership in its juniors.
struct RoleHierarchy {
  std::vector<HierarchyEdge> edges;

  bool empty() const { return edges.empty(); }
  friend bool operator==(const RoleHierarchy&, const RoleHierarchy&) = default;
};

struct UserAssignment {
  UserId user;
  RoleId role;

  friend bool operator==(const UserAssignment&, const UserAssignment&) = default;
};

/// Can `user` ever become authorized for `target`?
struct SafetyQuery {
  UserId user;
  RoleId target;

  friend bool operator==(const SafetyQuery&, const SafetyQuery&) = default;
};

/// An ARBAC policy. Declaration order is preserved everywhere so that the
/// text form round-trips exactly; rule order only affects witness
/// tie-breaking.
struct Policy {
  std::vector<RoleId> roles;
  std::vector<UserId> users;
  std::vector<UserAssignment> ua;
  std::vector<CanAssignRule> ca;
  std::vector<CanRevokeRule> cr;
  RoleHierarchy hierarchy;
  std::vector<RoleId> admin_roles;
  std::vector<SafetyQuery> queries;

  /// Direct assignments of `user` in the initial UA relation.
  RoleSet initial_roles(const UserId& user) const;

  friend bool operator==(const Policy&, const Policy&) = default;
};

/// Direct role assignments of the single analyzed user.
struct UserState {
  RoleSet assigned;

  friend bool operator==(const UserState&, const UserState&) = default;
};

enum class ActionKind { Assign, Revoke };

/// An administrative action identified by its rule position in the policy.
struct Action {
  ActionKind kind;
  std::size_t rule_index;

  friend bool operator==(const Action&, const Action&) = default;
};

enum class ActionErrc { PreconditionUnsatisfied, AlreadyAssigned, NotAssigned };

class ActionError : public std::runtime_error {
 public:
  ActionError(ActionErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ActionErrc code() const { return code_; }

 private:
  ActionErrc code_;
};

/// Downward closure of the assigned roles along senior -> junior edges.
RoleSet authorized_roles(const UserState& state, const RoleHierarchy& hierarchy);

bool satisfies(const Precondition& pre, const RoleSet& authorized);

/// Throws ActionError (PreconditionUnsatisfied, AlreadyAssigned).
UserState apply_assign(const UserState& state, const CanAssignRule& rule,
                       const RoleHierarchy& hierarchy);

/// Non-cascading removal. Throws ActionError (NotAssigned).
UserState apply_revoke(const UserState& state, const CanRevokeRule& rule);

/// All ca actions in declaration order, then all cr actions, restricted to
/// those that are enabled in `state` and change it.
std::vector<Action> applicable_actions(const Policy& policy, const UserState& state);

/// Applies `action` to `state`, re-checking its precondition.
UserState apply_action(const Policy& policy, const UserState& state, const Action& action);

enum class Severity { Error, Info };

struct Diagnostic {
  Severity severity;
  std::string message;
};

/// Every well-formedness violation in `policy`; duplicate rules are
/// reported at Info severity. Empty iff the policy is well-formed.
std::vector<Diagnostic> validate(const Policy& policy);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace arbac
