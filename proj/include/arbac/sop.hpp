#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "arbac/model.hpp"

namespace arbac {

/// Separation-of-privilege constraint <S, t>: no user may hold more than
/// `limit` roles of `roles` at once.
struct SopConstraint {
  std::vector<RoleId> roles;
  std::size_t limit = 1;
};

enum class SopErrc { InvalidConstraint, GuardOverlap, InvalidAdmin, MonitorInSet };

class SopError : public std::invalid_argument {
 public:
  SopError(SopErrc code, const std::string& what) : std::invalid_argument(what), code_(code) {}
  SopErrc code() const { return code_; }

 private:
  SopErrc code_;
};

struct SopCompilation {
  std::vector<CanAssignRule> assign_rules;
  std::vector<RoleId> guard;
  RoleId admin;

  /// Rules whose target is `target`, in emission order.
  std::vector<CanAssignRule> rules_for(const RoleId& target) const;
};

/// Throws SopError(InvalidConstraint) unless roles are distinct and
/// 1 <= limit <= |roles|.
void check_constraint(const SopConstraint& constraint);

/// Number of assign rules emitted per target: sum_{k<t} C(|S|-1, k).
std::size_t sop_rules_per_target(std::size_t set_size, std::size_t limit);

/// Enumerates every valid way to be assigned each role of S: for target r
/// and each P subset of S\{r} with |P| <= t-1, emits
///   <admin, guard & P & -(S\{r}\P), r>.
/// Order: targets in S order, then |P| ascending, then P lexicographic by
/// position in S.
///
/// Throws SopError (InvalidConstraint, GuardOverlap, InvalidAdmin).
SopCompilation compile_sop(const SopConstraint& constraint, std::span<const RoleId> guard,
                           const RoleId& admin);

/// One rule <admin, T, monitor> per (t+1)-subset T of S, so `monitor` is
/// assignable exactly when t+1 roles of S are held at once.
///
/// Throws SopError (InvalidConstraint, MonitorInSet, InvalidAdmin).
std::vector<CanAssignRule> compile_sop_monitor(const SopConstraint& constraint,
                                               const RoleId& monitor, const RoleId& admin);

}  // namespace arbac
