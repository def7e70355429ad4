#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "arbac/model.hpp"

namespace arbac {

struct SearchLimits {
  std::optional<std::uint64_t> max_states;  // cap on distinct states stored
  std::optional<std::uint64_t> max_depth;   // cap on witness length

  static SearchLimits unlimited() { return {}; }
};

struct ActionStep {
  ActionKind kind;
  std::size_t rule_index;  // into policy.ca or policy.cr of the original policy
  RoleId role;             // the rule's target

  friend bool operator==(const ActionStep&, const ActionStep&) = default;
};

struct Witness {
  std::vector<ActionStep> steps;

  friend bool operator==(const Witness&, const Witness&) = default;
};

enum class Outcome { Reachable, Unreachable, Unknown };

const char* to_string(Outcome outcome);

/// Unreachable is only ever reported with exhausted = true; Unknown means a
/// limit cut the search short.
struct Verdict {
  Outcome outcome = Outcome::Unknown;
  Witness witness;  // non-empty only for Reachable
  std::uint64_t states_explored = 0;
  bool exhausted = false;
  std::size_t sliced_role_count = 0;
};

enum class AnalysisErrc { InvalidQuery, InvalidPolicy, TooLarge };

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(AnalysisErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  AnalysisErrc code() const { return code_; }

 private:
  AnalysisErrc code_;
};

/// A policy restricted to the roles and rules that can influence a query,
/// with the origin of every kept rule in the input policy.
struct PolicySlice {
  Policy policy;
  std::vector<std::size_t> ca_origin;
  std::vector<std::size_t> cr_origin;
};

/// Relevance slice for `query`. The relevant set R is the least set that
/// contains the target, every role that confers a member of R through the
/// hierarchy, and every precondition literal of a ca rule whose target is
/// in R. Keeps those ca rules, and the cr rules whose target confers a
/// negative literal of a kept rule. Verdict-preserving.
///
/// Throws AnalysisError (InvalidPolicy, InvalidQuery).
PolicySlice slice(const Policy& policy, const SafetyQuery& query);

/// Breadth-first search over the query user's assignment sets. Reachable
/// verdicts carry a shortest witness; among equally short ones the first
/// in applicable_actions order wins.
///
/// Throws AnalysisError (InvalidPolicy, InvalidQuery).
Verdict reach(const Policy& policy, const SafetyQuery& query, const SearchLimits& limits,
              bool use_slicing);

/// Decomposes the sliced policy into independent components that only
/// interact through roles never used negatively, and computes the
/// reachable set of those roles as a fixpoint. Unreachable verdicts are
/// exact; Reachable verdicts carry a replay-checked witness that need not
/// be the shortest. Reports Unknown if a limit is hit or if no witness
/// could be assembled.
///
/// Throws AnalysisError (InvalidPolicy, InvalidQuery).
Verdict reach_modular(const Policy& policy, const SafetyQuery& query, const SearchLimits& limits);

inline constexpr std::size_t kOracleRoleCap = 20;

/// Plain exhaustive enumeration of every reachable assignment set, without
/// slicing or early exit. Used as the reference in differential tests.
///
/// Throws AnalysisError(TooLarge) when the policy declares more than
/// `role_cap` roles, and (InvalidPolicy, InvalidQuery) like reach().
Verdict oracle_reach(const Policy& policy, const SafetyQuery& query,
                     std::size_t role_cap = kOracleRoleCap);

/// True iff every step of `witness` is legal in turn, starting from the
/// query user's initial assignments, and the final authorized set holds
/// the query target.
bool replay(const Policy& policy, const SafetyQuery& query, const Witness& witness);

}  // namespace arbac
