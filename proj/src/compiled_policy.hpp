#pragma once

// Dense, bit-packed form of a policy used by the search engines. Roles are
// numbered in declaration order; a role set is `words` 64-bit words.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "arbac/analyzer.hpp"

namespace arbac::detail {

using Word = std::uint64_t;

inline bool test_bit(std::span<const Word> s, std::uint32_t i) { return (s[i >> 6] >> (i & 63)) & 1U; }
inline void set_bit(std::span<Word> s, std::uint32_t i) { s[i >> 6] |= Word{1} << (i & 63); }
inline void clear_bit(std::span<Word> s, std::uint32_t i) { s[i >> 6] &= ~(Word{1} << (i & 63)); }

inline bool subset_of(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

inline bool disjoint(std::span<const Word> a, std::span<const Word> b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return false;
  return true;
}

inline bool any_bit(std::span<const Word> a) {
  for (auto w : a)
    if (w) return true;
  return false;
}

class CompiledPolicy {
 public:
  struct Assign {
    std::uint32_t target;
    std::size_t origin;  // index into the original policy's ca list
  };
  struct Revoke {
    std::uint32_t target;
    std::size_t origin;
  };

  /// `ca_origin`/`cr_origin` map rule positions of `policy` back to the
  /// policy the caller reports against.
  CompiledPolicy(const Policy& policy, const SafetyQuery& query,
                 const std::vector<std::size_t>& ca_origin,
                 const std::vector<std::size_t>& cr_origin);

  std::size_t role_count() const { return names_.size(); }
  std::size_t words() const { return words_; }
  const RoleId& name(std::uint32_t role) const { return names_[role]; }

  const std::vector<Assign>& assigns() const { return assigns_; }
  const std::vector<Revoke>& revokes() const { return revokes_; }
  std::span<const Word> positive(std::size_t rule) const { return row(pos_, rule); }
  std::span<const Word> negative(std::size_t rule) const { return row(neg_, rule); }

  /// Roles authorized by holding `role` alone (always contains `role`).
  std::span<const Word> confers(std::uint32_t role) const { return row(confers_, role); }
  bool has_hierarchy() const { return has_hierarchy_; }

  std::span<const Word> initial() const { return initial_; }
  std::uint32_t target() const { return target_; }

  /// Writes the authorized set of `assigned` into `out`.
  void authorize(std::span<const Word> assigned, std::span<Word> out) const;

  bool assign_enabled(std::size_t rule, std::span<const Word> assigned,
                      std::span<const Word> authorized) const {
    return !test_bit(assigned, assigns_[rule].target) && subset_of(positive(rule), authorized) &&
           disjoint(negative(rule), authorized);
  }

  ActionStep assign_step(std::size_t rule) const {
    return {ActionKind::Assign, assigns_[rule].origin, names_[assigns_[rule].target]};
  }
  ActionStep revoke_step(std::size_t rule) const {
    return {ActionKind::Revoke, revokes_[rule].origin, names_[revokes_[rule].target]};
  }

 private:
  std::span<const Word> row(const std::vector<Word>& v, std::size_t i) const {
    return {v.data() + i * words_, words_};
  }

  std::vector<RoleId> names_;
  std::size_t words_ = 1;
  std::vector<Assign> assigns_;
  std::vector<Revoke> revokes_;
  std::vector<Word> pos_, neg_, confers_, initial_;
  bool has_hierarchy_ = false;
  std::uint32_t target_ = 0;
};

/// Insert-only set of fixed-width role sets, stored contiguously in
/// insertion order so that ids double as BFS queue positions.
class StateTable {
 public:
  explicit StateTable(std::size_t words);

  std::size_t size() const { return count_; }
  std::span<const Word> at(std::uint32_t id) const { return {data_.data() + id * words_, words_}; }

  bool find(std::span<const Word> state) const;

  /// Returns {id, inserted}.
  std::pair<std::uint32_t, bool> insert(std::span<const Word> state);

 private:
  std::uint64_t hash(std::span<const Word> state) const;
  void grow();

  std::size_t words_;
  std::size_t count_ = 0;
  std::vector<Word> data_;
  std::vector<std::uint32_t> slots_;  // id + 1, 0 = empty
};

/// Throws AnalysisError if the policy has validation errors or the query
/// names an undeclared user or role.
void check_inputs(const Policy& policy, const SafetyQuery& query);

}  // namespace arbac::detail
