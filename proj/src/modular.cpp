// Compositional reachability.
//
// A role is "negative-relevant" if it is, or confers, a negative literal of
// some rule; every other role only ever helps, is never worth revoking, and
// is treated as a monotone fact once obtained. Negative-relevant roles are
// grouped into components so that every rule's negative-relevant
// dependencies fall in one component. Components then only interact
// through monotone facts, and the set of obtainable facts is the least
// fixpoint of
//   facts = horn(free rules, facts) + outputs of each component explored
//           from its initial state with `facts` available.
// Running each component from its initial state with all facts available
// over-approximates any real interleaving, so a target outside the fixpoint
// is unreachable. A reachable verdict is backed by a concrete schedule that
// is replayed against the input policy before it is reported.

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>

#include "arbac/analyzer.hpp"
#include "compiled_policy.hpp"

namespace arbac {

namespace {

using detail::CompiledPolicy;
using detail::StateTable;
using detail::Word;

constexpr std::uint32_t kRevokeFlag = 0x8000'0000U;
constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

struct Component {
  std::vector<Word> members;       // role mask
  std::vector<std::size_t> moves;  // assign rules with a negative-relevant target
  std::vector<std::size_t> outputs;  // assign rules with a monotone target
  std::vector<std::size_t> revokes;
  std::vector<Word> inputs;  // monotone roles that confer a positive literal of its rules
};

struct Derivation {
  bool free = true;
  std::size_t rule = 0;
  std::size_t component = 0;
  std::vector<std::uint32_t> path;  // local actions from the component's initial state
};

class Modular {
 public:
  Modular(const CompiledPolicy& cp, std::uint64_t budget) : cp_(cp), w_(cp.words()), budget_(budget) {}

  Verdict run() {
    Verdict v;
    v.sliced_role_count = cp_.role_count();
    classify();

    std::vector<Word> facts(w_, 0), fact_auth(w_, 0);
    for (std::uint32_t r = 0; r < cp_.role_count(); ++r)
      if (detail::test_bit(cp_.initial(), r) && !neg_[r]) add_fact(facts, fact_auth, r, std::nullopt);

    std::vector<std::vector<Word>> seen_inputs(components_.size());
    std::optional<std::vector<std::uint32_t>> goal_path;
    bool goal_by_fact = false;

    for (;;) {
      horn(facts, fact_auth);
      if (detail::test_bit(fact_auth, cp_.target())) {
        goal_by_fact = true;
        break;
      }

      std::vector<std::pair<std::uint32_t, Derivation>> fresh;
      for (std::size_t c = 0; c < components_.size(); ++c) {
        std::vector<Word> in = mask_and(facts, components_[c].inputs);
        if (!seen_inputs[c].empty() && in == seen_inputs[c]) continue;
        seen_inputs[c] = std::move(in);

        auto found = explore(c, local_initial(c), facts, fact_auth, nullptr);
        if (!found) {
          v.states_explored = explored_;
          v.outcome = Outcome::Unknown;
          return v;
        }
        for (auto& [role, d] : found->outputs)
          if (std::none_of(fresh.begin(), fresh.end(), [&](const auto& f) { return f.first == role; }))
            fresh.emplace_back(role, std::move(d));
        if (c == goal_component_ && found->goal_path) goal_path = std::move(found->goal_path);
      }
      if (goal_path) break;
      if (fresh.empty()) {
        v.states_explored = explored_;
        v.outcome = Outcome::Unreachable;
        v.exhausted = true;
        return v;
      }
      for (auto& [role, d] : fresh) add_fact(facts, fact_auth, role, std::move(d));
    }

    v.states_explored = explored_;
    auto witness = schedule(goal_by_fact, goal_path);
    if (!witness) {
      v.outcome = Outcome::Unknown;
      return v;
    }
    v.outcome = Outcome::Reachable;
    v.witness = std::move(*witness);
    return v;
  }

 private:
  using StopFn = std::function<bool(std::span<const Word>, std::span<const Word>)>;

  struct Exploration {
    std::vector<std::pair<std::uint32_t, Derivation>> outputs;
    std::optional<std::vector<std::uint32_t>> goal_path;
    std::optional<std::vector<std::uint32_t>> stop_path;
  };

  std::vector<Word> mask_and(std::span<const Word> a, std::span<const Word> b) const {
    std::vector<Word> out(w_);
    for (std::size_t i = 0; i < w_; ++i) out[i] = a[i] & b[i];
    return out;
  }

  std::vector<Word> local_initial(std::size_t c) const {
    return mask_and(cp_.initial(), components_[c].members);
  }

  void classify() {
    const std::size_t n = cp_.role_count();
    std::vector<Word> neg_lits(w_, 0);
    for (std::size_t r = 0; r < cp_.assigns().size(); ++r)
      for (std::size_t i = 0; i < w_; ++i) neg_lits[i] |= cp_.negative(r)[i];

    neg_.assign(n, false);
    conferrers_.assign(n, {});
    for (std::uint32_t x = 0; x < n; ++x) {
      neg_[x] = !detail::disjoint(cp_.confers(x), neg_lits);
      for (std::uint32_t y = 0; y < n; ++y)
        if (detail::test_bit(cp_.confers(x), y)) conferrers_[y].push_back(x);
    }

    // Negative-relevant roles whose membership a rule's outcome depends on.
    const auto deps = [&](std::size_t rule) {
      std::vector<std::uint32_t> out;
      const auto add_lits = [&](std::span<const Word> lits) {
        for (std::uint32_t y = 0; y < n; ++y)
          if (detail::test_bit(lits, y))
            for (auto x : conferrers_[y])
              if (neg_[x]) out.push_back(x);
      };
      add_lits(cp_.positive(rule));
      add_lits(cp_.negative(rule));
      const auto t = cp_.assigns()[rule].target;
      if (neg_[t]) out.push_back(t);
      return out;
    };

    UnionFind uf(n);
    std::vector<std::vector<std::uint32_t>> rule_deps(cp_.assigns().size());
    for (std::size_t r = 0; r < cp_.assigns().size(); ++r) {
      rule_deps[r] = deps(r);
      for (std::size_t i = 1; i < rule_deps[r].size(); ++i) uf.unite(rule_deps[r][0], rule_deps[r][i]);
    }
    std::vector<std::uint32_t> goal_deps;
    for (auto x : conferrers_[cp_.target()])
      if (neg_[x]) goal_deps.push_back(x);
    for (std::size_t i = 1; i < goal_deps.size(); ++i) uf.unite(goal_deps[0], goal_deps[i]);

    std::vector<std::size_t> comp_of_root(n, kNone);
    comp_of_.assign(n, kNone);
    for (std::uint32_t x = 0; x < n; ++x) {
      if (!neg_[x]) continue;
      const auto root = uf.find(x);
      if (comp_of_root[root] == kNone) {
        comp_of_root[root] = components_.size();
        components_.push_back({std::vector<Word>(w_, 0), {}, {}, {}, std::vector<Word>(w_, 0)});
      }
      comp_of_[x] = comp_of_root[root];
      detail::set_bit(components_[comp_of_[x]].members, x);
    }

    std::vector<std::vector<Word>> pos_lits(components_.size(), std::vector<Word>(w_, 0));
    for (std::size_t r = 0; r < cp_.assigns().size(); ++r) {
      if (rule_deps[r].empty()) {
        free_rules_.push_back(r);
        continue;
      }
      const auto c = comp_of_[rule_deps[r][0]];
      const auto t = cp_.assigns()[r].target;
      (neg_[t] ? components_[c].moves : components_[c].outputs).push_back(r);
      for (std::size_t i = 0; i < w_; ++i) pos_lits[c][i] |= cp_.positive(r)[i];
    }
    for (std::size_t r = 0; r < cp_.revokes().size(); ++r) {
      const auto t = cp_.revokes()[r].target;
      if (neg_[t]) components_[comp_of_[t]].revokes.push_back(r);
    }
    for (std::size_t c = 0; c < components_.size(); ++c)
      for (std::uint32_t y = 0; y < n; ++y)
        if (!neg_[y] && !detail::disjoint(cp_.confers(y), pos_lits[c]))
          detail::set_bit(components_[c].inputs, y);

    goal_component_ = goal_deps.empty() ? kNone : comp_of_[goal_deps[0]];
  }

  void add_fact(std::vector<Word>& facts, std::vector<Word>& fact_auth, std::uint32_t role,
                std::optional<Derivation> how) {
    detail::set_bit(facts, role);
    for (std::size_t i = 0; i < w_; ++i) fact_auth[i] |= cp_.confers(role)[i];
    seq_.push_back(role);
    if (how) derivation_.emplace(role, std::move(*how));
  }

  void horn(std::vector<Word>& facts, std::vector<Word>& fact_auth) {
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto r : free_rules_) {
        const auto t = cp_.assigns()[r].target;
        if (detail::test_bit(facts, t) || !detail::subset_of(cp_.positive(r), fact_auth)) continue;
        add_fact(facts, fact_auth, t, Derivation{true, r, 0, {}});
        grew = true;
      }
    }
  }

  // Breadth-first search of one component's local states from `start`,
  // with the monotone roles `facts` held throughout. Collects the first
  // derivation of every output not yet in `facts`, and the first path to
  // the query target if this is the goal component. With `stop` set, ends
  // at the first state where that predicate holds instead (stop_path).
  // Returns nullopt when the state budget runs out.
  std::optional<Exploration> explore(std::size_t c, const std::vector<Word>& start,
                                     std::span<const Word> facts, std::span<const Word> fact_auth,
                                     const StopFn* stop) {
    const Component& comp = components_[c];
    Exploration ex;
    StateTable seen(w_);
    std::vector<std::uint32_t> parent{0}, via{0};
    std::vector<Word> cur(w_), auth(w_), next(w_);
    seen.insert(start);

    const auto path_to = [&](std::uint32_t id) {
      std::vector<std::uint32_t> p;
      for (; id != 0; id = parent[id]) p.push_back(via[id]);
      std::reverse(p.begin(), p.end());
      return p;
    };

    for (std::uint32_t id = 0; id < seen.size(); ++id) {
      if (++explored_ > budget_) return std::nullopt;
      const auto s = seen.at(id);
      std::copy(s.begin(), s.end(), cur.begin());
      cp_.authorize(cur, auth);
      for (std::size_t i = 0; i < w_; ++i) auth[i] |= fact_auth[i];

      if (stop) {
        if ((*stop)(cur, auth)) {
          ex.stop_path = path_to(id);
          return ex;
        }
      } else {
        if (c == goal_component_ && !ex.goal_path && detail::test_bit(auth, cp_.target()))
          ex.goal_path = path_to(id);
        for (auto r : comp.outputs) {
          const auto t = cp_.assigns()[r].target;
          if (detail::test_bit(facts, t) || !detail::subset_of(cp_.positive(r), auth) ||
              !detail::disjoint(cp_.negative(r), auth))
            continue;
          if (std::any_of(ex.outputs.begin(), ex.outputs.end(), [&](const auto& o) { return o.first == t; }))
            continue;
          ex.outputs.emplace_back(t, Derivation{false, r, c, path_to(id)});
        }
      }

      const auto push = [&](std::uint32_t action) {
        auto [nid, inserted] = seen.insert(next);
        if (!inserted) return;
        parent.push_back(id);
        via.push_back(action);
      };
      for (auto r : comp.moves) {
        if (!cp_.assign_enabled(r, cur, auth)) continue;
        next = cur;
        detail::set_bit(next, cp_.assigns()[r].target);
        push(static_cast<std::uint32_t>(r));
      }
      for (auto r : comp.revokes) {
        const auto t = cp_.revokes()[r].target;
        if (!detail::test_bit(cur, t)) continue;
        next = cur;
        detail::clear_bit(next, t);
        push(static_cast<std::uint32_t>(r) | kRevokeFlag);
      }
    }
    return ex;
  }

  // Rank of a monotone role in acquisition order (initial facts first).
  std::size_t rank(std::uint32_t role) const {
    auto it = std::find(seq_.begin(), seq_.end(), role);
    return it == seq_.end() ? kNone : static_cast<std::size_t>(it - seq_.begin());
  }

  // Marks, for each literal of `lits` not already in `have`, the earliest
  // acquired monotone role conferring it, and recursively what that role
  // needed.
  void require(std::span<const Word> lits, std::span<const Word> have, std::vector<bool>& needed) {
    for (std::uint32_t p = 0; p < cp_.role_count(); ++p) {
      if (!detail::test_bit(lits, p) || detail::test_bit(have, p)) continue;
      std::size_t best = kNone;
      for (auto x : conferrers_[p]) {
        const auto k = neg_[x] ? kNone : rank(x);
        if (k < best) best = k;
      }
      if (best == kNone) continue;  // satisfied locally by the component state
      require_role(seq_[best], needed);
    }
  }

  void require_role(std::uint32_t role, std::vector<bool>& needed) {
    if (needed[role]) return;
    needed[role] = true;
    auto it = derivation_.find(role);
    if (it == derivation_.end()) return;  // initially held
    const Derivation& d = it->second;
    std::vector<Word> none(w_, 0);
    if (d.free) {
      require(cp_.positive(d.rule), none, needed);
      return;
    }
    require_path(d.component, d.path, d.rule, needed);
  }

  void require_path(std::size_t c, const std::vector<std::uint32_t>& path, std::optional<std::size_t> last,
                    std::vector<bool>& needed) {
    std::vector<Word> state = local_initial(c), auth(w_);
    for (auto a : path) {
      if (a & kRevokeFlag) {
        detail::clear_bit(state, cp_.revokes()[a & ~kRevokeFlag].target);
        continue;
      }
      cp_.authorize(state, auth);
      require(cp_.positive(a), auth, needed);
      detail::set_bit(state, cp_.assigns()[a].target);
    }
    cp_.authorize(state, auth);
    if (last) {
      require(cp_.positive(*last), auth, needed);
    } else {
      std::vector<Word> goal(w_, 0);
      detail::set_bit(goal, cp_.target());
      require(goal, auth, needed);
    }
  }

  // Turns the fixpoint's derivations into one concrete action sequence.
  std::optional<Witness> schedule(bool goal_by_fact, const std::optional<std::vector<std::uint32_t>>& goal_path) {
    std::vector<bool> needed(cp_.role_count(), false);
    if (goal_by_fact) {
      std::vector<Word> goal(w_, 0), none(w_, 0);
      detail::set_bit(goal, cp_.target());
      require(goal, none, needed);
    } else {
      require_path(goal_component_, *goal_path, std::nullopt, needed);
    }

    Witness w;
    std::vector<Word> assigned(cp_.initial().begin(), cp_.initial().end());
    std::vector<Word> auth(w_);
    const auto monotone_part = [&](std::vector<Word>& facts, std::vector<Word>& fact_auth) {
      facts.assign(w_, 0);
      fact_auth.assign(w_, 0);
      for (std::uint32_t r = 0; r < cp_.role_count(); ++r)
        if (!neg_[r] && detail::test_bit(assigned, r)) {
          detail::set_bit(facts, r);
          for (std::size_t i = 0; i < w_; ++i) fact_auth[i] |= cp_.confers(r)[i];
        }
    };
    // Drives component `c` from its current state until `goal` holds.
    const auto drive = [&](std::size_t c, const StopFn& goal) -> bool {
      std::vector<Word> facts, fact_auth;
      monotone_part(facts, fact_auth);
      auto start = mask_and(assigned, components_[c].members);
      auto ex = explore(c, start, facts, fact_auth, &goal);
      if (!ex || !ex->stop_path) return false;
      for (auto a : *ex->stop_path) {
        if (a & kRevokeFlag) {
          const auto r = a & ~kRevokeFlag;
          w.steps.push_back(cp_.revoke_step(r));
          detail::clear_bit(assigned, cp_.revokes()[r].target);
        } else {
          w.steps.push_back(cp_.assign_step(a));
          detail::set_bit(assigned, cp_.assigns()[a].target);
        }
      }
      return true;
    };

    for (auto role : seq_) {
      if (!needed[role] || !derivation_.contains(role)) continue;
      const Derivation& d = derivation_.at(role);
      if (!d.free) {
        const auto enabled = [&](std::span<const Word> cur, std::span<const Word> a) {
          (void)cur;
          return detail::subset_of(cp_.positive(d.rule), a) && detail::disjoint(cp_.negative(d.rule), a);
        };
        if (!drive(d.component, enabled)) return std::nullopt;
      }
      cp_.authorize(assigned, auth);
      if (!cp_.assign_enabled(d.rule, assigned, auth)) return std::nullopt;
      w.steps.push_back(cp_.assign_step(d.rule));
      detail::set_bit(assigned, role);
    }
    if (!goal_by_fact) {
      const auto at_goal = [&](std::span<const Word>, std::span<const Word> a) {
        return detail::test_bit(a, cp_.target());
      };
      if (!drive(goal_component_, at_goal)) return std::nullopt;
    }
    return w;
  }

  const CompiledPolicy& cp_;
  std::size_t w_;
  std::uint64_t budget_;
  std::uint64_t explored_ = 0;

  std::vector<bool> neg_;
  std::vector<std::vector<std::uint32_t>> conferrers_;
  std::vector<std::size_t> comp_of_;
  std::vector<Component> components_;
  std::vector<std::size_t> free_rules_;
  std::size_t goal_component_ = kNone;

  std::vector<std::uint32_t> seq_;
  std::map<std::uint32_t, Derivation> derivation_;
};

}  // namespace

Verdict reach_modular(const Policy& policy, const SafetyQuery& query, const SearchLimits& limits) {
  const PolicySlice sl = slice(policy, query);
  const CompiledPolicy cp(sl.policy, query, sl.ca_origin, sl.cr_origin);

  // The initial assignment may already authorize the target.
  std::vector<Word> auth(cp.words());
  cp.authorize(cp.initial(), auth);
  if (detail::test_bit(auth, cp.target())) {
    Verdict v;
    v.outcome = Outcome::Reachable;
    v.states_explored = 1;
    v.sliced_role_count = cp.role_count();
    return v;
  }

  Verdict v = Modular(cp, limits.max_states.value_or(std::numeric_limits<std::uint64_t>::max())).run();
  if (v.outcome != Outcome::Reachable) return v;
  if ((limits.max_depth && v.witness.steps.size() > *limits.max_depth) ||
      !replay(policy, query, v.witness)) {
    v.outcome = Outcome::Unknown;
    v.witness = {};
  }
  return v;
}

}  // namespace arbac
