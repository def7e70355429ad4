#include <algorithm>
#include <numeric>

#include "arbac/analyzer.hpp"
#include "compiled_policy.hpp"

namespace arbac {

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Reachable: return "reachable";
    case Outcome::Unreachable: return "unreachable";
    case Outcome::Unknown: return "unknown";
  }
  return "unknown";
}

namespace {

using detail::CompiledPolicy;
using detail::StateTable;
using detail::Word;

constexpr std::uint32_t kRevokeFlag = 0x8000'0000U;

PolicySlice identity_slice(const Policy& policy) {
  PolicySlice out{policy, std::vector<std::size_t>(policy.ca.size()),
                  std::vector<std::size_t>(policy.cr.size())};
  std::iota(out.ca_origin.begin(), out.ca_origin.end(), 0);
  std::iota(out.cr_origin.begin(), out.cr_origin.end(), 0);
  return out;
}

Witness trace(const CompiledPolicy& cp, const std::vector<std::uint32_t>& parent,
              const std::vector<std::uint32_t>& via, std::uint32_t id) {
  Witness w;
  while (id != 0) {
    const std::uint32_t a = via[id];
    w.steps.push_back((a & kRevokeFlag) ? cp.revoke_step(a & ~kRevokeFlag) : cp.assign_step(a));
    id = parent[id];
  }
  std::reverse(w.steps.begin(), w.steps.end());
  return w;
}

}  // namespace

Verdict reach(const Policy& policy, const SafetyQuery& query, const SearchLimits& limits,
              bool use_slicing) {
  const PolicySlice sl = use_slicing ? slice(policy, query)
                                     : (detail::check_inputs(policy, query), identity_slice(policy));
  const CompiledPolicy cp(sl.policy, query, sl.ca_origin, sl.cr_origin);
  const std::size_t words = cp.words();

  Verdict v;
  v.sliced_role_count = cp.role_count();

  StateTable seen(words);
  std::vector<std::uint32_t> parent{0};
  std::vector<std::uint32_t> via{0};
  std::vector<Word> current(words), current_auth(words), authorized(words), next(words);

  seen.insert(cp.initial());
  v.states_explored = 1;
  cp.authorize(cp.initial(), authorized);
  if (detail::test_bit(authorized, cp.target())) {
    v.outcome = Outcome::Reachable;
    v.exhausted = false;
    return v;
  }

  const std::uint64_t max_states = limits.max_states.value_or(0xFFFF'FFF0ULL);
  const std::uint64_t max_depth = limits.max_depth.value_or(UINT64_MAX);

  // Ids are assigned in discovery order, so [layer_begin, layer_end) is the
  // FIFO frontier at `depth`. A cap never drops a state silently: the first
  // unseen successor that cannot be stored ends the search as Unknown.
  std::uint32_t layer_begin = 0;
  std::uint64_t depth = 0;
  enum class Step { Continue, Found, Truncated };
  std::uint32_t found = 0;
  const auto visit = [&](std::uint32_t from, std::uint32_t action) {
    if (seen.find(next)) return Step::Continue;
    if (depth + 1 > max_depth || seen.size() >= max_states) return Step::Truncated;
    const auto id = seen.insert(next).first;
    parent.push_back(from);
    via.push_back(action);
    ++v.states_explored;
    cp.authorize(next, authorized);
    if (!detail::test_bit(authorized, cp.target())) return Step::Continue;
    found = id;
    return Step::Found;
  };
  const auto finish = [&](Step step) {
    if (step == Step::Found) {
      v.outcome = Outcome::Reachable;
      v.witness = trace(cp, parent, via, found);
    } else {
      v.outcome = Outcome::Unknown;
    }
    return v;
  };

  while (layer_begin < seen.size()) {
    const auto layer_end = static_cast<std::uint32_t>(seen.size());
    for (std::uint32_t id = layer_begin; id < layer_end; ++id) {
      const auto s = seen.at(id);
      std::copy(s.begin(), s.end(), current.begin());
      cp.authorize(current, current_auth);

      for (std::size_t r = 0; r < cp.assigns().size(); ++r) {
        if (!cp.assign_enabled(r, current, current_auth)) continue;
        next = current;
        detail::set_bit(next, cp.assigns()[r].target);
        if (auto step = visit(id, static_cast<std::uint32_t>(r)); step != Step::Continue)
          return finish(step);
      }
      for (std::size_t r = 0; r < cp.revokes().size(); ++r) {
        if (!detail::test_bit(current, cp.revokes()[r].target)) continue;
        next = current;
        detail::clear_bit(next, cp.revokes()[r].target);
        if (auto step = visit(id, static_cast<std::uint32_t>(r) | kRevokeFlag); step != Step::Continue)
          return finish(step);
      }
    }
    layer_begin = layer_end;
    ++depth;
  }
  v.outcome = Outcome::Unreachable;
  v.exhausted = true;
  return v;
}

}  // namespace arbac
