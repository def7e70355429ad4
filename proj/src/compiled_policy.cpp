#include "compiled_policy.hpp"

#include <algorithm>

namespace arbac::detail {

CompiledPolicy::CompiledPolicy(const Policy& policy, const SafetyQuery& query,
                               const std::vector<std::size_t>& ca_origin,
                               const std::vector<std::size_t>& cr_origin)
    : names_(policy.roles) {
  const std::size_t n = names_.size();
  words_ = std::max<std::size_t>(1, (n + 63) / 64);
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < n; ++i) index.emplace(names_[i].str(), i);
  const auto id = [&](const RoleId& r) { return index.at(r.str()); };
  const auto span_of = [&](std::vector<Word>& v, std::size_t i) {
    return std::span<Word>(v.data() + i * words_, words_);
  };

  pos_.assign(policy.ca.size() * words_, 0);
  neg_.assign(policy.ca.size() * words_, 0);
  for (std::size_t i = 0; i < policy.ca.size(); ++i) {
    const auto& rule = policy.ca[i];
    assigns_.push_back({id(rule.target), ca_origin[i]});
    for (const auto& r : rule.pre.positive) set_bit(span_of(pos_, i), id(r));
    for (const auto& r : rule.pre.negative) set_bit(span_of(neg_, i), id(r));
  }
  for (std::size_t i = 0; i < policy.cr.size(); ++i)
    revokes_.push_back({id(policy.cr[i].target), cr_origin[i]});

  // Reflexive-transitive closure of senior -> junior, one row per role.
  confers_.assign(n * words_, 0);
  std::vector<std::vector<std::uint32_t>> juniors(n);
  for (const auto& e : policy.hierarchy.edges) juniors[id(e.senior)].push_back(id(e.junior));
  has_hierarchy_ = !policy.hierarchy.empty();
  for (std::uint32_t r = 0; r < n; ++r) {
    auto row = span_of(confers_, r);
    std::vector<std::uint32_t> work{r};
    set_bit(row, r);
    while (!work.empty()) {
      const auto v = work.back();
      work.pop_back();
      for (auto j : juniors[v])
        if (!test_bit(row, j)) {
          set_bit(row, j);
          work.push_back(j);
        }
    }
  }

  initial_.assign(words_, 0);
  for (const auto& a : policy.ua)
    if (a.user == query.user) set_bit(initial_, id(a.role));
  target_ = id(query.target);
}

void CompiledPolicy::authorize(std::span<const Word> assigned, std::span<Word> out) const {
  std::copy(assigned.begin(), assigned.end(), out.begin());
  if (!has_hierarchy_) return;
  for (std::size_t w = 0; w < words_; ++w) {
    Word bits = assigned[w];
    while (bits) {
      const auto r = static_cast<std::uint32_t>(w * 64 + __builtin_ctzll(bits));
      bits &= bits - 1;
      const auto c = confers(r);
      for (std::size_t k = 0; k < words_; ++k) out[k] |= c[k];
    }
  }
}

StateTable::StateTable(std::size_t words) : words_(words), slots_(1024, 0) {}

std::uint64_t StateTable::hash(std::span<const Word> state) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto w : state) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 29;
  }
  return h;
}

void StateTable::grow() {
  std::vector<std::uint32_t> next(slots_.size() * 2, 0);
  const std::size_t mask = next.size() - 1;
  for (std::uint32_t id = 0; id < count_; ++id) {
    std::size_t pos = hash(at(id)) & mask;
    while (next[pos] != 0) pos = (pos + 1) & mask;
    next[pos] = id + 1;
  }
  slots_.swap(next);
}

bool StateTable::find(std::span<const Word> state) const {
  const std::size_t mask = slots_.size() - 1;
  std::size_t pos = hash(state) & mask;
  while (slots_[pos] != 0) {
    const std::uint32_t id = slots_[pos] - 1;
    if (std::equal(state.begin(), state.end(), data_.begin() + id * words_)) return true;
    pos = (pos + 1) & mask;
  }
  return false;
}

std::pair<std::uint32_t, bool> StateTable::insert(std::span<const Word> state) {
  if ((count_ + 1) * 2 > slots_.size()) grow();
  const std::size_t mask = slots_.size() - 1;
  std::size_t pos = hash(state) & mask;
  while (slots_[pos] != 0) {
    const std::uint32_t id = slots_[pos] - 1;
    if (std::equal(state.begin(), state.end(), data_.begin() + id * words_)) return {id, false};
    pos = (pos + 1) & mask;
  }
  const auto id = static_cast<std::uint32_t>(count_++);
  data_.insert(data_.end(), state.begin(), state.end());
  slots_[pos] = id + 1;
  return {id, true};
}

void check_inputs(const Policy& policy, const SafetyQuery& query) {
  auto diags = validate(policy);
  if (has_errors(diags)) {
    std::string msg = "policy is not well-formed";
    for (const auto& d : diags)
      if (d.severity == Severity::Error) msg += "\n  " + d.message;
    throw AnalysisError(AnalysisErrc::InvalidPolicy, msg);
  }
  if (std::find(policy.users.begin(), policy.users.end(), query.user) == policy.users.end())
    throw AnalysisError(AnalysisErrc::InvalidQuery, "query names undeclared user " + query.user.str());
  if (std::find(policy.roles.begin(), policy.roles.end(), query.target) == policy.roles.end())
    throw AnalysisError(AnalysisErrc::InvalidQuery,
                        "query names undeclared role " + query.target.str());
}

}  // namespace arbac::detail
