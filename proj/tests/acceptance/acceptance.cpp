// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <sys/resource.h>

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "arbac/analyzer.hpp"
#include "arbac/bank.hpp"
#include "arbac/cli.hpp"
#include "arbac/policy_text.hpp"
#include "arbac/sop.hpp"
#include "../test_support.hpp"

namespace {

using namespace arbac;
using Clock = std::chrono::steady_clock;

struct CriterionResult {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double peak_rss_mib() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<double>(usage.ru_maxrss) / 1024.0;  // ru_maxrss is in KiB on Linux
}

int failures = 0;

void criterion(int id, const std::string& title, const std::function<CriterionResult()>& body) {
  const auto start = Clock::now();
  CriterionResult result;
  try {
    result = body();
  } catch (const std::exception& e) {
    result = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = seconds_since(start);
  failures += !result.pass;
  std::cout << (result.pass ? "PASS" : "FAIL") << "  " << id << ". " << title << ": " << result.detail
            << " [" << std::fixed << std::setprecision(3) << elapsed << " s]" << std::endl;
}

std::string describe(const Verdict& v) {
  std::ostringstream out;
  out << to_string(v.outcome) << (v.exhausted ? " exhausted" : "") << ", " << v.states_explored
      << " states";
  if (v.outcome == Outcome::Reachable) out << ", witness " << v.witness.steps.size();
  return out.str();
}

CriterionResult structural_counts() {
  const auto start = Clock::now();
  std::istringstream in;
  std::ostringstream out, err;
  const int code = cli::run({"arbac", "generate", "--branches", "18"}, {in, out, err});
  const Policy p = parse_policy(out.str());
  const double t = seconds_since(start);
  const auto branch_roles = std::count_if(p.roles.begin(), p.roles.end(),
                                          [](const RoleId& r) { return r != bank::kAdmin; });
  std::ostringstream d;
  d << branch_roles << " branch roles, " << p.cr.size() << " can_revoke rules";
  return {code == 0 && branch_roles == 594 && p.cr.size() == 594 && t < 5.0, d.str()};
}

CriterionResult clerk_rule_family() {
  const std::vector<RoleId> staff = {RoleId("FA-Asst"), RoleId("FA-Specialist"), RoleId("FA-Senior"),
                                     RoleId("FA-Junior"), RoleId("FA-Clerk")};
  const RoleId guard("FA");
  const auto rules = compile_sop({staff, 3}, std::span<const RoleId>(&guard, 1), RoleId("Admin"))
                         .rules_for(RoleId("FA-Clerk"));
  auto expected = testing::clerk_rules();
  bool equal = rules.size() == expected.size();
  for (const auto& r : rules) {
    const auto it = std::find(expected.begin(), expected.end(), r);
    if (it == expected.end()) {
      equal = false;
      break;
    }
    expected.erase(it);
  }
  return {equal && expected.empty(), std::to_string(rules.size()) + " rules for FA-Clerk, set-equal to the 11 expected rules"};
}

CriterionResult count_law() {
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t t = 1; t <= n; ++t) {
      std::vector<RoleId> s;
      for (std::size_t i = 0; i < n; ++i) s.emplace_back("s" + std::to_string(i));
      const auto c = compile_sop({s, t}, {}, RoleId("Admin"));
      // Enumerate subsets of the other n-1 roles with fewer than t members.
      std::size_t expected = 0;
      for (unsigned mask = 0; mask < (1U << (n - 1)); ++mask)
        expected += static_cast<std::size_t>(__builtin_popcount(mask)) < t;
      for (const auto& target : s) {
        if (c.rules_for(target).size() != expected)
          return {false, "n=" + std::to_string(n) + " t=" + std::to_string(t) + " mismatch"};
        ++checked;
      }
    }
  return {true, std::to_string(checked) + " (|S|, t, target) combinations match"};
}

CriterionResult micro_safety() {
  const auto start = Clock::now();
  const Policy p = testing::single_division();
  const SafetyQuery q = p.queries[0];
  const Verdict fast = reach(p, q, {}, true);
  const Verdict ref = oracle_reach(p, q);
  const double t = seconds_since(start);
  const bool ok = fast.outcome == Outcome::Unreachable && fast.exhausted &&
                  ref.outcome == Outcome::Unreachable && ref.exhausted && t < 1.0;
  return {ok, "reach " + describe(fast) + "; oracle " + describe(ref)};
}

CriterionResult case_study_safety() {
  const Policy b1 = bank::generate_bank({.branches = 1, .instrumentation = bank::Instrumentation::Q1});
  auto start = Clock::now();
  const Verdict v1 = reach(b1, {UserId("newUser"), bank::kTargetQ1}, {}, true);
  const double t1 = seconds_since(start);
  const double rss = peak_rss_mib();

  const Policy b18 = bank::generate_bank({.branches = 18, .instrumentation = bank::Instrumentation::Q1});
  start = Clock::now();
  const Verdict v18 = reach(b18, {UserId("newUser"), bank::any_four(1)}, {}, true);
  const double t18 = seconds_since(start);

  std::ostringstream d;
  d << std::fixed << std::setprecision(3) << "B=1 TargetQ1 " << describe(v1) << " in " << t1 << " s, peak "
    << std::setprecision(0) << rss << " MiB; B=18 AnyFour_1 " << describe(v18) << " in "
    << std::setprecision(3) << t18 << " s";
  const bool ok = v1.outcome == Outcome::Unreachable && v1.exhausted && t1 < 60.0 && rss < 2048.0 &&
                  v18.outcome == Outcome::Unreachable && v18.exhausted && t18 <= 10.0 * t1;
  return {ok, d.str()};
}

CriterionResult mutation_detection() {
  const auto start = Clock::now();
  // Shortest length from the oracle on the single-division projection; the
  // full bank exceeds the oracle's role cap.
  Policy projection = testing::single_division();
  testing::drop_junior_literal(projection, 0);
  const Verdict ref = oracle_reach(projection, projection.queries[0]);

  Policy p = bank::generate_bank({.branches = 1, .instrumentation = bank::Instrumentation::Q1});
  testing::drop_junior_literal(p, 1);
  const SafetyQuery q{UserId("newUser"), bank::any_four(1)};
  const Verdict v = reach(p, q, {}, true);
  const double t = seconds_since(start);
  const bool replays = replay(p, q, v.witness);
  const bool ok = ref.outcome == Outcome::Reachable && v.outcome == Outcome::Reachable &&
                  v.witness.steps.size() == ref.witness.steps.size() && replays && t < 5.0;
  return {ok, "bank " + describe(v) + ", oracle shortest " + std::to_string(ref.witness.steps.size()) +
                  ", replay " + (replays ? "ok" : "failed")};
}

CriterionResult differential() {
  std::mt19937_64 rng(20240601);
  int agree = 0, reachable = 0, replayed = 0;
  constexpr int kTrials = 500;
  for (int trial = 0; trial < kTrials; ++trial) {
    const Policy p = testing::random_policy(rng, {8, 12, 4, false});
    const SafetyQuery q = p.queries[0];
    const Verdict ref = oracle_reach(p, q);
    const Verdict sliced = reach(p, q, {}, true);
    const Verdict full = reach(p, q, {}, false);
    if (sliced.outcome != ref.outcome || full.outcome != ref.outcome) continue;
    ++agree;
    if (ref.outcome != Outcome::Reachable) continue;
    ++reachable;
    replayed += replay(p, q, sliced.witness) && replay(p, q, full.witness);
  }
  std::ostringstream d;
  d << agree << "/" << kTrials << " agree, " << replayed << "/" << reachable << " reachable witnesses replay";
  return {agree == kTrials && replayed == reachable, d.str()};
}

bool round_trips(const Policy& p) {
  const std::string text = serialize_policy(p);
  const Policy back = parse_policy(text);
  return back == p && serialize_policy(back) == text;
}

CriterionResult round_trip() {
  int ok = 0, total = 0;
  for (int b : {1, 2, 18})
    for (auto inst : {bank::Instrumentation::None, bank::Instrumentation::Both})
      for (auto mode : {bank::HierarchyMode::Flat, bank::HierarchyMode::Hierarchical}) {
        ++total;
        ok += round_trips(bank::generate_bank({.branches = b, .instrumentation = inst, .hierarchy_mode = mode}));
      }
  for (const auto& [name, text] : testing::corpus()) {
    ++total;
    ok += round_trips(parse_policy(text));
  }
  return {ok == total && total > 12, std::to_string(ok) + "/" + std::to_string(total) + " policies byte-exact"};
}

CriterionResult q2_characterization() {
  auto build = [](bank::Q2Encoding enc) {
    Policy p = bank::generate_bank(
        {.branches = 18, .instrumentation = bank::Instrumentation::Q2, .q2_encoding = enc});
    testing::drop_junior_literal(p, 18);
    return p;
  };
  const Policy chain = build(bank::Q2Encoding::Chain);
  const Verdict vc = reach_modular(chain, chain.queries[0], {});
  const Policy direct = build(bank::Q2Encoding::Direct);
  const Verdict vd = reach_modular(direct, direct.queries[0], {});
  const bool ok = vc.outcome == Outcome::Reachable && replay(chain, chain.queries[0], vc.witness) &&
                  vd.outcome == Outcome::Unreachable && vd.exhausted;
  return {ok, "chain " + describe(vc) + "; direct " + describe(vd)};
}

}  // namespace

int main() {
  criterion(1, "structural counts, B=18", structural_counts);
  criterion(2, "FA-Clerk rule family", clerk_rule_family);
  criterion(3, "per-target count law", count_law);
  criterion(4, "SOP safety, single division", micro_safety);
  criterion(5, "SOP safety, bank", case_study_safety);
  criterion(6, "mutation detection", mutation_detection);
  criterion(7, "differential correctness", differential);
  criterion(8, "round trip", round_trip);
  criterion(9, "all-branches question, chain vs direct encoding", q2_characterization);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
