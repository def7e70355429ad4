#include "arbac/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "arbac/analyzer.hpp"
#include "arbac/bank.hpp"
#include "arbac/policy_text.hpp"
#include "arbac/sop.hpp"

namespace arbac::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw CommandError("cannot open " + path);
  buf << file.rdbuf();
  return buf.str();
}

Policy load_policy(const std::string& path, std::istream& in) {
  const std::string text = read_input(path, in);
  try {
    return parse_policy(text);
  } catch (const ParseError& e) {
    throw CommandError((path.empty() ? std::string("-") : path) + ":" + e.what());
  }
}

struct GenerateOptions {
  int branches = 18;
  std::string queries = "none";
  std::string hierarchy = "flat";
  std::string q2_encoding = "chain";
  std::string user = "newUser";
  std::string out_path;
};

int cmd_generate(const GenerateOptions& o, const Streams& io) {
  bank::BankConfig config;
  config.branches = o.branches;
  static const std::map<std::string, bank::Instrumentation> kModes = {
      {"none", bank::Instrumentation::None},
      {"q1", bank::Instrumentation::Q1},
      {"q2", bank::Instrumentation::Q2},
      {"both", bank::Instrumentation::Both}};
  config.instrumentation = kModes.at(o.queries);
  config.hierarchy_mode =
      o.hierarchy == "flat" ? bank::HierarchyMode::Flat : bank::HierarchyMode::Hierarchical;
  config.q2_encoding = o.q2_encoding == "chain" ? bank::Q2Encoding::Chain : bank::Q2Encoding::Direct;
  config.analysis_user = UserId(o.user);
  try {
    bank::check_config(config);
  } catch (const std::invalid_argument& e) {
    throw CommandError(e.what());
  }

  const Policy policy = bank::generate_bank(config);
  const std::string text = serialize_policy(policy);
  if (o.out_path.empty() || o.out_path == "-") {
    io.out << text;
  } else {
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file || !(file << text)) throw CommandError("cannot write " + o.out_path);
  }
  io.err << "roles " << policy.roles.size() << ", ca " << policy.ca.size() << ", cr "
         << policy.cr.size() << ", queries " << policy.queries.size() << "\n";
  return 0;
}

struct CheckOptions {
  std::string policy_path = "-";
  std::string query;
  std::string engine = "bfs";
  bool no_slicing = false;
  std::optional<std::uint64_t> max_states;
  std::optional<std::uint64_t> max_depth;
  bool json = false;
};

ordered_json verdict_json(const SafetyQuery& q, const Verdict& v) {
  ordered_json witness = ordered_json::array();
  for (const auto& s : v.witness.steps)
    witness.push_back({{"kind", s.kind == ActionKind::Assign ? "assign" : "revoke"},
                       {"ruleIndex", s.rule_index},
                       {"role", s.role.str()}});
  return {{"query", {{"user", q.user.str()}, {"role", q.target.str()}}},
          {"verdict", to_string(v.outcome)},
          {"witness", std::move(witness)},
          {"statesExplored", v.states_explored},
          {"exhausted", v.exhausted},
          {"slicedRoleCount", v.sliced_role_count}};
}

void report(std::ostream& err, const SafetyQuery& q, const Verdict& v, const std::string& engine,
            long long ms) {
  err << "query " << q.user.str() << " " << q.target.str() << ": " << to_string(v.outcome);
  if (v.outcome == Outcome::Reachable) err << " in " << v.witness.steps.size() << " steps";
  err << " (engine " << engine << ", " << v.states_explored << " states"
      << (v.exhausted ? ", exhausted" : "") << ", " << v.sliced_role_count << " roles searched, "
      << ms << " ms)\n";
  for (std::size_t i = 0; i < v.witness.steps.size(); ++i) {
    const auto& s = v.witness.steps[i];
    err << "  " << (i + 1) << ". " << (s.kind == ActionKind::Assign ? "assign " : "revoke ")
        << s.role.str() << " (" << (s.kind == ActionKind::Assign ? "CA" : "CR") << " rule "
        << s.rule_index << ")\n";
  }
}

int cmd_check(const CheckOptions& o, const Streams& io, std::uint64_t default_max_states) {
  const Policy policy = load_policy(o.policy_path, io.in);
  const auto diags = validate(policy);
  if (has_errors(diags)) {
    for (const auto& d : diags)
      if (d.severity == Severity::Error) io.err << "error: " << d.message << "\n";
    throw CommandError("policy is not well-formed");
  }

  std::vector<SafetyQuery> queries = policy.queries;
  if (!o.query.empty()) {
    const auto colon = o.query.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == o.query.size())
      throw CommandError("--query expects user:role, got '" + o.query + "'");
    queries = {{UserId(o.query.substr(0, colon)), RoleId(o.query.substr(colon + 1))}};
  }
  if (queries.empty()) throw CommandError("policy has no SPEC queries and no --query was given");

  SearchLimits limits;
  limits.max_states = o.max_states.value_or(default_max_states);
  limits.max_depth = o.max_depth;

  bool any_reachable = false;
  bool any_unknown = false;
  for (const auto& q : queries) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      if (o.engine == "bfs")
        v = reach(policy, q, limits, !o.no_slicing);
      else if (o.engine == "modular")
        v = reach_modular(policy, q, limits);
      else
        v = oracle_reach(policy, q);
    } catch (const AnalysisError& e) {
      throw CommandError(e.what());
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    if (v.outcome == Outcome::Reachable && !replay(policy, q, v.witness))
      throw CommandError("internal error: witness for " + q.target.str() + " does not replay");
    any_reachable |= v.outcome == Outcome::Reachable;
    any_unknown |= v.outcome == Outcome::Unknown;
    if (o.json)
      io.out << verdict_json(q, v).dump() << "\n";
    else
      report(io.err, q, v, o.engine, ms);
  }
  io.out.flush();
  return any_reachable ? 2 : any_unknown ? 3 : 0;
}

struct CompileOptions {
  std::string roles;
  std::size_t limit = 0;
  std::string guard;
  std::string admin = "Admin";
  std::string monitor;
};

int cmd_compile_sop(const CompileOptions& o, const Streams& io) {
  SopConstraint constraint;
  for (auto& r : split_csv(o.roles)) constraint.roles.emplace_back(std::move(r));
  std::vector<RoleId> guard;
  for (auto& r : split_csv(o.guard)) guard.emplace_back(std::move(r));
  for (const auto& r : constraint.roles)
    if (!is_identifier(r.str())) throw CommandError("invalid role name '" + r.str() + "'");
  for (const auto& r : guard)
    if (!is_identifier(r.str())) throw CommandError("invalid role name '" + r.str() + "'");
  if (!is_identifier(o.admin)) throw CommandError("invalid role name '" + o.admin + "'");

  constraint.limit = o.limit;
  try {
    auto rules = compile_sop(constraint, guard, RoleId(o.admin)).assign_rules;
    if (!o.monitor.empty()) {
      if (!is_identifier(o.monitor)) throw CommandError("invalid role name '" + o.monitor + "'");
      auto monitor = compile_sop_monitor(constraint, RoleId(o.monitor), RoleId(o.admin));
      rules.insert(rules.end(), monitor.begin(), monitor.end());
    }
    io.out << format_ca_section(rules);
    io.err << rules.size() << " rules\n";
  } catch (const SopError& e) {
    throw CommandError(e.what());
  }
  return 0;
}

int cmd_validate(const std::string& path, const Streams& io) {
  const Policy policy = load_policy(path, io.in);
  const auto diags = validate(policy);
  for (const auto& d : diags)
    io.err << (d.severity == Severity::Error ? "error: " : "info: ") << d.message << "\n";
  if (has_errors(diags)) return 1;
  io.err << "ok: " << policy.roles.size() << " roles, " << policy.ca.size() << " ca rules, "
         << policy.cr.size() << " cr rules\n";
  return 0;
}

int cmd_stats(const std::string& path, bool json, const Streams& io) {
  const Policy policy = load_policy(path, io.in);
  std::map<std::size_t, std::size_t> pos_hist, neg_hist, size_hist;
  std::size_t mixed = 0, unconditional = 0;
  for (const auto& r : policy.ca) {
    ++pos_hist[r.pre.positive.size()];
    ++neg_hist[r.pre.negative.size()];
    ++size_hist[r.pre.positive.size() + r.pre.negative.size()];
    mixed += r.pre.is_mixed();
    unconditional += r.pre.is_true();
  }
  const auto hist_json = [](const std::map<std::size_t, std::size_t>& h) {
    ordered_json j = ordered_json::object();
    for (auto [k, n] : h) j[std::to_string(k)] = n;
    return j;
  };
  ordered_json j = {{"roles", policy.roles.size()},
                    {"users", policy.users.size()},
                    {"ua", policy.ua.size()},
                    {"ca", policy.ca.size()},
                    {"cr", policy.cr.size()},
                    {"rh", policy.hierarchy.edges.size()},
                    {"adminRoles", policy.admin_roles.size()},
                    {"queries", policy.queries.size()},
                    {"mixedCa", mixed},
                    {"unconditionalCa", unconditional},
                    {"positiveHistogram", hist_json(pos_hist)},
                    {"negativeHistogram", hist_json(neg_hist)},
                    {"preconditionSizeHistogram", hist_json(size_hist)}};
  if (json) {
    io.out << j.dump() << "\n";
    return 0;
  }
  io.err << "roles " << policy.roles.size() << "\nusers " << policy.users.size() << "\nua "
         << policy.ua.size() << "\nca " << policy.ca.size() << "\ncr " << policy.cr.size()
         << "\nrh " << policy.hierarchy.edges.size() << "\nadmin roles "
         << policy.admin_roles.size() << "\nqueries " << policy.queries.size()
         << "\nca with mixed preconditions " << mixed << "\nca with TRUE precondition "
         << unconditional << "\n";
  const auto print = [&](const char* title, const std::map<std::size_t, std::size_t>& h) {
    io.err << title << "\n";
    for (auto [k, n] : h) io.err << "  " << k << ": " << n << "\n";
  };
  print("positive literals per ca rule", pos_hist);
  print("negative literals per ca rule", neg_hist);
  print("precondition size per ca rule", size_hist);
  return 0;
}

}  // namespace

std::optional<std::uint64_t> max_states_from_env(const char* value) {
  if (value == nullptr || *value == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto n = std::stoull(value, &used);
    if (used != std::string(value).size() || n == 0) return std::nullopt;
    return n;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

int run(const std::vector<std::string>& args, const Streams& io, std::uint64_t default_max_states) {
  CLI::App app{"ARBAC policy generation and role-reachability analysis", "arbac"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write the multi-branch bank policy");
  generate->add_option("--branches", gen.branches, "Number of branches")->capture_default_str();
  generate->add_option("--queries", gen.queries, "Safety-query instrumentation")
      ->check(CLI::IsMember({"none", "q1", "q2", "both"}))
      ->capture_default_str();
  generate->add_option("--hierarchy", gen.hierarchy, "Role hierarchy mode")
      ->check(CLI::IsMember({"flat", "hierarchical"}))
      ->capture_default_str();
  generate->add_option("--q2-encoding", gen.q2_encoding,
                       "chain: Branch_1&..&Branch_B (any violating branch satisfies it); "
                       "direct: AnyFour_1&..&AnyFour_B (target TargetQ2Direct)")
      ->check(CLI::IsMember({"chain", "direct"}))
      ->capture_default_str();
  generate->add_option("--user", gen.user, "Analysis user")->capture_default_str();
  generate->add_option("-o,--out", gen.out_path, "Output file (default: standard output)");

  CheckOptions chk;
  auto* check = app.add_subcommand("check", "Answer the policy's safety queries");
  check->add_option("policy", chk.policy_path, "Policy file, '-' for standard input")->capture_default_str();
  check->add_option("--query", chk.query, "Ad-hoc query user:role instead of the SPEC sections");
  check->add_option("--engine", chk.engine, "bfs, modular or oracle")
      ->check(CLI::IsMember({"bfs", "modular", "oracle"}))
      ->capture_default_str();
  check->add_flag("--no-slicing", chk.no_slicing, "Search the unsliced policy (bfs engine)");
  check->add_option("--max-states", chk.max_states, "State cap (default from ARBAC_MAX_STATES)")
      ->check(CLI::PositiveNumber);
  check->add_option("--max-depth", chk.max_depth, "Witness length cap")->check(CLI::PositiveNumber);
  check->add_flag("--json", chk.json, "One JSON object per query on standard output");

  CompileOptions comp;
  auto* compile = app.add_subcommand("compile-sop", "Print the can_assign rules enforcing <S, t>");
  compile->add_option("--roles", comp.roles, "Comma-separated role set S")->required();
  compile->add_option("--limit", comp.limit, "Maximum roles of S per user (t)")->required();
  compile->add_option("--guard", comp.guard, "Comma-separated extra positive preconditions");
  compile->add_option("--admin", comp.admin, "Administrative role")->capture_default_str();
  compile->add_option("--monitor", comp.monitor, "Also emit rules assigning this role on violation");

  std::string validate_path = "-";
  auto* validate_cmd = app.add_subcommand("validate", "Report well-formedness diagnostics");
  validate_cmd->add_option("policy", validate_path, "Policy file, '-' for standard input");

  std::string stats_path = "-";
  bool stats_json = false;
  auto* stats = app.add_subcommand("stats", "Print rule and precondition statistics");
  stats->add_option("policy", stats_path, "Policy file, '-' for standard input");
  stats->add_flag("--json", stats_json, "Print statistics as JSON on standard output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, io);
    if (check->parsed()) return cmd_check(chk, io, default_max_states);
    if (compile->parsed()) return cmd_compile_sop(comp, io);
    if (validate_cmd->parsed()) return cmd_validate(validate_path, io);
    if (stats->parsed()) return cmd_stats(stats_path, stats_json, io);
  } catch (const CommandError& e) {
    io.err << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidPolicy& e) {
    io.err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace arbac::cli
