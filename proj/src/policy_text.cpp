#include "arbac/policy_text.hpp"

#include <optional>

namespace arbac {

ParseError::ParseError(SourceSpan span, const std::string& message,
                       std::vector<std::string> expected)
    : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " +
                         message),
      span_(span),
      message_(message),
      expected_(std::move(expected)) {}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out = "policy is not well-formed";
  for (const auto& d : diagnostics)
    if (d.severity == Severity::Error) out += "\n  " + d.message;
  return out;
}

enum class Tok { Ident, Less, Greater, Comma, Semi, Amp, Minus, End };

struct Token {
  Tok kind;
  std::string_view text;
  SourceSpan span;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "identifier '" + std::string(t.text) + "'";
    case Tok::End: return "end of input";
    default: return "'" + std::string(t.text) + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    if (pos_ >= text_.size()) {
      return {Tok::End, {}, last_};
    }
    const std::size_t start = pos_;
    const SourceSpan at{line_, col_, 1};
    const char c = text_[pos_];
    Tok kind;
    switch (c) {
      case '<': kind = Tok::Less; break;
      case '>': kind = Tok::Greater; break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semi; break;
      case '&': kind = Tok::Amp; break;
      case '-': kind = Tok::Minus; break;
      default:
        if (is_start(c)) {
          while (pos_ < text_.size() && is_cont(text_[pos_])) advance();
          Token t{Tok::Ident, text_.substr(start, pos_ - start), at};
          t.span.length = pos_ - start;
          last_ = t.span;
          return t;
        }
        if (static_cast<unsigned char>(c) >= 0x80)
          throw ParseError(at, "non-ASCII byte in policy text", {});
        throw ParseError(at, std::string("unexpected character '") + c + "'", {});
    }
    advance();
    last_ = at;
    return {kind, text_.substr(start, 1), at};
  }

 private:
  static bool is_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  }
  static bool is_cont(char c) { return is_start(c) || (c >= '0' && c <= '9') || c == '-'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  SourceSpan last_{1, 1, 1};  // span of the last token, reported for errors at end of input
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) { shift(); }

  Policy run() {
    Policy p;
    while (tok_.kind != Tok::End) section(p);
    return p;
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i)
      msg += (i == 0 ? "" : i + 1 == expected.size() ? " or " : ", ") + expected[i];
    msg += ", found " + describe(tok_);
    throw ParseError(tok_.span, msg, std::move(expected));
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail({what});
    shift();
  }

  std::string ident() {
    if (tok_.kind != Tok::Ident) fail({"identifier"});
    std::string s(tok_.text);
    shift();
    return s;
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out;
    out.push_back(ident());
    while (tok_.kind == Tok::Ident) out.push_back(ident());
    expect(Tok::Semi, "';'");
    return out;
  }

  std::pair<std::string, std::string> pair() {
    expect(Tok::Less, "'<'");
    std::string a = ident();
    expect(Tok::Comma, "','");
    std::string b = ident();
    expect(Tok::Greater, "'>'");
    return {std::move(a), std::move(b)};
  }

  Precondition cond() {
    Precondition pre;
    if (tok_.kind == Tok::Ident && tok_.text == "TRUE") {
      shift();
      return pre;
    }
    for (;;) {
      const bool negated = tok_.kind == Tok::Minus;
      if (negated) shift();
      if (tok_.kind != Tok::Ident) fail(negated ? std::vector<std::string>{"identifier"}
                                                : std::vector<std::string>{"'TRUE'", "'-'", "identifier"});
      (negated ? pre.negative : pre.positive).emplace_back(ident());
      if (tok_.kind != Tok::Amp) break;
      shift();
    }
    return pre;
  }

  void section(Policy& p) {
    if (tok_.kind != Tok::Ident) fail({"section keyword"});
    const std::string_view kw = tok_.text;
    if (kw == "Roles") {
      shift();
      for (auto& s : ident_list()) p.roles.emplace_back(std::move(s));
    } else if (kw == "Users") {
      shift();
      for (auto& s : ident_list()) p.users.emplace_back(std::move(s));
    } else if (kw == "ADMIN") {
      shift();
      for (auto& s : ident_list()) p.admin_roles.emplace_back(std::move(s));
    } else if (kw == "UA") {
      shift();
      while (tok_.kind == Tok::Less) {
        auto [u, r] = pair();
        p.ua.push_back({UserId(std::move(u)), RoleId(std::move(r))});
      }
      expect(Tok::Semi, "'<' or ';'");
    } else if (kw == "CR") {
      shift();
      while (tok_.kind == Tok::Less) {
        auto [a, t] = pair();
        p.cr.push_back({RoleId(std::move(a)), RoleId(std::move(t))});
      }
      expect(Tok::Semi, "'<' or ';'");
    } else if (kw == "RH") {
      shift();
      while (tok_.kind == Tok::Less) {
        auto [s, j] = pair();
        p.hierarchy.edges.push_back({RoleId(std::move(s)), RoleId(std::move(j))});
      }
      expect(Tok::Semi, "'<' or ';'");
    } else if (kw == "CA") {
      shift();
      while (tok_.kind == Tok::Less) {
        shift();
        CanAssignRule rule;
        rule.admin = RoleId(ident());
        expect(Tok::Comma, "','");
        rule.pre = cond();
        expect(Tok::Comma, "','");
        rule.target = RoleId(ident());
        expect(Tok::Greater, "'>'");
        p.ca.push_back(std::move(rule));
      }
      expect(Tok::Semi, "'<' or ';'");
    } else if (kw == "SPEC") {
      shift();
      UserId user(ident());
      RoleId target(ident());
      expect(Tok::Semi, "';'");
      p.queries.push_back({std::move(user), std::move(target)});
    } else {
      fail({"section keyword (Roles, Users, UA, CR, CA, RH, ADMIN, SPEC)"});
    }
  }

  Lexer lexer_;
  Token tok_{Tok::End, {}, {}};
};

void append_names(std::string& out, const char* keyword, const auto& names) {
  if (names.empty()) return;
  out += keyword;
  for (const auto& n : names) {
    out += ' ';
    out += n.str();
  }
  out += " ;\n";
}

template <typename Entries, typename Format>
void append_rules(std::string& out, const char* keyword, const Entries& entries, Format format) {
  out += keyword;
  if (entries.empty()) {
    out += " ;\n";
    return;
  }
  out += '\n';
  for (const auto& e : entries) {
    out += format(e);
    out += '\n';
  }
  out += ";\n";
}

}  // namespace

InvalidPolicy::InvalidPolicy(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

Policy parse_policy(std::string_view text) { return Parser(text).run(); }

std::string format_rule(const CanAssignRule& rule) {
  std::string out = "<" + rule.admin.str() + ", ";
  if (rule.pre.is_true()) {
    out += "TRUE";
  } else {
    bool first = true;
    for (const auto& r : rule.pre.positive) {
      if (!first) out += '&';
      out += r.str();
      first = false;
    }
    for (const auto& r : rule.pre.negative) {
      out += first ? "-" : "&-";
      out += r.str();
      first = false;
    }
  }
  out += ", " + rule.target.str() + ">";
  return out;
}

std::string format_ca_section(const std::vector<CanAssignRule>& rules) {
  std::string out;
  append_rules(out, "CA", rules, format_rule);
  return out;
}

std::string serialize_policy(const Policy& policy) {
  auto diags = validate(policy);
  if (has_errors(diags)) throw InvalidPolicy(std::move(diags));

  std::string out;
  append_names(out, "Roles", policy.roles);
  append_names(out, "Users", policy.users);
  append_rules(out, "UA", policy.ua, [](const UserAssignment& a) {
    return "<" + a.user.str() + ", " + a.role.str() + ">";
  });
  append_rules(out, "CR", policy.cr, [](const CanRevokeRule& r) {
    return "<" + r.admin.str() + ", " + r.target.str() + ">";
  });
  append_rules(out, "CA", policy.ca, format_rule);
  if (!policy.hierarchy.empty())
    append_rules(out, "RH", policy.hierarchy.edges, [](const HierarchyEdge& e) {
      return "<" + e.senior.str() + ", " + e.junior.str() + ">";
    });
  append_names(out, "ADMIN", policy.admin_roles);
  for (const auto& q : policy.queries) out += "SPEC " + q.user.str() + " " + q.target.str() + " ;\n";
  return out;
}

}  // namespace arbac
