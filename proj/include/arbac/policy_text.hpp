#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "arbac/model.hpp"

namespace arbac {

/// 1-based position of a token in the input text.
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, const std::string& message, std::vector<std::string> expected);

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::string message_;
  std::vector<std::string> expected_;
};

/// Parses the policy text format:
///
///   policy  := section*
///   section := "Roles" ident+ ";"   | "Users" ident+ ";"
///            | "UA" pair* ";"        | "CR" pair* ";"
///            | "CA" caent* ";"       | "RH" pair* ";"
///            | "ADMIN" ident+ ";"    | "SPEC" ident ident ";"
///   pair    := "<" ident "," ident ">"
///   caent   := "<" ident "," cond "," ident ">"
///   cond    := "TRUE" | lit ("&" lit)*      lit := "-"? ident
///
/// `//` starts a line comment. Repeated sections concatenate. Only syntax
/// is checked here; use validate() for name resolution.
///
/// Throws ParseError at the first syntax error.
Policy parse_policy(std::string_view text);

class InvalidPolicy : public std::runtime_error {
 public:
  explicit InvalidPolicy(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Canonical text: sections in the order Roles, Users, UA, CR, CA, RH,
/// ADMIN, SPEC; rule entries one per line; `\n` line endings. Empty
/// Roles/Users/ADMIN/RH sections are omitted, empty UA/CR/CA print as
/// e.g. "CR ;".
///
/// Throws InvalidPolicy if validate() reports errors.
std::string serialize_policy(const Policy& policy);

/// Text of one CA entry, e.g. "<Admin, FA&-FA-Asst, FA-Clerk>".
std::string format_rule(const CanAssignRule& rule);

/// A CA section holding `rules`, as serialize_policy prints it.
std::string format_ca_section(const std::vector<CanAssignRule>& rules);

}  // namespace arbac
