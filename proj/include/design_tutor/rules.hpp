#pragma once

#include "design_tutor/ast.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace design_tutor {

/// One catalog entry. `positioned` rules report a source location; the
/// others are program-level findings.
///
/// Message templates may reference {function} (enclosing function, method
/// or class), {line}, and {detail} (rule specific: a number, a name).
struct RuleInfo {
  std::string_view code;
  std::string_view title;
  Language language;
  std::string_view message_template;
  bool positioned;
};

/// All 36 rules, Python first, each language in code order.
std::span<const RuleInfo> rule_catalog();
std::span<const RuleInfo> rules_for(Language lang);
const RuleInfo *find_rule(std::string_view code);

struct Mistake {
  const RuleInfo *rule = nullptr;
  std::optional<std::string> function_name;
  std::optional<Span> span;
  std::string message;

  std::string_view code() const { return rule->code; }
};

/// Builds a Mistake and renders its message from the rule template.
Mistake make_mistake(const RuleInfo &rule,
                     std::optional<std::string> function_name,
                     std::optional<Span> span, std::string_view detail = {});
Mistake make_mistake(std::string_view code,
                     std::optional<std::string> function_name,
                     std::optional<Span> span, std::string_view detail = {});

/// Program-level mistakes first (by code), then by start position, then code.
bool mistake_order(const Mistake &a, const Mistake &b);
void sort_mistakes(std::vector<Mistake> &mistakes);

/// Numeric value of a literal, or nullopt when it is not a real number
/// (imaginary literals) or cannot be represented.
std::optional<long double> numeric_value(std::string_view literal,
                                         Language lang);
/// Literals other than -1, 0, 1 and 2 are magic. `negated` applies a
/// directly enclosing unary minus.
bool is_magic_number(std::string_view literal, bool negated, Language lang);

/// Letters, digits and underscores with no lowercase letter.
bool is_all_caps(std::string_view name);

/// Catalog as JSON: [{code, title, language, message_template}, ...].
std::string catalog_json(std::optional<Language> lang, int indent = -1);

namespace python_rules {
std::vector<Mistake> check_forbidden_statements(const Program &program);
std::vector<Mistake> check_main_conventions(const Program &program);
std::vector<Mistake> check_nesting(const Program &program);
std::vector<Mistake> check_calls(const Program &program);
std::vector<Mistake> check_magic_numbers(const Program &program);
/// Every Python rule, sorted.
std::vector<Mistake> check_all(const Program &program);
} // namespace python_rules

namespace java_rules {

struct Options {
  /// Apply the rules inside nested, local and anonymous classes too.
  bool include_nested_classes = false;
};

std::vector<Mistake> check_attributes(const Program &program,
                                      const Options &opts = {});
std::vector<Mistake> check_method_limits(const Program &program,
                                         const Options &opts = {});
std::vector<Mistake> check_forbidden_expressions(const Program &program,
                                                 const Options &opts = {});
std::vector<Mistake> check_declaration_placement(const Program &program,
                                                 const Options &opts = {});
std::vector<Mistake> check_control_blocks(const Program &program,
                                          const Options &opts = {});
std::vector<Mistake> check_magic_numbers(const Program &program,
                                         const Options &opts = {});
std::vector<Mistake> check_all(const Program &program,
                               const Options &opts = {});

/// Statement limit per method.
inline constexpr std::size_t kMaxMethodStatements = 30;

} // namespace java_rules

} // namespace design_tutor
