#include "design_tutor/rules.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <tuple>

namespace design_tutor {

namespace {

constexpr auto P = Language::python;
constexpr auto J = Language::java;

constexpr std::array<RuleInfo, 36> kCatalog = {{
    {"PY01", "Global variables", P,
     "Function '{function}' uses a global statement at line {line}; pass "
     "values in as parameters and return results instead.",
     true},
    {"PY02", "Break statements", P,
     "Function '{function}' uses 'break' at line {line}; put the exit "
     "condition in the loop header instead.",
     true},
    {"PY03", "Continue statements", P,
     "Function '{function}' uses 'continue' at line {line}; restructure the "
     "loop body with a conditional instead.",
     true},
    {"PY04", "Pass statements", P,
     "Function '{function}' uses 'pass' at line {line}; remove placeholder "
     "statements.",
     true},
    {"PY05", "Missing \"main\" function", P,
     "The program has no function named 'main'.", false},
    {"PY06", "Missing a call to \"main\"", P,
     "The program never calls 'main' at the top level.", false},
    {"PY07", "\"main\" function not first", P,
     "'main' should be the first function defined in the program.", false},
    {"PY08", "\"main\" function has arguments", P,
     "'main' should not take any parameters.", false},
    {"PY09", "No other function besides \"main\"", P,
     "'main' is the only function; split the work into helper functions.",
     false},
    {"PY10", "Nested function declaration", P,
     "Function '{function}' declares a nested function at line {line}; "
     "define every function at the top level.",
     true},
    {"PY11", "Nested \"return\" statement", P,
     "Function '{function}' returns from inside a nested block at line "
     "{line}; return once, at the end of the function body.",
     true},
    {"PY12", "Multiple \"return\" statements", P,
     "Function '{function}' (line {line}) has {detail} return statements; "
     "use a single exit point.",
     true},
    {"PY13", "Co-recursive call to \"main\"", P,
     "Function '{function}' calls 'main' at line {line}; only the top level "
     "of the program should call 'main'.",
     true},
    {"PY14", "Recursive function call", P,
     "Function '{function}' calls itself at line {line}; use a loop "
     "instead.",
     true},
    {"PY15", "Calls to \"quit\" or \"exit\"", P,
     "Call to '{detail}' at line {line}; let the program end by returning "
     "from 'main'.",
     true},
    {"PY16", "Has magic numbers", P,
     "Function '{function}' uses the magic number {detail} at line {line}; "
     "give it a named constant.",
     true},

    {"JV01", "Attributes should be \"private\" or \"public static final\"", J,
     "Attribute '{detail}' of class '{function}' at line {line} should be "
     "private, or public static final.",
     true},
    {"JV02", "Attribute name should have a preceding underscore", J,
     "Attribute '{detail}' of class '{function}' at line {line} should start "
     "with an underscore.",
     true},
    {"JV03", "Final attribute's name should be in all-caps", J,
     "Constant '{detail}' of class '{function}' at line {line} should be "
     "named in ALL_CAPS.",
     true},
    {"JV04", "One attribute declaration per line", J,
     "Class '{function}' declares several attributes in one statement at "
     "line {line}; declare one per line.",
     true},
    {"JV05", "No initializer block", J,
     "Class '{function}' has an initializer block at line {line}; "
     "initialize attributes in a constructor.",
     true},
    {"JV06", "Has magic numbers", J,
     "Method '{function}' uses the magic number {detail} at line {line}; "
     "give it a named constant.",
     true},
    {"JV07", "Multiple \"return\" statements", J,
     "Method '{function}' (line {line}) has {detail} return statements; use "
     "a single exit point.",
     true},
    {"JV08", "Break statements", J,
     "Method '{function}' uses 'break' at line {line}; put the exit "
     "condition in the loop header instead.",
     true},
    {"JV09", "Continue statements", J,
     "Method '{function}' uses 'continue' at line {line}; restructure the "
     "loop body with a conditional instead.",
     true},
    {"JV10", "Methods are limited to 30 statements", J,
     "Method '{function}' (line {line}) has {detail} statements; methods are "
     "limited to 30.",
     true},
    {"JV11", "\"instanceof\" operator", J,
     "Method '{function}' uses 'instanceof' at line {line}; rely on "
     "polymorphism instead.",
     true},
    {"JV12", "Ternary operator", J,
     "Method '{function}' uses the ternary operator at line {line}; use an "
     "if statement instead.",
     true},
    {"JV13", "Labeled statement", J,
     "Method '{function}' uses a labeled statement at line {line}.", true},
    {"JV14", "Lambda expressions", J,
     "Method '{function}' uses a lambda expression at line {line}.", true},
    {"JV15", "On-the-fly local variable declaration", J,
     "Method '{function}' declares local variable '{detail}' at line {line} "
     "after other statements; declare locals at the top of the method.",
     true},
    {"JV16", "\"if\" statement has block", J,
     "Method '{function}': the 'if' statement at line {line} needs braces "
     "around its body.",
     true},
    {"JV17", "\"while\" loop has block", J,
     "Method '{function}': the 'while' loop at line {line} needs braces "
     "around its body.",
     true},
    {"JV18", "\"for\" loop has block", J,
     "Method '{function}': the 'for' loop at line {line} needs braces around "
     "its body.",
     true},
    {"JV19", "C-style \"for\" loop is conventional", J,
     "Method '{function}': the 'for' loop at line {line} should declare its "
     "counter, test it with a comparison and step it with ++ or --.",
     true},
    {"JV20", "One local variable declared per line", J,
     "Method '{function}' declares several local variables in one statement "
     "at line {line}; declare one per line.",
     true},
}};

std::string render(std::string_view tmpl, const std::optional<std::string> &fn,
                   const std::optional<Span> &span, std::string_view detail) {
  std::string out;
  out.reserve(tmpl.size() + 16);
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i);
      auto key = tmpl.substr(i + 1, close - i - 1);
      if (key == "function")
        out += fn.value_or("<module>");
      else if (key == "line")
        out += span ? std::to_string(span->line_start) : "?";
      else if (key == "detail")
        out += detail;
      else
        out += tmpl.substr(i, close - i + 1);
      i = close + 1;
    } else {
      out += tmpl[i++];
    }
  }
  return out;
}

} // namespace

std::span<const RuleInfo> rule_catalog() { return kCatalog; }

std::span<const RuleInfo> rules_for(Language lang) {
  auto all = rule_catalog();
  return lang == Language::python ? all.first(16) : all.subspan(16);
}

const RuleInfo *find_rule(std::string_view code) {
  for (const auto &r : kCatalog)
    if (r.code == code)
      return &r;
  return nullptr;
}

Mistake make_mistake(const RuleInfo &rule,
                     std::optional<std::string> function_name,
                     std::optional<Span> span, std::string_view detail) {
  Mistake m;
  m.rule = &rule;
  m.message = render(rule.message_template, function_name, span, detail);
  m.function_name = std::move(function_name);
  m.span = span;
  return m;
}

Mistake make_mistake(std::string_view code,
                     std::optional<std::string> function_name,
                     std::optional<Span> span, std::string_view detail) {
  const RuleInfo *rule = find_rule(code);
  if (rule == nullptr)
    throw ContractViolation("unknown rule code " + std::string(code));
  return make_mistake(*rule, std::move(function_name), span, detail);
}

bool mistake_order(const Mistake &a, const Mistake &b) {
  if (a.span.has_value() != b.span.has_value())
    return !a.span.has_value();
  auto key = [](const Mistake &m) {
    std::uint32_t line = m.span ? m.span->line_start : 0;
    std::uint32_t col = m.span ? m.span->col_start : 0;
    return std::tuple(line, col, m.code(),
                      std::string_view(m.function_name ? *m.function_name : ""),
                      std::string_view(m.message));
  };
  return key(a) < key(b);
}

void sort_mistakes(std::vector<Mistake> &mistakes) {
  std::stable_sort(mistakes.begin(), mistakes.end(), mistake_order);
}

std::optional<long double> numeric_value(std::string_view literal,
                                         Language lang) {
  std::string digits;
  for (char c : literal)
    if (c != '_')
      digits += c;
  if (digits.empty())
    return std::nullopt;
  char last = digits.back();
  if (last == 'j' || last == 'J')
    return std::nullopt;
  bool is_hex = digits.size() > 1 && digits[0] == '0' &&
                (digits[1] == 'x' || digits[1] == 'X');
  if (!is_hex && (last == 'l' || last == 'L' || last == 'f' || last == 'F' ||
                  last == 'd' || last == 'D'))
    digits.pop_back();
  else if (is_hex && (last == 'l' || last == 'L'))
    digits.pop_back();

  auto parse_int = [](std::string_view text, int base)
      -> std::optional<long double> {
    if (text.empty())
      return std::nullopt;
    long double value = 0;
    for (char c : text) {
      int d = (c >= '0' && c <= '9')   ? c - '0'
              : (c >= 'a' && c <= 'f') ? c - 'a' + 10
              : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                       : 99;
      if (d >= base)
        return std::nullopt;
      value = value * base + d;
    }
    return value;
  };

  if (digits.size() > 1 && digits[0] == '0') {
    char p = digits[1];
    if (p == 'x' || p == 'X')
      return parse_int(std::string_view(digits).substr(2), 16);
    if (p == 'b' || p == 'B')
      return parse_int(std::string_view(digits).substr(2), 2);
    if (p == 'o' || p == 'O')
      return parse_int(std::string_view(digits).substr(2), 8);
    bool integral = digits.find_first_of(".eE") == std::string::npos;
    if (integral && lang == Language::java)
      return parse_int(std::string_view(digits).substr(1), 8);
  }
  char *end = nullptr;
  long double v = std::strtold(digits.c_str(), &end);
  if (end != digits.c_str() + digits.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

bool is_magic_number(std::string_view literal, bool negated, Language lang) {
  auto v = numeric_value(literal, lang);
  if (!v)
    return true;
  long double x = negated ? -*v : *v;
  return !(x == -1 || x == 0 || x == 1 || x == 2);
}

bool is_all_caps(std::string_view name) {
  if (name.empty())
    return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string catalog_json(std::optional<Language> lang, int indent) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto &r : rule_catalog()) {
    if (lang && r.language != *lang)
      continue;
    nlohmann::ordered_json j;
    j["code"] = r.code;
    j["title"] = r.title;
    j["language"] = to_string(r.language);
    j["message_template"] = r.message_template;
    arr.push_back(std::move(j));
  }
  return arr.dump(indent);
}

} // namespace design_tutor
