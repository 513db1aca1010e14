#pragma once

#include "design_tutor/rules.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace design_tutor {

/// Lint result for one source file.
struct Report {
  std::string source_name;
  Language language = Language::python;
  bool parse_ok = false;
  std::optional<std::string> parse_error;
  std::vector<Mistake> mistakes;
  /// Every rule of the language, including zero counts.
  std::map<std::string, std::size_t, std::less<>> counts;

  std::size_t total() const { return mistakes.size(); }
};

struct LintOptions {
  std::set<std::string, std::less<>> disabled_rules;
  java_rules::Options java;
};

/// Parses `source` with the frontend for `lang` and evaluates every enabled
/// rule. Never throws for user input: parse failures land in the Report.
Report lint(std::string_view source, Language lang,
            const LintOptions &options = {}, std::string source_name = {});

/// `<source>:<line>: [<code>] <message>` per mistake (program-level ones
/// omit the line), then a summary line.
std::string render_text(const Report &report);

/// {source, language, parse_ok, parse_error, mistakes:[{rule, title,
/// function, line, col, message}], counts}
std::string render_json(const Report &report, int indent = -1);

class ReportFormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Inverse of render_json. Spans come back as points (line, col).
Report report_from_json(std::string_view json);

/// Whole file as bytes. Throws std::runtime_error when it cannot be read.
std::string read_text_file(const std::string &path);

} // namespace design_tutor
