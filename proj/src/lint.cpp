#include "design_tutor/lint.hpp"

#include "design_tutor/frontend.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace design_tutor {

using ordered_json = nlohmann::ordered_json;

Report lint(std::string_view source, Language lang, const LintOptions &options,
            std::string source_name) {
  Report report;
  report.source_name = source_name;
  report.language = lang;
  for (const auto &rule : rules_for(lang))
    report.counts.emplace(std::string(rule.code), 0);

  auto parsed_program = parse(lang, source, std::move(source_name));
  if (auto *failure = std::get_if<ParseFailure>(&parsed_program)) {
    report.parse_ok = false;
    report.parse_error = failure->describe();
    return report;
  }
  const auto &program = std::get<Program>(parsed_program);
  report.parse_ok = true;

  auto all = lang == Language::python
                 ? python_rules::check_all(program)
                 : java_rules::check_all(program, options.java);
  for (auto &m : all) {
    if (options.disabled_rules.contains(m.code()))
      continue;
    ++report.counts[std::string(m.code())];
    report.mistakes.push_back(std::move(m));
  }
  sort_mistakes(report.mistakes);
  return report;
}

std::string render_text(const Report &report) {
  std::string out;
  if (!report.parse_ok) {
    out += "parse error: ";
    if (!report.source_name.empty())
      out += report.source_name + ":";
    out += report.parse_error.value_or("unknown error");
    out += '\n';
    return out;
  }
  for (const auto &m : report.mistakes) {
    out += report.source_name;
    if (m.span)
      out += ":" + std::to_string(m.span->line_start);
    out += ": [";
    out += m.code();
    out += "] ";
    out += m.message;
    out += '\n';
  }
  auto n = report.mistakes.size();
  out += std::to_string(n) + (n == 1 ? " mistake\n" : " mistakes\n");
  return out;
}

std::string render_json(const Report &report, int indent) {
  ordered_json j;
  j["source"] = report.source_name;
  j["language"] = to_string(report.language);
  j["parse_ok"] = report.parse_ok;
  j["parse_error"] = report.parse_error ? ordered_json(*report.parse_error)
                                        : ordered_json(nullptr);
  auto mistakes = ordered_json::array();
  for (const auto &m : report.mistakes) {
    ordered_json e;
    e["rule"] = m.code();
    e["title"] = m.rule->title;
    e["function"] =
        m.function_name ? ordered_json(*m.function_name) : ordered_json(nullptr);
    e["line"] = m.span ? ordered_json(m.span->line_start) : ordered_json(nullptr);
    e["col"] = m.span ? ordered_json(m.span->col_start) : ordered_json(nullptr);
    e["message"] = m.message;
    mistakes.push_back(std::move(e));
  }
  j["mistakes"] = std::move(mistakes);
  auto counts = ordered_json::object();
  for (const auto &[code, n] : report.counts)
    counts[code] = n;
  j["counts"] = std::move(counts);
  return j.dump(indent, ' ', false, ordered_json::error_handler_t::replace);
}

Report report_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ReportFormatError(std::string("malformed report JSON: ") + e.what());
  }
  try {
    Report r;
    r.source_name = j.at("source").get<std::string>();
    auto lang = parse_language(j.at("language").get<std::string>());
    if (!lang)
      throw ReportFormatError("unknown language in report");
    r.language = *lang;
    r.parse_ok = j.at("parse_ok").get<bool>();
    if (!j.at("parse_error").is_null())
      r.parse_error = j.at("parse_error").get<std::string>();
    for (const auto &e : j.at("mistakes")) {
      Mistake m;
      auto code = e.at("rule").get<std::string>();
      m.rule = find_rule(code);
      if (m.rule == nullptr)
        throw ReportFormatError("unknown rule code " + code);
      if (!e.at("function").is_null())
        m.function_name = e.at("function").get<std::string>();
      if (!e.at("line").is_null()) {
        auto line = e.at("line").get<std::uint32_t>();
        auto col = e.at("col").get<std::uint32_t>();
        m.span = Span{line, col, line, col};
      }
      m.message = e.at("message").get<std::string>();
      r.mistakes.push_back(std::move(m));
    }
    for (const auto &[code, n] : j.at("counts").items())
      r.counts[code] = n.get<std::size_t>();
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw ReportFormatError(std::string("invalid report JSON: ") + e.what());
  }
}

std::string read_text_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw std::runtime_error("cannot read " + path);
  return buf.str();
}

} // namespace design_tutor
