#include "fixtures.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fixtures {

namespace fs = std::filesystem;
using namespace design_tutor;

namespace {

std::string_view strip_comment(std::string_view line) {
  for (std::string_view lead : {"#", "//"})
    if (line.substr(0, lead.size()) == lead)
      return line.substr(lead.size());
  return {};
}

std::vector<Expectation> parse_expect(std::string_view body,
                                      const fs::path &path) {
  std::istringstream words{std::string(body)};
  std::string w;
  std::vector<Expectation> out;
  while (words >> w) {
    if (w == "none")
      continue;
    Expectation e;
    auto at = w.find('@');
    e.code = w.substr(0, at);
    if (at != std::string::npos)
      e.line = static_cast<std::uint32_t>(std::stoul(w.substr(at + 1)));
    if (find_rule(e.code) == nullptr)
      throw std::runtime_error(path.string() + ": unknown code " + e.code);
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

std::vector<Fixture> load_all(const fs::path &dir) {
  std::vector<Fixture> out;
  std::vector<fs::path> paths;
  for (const auto &entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() &&
        (entry.path().extension() == ".py" || entry.path().extension() == ".java"))
      paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  for (const auto &path : paths) {
    Fixture f;
    f.path = path;
    f.language = path.extension() == ".py" ? Language::python : Language::java;
    auto stem = path.stem().string();
    auto first = stem.find('_');
    auto second = stem.find('_', first + 1);
    if (first == std::string::npos || second == std::string::npos)
      throw std::runtime_error("bad fixture name " + path.string());
    f.target = stem.substr(0, first);
    auto kind = stem.substr(first + 1, second - first - 1);
    if (kind != "pos" && kind != "neg")
      throw std::runtime_error("bad fixture name " + path.string());
    f.positive = kind == "pos";
    f.source = read_text_file(path.string());

    std::istringstream lines(f.source);
    std::string line;
    std::getline(lines, line);
    auto body = strip_comment(line);
    const std::string_view key = " expect:";
    if (body.substr(0, key.size()) != key)
      throw std::runtime_error(path.string() + ": missing expect line");
    f.expected = parse_expect(body.substr(key.size()), path);
    if (std::getline(lines, line)) {
      auto opt = strip_comment(line);
      f.nested_classes = opt.find("options: nested") != std::string_view::npos;
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Expectation> observed(const Report &report) {
  std::vector<Expectation> out;
  for (const auto &m : report.mistakes)
    out.push_back({std::string(m.code()), m.span ? m.span->line_start : 0});
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const std::vector<Expectation> &es) {
  std::string s;
  for (const auto &e : es) {
    if (!s.empty())
      s += ' ';
    s += e.code;
    if (e.line != 0)
      s += "@" + std::to_string(e.line);
  }
  return s.empty() ? "none" : s;
}

std::string check(const Fixture &f) {
  LintOptions options;
  options.java.include_nested_classes = f.nested_classes;
  auto report = lint(f.source, f.language, options, f.path.string());
  if (!report.parse_ok)
    return "parse error: " + report.parse_error.value_or("");
  auto got = observed(report);
  bool has_target = std::any_of(got.begin(), got.end(), [&](const auto &e) {
    return e.code == f.target;
  });
  if (has_target != f.positive)
    return std::string("target rule ") + f.target +
           (f.positive ? " missing" : " present");
  if (got != f.expected)
    return "expected " + to_string(f.expected) + ", got " + to_string(got);
  return {};
}

} // namespace fixtures
