#include "design_tutor/cli.hpp"

#include "design_tutor/lint.hpp"
#include "design_tutor/stats.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <ostream>

namespace design_tutor::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Language require_language(const std::string &text) {
  auto lang = parse_language(text);
  if (!lang)
    throw UsageError("unknown language '" + text + "'");
  return *lang;
}

std::optional<Language> language_of_extension(const fs::path &p) {
  auto ext = p.extension();
  if (ext == ".py")
    return Language::python;
  if (ext == ".java")
    return Language::java;
  return std::nullopt;
}

Language infer_language(const std::vector<std::string> &files) {
  std::optional<Language> lang;
  for (const auto &f : files) {
    auto l = language_of_extension(f);
    if (!l || (lang && *lang != *l))
      throw UsageError("--lang is required unless all files are .py or all "
                       "are .java");
    lang = l;
  }
  return *lang;
}

struct LintArgs {
  std::string lang;
  std::string format = "text";
  std::vector<std::string> disable;
  bool nested_classes = false;
  std::vector<std::string> files;
};

int run_lint(const LintArgs &a, std::ostream &out, std::ostream &err) {
  Language lang = a.lang.empty() ? infer_language(a.files)
                                 : require_language(a.lang);
  LintOptions options;
  options.java.include_nested_classes = a.nested_classes;
  for (const auto &code : a.disable) {
    if (find_rule(code) == nullptr)
      throw UsageError("unknown rule code '" + code + "'");
    options.disabled_rules.insert(code);
  }

  bool any_mistakes = false;
  bool any_error = false;
  for (const auto &file : a.files) {
    std::string source;
    try {
      source = read_text_file(file);
    } catch (const std::exception &e) {
      err << "error: " << e.what() << '\n';
      any_error = true;
      continue;
    }
    auto report = lint(source, lang, options, file);
    if (!report.parse_ok)
      any_error = true;
    if (!report.mistakes.empty())
      any_mistakes = true;
    if (a.format == "json")
      out << render_json(report) << '\n';
    else
      out << render_text(report);
  }
  if (any_error)
    return kExitError;
  return any_mistakes ? kExitMistakes : kExitClean;
}

int run_rules(const std::string &lang_text, const std::string &format,
              std::ostream &out) {
  std::optional<Language> lang;
  if (!lang_text.empty())
    lang = require_language(lang_text);
  if (format == "json") {
    out << catalog_json(lang, 2) << '\n';
    return kExitClean;
  }
  for (const auto &rule : rule_catalog()) {
    if (lang && rule.language != *lang)
      continue;
    out << rule.code << "  " << rule.title << '\n';
  }
  return kExitClean;
}

bool is_csv(const std::string &p) { return fs::path(p).extension() == ".csv"; }

struct StatsArgs {
  std::vector<std::string> baseline;
  std::string treatment;
  std::string lang;
  std::string format = "text";
  std::vector<std::string> disable;
};

// Groups from one --baseline or --treatment argument.
std::vector<GroupStats> load_groups(const std::string &arg,
                                    const std::optional<Language> &lang,
                                    const LintOptions &options,
                                    std::size_t &excluded) {
  if (is_csv(arg))
    return read_groups_csv(read_text_file(arg));
  if (!lang)
    throw UsageError("--lang is required when linting directories");
  if (!fs::is_directory(arg))
    throw UsageError("not a directory or .csv file: " + arg);
  auto g = directory_group(arg, *lang, options, excluded);
  if (!g)
    return {};
  return {std::move(*g)};
}

int run_stats(const StatsArgs &a, std::ostream &out) {
  std::optional<Language> lang;
  if (!a.lang.empty())
    lang = require_language(a.lang);
  LintOptions options;
  for (const auto &code : a.disable) {
    if (find_rule(code) == nullptr)
      throw UsageError("unknown rule code '" + code + "'");
    options.disabled_rules.insert(code);
  }
  std::size_t excluded = 0;
  std::vector<GroupStats> base;
  for (const auto &b : a.baseline)
    for (auto &g : load_groups(b, lang, options, excluded))
      base.push_back(std::move(g));
  auto treated = load_groups(a.treatment, lang, options, excluded);
  if (base.empty())
    throw StatsError("no parseable baseline programs");
  if (treated.empty())
    throw StatsError("no parseable treatment programs");
  auto treatment = pooled_baseline(treated, "treatment");
  if (treated.size() == 1)
    treatment.label = treated.front().label;
  auto result = compare_groups(pooled_baseline(base), std::move(treatment));
  result.excluded = excluded;
  if (a.format == "json")
    out << render_comparison_json(result, 2) << '\n';
  else
    out << render_comparison_text(result);
  return kExitClean;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Design-quality feedback for student Python and Java programs",
               "design_tutor"};
  app.require_subcommand(1);
  const std::vector<std::string> formats{"text", "json"};

  LintArgs lint_args;
  auto *lint_cmd = app.add_subcommand("lint", "Lint source files");
  lint_cmd->add_option("--lang", lint_args.lang, "python or java");
  lint_cmd->add_option("--format", lint_args.format, "text or json")
      ->check(CLI::IsMember(formats));
  lint_cmd->add_option("--disable", lint_args.disable, "Rule code to skip")
      ->allow_extra_args(false);
  lint_cmd->add_flag("--include-nested-classes", lint_args.nested_classes,
                     "Also check nested, local and anonymous Java classes");
  lint_cmd->add_option("files", lint_args.files, "Source files")->required();

  std::string rules_lang, rules_format = "text";
  auto *rules_cmd = app.add_subcommand("rules", "List the rule catalog");
  rules_cmd->add_option("--lang", rules_lang, "python or java");
  rules_cmd->add_option("--format", rules_format, "text or json")
      ->check(CLI::IsMember(formats));

  StatsArgs stats_args;
  auto *stats_cmd =
      app.add_subcommand("stats", "Compare mistake rates of two corpora");
  stats_cmd->add_option("--baseline", stats_args.baseline,
                        "Baseline directory or CSV, repeatable")
      ->required();
  stats_cmd->add_option("--treatment", stats_args.treatment,
                        "Treatment directory or CSV")
      ->required();
  stats_cmd->add_option("--lang", stats_args.lang, "python or java");
  stats_cmd->add_option("--format", stats_args.format, "text or json")
      ->check(CLI::IsMember(formats));
  stats_cmd->add_option("--disable", stats_args.disable, "Rule code to skip")
      ->allow_extra_args(false);

  std::vector<const char *> argv{"design_tutor"};
  for (const auto &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitClean : kExitError;
  }

  try {
    if (lint_cmd->parsed())
      return run_lint(lint_args, out, err);
    if (rules_cmd->parsed())
      return run_rules(rules_lang, rules_format, out);
    return run_stats(stats_args, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

} // namespace design_tutor::cli
