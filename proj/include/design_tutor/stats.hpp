#pragma once

#include "design_tutor/lint.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace design_tutor {

class StatsError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Mistakes per program for one group of submissions (one assignment-year).
struct GroupStats {
  std::string label;
  std::size_t n_programs = 0;
  std::size_t n_mistakes = 0;
  double rate = 0.0;
};

struct ComparisonResult {
  GroupStats baseline;
  GroupStats treatment;
  double drop_pct = 0.0;
  double p_value = 1.0;
  /// Files that failed to parse and were left out of both groups.
  std::size_t excluded = 0;
};

/// rate = n_mistakes / n_programs. Throws StatsError when n_programs is 0.
GroupStats make_group(std::string label, std::size_t n_programs,
                      std::size_t n_mistakes);

/// Reports must all have parsed. Throws StatsError on empty input or on a
/// report with parse_ok == false.
GroupStats group_stats(std::span<const Report> reports, std::string label);

/// Program-weighted mean of the group rates. n_mistakes is the sum of the
/// rounded per-group n * rate, so groups with a stated rate keep it.
GroupStats pooled_baseline(std::span<const GroupStats> groups,
                           std::string label = "baseline");

/// Percentage drop from baseline to treatment rate. Throws StatsError when
/// the baseline rate is not positive.
double drop_pct(const GroupStats &baseline, const GroupStats &treatment);

double average_drop(std::span<const double> drops);

/// Two-sided exact conditional test for equal Poisson rates: given
/// n = x1 + x2, X1 ~ Binomial(n, t1 / (t1 + t2)). Returns twice the smaller
/// tail probability of x1, capped at 1. Throws ContractViolation unless both
/// exposures are positive and finite.
double poisson_two_sample(std::uint64_t x1, double t1, std::uint64_t x2,
                          double t2);

/// drop_pct and p_value for two groups. Two zero rates compare as a 0% drop.
ComparisonResult compare_groups(GroupStats baseline, GroupStats treatment);

/// Source files of `lang` under `dir`, recursively, sorted by path.
std::vector<std::filesystem::path>
collect_sources(const std::filesystem::path &dir, Language lang);

/// Lints every file in `files`. Order of the result matches the input.
std::vector<Report> lint_files(std::span<const std::filesystem::path> files,
                               Language lang, const LintOptions &options);

/// Group of the parseable files under `dir`, labelled with the directory
/// name, or nullopt when none parse. Adds unparseable files to `excluded`.
std::optional<GroupStats> directory_group(const std::filesystem::path &dir,
                                          Language lang,
                                          const LintOptions &options,
                                          std::size_t &excluded);

/// Lints both sides, drops unparseable files, pools the baseline
/// directories and compares. Throws StatsError when a side has no
/// parseable file.
ComparisonResult run_corpus(std::span<const std::filesystem::path> baseline_dirs,
                            const std::filesystem::path &treatment_dir,
                            Language lang, const LintOptions &options = {});

/// Pre-counted groups. Header `label,n_programs,n_mistakes` with an
/// optional trailing `rate` column; a given rate overrides the count ratio.
std::vector<GroupStats> read_groups_csv(std::string_view text);

std::string render_comparison_text(const ComparisonResult &result);
std::string render_comparison_json(const ComparisonResult &result,
                                   int indent = -1);

} // namespace design_tutor
