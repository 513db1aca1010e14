#include "design_tutor/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

namespace design_tutor {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

GroupStats make_group(std::string label, std::size_t n_programs,
                      std::size_t n_mistakes) {
  if (n_programs == 0)
    throw StatsError("group '" + label + "' has no programs");
  GroupStats g;
  g.label = std::move(label);
  g.n_programs = n_programs;
  g.n_mistakes = n_mistakes;
  g.rate = static_cast<double>(n_mistakes) / static_cast<double>(n_programs);
  return g;
}

GroupStats group_stats(std::span<const Report> reports, std::string label) {
  if (reports.empty())
    throw StatsError("no reports for group '" + label + "'");
  std::size_t mistakes = 0;
  for (const auto &r : reports) {
    if (!r.parse_ok)
      throw StatsError("unparseable report " + r.source_name + " in group '" +
                       label + "'");
    mistakes += r.total();
  }
  return make_group(std::move(label), reports.size(), mistakes);
}

GroupStats pooled_baseline(std::span<const GroupStats> groups,
                           std::string label) {
  if (groups.empty())
    throw StatsError("cannot pool an empty set of groups");
  double weighted = 0.0;
  std::size_t programs = 0;
  std::size_t mistakes = 0;
  for (const auto &g : groups) {
    if (g.n_programs == 0)
      throw StatsError("group '" + g.label + "' has no programs");
    double m = static_cast<double>(g.n_programs) * g.rate;
    weighted += m;
    programs += g.n_programs;
    mistakes += static_cast<std::size_t>(std::llround(m));
  }
  if (groups.size() == 1 && label == "baseline")
    label = groups.front().label;
  GroupStats out;
  out.label = std::move(label);
  out.n_programs = programs;
  out.n_mistakes = mistakes;
  out.rate = weighted / static_cast<double>(programs);
  return out;
}

double drop_pct(const GroupStats &baseline, const GroupStats &treatment) {
  if (!(baseline.rate > 0.0))
    throw StatsError("baseline rate must be positive to compute a drop");
  return 100.0 * (baseline.rate - treatment.rate) / baseline.rate;
}

double average_drop(std::span<const double> drops) {
  if (drops.empty())
    throw StatsError("average of no drops");
  double sum = 0.0;
  for (double d : drops)
    sum += d;
  return sum / static_cast<double>(drops.size());
}

namespace {

double log_binom_pmf(std::uint64_t k, std::uint64_t n, double log_p,
                     double log_q) {
  auto kd = static_cast<double>(k);
  auto nd = static_cast<double>(n);
  double c = std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1);
  // 0 * log(0) terms vanish
  double a = k == 0 ? 0.0 : kd * log_p;
  double b = k == n ? 0.0 : (nd - kd) * log_q;
  return c + a + b;
}

// log of sum exp(v) over v in [lo, hi] of the pmf.
double log_tail(std::uint64_t lo, std::uint64_t hi, std::uint64_t n,
                double log_p, double log_q) {
  double peak = -std::numeric_limits<double>::infinity();
  for (auto k = lo; k <= hi; ++k)
    peak = std::max(peak, log_binom_pmf(k, n, log_p, log_q));
  if (std::isinf(peak))
    return peak;
  double sum = 0.0;
  for (auto k = lo; k <= hi; ++k)
    sum += std::exp(log_binom_pmf(k, n, log_p, log_q) - peak);
  return peak + std::log(sum);
}

} // namespace

double poisson_two_sample(std::uint64_t x1, double t1, std::uint64_t x2,
                          double t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0) || !std::isfinite(t1) || !std::isfinite(t2))
    throw ContractViolation("poisson_two_sample: exposures must be positive");
  std::uint64_t n = x1 + x2;
  if (n == 0)
    return 1.0;
  double p = t1 / (t1 + t2);
  double log_p = std::log(p);
  double log_q = std::log1p(-p);
  double lower = std::exp(log_tail(0, x1, n, log_p, log_q));
  double upper = std::exp(log_tail(x1, n, n, log_p, log_q));
  return std::clamp(2.0 * std::min(lower, upper), 0.0, 1.0);
}

ComparisonResult compare_groups(GroupStats baseline, GroupStats treatment) {
  ComparisonResult r;
  if (baseline.rate == 0.0 && treatment.rate == 0.0)
    r.drop_pct = 0.0;
  else
    r.drop_pct = drop_pct(baseline, treatment);
  r.p_value = poisson_two_sample(baseline.n_mistakes,
                                 static_cast<double>(baseline.n_programs),
                                 treatment.n_mistakes,
                                 static_cast<double>(treatment.n_programs));
  r.baseline = std::move(baseline);
  r.treatment = std::move(treatment);
  return r;
}

std::vector<fs::path> collect_sources(const fs::path &dir, Language lang) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw StatsError("not a directory: " + dir.string());
  std::string_view ext = lang == Language::python ? ".py" : ".java";
  std::vector<fs::path> out;
  for (const auto &entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext)
      out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Report> lint_files(std::span<const fs::path> files, Language lang,
                               const LintOptions &options) {
  std::vector<Report> reports(files.size());
  std::vector<std::string> errors(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < files.size(); i = next++) {
      try {
        auto source = read_text_file(files[i].string());
        reports[i] = lint(source, lang, options, files[i].string());
      } catch (const std::exception &e) {
        errors[i] = e.what();
      }
    }
  };
  auto n_threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(),
                                           1, std::max<std::size_t>(files.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto &t : pool)
    t.join();
  for (const auto &e : errors)
    if (!e.empty())
      throw std::runtime_error(e);
  return reports;
}

namespace {

std::string dir_label(const fs::path &dir) {
  auto name = dir.filename().string();
  if (name.empty())
    name = dir.parent_path().filename().string();
  return name.empty() ? dir.string() : name;
}

} // namespace

std::optional<GroupStats> directory_group(const fs::path &dir, Language lang,
                                          const LintOptions &options,
                                          std::size_t &excluded) {
  auto files = collect_sources(dir, lang);
  auto reports = lint_files(files, lang, options);
  std::vector<Report> ok;
  for (auto &r : reports) {
    if (r.parse_ok)
      ok.push_back(std::move(r));
    else
      ++excluded;
  }
  if (ok.empty())
    return std::nullopt;
  return group_stats(ok, dir_label(dir));
}

ComparisonResult run_corpus(std::span<const fs::path> baseline_dirs,
                            const fs::path &treatment_dir, Language lang,
                            const LintOptions &options) {
  if (baseline_dirs.empty())
    throw StatsError("no baseline directories");
  std::size_t excluded = 0;
  std::vector<GroupStats> groups;
  for (const auto &dir : baseline_dirs)
    if (auto g = directory_group(dir, lang, options, excluded))
      groups.push_back(std::move(*g));
  if (groups.empty())
    throw StatsError("no parseable baseline programs");
  auto treated = directory_group(treatment_dir, lang, options, excluded);
  if (!treated)
    throw StatsError("no parseable treatment programs");

  auto result = compare_groups(pooled_baseline(groups), std::move(*treated));
  result.excluded = excluded;
  return result;
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

std::size_t parse_count(const std::string &field, std::size_t line_no) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (field.empty() || field.front() == '-')
      throw std::invalid_argument(field);
    v = std::stoull(field, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (pos == 0 || pos != field.size())
    throw StatsError("line " + std::to_string(line_no) +
                     ": expected a non-negative integer, got '" + field + "'");
  return static_cast<std::size_t>(v);
}

} // namespace

std::vector<GroupStats> read_groups_csv(std::string_view text) {
  std::vector<GroupStats> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool has_rate = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      bool ok = fields.size() >= 3 && fields[0] == "label" &&
                fields[1] == "n_programs" && fields[2] == "n_mistakes" &&
                (fields.size() == 3 || (fields.size() == 4 && fields[3] == "rate"));
      if (!ok)
        throw StatsError("expected header label,n_programs,n_mistakes[,rate]");
      has_rate = fields.size() == 4;
      have_header = true;
      continue;
    }
    std::size_t want = has_rate ? 4 : 3;
    if (fields.size() != want)
      throw StatsError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(want) + " fields");
    auto g = make_group(fields[0], parse_count(fields[1], line_no),
                        parse_count(fields[2], line_no));
    if (has_rate && !fields[3].empty()) {
      char *end = nullptr;
      double rate = std::strtod(fields[3].c_str(), &end);
      if (end != fields[3].c_str() + fields[3].size() || !(rate >= 0.0) ||
          !std::isfinite(rate))
        throw StatsError("line " + std::to_string(line_no) +
                         ": invalid rate '" + fields[3] + "'");
      g.rate = rate;
    }
    out.push_back(std::move(g));
  }
  if (!have_header)
    throw StatsError("empty CSV");
  return out;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string format_p(double p) {
  char buf[64];
  if (p != 0.0 && p < 1e-4)
    std::snprintf(buf, sizeof buf, "%.3e", p);
  else
    std::snprintf(buf, sizeof buf, "%.4f", p);
  return buf;
}

ordered_json group_json(const GroupStats &g) {
  ordered_json j;
  j["label"] = g.label;
  j["n_programs"] = g.n_programs;
  j["n_mistakes"] = g.n_mistakes;
  j["rate"] = g.rate;
  return j;
}

} // namespace

std::string render_comparison_text(const ComparisonResult &r) {
  std::string out;
  auto row = [&](std::string_view side, const GroupStats &g) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-10s %-20s %8zu %8zu %8s\n",
                  std::string(side).c_str(), g.label.c_str(), g.n_programs,
                  g.n_mistakes, fixed(g.rate, 2).c_str());
    out += buf;
  };
  char head[256];
  std::snprintf(head, sizeof head, "%-10s %-20s %8s %8s %8s\n", "group",
                "label", "programs", "mistakes", "rate");
  out += head;
  row("baseline", r.baseline);
  row("treatment", r.treatment);
  out += "drop: " + fixed(r.drop_pct, 2) + "%\n";
  out += "p-value: " + format_p(r.p_value) + "\n";
  out += "excluded: " + std::to_string(r.excluded) + "\n";
  return out;
}

std::string render_comparison_json(const ComparisonResult &r, int indent) {
  ordered_json j;
  j["baseline"] = group_json(r.baseline);
  j["treatment"] = group_json(r.treatment);
  j["drop_pct"] = r.drop_pct;
  j["p_value"] = r.p_value;
  j["excluded"] = r.excluded;
  return j.dump(indent, ' ', false, ordered_json::error_handler_t::replace);
}

} // namespace design_tutor
