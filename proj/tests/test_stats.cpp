#include "design_tutor/stats.hpp"

#include <doctest.h>
#include <json.hpp>

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace design_tutor;
namespace fs = std::filesystem;

namespace {

// Two-sided p from Boost's binomial distribution.
double boost_p(std::uint64_t x1, double t1, std::uint64_t x2, double t2) {
  std::uint64_t n = x1 + x2;
  if (n == 0)
    return 1.0;
  boost::math::binomial_distribution<double> b(static_cast<double>(n), t1 / (t1 + t2));
  double lower = boost::math::cdf(b, static_cast<double>(x1));
  double upper = x1 == 0 ? 1.0
                         : boost::math::cdf(boost::math::complement(
                               b, static_cast<double>(x1 - 1)));
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

GroupStats rated(std::string label, std::size_t n, std::size_t mistakes, double rate) {
  auto g = make_group(std::move(label), n, mistakes);
  g.rate = rate;
  return g;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string &name)
      : path(fs::temp_directory_path() / ("dt_stats_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string &rel, const std::string &text) const {
    auto p = path / rel;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
};

const char *kMessy = "def record_score(h_won):\n   global human_score\n"
                     "   global comp_score\n   if h_won:\n      human_score += 1\n"
                     "   else:\n      comp_score += 1\n";
const char *kClean = "def main():\n    record_score(True)\n\n"
                     "def record_score(h_won):\n    print(h_won)\n\nmain()\n";

} // namespace

TEST_CASE("group statistics") {
  auto balloon = make_group("Balloon 2020-2021", 101, 416);
  CHECK(balloon.rate == doctest::Approx(4.12).epsilon(0.001));
  CHECK(std::round(balloon.rate * 100) / 100 == 4.12);
  CHECK(make_group("x", 10, 0).rate == 0.0);
  CHECK(std::round(make_group("b", 29, 74).rate * 100) / 100 == 2.55);
  CHECK_THROWS_AS(make_group("none", 0, 0), StatsError);

  std::vector<Report> reports(3);
  for (auto &r : reports)
    r.parse_ok = true;
  reports[0].mistakes.push_back(make_mistake("PY01", "f", Span{1, 1, 1, 2}));
  reports[2].mistakes.push_back(make_mistake("PY05", std::nullopt, std::nullopt));
  reports[2].mistakes.push_back(make_mistake("PY06", std::nullopt, std::nullopt));
  auto g = group_stats(reports, "g");
  CHECK(g.label == "g");
  CHECK(g.n_programs == 3);
  CHECK(g.n_mistakes == 3);
  CHECK(g.rate == 1.0);
  CHECK_THROWS_AS(group_stats({}, "empty"), StatsError);
  reports[1].parse_ok = false;
  CHECK_THROWS_AS(group_stats(reports, "bad"), StatsError);
}

TEST_CASE("union of groups adds mistakes") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Report> a(1 + rng() % 6), b(1 + rng() % 6);
    for (auto *side : {&a, &b})
      for (auto &r : *side) {
        r.parse_ok = true;
        for (std::size_t k = rng() % 5; k > 0; --k)
          r.mistakes.push_back(make_mistake("PY04", "f", Span{1, 1, 1, 5}));
      }
    std::vector<Report> both = a;
    both.insert(both.end(), b.begin(), b.end());
    CHECK(group_stats(both, "ab").n_mistakes ==
          group_stats(a, "a").n_mistakes + group_stats(b, "b").n_mistakes);
  }
}

TEST_CASE("baseline pooling") {
  std::vector<GroupStats> rps{rated("2018", 68, 388, 4.57), rated("2019", 74, 463, 3.85),
                              rated("2020", 70, 210, 3.30)};
  auto pooled = pooled_baseline(rps);
  CHECK(pooled.label == "baseline");
  CHECK(pooled.n_programs == 212);
  CHECK(pooled.n_mistakes == 311 + 285 + 231);
  CHECK(std::round(pooled.rate * 100) / 100 == 3.90);
  CHECK(pooled.rate == doctest::Approx(826.66 / 212).epsilon(1e-12));

  std::vector<GroupStats> craps{rated("2018", 65, 388, 6.0), rated("2019", 78, 463, 5.94),
                                rated("2020", 42, 210, 5.00)};
  CHECK(std::round(pooled_baseline(craps).rate * 100) / 100 == 5.75);

  std::vector<GroupStats> one{make_group("solo", 7, 3)};
  auto same = pooled_baseline(one);
  CHECK(same.label == "solo");
  CHECK(same.n_programs == 7);
  CHECK(same.n_mistakes == 3);
  CHECK(same.rate == one[0].rate);
  CHECK(pooled_baseline(one, "named").label == "named");
  CHECK_THROWS_AS(pooled_baseline({}), StatsError);
}

TEST_CASE("drops") {
  auto car = drop_pct(rated("b", 138, 104, 1.33), rated("t", 30, 8, 0.27));
  CHECK(car == doctest::Approx(79.70).epsilon(0.0001));
  auto balloon = drop_pct(rated("b", 101, 416, 4.12), rated("t", 29, 74, 2.55));
  CHECK(balloon == doctest::Approx(38.11).epsilon(0.0001));
  CHECK(drop_pct(make_group("a", 5, 10), make_group("b", 5, 10)) == 0.0);
  CHECK(drop_pct(make_group("a", 5, 10), make_group("b", 5, 20)) == -100.0);
  CHECK_THROWS_AS(drop_pct(make_group("a", 5, 0), make_group("b", 5, 1)), StatsError);

  std::vector<double> published{32.31, 41.23, 79.70, 38.11};
  CHECK(std::abs(average_drop(published) - 47.84) <= 0.01);
  std::vector<double> single{12.5};
  CHECK(average_drop(single) == 12.5);
  std::vector<double> zeros{0.0, 0.0};
  CHECK(average_drop(zeros) == 0.0);
  CHECK_THROWS_AS(average_drop({}), StatsError);
}

TEST_CASE("drop is scale invariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rate(0.01, 20.0), scale(0.001, 1000.0);
  for (int i = 0; i < 500; ++i) {
    double rb = rate(rng), rt = rate(rng), c = scale(rng);
    auto d1 = drop_pct(rated("b", 10, 1, rb), rated("t", 10, 1, rt));
    auto d2 = drop_pct(rated("b", 10, 1, rb * c), rated("t", 10, 1, rt * c));
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-9));
  }
}

TEST_CASE("poisson test: frozen reference values") {
  struct Case {
    std::uint64_t x1;
    double t1;
    std::uint64_t x2;
    double t2;
    double p;
  };
  const Case cases[] = {
      {827, 212, 145, 55, 6.764060019866335e-06},
      {416, 101, 74, 29, 8.272238335990803e-05},
      {104, 138, 8, 30, 0.0019121165779362546},
      {10, 10, 10, 10, 1.0},
      {3, 2, 9, 5, 1.0},
      {0, 1, 5, 1, 0.0625},
  };
  for (const Case &c : cases) {
    CAPTURE(c.x1);
    CAPTURE(c.x2);
    CHECK(poisson_two_sample(c.x1, c.t1, c.x2, c.t2) ==
          doctest::Approx(c.p).epsilon(1e-9));
  }
  CHECK(poisson_two_sample(416, 101, 74, 29) < 0.001);
  CHECK(poisson_two_sample(0, 10, 0, 10) == 1.0);
}

TEST_CASE("poisson test agrees with a binomial oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> count(0, 400);
  std::uniform_real_distribution<double> exposure(0.5, 300.0);
  for (int i = 0; i < 2000; ++i) {
    auto x1 = count(rng), x2 = count(rng);
    double t1 = exposure(rng), t2 = exposure(rng);
    double want = boost_p(x1, t1, x2, t2);
    double got = poisson_two_sample(x1, t1, x2, t2);
    CAPTURE(x1);
    CAPTURE(x2);
    CAPTURE(t1);
    CAPTURE(t2);
    if (want > 1e-280)
      CHECK(got == doctest::Approx(want).epsilon(1e-8));
    else
      CHECK(got < 1e-270);
  }
}

TEST_CASE("poisson test properties") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::uint64_t> count(0, 300);
  std::uniform_real_distribution<double> exposure(1.0, 200.0);
  for (int i = 0; i < 500; ++i) {
    auto x1 = count(rng), x2 = count(rng);
    double t1 = exposure(rng), t2 = exposure(rng);
    double p = poisson_two_sample(x1, t1, x2, t2);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p == doctest::Approx(poisson_two_sample(x2, t2, x1, t1)).epsilon(1e-12));
    CHECK(poisson_two_sample(x1, t1, x1, t1) == 1.0);
  }
  // above the conditional mean the p-value falls as x1 grows, n fixed
  const std::uint64_t n = 200;
  const double t1 = 40, t2 = 60;
  double prev = 2.0;
  for (std::uint64_t x1 = 80; x1 <= n; ++x1) {
    double p = poisson_two_sample(x1, t1, n - x1, t2);
    CHECK(p <= prev);
    prev = p;
  }
  // and also when x1 grows with x2 held fixed
  prev = 2.0;
  for (std::uint64_t x1 = 30; x1 <= 300; ++x1) {
    double p = poisson_two_sample(x1, 10, 20, 10);
    CHECK(p <= prev);
    prev = p;
  }
  CHECK_THROWS_AS(poisson_two_sample(1, 0.0, 1, 1.0), ContractViolation);
  CHECK_THROWS_AS(poisson_two_sample(1, 1.0, 1, -2.0), ContractViolation);
  CHECK_THROWS_AS(poisson_two_sample(1, NAN, 1, 1.0), ContractViolation);
  CHECK_THROWS_AS(poisson_two_sample(1, 1.0, 1, INFINITY), ContractViolation);
}

TEST_CASE("comparisons") {
  auto r = compare_groups(make_group("b", 101, 416), make_group("t", 29, 74));
  CHECK(r.drop_pct == doctest::Approx(100.0 * (416.0 / 101 - 74.0 / 29) / (416.0 / 101)));
  CHECK(r.p_value == doctest::Approx(8.272238335990803e-05).epsilon(1e-9));
  CHECK(r.baseline.label == "b");
  CHECK(r.excluded == 0);

  auto zero = compare_groups(make_group("b", 5, 0), make_group("t", 8, 0));
  CHECK(zero.drop_pct == 0.0);
  CHECK(zero.p_value == 1.0);
  CHECK_THROWS_AS(compare_groups(make_group("b", 5, 0), make_group("t", 8, 3)),
                  StatsError);
}

TEST_CASE("course data reproduces within tolerance") {
  auto compare = [](std::vector<GroupStats> before, GroupStats after) {
    std::vector<GroupStats> t{std::move(after)};
    return compare_groups(pooled_baseline(before), pooled_baseline(t));
  };
  auto rps = compare({rated("2018", 68, 388, 4.57), rated("2019", 74, 463, 3.85),
                      rated("2020", 70, 210, 3.30)},
                     rated("2021", 55, 181, 2.64));
  CHECK(std::abs(rps.drop_pct - 32.31) <= 0.05);
  CHECK(rps.p_value < 1e-4);
  CHECK(rps.p_value == doctest::Approx(6.764060019866335e-06).epsilon(1e-9));

  auto craps = compare({rated("2018", 65, 388, 6.0), rated("2019", 78, 463, 5.94),
                        rated("2020", 42, 210, 5.00)},
                       rated("2021", 54, 181, 3.35));
  CHECK(std::abs(craps.drop_pct - 41.23) <= 0.6);

  auto car = compare({rated("2020-2021", 138, 104, 1.33)}, rated("2022", 30, 8, 0.27));
  CHECK(std::abs(car.drop_pct - 79.70) <= 0.01);
  // the stated 1.33 rate implies 184 mistakes, not the listed 104
  CHECK(car.baseline.n_mistakes == 184);
  CHECK(car.p_value == doctest::Approx(1.9328518156605148e-08).epsilon(1e-9));
  auto car_counts = compare_groups(make_group("2020-2021", 138, 104), make_group("2022", 30, 8));
  CHECK(car_counts.p_value == doctest::Approx(0.0019121165779362546).epsilon(1e-9));

  auto balloon =
      compare({rated("2020-2021", 101, 416, 4.12)}, rated("2022", 29, 74, 2.55));
  CHECK(std::abs(balloon.drop_pct - 38.11) <= 0.01);
  CHECK(balloon.p_value < 0.001);
}

TEST_CASE("csv groups") {
  auto gs = read_groups_csv("label,n_programs,n_mistakes,rate\n"
                            "2018, 68, 388, 4.57\r\n\n"
                            "2019,74,463,\n");
  REQUIRE(gs.size() == 2);
  CHECK(gs[0].label == "2018");
  CHECK(gs[0].rate == 4.57);
  CHECK(gs[1].rate == doctest::Approx(463.0 / 74));
  auto plain = read_groups_csv("label,n_programs,n_mistakes\na,2,3\n");
  REQUIRE(plain.size() == 1);
  CHECK(plain[0].rate == 1.5);
  CHECK(read_groups_csv("label,n_programs,n_mistakes\n").empty());

  CHECK_THROWS_AS(read_groups_csv(""), StatsError);
  CHECK_THROWS_AS(read_groups_csv("name,n,m\n"), StatsError);
  CHECK_THROWS_AS(read_groups_csv("label,n_programs,n_mistakes\na,2\n"), StatsError);
  CHECK_THROWS_AS(read_groups_csv("label,n_programs,n_mistakes\na,-2,3\n"), StatsError);
  CHECK_THROWS_AS(read_groups_csv("label,n_programs,n_mistakes\na,2x,3\n"), StatsError);
  CHECK_THROWS_AS(read_groups_csv("label,n_programs,n_mistakes\na,0,0\n"), StatsError);
  CHECK_THROWS_AS(read_groups_csv("label,n_programs,n_mistakes,rate\na,2,3,abc\n"),
                  StatsError);
  CHECK_THROWS_AS(read_groups_csv("label,n_programs,n_mistakes,rate\na,2,3,-1\n"),
                  StatsError);
}

TEST_CASE("rendering comparisons") {
  auto r = compare_groups(make_group("2020", 101, 416), make_group("2022", 29, 74));
  r.excluded = 3;
  auto text = render_comparison_text(r);
  CHECK(text.find("2020") != std::string::npos);
  CHECK(text.find("drop: 38.05%") != std::string::npos);
  CHECK(text.find("p-value: 8.272e-05") != std::string::npos);
  CHECK(text.find("excluded: 3") != std::string::npos);

  auto j = nlohmann::json::parse(render_comparison_json(r));
  CHECK(j["baseline"]["label"] == "2020");
  CHECK(j["baseline"]["n_programs"] == 101);
  CHECK(j["treatment"]["n_mistakes"] == 74);
  CHECK(j["drop_pct"].get<double>() == r.drop_pct);
  CHECK(j["p_value"].get<double>() == r.p_value);
  CHECK(j["excluded"] == 3);

  auto even = compare_groups(make_group("a", 10, 10), make_group("b", 10, 10));
  CHECK(render_comparison_text(even).find("p-value: 1.0000") != std::string::npos);
}

TEST_CASE("collecting sources") {
  TempDir dir("collect");
  dir.write("b.py", "x = 1\n");
  dir.write("a/z.py", "x = 1\n");
  dir.write("a/Y.java", "class Y {}\n");
  dir.write("notes.txt", "hi\n");
  auto py = collect_sources(dir.path, Language::python);
  REQUIRE(py.size() == 2);
  CHECK(py[0].filename() == "z.py");
  CHECK(py[1].filename() == "b.py");
  CHECK(collect_sources(dir.path, Language::java).size() == 1);
  CHECK_THROWS_AS(collect_sources(dir.path / "missing", Language::python), StatsError);
  CHECK_THROWS_AS(collect_sources(dir.path / "b.py", Language::python), StatsError);
}

TEST_CASE("corpus runs") {
  TempDir root("corpus");
  SUBCASE("conventional programs on both sides") {
    for (int i = 0; i < 3; ++i) {
      root.write("y1/p" + std::to_string(i) + ".py", kClean);
      root.write("y2/p" + std::to_string(i) + ".py", kClean);
    }
    std::vector<fs::path> base{root.path / "y1"};
    auto r = run_corpus(base, root.path / "y2", Language::python);
    CHECK(r.drop_pct == 0.0);
    CHECK(r.p_value == 1.0);
    CHECK(r.baseline.label == "y1");
    CHECK(r.treatment.label == "y2");
  }
  SUBCASE("messy baseline against cleaned treatment") {
    for (int i = 0; i < 4; ++i) {
      root.write("old/p" + std::to_string(i) + ".py", kMessy);
      root.write("new/p" + std::to_string(i) + ".py", kClean);
    }
    root.write("old/broken.py", "def f(:\n");
    root.write("new/broken.py", "x = (\n");
    std::vector<fs::path> base{root.path / "old"};
    auto r = run_corpus(base, root.path / "new", Language::python);
    CHECK(r.drop_pct == 100.0);
    CHECK(r.excluded == 2);
    CHECK(r.baseline.n_programs == 4);
    CHECK(r.baseline.n_mistakes == 16);
    CHECK(r.treatment.n_mistakes == 0);
    CHECK(r.p_value < 0.05);
  }
  SUBCASE("several baseline directories are pooled by rate") {
    root.write("a/p.py", kMessy);                  // 4 mistakes
    root.write("b/p.py", kClean);                  // 0
    root.write("b/q.py", kClean);                  // 0
    root.write("t/p.py", "def main():\n    pass\nmain()\n"); // PY04, PY09
    std::vector<fs::path> base{root.path / "a", root.path / "b"};
    auto r = run_corpus(base, root.path / "t", Language::python);
    CHECK(r.baseline.n_programs == 3);
    CHECK(r.baseline.rate == doctest::Approx(4.0 / 3));
    CHECK(r.baseline.n_mistakes == 4);
    CHECK(r.treatment.rate == 2.0);
    CHECK(r.drop_pct == doctest::Approx(-50.0));
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
  }
  SUBCASE("a side with nothing parseable is an error") {
    root.write("a/p.py", kMessy);
    root.write("t/bad.py", "def (\n");
    std::vector<fs::path> base{root.path / "a"};
    CHECK_THROWS_AS(run_corpus(base, root.path / "t", Language::python), StatsError);
    fs::create_directories(root.path / "empty");
    CHECK_THROWS_AS(run_corpus(base, root.path / "empty", Language::python), StatsError);
    std::vector<fs::path> none;
    CHECK_THROWS_AS(run_corpus(none, root.path / "a", Language::python), StatsError);
  }
  SUBCASE("disabled rules are honored") {
    root.write("a/p.py", kMessy);
    root.write("t/p.py", kMessy);
    LintOptions opts;
    opts.disabled_rules = {"PY01"};
    std::vector<fs::path> base{root.path / "a"};
    auto r = run_corpus(base, root.path / "t", Language::python, opts);
    CHECK(r.baseline.n_mistakes == 2);
  }
}

TEST_CASE("linting many files keeps input order") {
  TempDir dir("order");
  std::vector<fs::path> files;
  for (int i = 0; i < 40; ++i)
    files.push_back(dir.write("f" + std::to_string(i) + ".py",
                              std::string(static_cast<std::size_t>(i % 5), '\n') +
                                  "def f():\n    pass\n"));
  auto reports = lint_files(files, Language::python, {});
  REQUIRE(reports.size() == files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    CHECK(reports[i].source_name == files[i].string());
    REQUIRE(reports[i].mistakes.size() == 3);
    CHECK(reports[i].mistakes.back().span->line_start == 2 + i % 5);
  }
  std::vector<fs::path> missing{dir.path / "nope.py"};
  CHECK_THROWS(lint_files(missing, Language::python, {}));
}
