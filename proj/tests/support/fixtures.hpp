#pragma once

// Fixture files are named <CODE>_<pos|neg>_<n>.<py|java>. The first line
// lists the exact expected findings:
//
//   # expect: PY01@2 PY01@3 PY05 PY06
//   // expect: none
//
// CODE@LINE for positioned rules, a bare CODE for program-level ones. An
// optional second line `// options: nested` turns on nested class checks.

#include "design_tutor/lint.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fixtures {

struct Expectation {
  std::string code;
  std::uint32_t line = 0; // 0 for program-level

  auto operator<=>(const Expectation &) const = default;
};

struct Fixture {
  std::filesystem::path path;
  std::string target;  // rule code from the file name
  bool positive = false;
  design_tutor::Language language = design_tutor::Language::python;
  std::string source;
  std::vector<Expectation> expected; // sorted
  bool nested_classes = false;
};

std::vector<Fixture> load_all(const std::filesystem::path &dir);

/// Sorted (code, line) of a report's mistakes.
std::vector<Expectation> observed(const design_tutor::Report &report);

/// Lints the fixture and compares. Returns an empty string on success,
/// otherwise a description of the difference.
std::string check(const Fixture &fixture);

std::string to_string(const std::vector<Expectation> &es);

} // namespace fixtures
