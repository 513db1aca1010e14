#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace design_tutor::cli {

inline constexpr int kExitClean = 0;
inline constexpr int kExitMistakes = 1;
inline constexpr int kExitError = 2;

/// Runs the command line `args` (without the program name).
///
///   lint [--lang L] [--format text|json] [--disable CODE]... FILE...
///   rules [--lang L] [--format text|json]
///   stats --baseline DIR|CSV... --treatment DIR|CSV [--lang L] [--format F]
int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

} // namespace design_tutor::cli
