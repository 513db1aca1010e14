#pragma once

#include "design_tutor/ast.hpp"

#include <string>
#include <string_view>
#include <variant>

namespace design_tutor {

/// Why a source could not be turned into a Program.
struct ParseFailure {
  std::string message;
  std::optional<Span> span;

  /// "line:col: message", or the bare message when the location is unknown.
  std::string describe() const;
};

using ParseResult = std::variant<Program, ParseFailure>;

inline bool parsed(const ParseResult &r) {
  return std::holds_alternative<Program>(r);
}

/// Parse a Python 3 subset. Syntactically valid constructs outside the
/// subset become OtherStmt/OtherExpr nodes.
ParseResult parse_python(std::string_view source, std::string source_name = {});

/// Parse a Java subset: classes, interfaces and enums with fields,
/// initializer blocks, constructors and methods.
ParseResult parse_java(std::string_view source, std::string source_name = {});

ParseResult parse(Language lang, std::string_view source,
                  std::string source_name = {});

} // namespace design_tutor
