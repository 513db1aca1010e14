#pragma once

#include "design_tutor/ast.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace design_tutor::detail {

struct SyntaxError {
  std::string message;
  Span span;
};

/// Region from the start of `first` to the end of `last`.
inline Span cover(const Span &first, const Span &last) {
  return {first.line_start, first.col_start, last.line_end, last.col_end};
}

inline Node make_node(NodeKind kind, Span span,
                      std::vector<Node> children = {}) {
  Node n(kind, span);
  n.children = std::move(children);
  return n;
}

inline bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c >= 0x80;
}

inline bool is_ident_char(unsigned char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

/// Throws SyntaxError at the first byte that does not start a well-formed
/// UTF-8 sequence (overlong forms and surrogates included).
inline void require_utf8(std::string_view text) {
  std::uint32_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size();) {
    auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 1;
    unsigned char lo = 0x80, hi = 0xBF;
    if (c >= 0xC2 && c <= 0xDF)
      len = 2;
    else if (c >= 0xE0 && c <= 0xEF) {
      len = 3;
      lo = c == 0xE0 ? 0xA0 : 0x80;
      hi = c == 0xED ? 0x9F : 0xBF;
    } else if (c >= 0xF0 && c <= 0xF4) {
      len = 4;
      lo = c == 0xF0 ? 0x90 : 0x80;
      hi = c == 0xF4 ? 0x8F : 0xBF;
    } else if (c >= 0x80)
      len = 0;
    bool ok = len != 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      auto d = static_cast<unsigned char>(text[i + k]);
      ok = k == 1 ? (d >= lo && d <= hi) : (d >= 0x80 && d <= 0xBF);
    }
    if (!ok)
      throw SyntaxError{"source is not valid UTF-8", {line, col, line, col + 1}};
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      col += static_cast<std::uint32_t>(len);
    }
    i += len;
  }
}

} // namespace design_tutor::detail
