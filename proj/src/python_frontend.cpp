#include "design_tutor/frontend.hpp"
#include "frontend_common.hpp"

#include <array>
#include <string>
#include <vector>

namespace design_tutor {

using detail::cover;
using detail::make_node;
using detail::SyntaxError;

namespace {

enum class Tok { Name, Number, String, Op, Newline, Indent, Dedent, End };

struct Token {
  Tok kind;
  std::string_view text;
  Span span;
};

constexpr std::array<std::string_view, 35> kKeywords = {
    "False",  "None",   "True",    "and",      "as",     "assert", "async",
    "await",  "break",  "class",   "continue", "def",    "del",    "elif",
    "else",   "except", "finally", "for",      "from",   "global", "if",
    "import", "in",     "is",      "lambda",   "nonlocal", "not",  "or",
    "pass",   "raise",  "return",  "try",      "while",  "with",   "yield",
};

bool is_keyword(std::string_view s) {
  for (auto kw : kKeywords)
    if (kw == s)
      return true;
  return false;
}

// ---------------------------------------------------------------------------
// Lexer

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      if (at_line_start_ && brackets_.empty()) {
        if (!indentation())
          continue;
      }
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\f') {
        ++pos_;
      } else if (c == '#') {
        skip_comment();
      } else if (c == '\\') {
        continuation();
      } else if (c == '\n' || c == '\r') {
        auto here = point();
        newline_char();
        if (brackets_.empty()) {
          emit(Tok::Newline, {}, here);
          at_line_start_ = true;
        }
      } else if (detail::is_ident_start(static_cast<unsigned char>(c))) {
        name_or_string();
      } else if (detail::is_digit(static_cast<unsigned char>(c)) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  detail::is_digit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        number();
      } else if (c == '"' || c == '\'') {
        string(pos_);
      } else {
        op();
      }
    }
    if (!brackets_.empty())
      throw SyntaxError{std::string("'") + brackets_.back().first +
                            "' was never closed",
                        brackets_.back().second};
    if (!tokens_.empty() && tokens_.back().kind != Tok::Newline &&
        tokens_.back().kind != Tok::Dedent)
      emit(Tok::Newline, {}, point());
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(Tok::Dedent, {}, point());
    }
    emit(Tok::End, {}, point());
    return std::move(tokens_);
  }

private:
  Span point() const {
    auto col = static_cast<std::uint32_t>(pos_ - line_begin_ + 1);
    return {line_, col, line_, col};
  }

  Span span_from(std::size_t start, std::uint32_t start_line,
                 std::size_t start_line_begin) const {
    return {start_line, static_cast<std::uint32_t>(start - start_line_begin + 1),
            line_, static_cast<std::uint32_t>(pos_ - line_begin_ + 1)};
  }

  [[noreturn]] void fail(std::string msg) const {
    throw SyntaxError{std::move(msg), point()};
  }

  void emit(Tok kind, std::string_view text, Span span) {
    tokens_.push_back({kind, text, span});
  }

  void newline_char() {
    if (src_[pos_] == '\r' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '\n')
      ++pos_;
    ++pos_;
    ++line_;
    line_begin_ = pos_;
  }

  void skip_comment() {
    while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r')
      ++pos_;
  }

  void continuation() {
    ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == '\n' || src_[pos_] == '\r')) {
      newline_char();
      return;
    }
    fail("unexpected character after line continuation");
  }

  // Returns false when the line was blank and has been consumed.
  bool indentation() {
    std::size_t width = 0;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ')
        ++width;
      else if (c == '\t')
        width = (width / 8 + 1) * 8;
      else if (c != '\f')
        break;
      ++pos_;
    }
    if (pos_ >= src_.size())
      return false;
    char c = src_[pos_];
    if (c == '#' || c == '\n' || c == '\r') {
      skip_comment();
      if (pos_ < src_.size())
        newline_char();
      return false;
    }
    at_line_start_ = false;
    if (width > indents_.back()) {
      indents_.push_back(width);
      emit(Tok::Indent, {}, point());
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        emit(Tok::Dedent, {}, point());
      }
      if (width != indents_.back())
        fail("unindent does not match any outer indentation level");
    }
    return true;
  }

  void name_or_string() {
    auto start = pos_;
    while (pos_ < src_.size() &&
           detail::is_ident_char(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
    auto text = src_.substr(start, pos_ - start);
    if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'') &&
        is_string_prefix(text)) {
      pos_ = start;
      string(start);
      return;
    }
    auto col = static_cast<std::uint32_t>(start - line_begin_ + 1);
    emit(Tok::Name, text,
         {line_, col, line_, static_cast<std::uint32_t>(col + text.size())});
  }

  static bool is_string_prefix(std::string_view p) {
    if (p.empty() || p.size() > 2)
      return false;
    for (char c : p) {
      switch (c) {
      case 'r': case 'R': case 'b': case 'B':
      case 'f': case 'F': case 'u': case 'U':
        break;
      default:
        return false;
      }
    }
    return true;
  }

  void string(std::size_t start) {
    auto start_line = line_;
    auto start_line_begin = line_begin_;
    while (src_[pos_] != '"' && src_[pos_] != '\'')
      ++pos_;
    char q = src_[pos_];
    bool triple = pos_ + 2 < src_.size() && src_[pos_ + 1] == q &&
                  src_[pos_ + 2] == q;
    pos_ += triple ? 3 : 1;
    for (;;) {
      if (pos_ >= src_.size())
        throw SyntaxError{"unterminated string literal",
                          span_from(start, start_line, start_line_begin)};
      char c = src_[pos_];
      if (c == '\\') {
        ++pos_;
        if (pos_ < src_.size()) {
          if (src_[pos_] == '\n' || src_[pos_] == '\r')
            newline_char();
          else
            ++pos_;
        }
      } else if (c == '\n' || c == '\r') {
        if (!triple)
          throw SyntaxError{"unterminated string literal",
                            span_from(start, start_line, start_line_begin)};
        newline_char();
      } else if (c == q) {
        if (!triple) {
          ++pos_;
          break;
        }
        if (pos_ + 2 < src_.size() && src_[pos_ + 1] == q &&
            src_[pos_ + 2] == q) {
          pos_ += 3;
          break;
        }
        ++pos_;
      } else {
        ++pos_;
      }
    }
    emit(Tok::String, src_.substr(start, pos_ - start),
         span_from(start, start_line, start_line_begin));
  }

  void digits(bool hex = false) {
    while (pos_ < src_.size()) {
      auto c = static_cast<unsigned char>(src_[pos_]);
      if (detail::is_digit(c) || c == '_' ||
          (hex && ((c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F'))))
        ++pos_;
      else
        break;
    }
  }

  void number() {
    auto start = pos_;
    auto peek = [&](std::size_t k) -> char {
      return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
    };
    if (peek(0) == '0' && (peek(1) == 'x' || peek(1) == 'X' || peek(1) == 'o' ||
                           peek(1) == 'O' || peek(1) == 'b' || peek(1) == 'B')) {
      pos_ += 2;
      digits(true);
    } else {
      digits();
      // 0-prefixed decimal integers other than zero are not valid Python 3
      auto int_part = src_.substr(start, pos_ - start);
      bool leading_zero = int_part.size() > 1 && int_part[0] == '0' &&
                          int_part.find_first_not_of("0_") != std::string_view::npos;
      if (peek(0) == '.') {
        ++pos_;
        digits();
      }
      if ((peek(0) == 'e' || peek(0) == 'E') &&
          (detail::is_digit(static_cast<unsigned char>(peek(1))) ||
           ((peek(1) == '+' || peek(1) == '-') &&
            detail::is_digit(static_cast<unsigned char>(peek(2)))))) {
        pos_ += (peek(1) == '+' || peek(1) == '-') ? 2 : 1;
        digits();
      }
      if (peek(0) == 'j' || peek(0) == 'J')
        ++pos_;
      auto text = src_.substr(start, pos_ - start);
      if (leading_zero && text.find_first_of(".eEjJ") == std::string_view::npos)
        fail("leading zeros in decimal integer literals are not permitted");
    }
    if (pos_ < src_.size() &&
        detail::is_ident_char(static_cast<unsigned char>(src_[pos_])))
      fail("invalid number literal");
    auto text = src_.substr(start, pos_ - start);
    auto col = static_cast<std::uint32_t>(start - line_begin_ + 1);
    emit(Tok::Number, text,
         {line_, col, line_, static_cast<std::uint32_t>(col + text.size())});
  }

  void op() {
    static constexpr std::array<std::string_view, 24> multi = {
        "**=", "//=", ">>=", "<<=", "...", "**", "//", "<<", ">>", "<=",
        ">=",  "==",  "!=",  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=",
        "^=",  "@=",  "->",  ":="};
    auto rest = src_.substr(pos_);
    std::string_view text;
    for (auto t : multi) {
      if (rest.starts_with(t)) {
        text = t;
        break;
      }
    }
    if (text.empty()) {
      static constexpr std::string_view singles = "+-*/%@&|^~<>()[]{},:.;=";
      if (singles.find(rest[0]) == std::string_view::npos)
        fail(std::string("unexpected character '") + rest[0] + "'");
      text = rest.substr(0, 1);
    }
    auto here = point();
    char c = text[0];
    if (text.size() == 1 && (c == '(' || c == '[' || c == '{')) {
      brackets_.push_back({c, here});
    } else if (text.size() == 1 && (c == ')' || c == ']' || c == '}')) {
      char open = c == ')' ? '(' : c == ']' ? '[' : '{';
      if (brackets_.empty() || brackets_.back().first != open)
        fail(std::string("unmatched '") + c + "'");
      brackets_.pop_back();
    }
    pos_ += text.size();
    emit(Tok::Op, src_.substr(pos_ - text.size(), text.size()),
         {here.line_start, here.col_start, here.line_start,
          static_cast<std::uint32_t>(here.col_start + text.size())});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::size_t line_begin_ = 0;
  bool at_line_start_ = true;
  std::vector<std::size_t> indents_{0};
  std::vector<std::pair<char, Span>> brackets_; // open bracket and where
  std::vector<Token> tokens_;
};

// ---------------------------------------------------------------------------
// Parser

Node other_expr(Span span, std::vector<Node> children = {}) {
  return make_node(NodeKind::OtherExpr, span, std::move(children));
}

Node other_stmt(Span span, std::vector<Node> children = {}) {
  return make_node(NodeKind::OtherStmt, span, std::move(children));
}

Node binary(std::string op, Node lhs, Node rhs) {
  auto span = cover(lhs.span, rhs.span);
  Node n = make_node(NodeKind::BinaryOp, span);
  n.op = std::move(op);
  n.children.push_back(std::move(lhs));
  n.children.push_back(std::move(rhs));
  return n;
}

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Node module() {
    Node mod(NodeKind::Module, Span{});
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Newline) {
        advance();
        continue;
      }
      statement(mod.children);
    }
    if (!mod.children.empty())
      mod.span = cover(Span{1, 1, 1, 1}, mod.children.back().span);
    return mod;
  }

private:
  // -- token helpers -------------------------------------------------------
  const Token &peek(std::size_t k = 0) const {
    auto i = std::min(pos_ + k, toks_.size() - 1);
    return toks_[i];
  }
  const Token &advance() {
    const Token &t = toks_[pos_];
    if (pos_ + 1 < toks_.size())
      ++pos_;
    last_end_ = t.span;
    return t;
  }
  bool at_op(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Op && peek(k).text == s;
  }
  bool at_kw(std::string_view s, std::size_t k = 0) const {
    return peek(k).kind == Tok::Name && peek(k).text == s;
  }
  bool accept_op(std::string_view s) {
    if (!at_op(s))
      return false;
    advance();
    return true;
  }
  bool accept_kw(std::string_view s) {
    if (!at_kw(s))
      return false;
    advance();
    return true;
  }
  [[noreturn]] void fail(const std::string &msg) const {
    throw SyntaxError{msg, peek().span};
  }
  [[noreturn]] void unexpected() const {
    const Token &t = peek();
    switch (t.kind) {
    case Tok::Newline: fail("invalid syntax: unexpected end of line");
    case Tok::Indent: fail("unexpected indent");
    case Tok::Dedent: fail("invalid syntax: unexpected dedent");
    case Tok::End: fail("invalid syntax: unexpected end of file");
    default: fail("invalid syntax near '" + std::string(t.text) + "'");
    }
  }
  const Token &expect_op(std::string_view s) {
    if (!at_op(s))
      fail("expected '" + std::string(s) + "'");
    return advance();
  }
  const Token &expect_kind(Tok kind, std::string_view what) {
    if (peek().kind != kind)
      fail("expected " + std::string(what));
    return advance();
  }
  const Token &expect_identifier() {
    if (peek().kind != Tok::Name || is_keyword(peek().text))
      fail("expected identifier");
    return advance();
  }
  Span end_span(const Span &start) const { return cover(start, last_end_); }

  bool at_simple_end() const {
    return peek().kind == Tok::Newline || at_op(";") || peek().kind == Tok::End;
  }

  bool at_expression_start() const {
    const Token &t = peek();
    switch (t.kind) {
    case Tok::Number:
    case Tok::String:
      return true;
    case Tok::Name:
      return !is_keyword(t.text) || t.text == "None" || t.text == "True" ||
             t.text == "False" || t.text == "not" || t.text == "lambda" ||
             t.text == "await" || t.text == "yield";
    case Tok::Op:
      return t.text == "(" || t.text == "[" || t.text == "{" ||
             t.text == "-" || t.text == "+" || t.text == "~" ||
             t.text == "*" || t.text == "..." || t.text == "**";
    default:
      return false;
    }
  }

  // -- statements ----------------------------------------------------------
  void statement(std::vector<Node> &out) {
    const Token &t = peek();
    if (t.kind == Tok::Indent)
      fail("unexpected indent");
    if (t.kind == Tok::Name) {
      if (t.text == "def") {
        out.push_back(function_def(t.span));
        return;
      }
      if (t.text == "if") {
        out.push_back(if_stmt());
        return;
      }
      if (t.text == "while") {
        out.push_back(while_stmt());
        return;
      }
      if (t.text == "for") {
        out.push_back(for_stmt(t.span));
        return;
      }
      if (t.text == "try") {
        out.push_back(try_stmt());
        return;
      }
      if (t.text == "with") {
        out.push_back(with_stmt(t.span));
        return;
      }
      if (t.text == "class") {
        out.push_back(class_def());
        return;
      }
      if (t.text == "async" && (at_kw("def", 1) || at_kw("for", 1) ||
                                at_kw("with", 1))) {
        Span start = t.span;
        advance();
        if (at_kw("def"))
          out.push_back(function_def(start));
        else if (at_kw("for"))
          out.push_back(for_stmt(start));
        else
          out.push_back(with_stmt(start));
        return;
      }
    }
    if (at_op("@")) {
      Span start = advance().span;
      Node deco = other_stmt({}, {});
      deco.children.push_back(namedexpr_test());
      deco.span = end_span(start);
      expect_kind(Tok::Newline, "newline after decorator");
      out.push_back(std::move(deco));
      return;
    }
    simple_statements(out);
  }

  void simple_statements(std::vector<Node> &out) {
    for (;;) {
      small_statement(out);
      if (accept_op(";")) {
        if (peek().kind == Tok::Newline)
          break;
        continue;
      }
      break;
    }
    if (peek().kind == Tok::End)
      return;
    expect_kind(Tok::Newline, "end of statement");
  }

  Node suite() {
    expect_op(":");
    Node block(NodeKind::Block, peek().span);
    if (peek().kind == Tok::Newline) {
      advance();
      if (peek().kind != Tok::Indent)
        fail("expected an indented block");
      advance();
      while (peek().kind != Tok::Dedent && peek().kind != Tok::End) {
        if (peek().kind == Tok::Newline) {
          advance();
          continue;
        }
        statement(block.children);
      }
      if (peek().kind == Tok::Dedent)
        advance();
    } else {
      simple_statements(block.children);
    }
    if (block.children.empty())
      fail("expected an indented block");
    block.span = cover(block.children.front().span, block.children.back().span);
    return block;
  }

  Node function_def(Span start) {
    expect_op_kw("def");
    Node fn(NodeKind::FunctionDef, start);
    fn.name = std::string(expect_identifier().text);
    expect_op("(");
    while (!at_op(")")) {
      parameter(fn.children, /*lambda=*/false);
      if (!accept_op(","))
        break;
    }
    expect_op(")");
    if (accept_op("->"))
      test(); // return annotation carries no design information
    fn.children.push_back(suite());
    fn.span = end_span(start);
    return fn;
  }

  void expect_op_kw(std::string_view kw) {
    if (!accept_kw(kw))
      fail("expected '" + std::string(kw) + "'");
  }

  void parameter(std::vector<Node> &out, bool lambda) {
    Span start = peek().span;
    if (accept_op("/"))
      return;
    if (at_op("*") && (at_op(",", 1) || at_op(")", 1) || at_op(":", 1))) {
      advance(); // keyword-only marker
      return;
    }
    accept_op("*") || accept_op("**");
    expect_identifier();
    Node param = other_expr(start);
    if (!lambda && accept_op(":"))
      test();
    if (accept_op("="))
      param.children.push_back(test());
    param.span = end_span(start);
    out.push_back(std::move(param));
  }

  Node if_stmt() {
    Span start = advance().span; // 'if' or 'elif'
    Node n(NodeKind::If, start);
    n.children.push_back(namedexpr_test());
    n.children.push_back(suite());
    if (at_kw("elif")) {
      n.children.push_back(if_stmt());
    } else if (at_kw("else")) {
      advance();
      n.children.push_back(suite());
    }
    n.span = end_span(start);
    return n;
  }

  Node while_stmt() {
    Span start = advance().span;
    Node n(NodeKind::While, start);
    n.children.push_back(namedexpr_test());
    n.children.push_back(suite());
    if (accept_kw("else"))
      n.children.push_back(suite());
    n.span = end_span(start);
    return n;
  }

  Node for_stmt(Span start) {
    expect_op_kw("for");
    Node n(NodeKind::ForEach, start);
    n.children.push_back(target_list());
    expect_op_kw("in");
    n.children.push_back(testlist());
    n.children.push_back(suite());
    if (accept_kw("else"))
      n.children.push_back(suite());
    n.span = end_span(start);
    return n;
  }

  Node try_stmt() {
    Span start = advance().span;
    Node n = other_stmt(start);
    n.children.push_back(suite());
    bool handled = false;
    while (at_kw("except")) {
      Span clause_start = advance().span;
      Node clause = other_stmt(clause_start);
      accept_op("*");
      if (!at_op(":")) {
        clause.children.push_back(test());
        if (accept_kw("as"))
          expect_identifier();
        else if (accept_op(","))
          clause.children.push_back(test());
      }
      clause.children.push_back(suite());
      clause.span = end_span(clause_start);
      n.children.push_back(std::move(clause));
      handled = true;
    }
    if (handled && accept_kw("else"))
      n.children.push_back(suite());
    if (accept_kw("finally")) {
      n.children.push_back(suite());
      handled = true;
    }
    if (!handled)
      fail("expected 'except' or 'finally' block");
    n.span = end_span(start);
    return n;
  }

  Node with_stmt(Span start) {
    expect_op_kw("with");
    Node n = other_stmt(start);
    for (;;) {
      n.children.push_back(test());
      if (accept_kw("as"))
        n.children.push_back(target());
      if (!accept_op(","))
        break;
    }
    n.children.push_back(suite());
    n.span = end_span(start);
    return n;
  }

  Node class_def() {
    Span start = advance().span;
    expect_identifier();
    Node n = other_stmt(start);
    if (accept_op("(")) {
      while (!at_op(")")) {
        n.children.push_back(argument());
        if (!accept_op(","))
          break;
      }
      expect_op(")");
    }
    n.children.push_back(suite());
    n.span = end_span(start);
    return n;
  }

  void small_statement(std::vector<Node> &out) {
    const Token &t = peek();
    Span start = t.span;
    if (t.kind == Tok::Name) {
      if (t.text == "pass" || t.text == "break" || t.text == "continue") {
        NodeKind kind = t.text == "pass"    ? NodeKind::Pass
                        : t.text == "break" ? NodeKind::Break
                                            : NodeKind::Continue;
        advance();
        out.push_back(make_node(kind, start));
        return;
      }
      if (t.text == "return") {
        advance();
        Node r(NodeKind::Return, start);
        if (!at_simple_end())
          r.children.push_back(testlist_star());
        r.span = end_span(start);
        out.push_back(std::move(r));
        return;
      }
      if (t.text == "global") {
        advance();
        bool first = true;
        do {
          const Token &name = expect_identifier();
          Node g(NodeKind::GlobalStmt, first ? cover(start, name.span)
                                              : name.span);
          g.name = std::string(name.text);
          out.push_back(std::move(g));
          first = false;
        } while (accept_op(","));
        return;
      }
      if (t.text == "nonlocal") {
        advance();
        do
          expect_identifier();
        while (accept_op(","));
        out.push_back(other_stmt(end_span(start)));
        return;
      }
      if (t.text == "import" || t.text == "from") {
        import_stmt();
        out.push_back(other_stmt(end_span(start)));
        return;
      }
      if (t.text == "del" || t.text == "assert" || t.text == "raise") {
        std::string_view kw = t.text;
        advance();
        Node n = other_stmt(start);
        if (kw == "del") {
          n.children.push_back(testlist());
        } else if (kw == "assert") {
          n.children.push_back(test());
          if (accept_op(","))
            n.children.push_back(test());
        } else if (!at_simple_end()) {
          n.children.push_back(test());
          if (accept_kw("from"))
            n.children.push_back(test());
        }
        n.span = end_span(start);
        out.push_back(std::move(n));
        return;
      }
    }
    out.push_back(expression_statement());
  }

  void import_stmt() {
    if (accept_kw("import")) {
      do {
        dotted_name();
        if (accept_kw("as"))
          expect_identifier();
      } while (accept_op(","));
      return;
    }
    expect_op_kw("from");
    while (accept_op(".") || accept_op("...")) {
    }
    if (!at_kw("import"))
      dotted_name();
    expect_op_kw("import");
    if (accept_op("*"))
      return;
    bool paren = accept_op("(");
    do {
      if (paren && at_op(")"))
        break;
      expect_identifier();
      if (accept_kw("as"))
        expect_identifier();
    } while (accept_op(","));
    if (paren)
      expect_op(")");
  }

  void dotted_name() {
    expect_identifier();
    while (accept_op("."))
      expect_identifier();
  }

  static bool is_augassign(std::string_view op) {
    static constexpr std::array<std::string_view, 13> ops = {
        "+=", "-=", "*=", "/=", "//=", "%=", "**=", ">>=", "<<=", "&=",
        "|=", "^=", "@="};
    for (auto o : ops)
      if (o == op)
        return true;
    return false;
  }

  Node expression_statement() {
    Span start = peek().span;
    Node first = testlist_star();
    if (peek().kind == Tok::Op && is_augassign(peek().text)) {
      Node a(NodeKind::Assign, start);
      a.is_statement = true;
      a.op = std::string(advance().text);
      a.children.push_back(std::move(first));
      a.children.push_back(at_kw("yield") ? yield_expr() : testlist());
      a.span = end_span(start);
      return a;
    }
    if (at_op(":")) {
      advance();
      Node annotation = test();
      if (!accept_op("=")) {
        Node n = other_stmt(end_span(start));
        n.children.push_back(std::move(first));
        n.children.push_back(other_expr(annotation.span,
                                        vec(std::move(annotation))));
        return n;
      }
      Node a(NodeKind::Assign, start);
      a.is_statement = true;
      a.op = "=";
      a.children.push_back(std::move(first));
      a.children.push_back(other_expr(annotation.span,
                                      vec(std::move(annotation))));
      a.children.push_back(at_kw("yield") ? yield_expr() : testlist_star());
      a.span = end_span(start);
      return a;
    }
    if (at_op("=")) {
      Node a(NodeKind::Assign, start);
      a.is_statement = true;
      a.op = "=";
      a.children.push_back(std::move(first));
      while (accept_op("="))
        a.children.push_back(at_kw("yield") ? yield_expr() : testlist_star());
      a.span = end_span(start);
      return a;
    }
    Node e(NodeKind::ExprStmt, first.span);
    e.children.push_back(std::move(first));
    return e;
  }

  static std::vector<Node> vec(Node n) {
    std::vector<Node> v;
    v.push_back(std::move(n));
    return v;
  }

  // -- expressions ---------------------------------------------------------
  Node yield_expr() {
    Span start = advance().span; // 'yield'
    Node n = other_expr(start);
    if (accept_kw("from"))
      n.children.push_back(test());
    else if (!at_simple_end() && !at_op(")") && !at_op("]") && !at_op("}") &&
             !at_op("="))
      n.children.push_back(testlist_star());
    n.span = end_span(start);
    return n;
  }

  // Comma-separated expressions; a bare list becomes a tuple OtherExpr.
  template <typename Elem>
  Node sequence(Elem elem, bool allow_trailing = true) {
    Span start = peek().span;
    Node first = elem();
    if (!at_op(","))
      return first;
    Node tuple = other_expr(start);
    tuple.children.push_back(std::move(first));
    while (accept_op(",")) {
      if (allow_trailing && !at_expression_start())
        break;
      tuple.children.push_back(elem());
    }
    tuple.span = end_span(start);
    return tuple;
  }

  Node testlist_star() {
    if (at_kw("yield"))
      return yield_expr();
    return sequence([this] { return star_or_test(); });
  }
  Node testlist() {
    return sequence([this] { return test(); });
  }
  Node target() { return star_or(); }
  Node target_list() {
    return sequence([this] { return target(); });
  }

  Node star_or_test() {
    if (at_op("*")) {
      Span start = advance().span;
      Node n = other_expr(start);
      n.children.push_back(or_expr());
      n.span = end_span(start);
      return n;
    }
    return namedexpr_test();
  }

  Node star_or() {
    if (at_op("*")) {
      Span start = advance().span;
      Node n = other_expr(start);
      n.children.push_back(or_expr());
      n.span = end_span(start);
      return n;
    }
    return or_expr();
  }

  Node namedexpr_test() {
    Node lhs = test();
    if (at_op(":=")) {
      advance();
      Node rhs = test();
      Node a(NodeKind::Assign, cover(lhs.span, rhs.span));
      a.op = ":=";
      a.children.push_back(std::move(lhs));
      a.children.push_back(std::move(rhs));
      return a;
    }
    return lhs;
  }

  Node test() {
    if (at_kw("lambda"))
      return lambda_def(/*nocond=*/false);
    Node value = or_test();
    if (at_kw("if") ) {
      advance();
      Node cond = or_test();
      expect_op_kw("else");
      Node other = test();
      Node t(NodeKind::TernaryOp, cover(value.span, other.span));
      t.children.push_back(std::move(value));
      t.children.push_back(std::move(cond));
      t.children.push_back(std::move(other));
      return t;
    }
    return value;
  }

  Node test_nocond() {
    if (at_kw("lambda"))
      return lambda_def(/*nocond=*/true);
    return or_test();
  }

  Node lambda_def(bool nocond) {
    Span start = advance().span;
    Node n(NodeKind::LambdaExpr, start);
    while (!at_op(":")) {
      parameter(n.children, /*lambda=*/true);
      if (!accept_op(","))
        break;
    }
    expect_op(":");
    n.children.push_back(nocond ? test_nocond() : test());
    n.span = end_span(start);
    return n;
  }

  Node or_test() {
    Node lhs = and_test();
    while (at_kw("or")) {
      advance();
      lhs = binary("or", std::move(lhs), and_test());
    }
    return lhs;
  }

  Node and_test() {
    Node lhs = not_test();
    while (at_kw("and")) {
      advance();
      lhs = binary("and", std::move(lhs), not_test());
    }
    return lhs;
  }

  Node not_test() {
    if (at_kw("not")) {
      Span start = advance().span;
      Node operand = not_test();
      Node n(NodeKind::UnaryOp, cover(start, operand.span));
      n.op = "not";
      n.children.push_back(std::move(operand));
      return n;
    }
    return comparison();
  }

  Node comparison() {
    Node lhs = or_expr();
    for (;;) {
      std::string op;
      const Token &t = peek();
      if (t.kind == Tok::Op &&
          (t.text == "<" || t.text == ">" || t.text == "==" || t.text == ">=" ||
           t.text == "<=" || t.text == "!=")) {
        op = std::string(t.text);
        advance();
      } else if (at_kw("in")) {
        op = "in";
        advance();
      } else if (at_kw("not") && at_kw("in", 1)) {
        op = "not in";
        advance();
        advance();
      } else if (at_kw("is")) {
        advance();
        op = accept_kw("not") ? "is not" : "is";
      } else {
        return lhs;
      }
      lhs = binary(std::move(op), std::move(lhs), or_expr());
    }
  }

  template <typename Next>
  Node left_assoc(std::initializer_list<std::string_view> ops, Next next) {
    Node lhs = next();
    for (;;) {
      std::string_view found;
      for (auto o : ops)
        if (at_op(o))
          found = o;
      if (found.empty())
        return lhs;
      advance();
      lhs = binary(std::string(found), std::move(lhs), next());
    }
  }

  Node or_expr() {
    return left_assoc({"|"}, [this] { return xor_expr(); });
  }
  Node xor_expr() {
    return left_assoc({"^"}, [this] { return and_expr(); });
  }
  Node and_expr() {
    return left_assoc({"&"}, [this] { return shift_expr(); });
  }
  Node shift_expr() {
    return left_assoc({"<<", ">>"}, [this] { return arith_expr(); });
  }
  Node arith_expr() {
    return left_assoc({"+", "-"}, [this] { return term(); });
  }
  Node term() {
    return left_assoc({"*", "/", "//", "%", "@"}, [this] { return factor(); });
  }

  Node factor() {
    if (at_op("-") || at_op("+") || at_op("~")) {
      const Token &t = advance();
      Span start = t.span;
      std::string op(t.text);
      Node operand = factor();
      Node n(NodeKind::UnaryOp, cover(start, operand.span));
      n.op = std::move(op);
      n.children.push_back(std::move(operand));
      return n;
    }
    return power();
  }

  Node power() {
    Span start = peek().span;
    bool awaited = accept_kw("await");
    Node base = atom_expr();
    if (awaited) {
      Node n = other_expr(end_span(start));
      n.children.push_back(std::move(base));
      base = std::move(n);
    }
    if (at_op("**")) {
      advance();
      return binary("**", std::move(base), factor());
    }
    return base;
  }

  Node atom_expr() {
    Node n = atom();
    for (;;) {
      if (at_op("(")) {
        advance();
        Node call(NodeKind::Call, n.span);
        call.children.push_back(std::move(n));
        while (!at_op(")")) {
          call.children.push_back(argument());
          if (!accept_op(","))
            break;
        }
        expect_op(")");
        call.span = end_span(call.span);
        n = std::move(call);
      } else if (at_op("[")) {
        advance();
        Node sub = other_expr(n.span);
        sub.children.push_back(std::move(n));
        sub.children.push_back(subscript_list());
        expect_op("]");
        sub.span = end_span(sub.span);
        n = std::move(sub);
      } else if (at_op(".")) {
        advance();
        expect_identifier();
        Node attr = other_expr(n.span);
        attr.children.push_back(std::move(n));
        attr.span = end_span(attr.span);
        n = std::move(attr);
      } else {
        break;
      }
    }
    return n;
  }

  Node subscript_list() {
    return sequence([this] { return subscript(); });
  }

  Node subscript() {
    Span start = peek().span;
    Node first;
    bool has_first = false;
    if (!at_op(":")) {
      first = namedexpr_test();
      has_first = true;
      if (!at_op(":"))
        return first;
    }
    Node slice = other_expr(start);
    if (has_first)
      slice.children.push_back(std::move(first));
    while (accept_op(":")) {
      if (!at_op(":") && !at_op("]") && !at_op(","))
        slice.children.push_back(test());
    }
    slice.span = end_span(start);
    return slice;
  }

  Node argument() {
    Span start = peek().span;
    if (at_op("*") || at_op("**")) {
      advance();
      Node n = other_expr(start);
      n.children.push_back(test());
      n.span = end_span(start);
      return n;
    }
    if (peek().kind == Tok::Name && !is_keyword(peek().text) && at_op("=", 1)) {
      advance();
      advance();
      Node n = other_expr(start);
      n.children.push_back(test());
      n.span = end_span(start);
      return n;
    }
    Node value = namedexpr_test();
    if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      Node comp = other_expr(start);
      comp.children.push_back(std::move(value));
      comprehension(comp);
      comp.span = end_span(start);
      return comp;
    }
    return value;
  }

  void comprehension(Node &comp) {
    while (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      accept_kw("async");
      advance();
      comp.children.push_back(target_list());
      expect_op_kw("in");
      comp.children.push_back(or_test());
      while (at_kw("if")) {
        advance();
        comp.children.push_back(test_nocond());
      }
    }
  }

  Node atom() {
    const Token &t = peek();
    Span start = t.span;
    switch (t.kind) {
    case Tok::Number: {
      advance();
      Node n(NodeKind::NumberLiteral, start);
      n.literal_value = std::string(t.text);
      return n;
    }
    case Tok::String: {
      advance();
      while (peek().kind == Tok::String)
        advance();
      return other_expr(end_span(start));
    }
    case Tok::Name: {
      if (t.text == "None" || t.text == "True" || t.text == "False") {
        advance();
        return other_expr(start);
      }
      if (t.text == "yield")
        return yield_expr();
      if (is_keyword(t.text))
        unexpected();
      advance();
      if (at_op("("))
        return named_call(std::string(t.text), start);
      return other_expr(start);
    }
    case Tok::Op:
      if (t.text == "...") {
        advance();
        return other_expr(start);
      }
      if (t.text == "(" || t.text == "[" || t.text == "{")
        return display(t.text[0]);
      break;
    default:
      break;
    }
    unexpected();
  }

  // `name(...)`: the callee is kept as the Call's name, not as a child.
  Node named_call(std::string callee, Span start) {
    expect_op("(");
    Node call(NodeKind::Call, start);
    call.name = std::move(callee);
    while (!at_op(")")) {
      call.children.push_back(argument());
      if (!accept_op(","))
        break;
    }
    expect_op(")");
    call.span = end_span(start);
    return call;
  }

  Node display(char open) {
    Span start = advance().span;
    std::string_view close = open == '(' ? ")" : open == '[' ? "]" : "}";
    if (accept_op(close))
      return other_expr(end_span(start));
    if (open == '(' && at_kw("yield")) {
      Node y = yield_expr();
      expect_op(close);
      return y;
    }
    Node n = other_expr(start);
    bool is_tuple = false;
    auto element = [&]() -> Node {
      if (open == '{' && accept_op("**")) {
        Span s = last_end_;
        Node d = other_expr(s);
        d.children.push_back(or_expr());
        d.span = end_span(s);
        return d;
      }
      Node e = star_or_test();
      if (open == '{' && accept_op(":")) {
        Node kv = other_expr(e.span);
        kv.children.push_back(std::move(e));
        kv.children.push_back(test());
        kv.span = end_span(kv.span);
        return kv;
      }
      return e;
    };
    Node first = element();
    if (at_kw("for") || (at_kw("async") && at_kw("for", 1))) {
      n.children.push_back(std::move(first));
      comprehension(n);
      expect_op(close);
      n.span = end_span(start);
      return n;
    }
    n.children.push_back(std::move(first));
    while (accept_op(",")) {
      is_tuple = true;
      if (at_op(close))
        break;
      n.children.push_back(element());
    }
    expect_op(close);
    if (open == '(' && !is_tuple)
      return std::move(n.children.front());
    n.span = end_span(start);
    return n;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Span last_end_;
};

} // namespace

std::string ParseFailure::describe() const {
  if (!span)
    return message;
  return std::to_string(span->line_start) + ":" +
         std::to_string(span->col_start) + ": " + message;
}

ParseResult parse_python(std::string_view source, std::string source_name) {
  try {
    detail::require_utf8(source);
    Lexer lexer(source);
    Parser parser(lexer.run());
    return Program(Language::python, parser.module(), std::move(source_name));
  } catch (const SyntaxError &e) {
    return ParseFailure{e.message, e.span};
  }
}

ParseResult parse(Language lang, std::string_view source,
                  std::string source_name) {
  return lang == Language::python ? parse_python(source, std::move(source_name))
                                  : parse_java(source, std::move(source_name));
}

} // namespace design_tutor
