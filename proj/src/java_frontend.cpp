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

enum class Tok { Ident, Number, String, Op, End };

struct Token {
  Tok kind;
  std::string_view text;
  Span span;
};

constexpr std::array<std::string_view, 51> kKeywords = {
    "abstract", "assert",     "boolean",   "break",     "byte",
    "case",     "catch",      "char",      "class",     "const",
    "continue", "default",    "do",        "double",    "else",
    "enum",     "extends",    "final",     "finally",   "float",
    "for",      "goto",       "if",        "implements", "import",
    "instanceof", "int",      "interface", "long",      "native",
    "new",      "package",    "private",   "protected", "public",
    "return",   "short",      "static",    "strictfp",  "super",
    "switch",   "synchronized", "this",    "throw",     "throws",
    "transient", "try",       "void",      "volatile",  "while",
    "_",
};

bool is_keyword(std::string_view s) {
  if (s == "true" || s == "false" || s == "null")
    return true;
  for (auto kw : kKeywords)
    if (kw == s)
      return true;
  return false;
}

bool is_primitive(std::string_view s) {
  return s == "boolean" || s == "byte" || s == "char" || s == "short" ||
         s == "int" || s == "long" || s == "float" || s == "double" ||
         s == "void";
}

bool is_member_modifier(std::string_view s) {
  return s == "public" || s == "private" || s == "protected" ||
         s == "static" || s == "final" || s == "abstract" || s == "native" ||
         s == "synchronized" || s == "transient" || s == "volatile" ||
         s == "strictfp" || s == "default" || s == "sealed";
}

// ---------------------------------------------------------------------------
// Lexer. '>' is always emitted as a single-character token so that nested
// generic closers need no splitting; the parser re-joins adjacent '>' and
// '=' tokens into shift and comparison operators.

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      auto uc = static_cast<unsigned char>(c);
      if (c == ' ' || c == '\t' || c == '\f') {
        ++pos_;
      } else if (c == '\n' || c == '\r') {
        newline_char();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n' && src_[pos_] != '\r')
          ++pos_;
      } else if (c == '/' && peek(1) == '*') {
        block_comment();
      } else if (detail::is_ident_start(uc) || c == '$') {
        auto start = pos_;
        while (pos_ < src_.size() &&
               (detail::is_ident_char(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '$'))
          ++pos_;
        emit_range(Tok::Ident, start);
      } else if (detail::is_digit(uc) ||
                 (c == '.' && detail::is_digit(static_cast<unsigned char>(peek(1))))) {
        number();
      } else if (c == '"') {
        if (peek(1) == '"' && peek(2) == '"')
          text_block();
        else
          quoted('"');
      } else if (c == '\'') {
        quoted('\'');
      } else {
        op();
      }
    }
    tokens_.push_back({Tok::End, {}, point()});
    return std::move(tokens_);
  }

private:
  char peek(std::size_t k) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }

  Span point() const {
    auto col = static_cast<std::uint32_t>(pos_ - line_begin_ + 1);
    return {line_, col, line_, col};
  }

  [[noreturn]] void fail(std::string msg) const {
    throw SyntaxError{std::move(msg), point()};
  }

  void newline_char() {
    if (src_[pos_] == '\r' && peek(1) == '\n')
      ++pos_;
    ++pos_;
    ++line_;
    line_begin_ = pos_;
  }

  // Single-line token starting at `start` and ending at the current position.
  void emit_range(Tok kind, std::size_t start) {
    auto col = static_cast<std::uint32_t>(start - line_begin_ + 1);
    tokens_.push_back({kind, src_.substr(start, pos_ - start),
                       {line_, col, line_,
                        static_cast<std::uint32_t>(col + (pos_ - start))}});
  }

  void block_comment() {
    pos_ += 2;
    while (pos_ < src_.size()) {
      if (src_[pos_] == '*' && peek(1) == '/') {
        pos_ += 2;
        return;
      }
      if (src_[pos_] == '\n' || src_[pos_] == '\r')
        newline_char();
      else
        ++pos_;
    }
    fail("unterminated comment");
  }

  void quoted(char q) {
    auto start = pos_;
    ++pos_;
    for (;;) {
      if (pos_ >= src_.size() || src_[pos_] == '\n' || src_[pos_] == '\r')
        fail(q == '"' ? "unterminated string literal"
                      : "unterminated character literal");
      if (src_[pos_] == '\\') {
        pos_ += 2;
        continue;
      }
      if (src_[pos_] == q) {
        ++pos_;
        break;
      }
      ++pos_;
    }
    emit_range(Tok::String, start);
  }

  void text_block() {
    auto start = pos_;
    auto start_line = line_;
    auto start_col = static_cast<std::uint32_t>(pos_ - line_begin_ + 1);
    pos_ += 3;
    for (;;) {
      if (pos_ >= src_.size())
        fail("unterminated text block");
      char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
      } else if (c == '"' && peek(1) == '"' && peek(2) == '"') {
        pos_ += 3;
        break;
      } else if (c == '\n' || c == '\r') {
        newline_char();
      } else {
        ++pos_;
      }
    }
    tokens_.push_back({Tok::String, src_.substr(start, pos_ - start),
                       {start_line, start_col, line_,
                        static_cast<std::uint32_t>(pos_ - line_begin_ + 1)}});
  }

  void digits(bool hex) {
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
    if (peek(0) == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      pos_ += 2;
      digits(true);
    } else if (peek(0) == '0' && (peek(1) == 'b' || peek(1) == 'B')) {
      pos_ += 2;
      digits(false);
    } else {
      digits(false);
      if (peek(0) == '.' && detail::is_digit(static_cast<unsigned char>(peek(1)))) {
        ++pos_;
        digits(false);
      } else if (peek(0) == '.' && !detail::is_ident_start(
                                        static_cast<unsigned char>(peek(1))) &&
                 peek(1) != '.') {
        ++pos_; // "1." is a double literal
      }
      if ((peek(0) == 'e' || peek(0) == 'E') &&
          (detail::is_digit(static_cast<unsigned char>(peek(1))) ||
           ((peek(1) == '+' || peek(1) == '-') &&
            detail::is_digit(static_cast<unsigned char>(peek(2)))))) {
        pos_ += (peek(1) == '+' || peek(1) == '-') ? 2 : 1;
        digits(false);
      }
    }
    char s = peek(0);
    if (s == 'l' || s == 'L' || s == 'f' || s == 'F' || s == 'd' || s == 'D')
      ++pos_;
    if (pos_ < src_.size() &&
        detail::is_ident_char(static_cast<unsigned char>(src_[pos_])))
      fail("invalid number literal");
    emit_range(Tok::Number, start);
  }

  void op() {
    static constexpr std::array<std::string_view, 23> multi = {
        "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=",
        "<<",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<",  ">",
        "="};
    auto rest = src_.substr(pos_);
    std::string_view text;
    for (auto t : multi) {
      if (rest.starts_with(t)) {
        text = t;
        break;
      }
    }
    if (text.empty()) {
      static constexpr std::string_view singles = "+-*/%!~?:;,.(){}[]&|^@";
      if (singles.find(rest[0]) == std::string_view::npos)
        fail(std::string("unexpected character '") + rest[0] + "'");
      text = rest.substr(0, 1);
    }
    auto start = pos_;
    pos_ += text.size();
    emit_range(Tok::Op, start);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::size_t line_begin_ = 0;
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

// Empty C-style for slot.
Node placeholder(Span at) {
  Node n(NodeKind::OtherStmt, {at.line_start, at.col_start, at.line_start,
                               at.col_start});
  n.is_statement = false;
  return n;
}

struct Declarator {
  std::string name;
  Span span;
  std::optional<Node> init;
};

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Node compilation_unit() {
    Node mod(NodeKind::Module, Span{});
    if (at_kw("package") || (at_op("@") && !at_kw("interface", 1))) {
      // package annotations are skipped together with the declaration
      std::size_t save = pos_;
      annotations();
      if (at_kw("package")) {
        Span start = peek().span;
        skip_to_semicolon();
        mod.children.push_back(other_stmt(end_span(start)));
      } else {
        pos_ = save;
      }
    }
    while (peek().kind != Tok::End) {
      if (accept_op(";"))
        continue;
      if (at_kw("import")) {
        Span start = peek().span;
        skip_to_semicolon();
        mod.children.push_back(other_stmt(end_span(start)));
        continue;
      }
      Span start = peek().span;
      Modifiers mods = modifiers();
      if (!at_type_declaration())
        unexpected();
      mod.children.push_back(type_declaration(mods, start));
    }
    if (!mod.children.empty())
      mod.span = cover(Span{1, 1, 1, 1}, mod.children.back().span);
    return mod;
  }

private:
  // -- token helpers -------------------------------------------------------
  const Token &peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
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
    return peek(k).kind == Tok::Ident && peek(k).text == s;
  }
  bool at_identifier(std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && !is_keyword(peek(k).text);
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
    if (peek().kind == Tok::End)
      fail("unexpected end of file");
    fail("unexpected token '" + std::string(peek().text) + "'");
  }
  void expect_op(std::string_view s) {
    if (!accept_op(s))
      fail("expected '" + std::string(s) + "'");
  }
  void expect_kw(std::string_view s) {
    if (!accept_kw(s))
      fail("expected '" + std::string(s) + "'");
  }
  const Token &expect_identifier() {
    if (!at_identifier())
      fail("expected identifier");
    return advance();
  }
  Span end_span(const Span &start) const { return cover(start, last_end_); }

  bool adjacent(std::size_t k) const {
    const Span &a = peek(k).span;
    const Span &b = peek(k + 1).span;
    return a.line_end == b.line_start && a.col_end == b.col_start;
  }

  // Operator at the cursor with '>'-sequences re-joined. Returns the text
  // and the number of tokens it spans.
  std::pair<std::string, std::size_t> peek_operator() const {
    if (peek().kind != Tok::Op)
      return {"", 0};
    if (peek().text != ">")
      return {std::string(peek().text), 1};
    std::string text = ">";
    std::size_t n = 1;
    while (n < 3 && at_op(">", n) && adjacent(n - 1)) {
      text += '>';
      ++n;
    }
    if (at_op("=", n) && adjacent(n - 1)) {
      text += '=';
      ++n;
    }
    return {text, n};
  }

  void skip_to_semicolon() {
    while (!at_op(";")) {
      if (peek().kind == Tok::End)
        fail("expected ';'");
      advance();
    }
    advance();
  }

  // Skips a balanced bracket group starting at the cursor.
  void skip_balanced(std::string_view open, std::string_view close) {
    expect_op(open);
    int depth = 1;
    while (depth > 0) {
      if (peek().kind == Tok::End)
        fail("expected '" + std::string(close) + "'");
      if (at_op(open))
        ++depth;
      else if (at_op(close))
        --depth;
      advance();
    }
  }

  // -- annotations, modifiers, types ---------------------------------------
  void annotation() {
    expect_op("@");
    expect_identifier();
    while (at_op(".") && at_identifier(1)) {
      advance();
      advance();
    }
    if (at_op("("))
      skip_balanced("(", ")");
  }

  void annotations() {
    while (at_op("@") && !at_kw("interface", 1))
      annotation();
  }

  Modifiers modifiers() {
    Modifiers mods;
    for (;;) {
      if (at_op("@") && !at_kw("interface", 1)) {
        annotation();
        continue;
      }
      if (peek().kind == Tok::Ident && is_member_modifier(peek().text) &&
          !(at_kw("default") && (at_op(":", 1) || at_op("->", 1)))) {
        if (auto m = parse_modifier(peek().text))
          mods.add(*m);
        advance();
        continue;
      }
      if (at_kw("non") && at_op("-", 1) && at_kw("sealed", 2)) {
        advance();
        advance();
        advance();
        continue;
      }
      return mods;
    }
  }

  bool try_type_arguments() {
    if (!accept_op("<"))
      return false;
    if (accept_op(">"))
      return true; // diamond
    for (;;) {
      annotations();
      if (accept_op("?")) {
        if (accept_kw("extends") || accept_kw("super")) {
          if (!try_type())
            return false;
        }
      } else if (!try_type()) {
        return false;
      }
      if (accept_op(","))
        continue;
      return accept_op(">");
    }
  }

  bool try_dims() {
    while (at_op("[") && at_op("]", 1)) {
      advance();
      advance();
    }
    return true;
  }

  // Consumes a type when one is present; the cursor is left unspecified on
  // failure, so callers restore it.
  bool try_type() {
    annotations();
    if (peek().kind != Tok::Ident)
      return false;
    if (is_primitive(peek().text)) {
      advance();
      return try_dims();
    }
    if (is_keyword(peek().text))
      return false;
    advance();
    if (at_op("<") && !try_type_arguments())
      return false;
    while (at_op(".") && peek(1).kind == Tok::Ident &&
           !is_keyword(peek(1).text)) {
      advance();
      advance();
      if (at_op("<") && !try_type_arguments())
        return false;
    }
    return try_dims();
  }

  Span type() {
    Span start = peek().span;
    if (!try_type())
      fail("expected a type");
    return end_span(start);
  }

  void type_parameters() { skip_balanced("<", ">"); }

  void type_list() {
    do
      type();
    while (accept_op(","));
  }

  // -- declarations --------------------------------------------------------
  bool at_type_declaration() const {
    return at_kw("class") || at_kw("interface") || at_kw("enum") ||
           (at_kw("record") && at_identifier(1)) ||
           (at_op("@") && at_kw("interface", 1));
  }

  Node type_declaration(Modifiers mods, Span start) {
    Node cls(NodeKind::ClassDef, start);
    cls.modifiers = mods;
    bool is_enum = at_kw("enum");
    bool is_record = at_kw("record");
    accept_op("@");
    advance(); // class / interface / enum / record
    cls.name = std::string(expect_identifier().text);
    if (at_op("<"))
      type_parameters();
    if (is_record) {
      expect_op("(");
      while (!at_op(")")) {
        Span ps = peek().span;
        annotations();
        type();
        accept_op("...");
        expect_identifier();
        cls.children.push_back(other_expr(end_span(ps)));
        if (!accept_op(","))
          break;
      }
      expect_op(")");
    }
    if (accept_kw("extends"))
      type_list();
    if (accept_kw("implements"))
      type_list();
    if (accept_kw("permits"))
      type_list();
    class_body(cls, *cls.name, is_enum);
    cls.span = end_span(start);
    return cls;
  }

  void class_body(Node &cls, const std::string &class_name, bool is_enum) {
    expect_op("{");
    if (is_enum)
      enum_constants(cls);
    while (!at_op("}")) {
      if (peek().kind == Tok::End)
        fail("expected '}'");
      member(cls, class_name);
    }
    expect_op("}");
  }

  void enum_constants(Node &cls) {
    while (at_identifier() || at_op("@")) {
      Span start = peek().span;
      annotations();
      std::string name(expect_identifier().text);
      Node constant = other_stmt(start);
      if (at_op("("))
        arguments(constant.children);
      if (at_op("{")) {
        Node body(NodeKind::ClassDef, peek().span);
        body.name = name;
        class_body(body, "", false);
        body.span = end_span(body.span);
        constant.children.push_back(std::move(body));
      }
      constant.span = end_span(start);
      cls.children.push_back(std::move(constant));
      if (!accept_op(","))
        break;
    }
    if (!at_op("}"))
      expect_op(";");
  }

  void member(Node &cls, const std::string &class_name) {
    if (accept_op(";"))
      return;
    Span start = peek().span;
    if (at_op("{") || (at_kw("static") && at_op("{", 1))) {
      Node init(NodeKind::InitializerBlock, start);
      if (accept_kw("static"))
        init.modifiers.add(Modifier::Static);
      init.children.push_back(block());
      init.span = end_span(start);
      cls.children.push_back(std::move(init));
      return;
    }
    Modifiers mods = modifiers();
    if (at_type_declaration()) {
      cls.children.push_back(type_declaration(mods, start));
      return;
    }
    if (at_op("<"))
      type_parameters();
    // constructor, or compact record constructor
    if (at_identifier() && (at_op("(", 1) ||
                            (at_op("{", 1) && peek().text == class_name))) {
      Node ctor(NodeKind::MethodDef, start);
      ctor.modifiers = mods;
      ctor.name = std::string(advance().text);
      if (at_op("("))
        parameters(ctor.children);
      if (accept_kw("throws"))
        type_list();
      ctor.children.push_back(block());
      ctor.span = end_span(start);
      cls.children.push_back(std::move(ctor));
      return;
    }
    type();
    const Token &name = expect_identifier();
    if (at_op("(")) {
      Node method(NodeKind::MethodDef, start);
      method.modifiers = mods;
      method.name = std::string(name.text);
      parameters(method.children);
      try_dims();
      if (accept_kw("throws"))
        type_list();
      if (accept_kw("default")) {
        method.children.push_back(element_value());
        expect_op(";");
      } else if (!accept_op(";")) {
        method.children.push_back(block());
      }
      method.span = end_span(start);
      cls.children.push_back(std::move(method));
      return;
    }
    auto decls = declarators(name);
    expect_op(";");
    cls.children.push_back(
        declaration(NodeKind::FieldDecl, mods, std::move(decls), start));
  }

  Node element_value() {
    if (at_op("{"))
      return array_initializer();
    if (at_op("@")) {
      Span start = peek().span;
      annotation();
      return other_expr(end_span(start));
    }
    return expression();
  }

  void parameters(std::vector<Node> &out) {
    expect_op("(");
    while (!at_op(")")) {
      Span start = peek().span;
      modifiers();
      type();
      accept_op("...");
      if (at_kw("this")) {
        advance(); // receiver parameter
      } else {
        expect_identifier();
        try_dims();
      }
      out.push_back(other_expr(end_span(start)));
      if (!accept_op(","))
        break;
    }
    expect_op(")");
  }

  // Declarators after the type; `first` is the already consumed name.
  std::vector<Declarator> declarators(const Token &first) {
    std::vector<Declarator> out;
    const Token *name = &first;
    for (;;) {
      Declarator d{std::string(name->text), name->span, std::nullopt};
      try_dims();
      if (accept_op("="))
        d.init = variable_initializer();
      d.span = end_span(name->span);
      out.push_back(std::move(d));
      if (!accept_op(","))
        break;
      name = &expect_identifier();
    }
    return out;
  }

  Node variable_initializer() {
    if (at_op("{"))
      return array_initializer();
    return expression();
  }

  Node array_initializer() {
    Span start = peek().span;
    expect_op("{");
    Node n = other_expr(start);
    while (!at_op("}")) {
      n.children.push_back(variable_initializer());
      if (!accept_op(","))
        break;
    }
    expect_op("}");
    n.span = end_span(start);
    return n;
  }

  // Field or local declaration node. A single declarator carries its name
  // directly; several declarators are grouped under a DeclaratorGroup.
  Node declaration(NodeKind kind, Modifiers mods, std::vector<Declarator> decls,
                   Span start) {
    Node n(kind, start);
    n.modifiers = mods;
    if (decls.size() == 1) {
      n.name = std::move(decls.front().name);
      if (decls.front().init)
        n.children.push_back(std::move(*decls.front().init));
    } else {
      Node group(NodeKind::DeclaratorGroup, cover(decls.front().span,
                                                  decls.back().span));
      for (auto &d : decls) {
        Node one(kind, d.span);
        one.is_statement = false;
        one.modifiers = mods;
        one.name = std::move(d.name);
        if (d.init)
          one.children.push_back(std::move(*d.init));
        group.children.push_back(std::move(one));
      }
      n.children.push_back(std::move(group));
    }
    n.span = end_span(start);
    return n;
  }

  // -- statements ----------------------------------------------------------
  Node block() {
    Span start = peek().span;
    expect_op("{");
    Node b(NodeKind::Block, start);
    while (!at_op("}")) {
      if (peek().kind == Tok::End)
        fail("expected '}'");
      b.children.push_back(block_statement());
    }
    expect_op("}");
    b.span = end_span(start);
    return b;
  }

  // Local variable declaration when one starts here (no trailing ';').
  std::optional<Node> try_local_declaration(bool allow_foreach_colon) {
    std::size_t save = pos_;
    Span start = peek().span;
    Modifiers mods = modifiers();
    bool had_modifiers = pos_ != save;
    std::size_t type_start = pos_;
    if (try_type() && pos_ != type_start && at_identifier()) {
      if (at_op("=", 1) || at_op(",", 1) || at_op(";", 1) || at_op("[", 1) ||
          (allow_foreach_colon && at_op(":", 1))) {
        const Token &name = advance();
        if (allow_foreach_colon && at_op(":")) {
          Node var(NodeKind::LocalVarDecl, start);
          var.is_statement = false;
          var.modifiers = mods;
          var.name = std::string(name.text);
          var.span = end_span(start);
          return var;
        }
        return declaration(NodeKind::LocalVarDecl, mods, declarators(name),
                           start);
      }
    }
    if (had_modifiers)
      fail("expected a local variable declaration");
    pos_ = save;
    return std::nullopt;
  }

  Node block_statement() {
    Span start = peek().span;
    // local class declarations
    {
      std::size_t save = pos_;
      Modifiers mods = modifiers();
      if (at_kw("class") || at_kw("interface") || at_kw("enum") ||
          (at_kw("record") && at_identifier(1) && at_op("(", 2)))
        return type_declaration(mods, start);
      pos_ = save;
    }
    if (!at_statement_keyword()) {
      if (auto decl = try_local_declaration(false)) {
        expect_op(";");
        decl->span = end_span(start);
        return std::move(*decl);
      }
    }
    return statement();
  }

  bool at_statement_keyword() const {
    if (peek().kind != Tok::Ident)
      return false;
    auto t = peek().text;
    return t == "if" || t == "while" || t == "for" || t == "do" ||
           t == "try" || t == "switch" || t == "return" || t == "break" ||
           t == "continue" || t == "throw" || t == "synchronized" ||
           t == "assert" || t == "this" || t == "super" || t == "new";
  }

  Node statement() {
    Span start = peek().span;
    if (at_op("{"))
      return block();
    if (accept_op(";"))
      return other_stmt(start);
    if (at_identifier() && at_op(":", 1)) {
      Node n(NodeKind::LabeledStmt, start);
      n.name = std::string(advance().text);
      advance();
      n.children.push_back(statement());
      n.span = end_span(start);
      return n;
    }
    if (peek().kind == Tok::Ident) {
      auto kw = peek().text;
      if (kw == "if") {
        advance();
        Node n(NodeKind::If, start);
        n.children.push_back(par_expression());
        n.children.push_back(statement());
        if (accept_kw("else"))
          n.children.push_back(statement());
        n.span = end_span(start);
        return n;
      }
      if (kw == "while") {
        advance();
        Node n(NodeKind::While, start);
        n.children.push_back(par_expression());
        n.children.push_back(statement());
        n.span = end_span(start);
        return n;
      }
      if (kw == "do") {
        advance();
        Node n = other_stmt(start);
        n.children.push_back(statement());
        expect_kw("while");
        n.children.push_back(par_expression());
        expect_op(";");
        n.span = end_span(start);
        return n;
      }
      if (kw == "for")
        return for_statement();
      if (kw == "try")
        return try_statement();
      if (kw == "switch") {
        Node n = switch_construct(/*statement=*/true);
        return n;
      }
      if (kw == "return") {
        advance();
        Node n(NodeKind::Return, start);
        if (!at_op(";"))
          n.children.push_back(expression());
        expect_op(";");
        n.span = end_span(start);
        return n;
      }
      if (kw == "break" || kw == "continue") {
        advance();
        Node n(kw == "break" ? NodeKind::Break : NodeKind::Continue, start);
        if (at_identifier())
          advance();
        expect_op(";");
        n.span = end_span(start);
        return n;
      }
      if (kw == "throw") {
        advance();
        Node n = other_stmt(start);
        n.children.push_back(expression());
        expect_op(";");
        n.span = end_span(start);
        return n;
      }
      if (kw == "synchronized") {
        advance();
        Node n = other_stmt(start);
        n.children.push_back(par_expression());
        n.children.push_back(block());
        n.span = end_span(start);
        return n;
      }
      if (kw == "assert") {
        advance();
        Node n = other_stmt(start);
        n.children.push_back(expression());
        if (accept_op(":"))
          n.children.push_back(expression());
        expect_op(";");
        n.span = end_span(start);
        return n;
      }
      if (kw == "yield" && !at_op("=", 1) && !at_op("(", 1) &&
          !at_op(".", 1) && !at_op("[", 1) && !at_op("++", 1) &&
          !at_op("--", 1) && !at_op(";", 1) && peek_operator_at(1).empty()) {
        advance();
        Node n = other_stmt(start);
        n.children.push_back(expression());
        expect_op(";");
        n.span = end_span(start);
        return n;
      }
    }
    Node e = expression();
    expect_op(";");
    Node stmt(NodeKind::ExprStmt, end_span(start));
    stmt.children.push_back(std::move(e));
    return stmt;
  }

  // Non-empty when the token at offset k is a binary/assignment operator.
  std::string peek_operator_at(std::size_t k) {
    std::size_t save = pos_;
    pos_ = std::min(pos_ + k, toks_.size() - 1);
    auto [text, n] = peek_operator();
    pos_ = save;
    if (text == "(" || text == "[" || text == ")" || text == ";" ||
        text == "{" || text == "-" || text == "+" || text == "!" ||
        text == "~")
      return {};
    return text;
  }

  Node par_expression() {
    expect_op("(");
    Node e = expression();
    expect_op(")");
    return e;
  }

  Node for_statement() {
    Span start = advance().span;
    expect_op("(");
    std::size_t save = pos_;
    if (auto var = try_local_declaration(/*allow_foreach_colon=*/true)) {
      if (accept_op(":")) {
        Node n(NodeKind::ForEach, start);
        n.children.push_back(std::move(*var));
        n.children.push_back(expression());
        expect_op(")");
        n.children.push_back(statement());
        n.span = end_span(start);
        return n;
      }
      Node n(NodeKind::CStyleFor, start);
      n.children.push_back(std::move(*var));
      return c_style_rest(std::move(n), start);
    }
    pos_ = save;
    Node n(NodeKind::CStyleFor, start);
    if (at_op(";")) {
      n.children.push_back(placeholder(peek().span));
    } else {
      Span init_start = peek().span;
      std::vector<Node> inits;
      do
        inits.push_back(expression());
      while (accept_op(","));
      if (inits.size() == 1) {
        n.children.push_back(std::move(inits.front()));
      } else {
        Node group = other_stmt(end_span(init_start), std::move(inits));
        group.is_statement = false;
        n.children.push_back(std::move(group));
      }
    }
    return c_style_rest(std::move(n), start);
  }

  Node c_style_rest(Node n, Span start) {
    expect_op(";");
    if (at_op(";"))
      n.children.push_back(placeholder(peek().span));
    else
      n.children.push_back(expression());
    expect_op(";");
    if (at_op(")")) {
      n.children.push_back(placeholder(peek().span));
    } else {
      Span update_start = peek().span;
      std::vector<Node> updates;
      do
        updates.push_back(expression());
      while (accept_op(","));
      if (updates.size() == 1)
        n.children.push_back(std::move(updates.front()));
      else
        n.children.push_back(
            other_expr(end_span(update_start), std::move(updates)));
    }
    expect_op(")");
    n.children.push_back(statement());
    n.span = end_span(start);
    return n;
  }

  Node try_statement() {
    Span start = advance().span;
    Node n = other_stmt(start);
    if (accept_op("(")) {
      while (!at_op(")")) {
        if (auto decl = try_local_declaration(false)) {
          decl->is_statement = false;
          n.children.push_back(std::move(*decl));
        } else {
          n.children.push_back(expression());
        }
        if (!accept_op(";"))
          break;
      }
      expect_op(")");
    }
    n.children.push_back(block());
    bool handled = false;
    while (at_kw("catch")) {
      Span cs = advance().span;
      expect_op("(");
      modifiers();
      type();
      while (accept_op("|"))
        type();
      expect_identifier();
      expect_op(")");
      Node clause = other_stmt(cs);
      clause.children.push_back(block());
      clause.span = end_span(cs);
      n.children.push_back(std::move(clause));
      handled = true;
    }
    if (accept_kw("finally")) {
      n.children.push_back(block());
      handled = true;
    }
    if (!handled && n.children.size() == 1)
      fail("expected 'catch' or 'finally'");
    n.span = end_span(start);
    return n;
  }

  // switch statement or expression; each case becomes an OtherStmt holding
  // its labels followed by its statements.
  Node switch_construct(bool statement_form) {
    Span start = advance().span;
    Node n(statement_form ? NodeKind::OtherStmt : NodeKind::OtherExpr, start);
    n.children.push_back(par_expression());
    expect_op("{");
    while (!at_op("}")) {
      Span cs = peek().span;
      Node clause = other_stmt(cs);
      if (accept_kw("default")) {
      } else if (accept_kw("case")) {
        do {
          if (at_kw("null") || at_kw("default")) {
            Span ls = advance().span;
            clause.children.push_back(other_expr(ls));
          } else {
            clause.children.push_back(case_label());
          }
        } while (accept_op(","));
      } else {
        unexpected();
      }
      if (accept_op("->")) {
        if (at_op("{")) {
          clause.children.push_back(block());
        } else if (at_kw("throw")) {
          clause.children.push_back(statement());
        } else {
          Span es = peek().span;
          Node e = expression();
          expect_op(";");
          Node stmt(NodeKind::ExprStmt, end_span(es));
          stmt.children.push_back(std::move(e));
          clause.children.push_back(std::move(stmt));
        }
      } else {
        expect_op(":");
        while (!at_kw("case") && !at_kw("default") && !at_op("}")) {
          if (peek().kind == Tok::End)
            fail("expected '}'");
          clause.children.push_back(block_statement());
        }
      }
      clause.span = end_span(cs);
      n.children.push_back(std::move(clause));
    }
    expect_op("}");
    n.span = end_span(start);
    return n;
  }

  // Case label: a constant expression or a type pattern `Type name`.
  Node case_label() {
    std::size_t save = pos_;
    Span start = peek().span;
    if (try_type() && at_identifier() && (at_op("->", 1) || at_op(":", 1) ||
                                          at_op(",", 1))) {
      advance();
      return other_expr(end_span(start));
    }
    pos_ = save;
    return ternary();
  }

  // -- expressions ---------------------------------------------------------
  Node expression() {
    if (at_lambda())
      return lambda();
    Node lhs = ternary();
    auto [op, count] = peek_operator();
    if (is_assign_op(op)) {
      for (std::size_t i = 0; i < count; ++i)
        advance();
      Node rhs = expression();
      Node a(NodeKind::Assign, cover(lhs.span, rhs.span));
      a.op = op;
      a.children.push_back(std::move(lhs));
      a.children.push_back(std::move(rhs));
      return a;
    }
    return lhs;
  }

  static bool is_assign_op(std::string_view op) {
    return op == "=" || op == "+=" || op == "-=" || op == "*=" ||
           op == "/=" || op == "%=" || op == "&=" || op == "|=" ||
           op == "^=" || op == "<<=" || op == ">>=" || op == ">>>=";
  }

  bool at_lambda() const {
    if (at_identifier() && at_op("->", 1))
      return true;
    if (!at_op("("))
      return false;
    int depth = 0;
    for (std::size_t k = 0;; ++k) {
      const Token &t = peek(k);
      if (t.kind == Tok::End)
        return false;
      if (t.kind == Tok::Op && t.text == "(")
        ++depth;
      else if (t.kind == Tok::Op && t.text == ")" && --depth == 0)
        return at_op("->", k + 1);
    }
  }

  Node lambda() {
    Span start = peek().span;
    Node n(NodeKind::LambdaExpr, start);
    if (at_identifier()) {
      Span ps = advance().span;
      n.children.push_back(other_expr(ps));
    } else {
      expect_op("(");
      while (!at_op(")")) {
        Span ps = peek().span;
        modifiers();
        if (!(at_identifier() && (at_op(",", 1) || at_op(")", 1)))) {
          type();
          accept_op("...");
        }
        expect_identifier();
        try_dims();
        n.children.push_back(other_expr(end_span(ps)));
        if (!accept_op(","))
          break;
      }
      expect_op(")");
    }
    expect_op("->");
    if (at_op("{"))
      n.children.push_back(block());
    else
      n.children.push_back(expression());
    n.span = end_span(start);
    return n;
  }

  Node ternary() {
    Node cond = binary(0);
    if (!accept_op("?"))
      return cond;
    Node then = at_lambda() ? lambda() : ternary_branch();
    expect_op(":");
    Node other = at_lambda() ? lambda() : ternary();
    Node t(NodeKind::TernaryOp, cover(cond.span, other.span));
    t.children.push_back(std::move(cond));
    t.children.push_back(std::move(then));
    t.children.push_back(std::move(other));
    return t;
  }

  Node ternary_branch() {
    // the middle operand of ?: is a full expression
    return expression();
  }

  static int precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "|") return 3;
    if (op == "^") return 4;
    if (op == "&") return 5;
    if (op == "==" || op == "!=") return 6;
    if (op == "<" || op == ">" || op == "<=" || op == ">=" ||
        op == "instanceof")
      return 7;
    if (op == "<<" || op == ">>" || op == ">>>") return 8;
    if (op == "+" || op == "-") return 9;
    if (op == "*" || op == "/" || op == "%") return 10;
    return 0;
  }

  Node binary(int min_prec) {
    Node lhs = unary();
    for (;;) {
      std::string op;
      std::size_t count = 1;
      if (at_kw("instanceof")) {
        op = "instanceof";
      } else {
        std::tie(op, count) = peek_operator();
      }
      int prec = precedence(op);
      if (prec == 0 || prec <= min_prec)
        return lhs;
      Span op_span = peek().span;
      for (std::size_t i = 0; i < count; ++i)
        advance();
      if (op == "instanceof") {
        accept_kw("final");
        Span ts = type();
        Node target = other_expr(ts);
        if (at_identifier()) {
          advance();
          target.span = end_span(ts);
        }
        Node n(NodeKind::InstanceOfOp, cover(lhs.span, target.span));
        n.children.push_back(std::move(lhs));
        n.children.push_back(std::move(target));
        lhs = std::move(n);
        continue;
      }
      (void)op_span;
      Node rhs = binary(prec);
      Node n(NodeKind::BinaryOp, cover(lhs.span, rhs.span));
      n.op = op;
      n.children.push_back(std::move(lhs));
      n.children.push_back(std::move(rhs));
      lhs = std::move(n);
    }
  }

  bool at_cast_operand_start() const {
    const Token &t = peek();
    switch (t.kind) {
    case Tok::Number:
    case Tok::String:
      return true;
    case Tok::Ident:
      return !is_keyword(t.text) || t.text == "this" || t.text == "super" ||
             t.text == "new" || t.text == "true" || t.text == "false" ||
             t.text == "null" || t.text == "switch" || is_primitive(t.text);
    case Tok::Op:
      return t.text == "(" || t.text == "!" || t.text == "~";
    default:
      return false;
    }
  }

  Node unary() {
    Span start = peek().span;
    if (at_op("+") || at_op("-") || at_op("++") || at_op("--") ||
        at_op("!") || at_op("~")) {
      std::string op(advance().text);
      Node operand = unary();
      Node n(NodeKind::UnaryOp, cover(start, operand.span));
      n.op = std::move(op);
      n.children.push_back(std::move(operand));
      return n;
    }
    if (at_op("(") && !at_lambda()) {
      std::size_t save = pos_;
      advance();
      bool primitive = peek().kind == Tok::Ident && is_primitive(peek().text);
      if (try_type() && at_op(")")) {
        advance();
        if (primitive ? true : at_cast_operand_start()) {
          Node operand = at_lambda() ? lambda() : unary();
          Node cast = other_expr(cover(start, operand.span));
          cast.children.push_back(std::move(operand));
          return cast;
        }
      }
      pos_ = save;
    }
    return postfix(primary());
  }

  Node postfix(Node n) {
    while (at_op("++") || at_op("--")) {
      std::string op(advance().text);
      Node u(NodeKind::UnaryOp, end_span(n.span));
      u.op = std::move(op);
      u.children.push_back(std::move(n));
      n = std::move(u);
    }
    return n;
  }

  void arguments(std::vector<Node> &out) {
    expect_op("(");
    while (!at_op(")")) {
      out.push_back(expression());
      if (!accept_op(","))
        break;
    }
    expect_op(")");
  }

  Node primary() {
    const Token &t = peek();
    Span start = t.span;
    Node n;
    if (t.kind == Tok::Number) {
      advance();
      n = Node(NodeKind::NumberLiteral, start);
      n.literal_value = std::string(t.text);
    } else if (t.kind == Tok::String) {
      advance();
      n = other_expr(start);
    } else if (at_op("(")) {
      advance();
      n = expression();
      expect_op(")");
    } else if (t.kind == Tok::Ident) {
      auto kw = t.text;
      if (kw == "true" || kw == "false" || kw == "null") {
        advance();
        n = other_expr(start);
      } else if (kw == "this" || kw == "super") {
        advance();
        if (at_op("(")) {
          n = Node(NodeKind::Call, start);
          arguments(n.children);
          n.span = end_span(start);
        } else {
          n = other_expr(start);
        }
      } else if (kw == "new") {
        n = creator();
      } else if (kw == "switch") {
        n = switch_construct(/*statement=*/false);
      } else if (is_primitive(kw)) {
        // int.class, int[]::new
        advance();
        try_dims();
        n = other_expr(end_span(start));
      } else if (!is_keyword(kw)) {
        advance();
        if (at_op("(")) {
          n = Node(NodeKind::Call, start);
          n.name = std::string(t.text);
          arguments(n.children);
          n.span = end_span(start);
        } else {
          n = other_expr(start);
        }
      } else {
        unexpected();
      }
    } else if (at_op("@")) {
      unexpected();
    } else {
      unexpected();
    }
    return selectors(std::move(n));
  }

  Node creator() {
    Span start = advance().span; // new
    if (at_op("<"))
      try_type_arguments();
    annotations();
    Node n = other_expr(start);
    // type without dims
    if (peek().kind != Tok::Ident)
      fail("expected a type after 'new'");
    std::string type_name(peek().text);
    advance();
    if (at_op("<") && !try_type_arguments())
      fail("malformed type arguments");
    while (at_op(".") && at_identifier(1)) {
      advance();
      type_name = std::string(advance().text);
      if (at_op("<") && !try_type_arguments())
        fail("malformed type arguments");
    }
    if (at_op("[")) {
      while (accept_op("[")) {
        if (!at_op("]"))
          n.children.push_back(expression());
        expect_op("]");
      }
      if (at_op("{"))
        n.children.push_back(array_initializer());
    } else {
      arguments(n.children);
      if (at_op("{")) {
        Node body(NodeKind::ClassDef, peek().span);
        body.name = type_name;
        class_body(body, "", false);
        body.span = end_span(body.span);
        n.children.push_back(std::move(body));
      }
    }
    n.span = end_span(start);
    return n;
  }

  Node selectors(Node n) {
    for (;;) {
      if (at_op(".")) {
        advance();
        if (at_op("<"))
          try_type_arguments();
        if (at_kw("new")) {
          Node inner = creator();
          Node sel = other_expr(cover(n.span, inner.span));
          sel.children.push_back(std::move(n));
          sel.children.push_back(std::move(inner));
          n = std::move(sel);
          continue;
        }
        if (!(at_kw("class") || at_kw("this") || at_kw("super") ||
              at_identifier()))
          fail("expected member name");
        advance();
        if (at_op("(")) {
          Node call(NodeKind::Call, n.span);
          call.children.push_back(std::move(n));
          arguments(call.children);
          call.span = end_span(call.span);
          n = std::move(call);
        } else {
          Node sel = other_expr(end_span(n.span));
          sel.children.push_back(std::move(n));
          n = std::move(sel);
        }
      } else if (at_op("[")) {
        if (at_op("]", 1)) {
          // array type in a method reference, e.g. String[]::new
          try_dims();
          Node sel = other_expr(end_span(n.span));
          sel.children.push_back(std::move(n));
          n = std::move(sel);
          continue;
        }
        advance();
        Node idx = other_expr(n.span);
        idx.children.push_back(std::move(n));
        idx.children.push_back(expression());
        expect_op("]");
        idx.span = end_span(idx.span);
        n = std::move(idx);
      } else if (at_op("::")) {
        advance();
        if (!accept_kw("new"))
          expect_identifier();
        Node ref = other_expr(end_span(n.span));
        ref.children.push_back(std::move(n));
        n = std::move(ref);
      } else if (at_op("<") && n.kind == NodeKind::OtherExpr &&
                 generic_method_reference_ahead()) {
        try_type_arguments();
      } else {
        return n;
      }
    }
  }

  // `List<String>::new` style references: '<' ... '>' followed by '::'.
  bool generic_method_reference_ahead() {
    std::size_t save = pos_;
    bool ok = try_type_arguments() && at_op("::");
    pos_ = save;
    return ok;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Span last_end_;
};

} // namespace

ParseResult parse_java(std::string_view source, std::string source_name) {
  try {
    detail::require_utf8(source);
    Lexer lexer(source);
    Parser parser(lexer.run());
    return Program(Language::java, parser.compilation_unit(),
                   std::move(source_name));
  } catch (const SyntaxError &e) {
    return ParseFailure{e.message, e.span};
  }
}

} // namespace design_tutor
