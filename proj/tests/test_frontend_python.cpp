#include "design_tutor/frontend.hpp"

#include "generators.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace design_tutor;

namespace {

Program ok(const std::string &src) {
  auto r = parse_python(src, "t.py");
  if (auto *f = std::get_if<ParseFailure>(&r))
    FAIL_CHECK(f->describe());
  REQUIRE(std::holds_alternative<Program>(r));
  return std::get<Program>(std::move(r));
}

ParseFailure bad(const std::string &src) {
  auto r = parse_python(src, "t.py");
  REQUIRE(std::holds_alternative<ParseFailure>(r));
  return std::get<ParseFailure>(std::move(r));
}

std::vector<const Node *> all_of(const Program &p, NodeKind k) {
  std::vector<const Node *> out;
  for (const Node *n : p.preorder())
    if (n->kind == k)
      out.push_back(n);
  return out;
}

std::string kinds(const Node &n) {
  std::string s(to_string(n.kind));
  if (n.children.empty())
    return s;
  s += "(";
  for (std::size_t i = 0; i < n.children.size(); ++i)
    s += (i ? " " : "") + kinds(n.children[i]);
  return s + ")";
}

// Text covered by a single-line span.
std::string text_at(const std::string &src, const Span &s) {
  std::istringstream in(src);
  std::string line;
  for (std::uint32_t i = 0; i < s.line_start; ++i)
    std::getline(in, line);
  return line.substr(s.col_start - 1, s.col_end - s.col_start);
}

} // namespace

TEST_CASE("global score example parses to one function with two global statements") {
  auto p = ok("def record_score(h_won):\n   global human_score\n"
              "   global comp_score\n\n   if h_won:\n      human_score += 1\n"
              "   else:\n      comp_score += 1\n");
  auto fns = all_of(p, NodeKind::FunctionDef);
  REQUIRE(fns.size() == 1);
  CHECK(fns[0]->name == "record_score");
  auto globals = all_of(p, NodeKind::GlobalStmt);
  REQUIRE(globals.size() == 2);
  CHECK(globals[0]->name == "human_score");
  CHECK(globals[0]->span == Span{2, 4, 2, 22});
  CHECK(globals[1]->span.line_start == 3);
  CHECK(kinds(*fns[0]) ==
        "FunctionDef(OtherExpr Block(GlobalStmt GlobalStmt "
        "If(OtherExpr Block(Assign(OtherExpr NumberLiteral)) "
        "Block(Assign(OtherExpr NumberLiteral)))))");
}

TEST_CASE("empty and trivial modules") {
  CHECK(ok("").size() == 1);
  CHECK(ok("\n\n   \n# only a comment\n").size() == 1);
  auto p = ok("x = 1");
  CHECK(kinds(p.root()) == "Module(Assign(OtherExpr NumberLiteral))");
}

TEST_CASE("syntax errors are reported with a position") {
  auto f = bad("def f(:\n    pass\n");
  CHECK_FALSE(f.message.empty());
  REQUIRE(f.span.has_value());
  CHECK(f.span->line_start == 1);
  CHECK(f.describe().rfind("1:", 0) == 0);

  bad("def f():\npass\n");                 // missing indent
  bad("if x:\n    a = 1\n  b = 2\n");      // dedent to unknown level
  bad("s = 'abc\n");                       // unterminated string
  bad("x = (1, 2\n");                      // unclosed bracket
  bad("x = 1)\n");                         // stray closer
  bad("x = 08\n");                         // invalid number
  bad("x = $\n");                          // unknown character
  bad("return = 3\n");
  bad("def f()\n    pass\n");
  bad("x = \"\"\"never closed\n");
  CHECK(bad("a = 1\nb = = 2\n").span->line_start == 2);
}

TEST_CASE("source must be valid UTF-8") {
  auto f = bad("x = 1\ns = 'a\xc0\xaf'\n"); // overlong '/'
  CHECK(f.span->line_start == 2);
  CHECK(f.span->col_start == 7);
  bad("s = '\xed\xa0\x80'\n"); // surrogate
  bad("s = '\xe2\x82'\n");      // truncated
  bad("\xff\n");
  ok("s = '\xe2\x82\xac \xf0\x9f\x98\x80'\n");
}

TEST_CASE("function headers") {
  auto p = ok("def f(a, b=3, *args, c: int = -1, **kw) -> int:\n    return a\n");
  const Node *f = all_of(p, NodeKind::FunctionDef).at(0);
  CHECK(f->children.size() == 6); // five params and the body
  CHECK(f->body() == &f->children.back());
  CHECK(f->children[1].children.at(0).kind == NodeKind::NumberLiteral);
  CHECK(f->children[3].children.at(0).kind == NodeKind::UnaryOp);
}

TEST_CASE("elif chains nest") {
  auto p = ok("if a:\n    x = 1\nelif b:\n    x = 2\nelse:\n    x = 3\n");
  auto ifs = all_of(p, NodeKind::If);
  REQUIRE(ifs.size() == 2);
  CHECK(ifs[0]->children.size() == 3);
  CHECK(ifs[0]->children[2].kind == NodeKind::If);
  CHECK(ifs[1]->children.size() == 3);
}

TEST_CASE("loops") {
  auto p = ok("while x < 3:\n    x += 1\nelse:\n    pass\n"
              "for i, j in pairs:\n    break\nelse:\n    continue\n");
  const Node *w = all_of(p, NodeKind::While).at(0);
  CHECK(w->children[0].kind == NodeKind::BinaryOp);
  CHECK(w->children[1].kind == NodeKind::Block);
  const Node *f = all_of(p, NodeKind::ForEach).at(0);
  CHECK(f->children.size() == 4);
  CHECK(f->children[2].kind == NodeKind::Block);
  CHECK(all_of(p, NodeKind::Break).size() == 1);
  CHECK(all_of(p, NodeKind::Continue).size() == 1);
  CHECK(all_of(p, NodeKind::Pass).size() == 1);
}

TEST_CASE("global lists give one node per name") {
  auto p = ok("def f():\n    global a, b, c\n");
  auto gs = all_of(p, NodeKind::GlobalStmt);
  REQUIRE(gs.size() == 3);
  CHECK(gs[0]->name == "a");
  CHECK(gs[2]->name == "c");
  CHECK(gs[0]->span == Span{2, 5, 2, 13});
  CHECK(gs[1]->span == Span{2, 15, 2, 16});
}

TEST_CASE("assignments normalize to Assign statements") {
  auto p = ok("a = b = 1\nc += 2\nd: int = 3\ne //= 4\nx[0] = 5\n");
  auto as = all_of(p, NodeKind::Assign);
  REQUIRE(as.size() == 5);
  for (const Node *a : as)
    CHECK(a->is_statement);
  CHECK(as[0]->op == "=");
  CHECK(as[1]->op == "+=");
  CHECK(as[3]->op == "//=");
  CHECK(all_of(p, NodeKind::ExprStmt).empty());
}

TEST_CASE("call names only for simple callees") {
  auto p = ok("main()\nobj.run(1)\nf(x)(y)\nprint(quit)\n");
  auto calls = all_of(p, NodeKind::Call);
  REQUIRE(calls.size() == 5);
  CHECK(calls[0]->name == "main");
  CHECK(calls[0]->children.empty());
  CHECK_FALSE(calls[1]->name.has_value());
  CHECK(calls[1]->children.size() == 2); // callee and argument
  CHECK_FALSE(calls[2]->name.has_value());
  CHECK(calls[3]->name == "f");
  CHECK(calls[4]->name == "print");
  for (const Node *c : calls)
    CHECK_FALSE(c->is_statement);
  CHECK(all_of(p, NodeKind::ExprStmt).size() == 4);
}

TEST_CASE("expressions") {
  auto p = ok("x = -5 + ~y * (a if c else b) ** 2\n"
              "ok = not a and b or c < d <= e is not None\n"
              "f = lambda q, r=2: q + r\n"
              "if (n := 10) > 5:\n    pass\n"
              "z = [i for i in range(3)] + {1: 2}[1] + (1, 2)[0]\n");
  CHECK(all_of(p, NodeKind::TernaryOp).size() == 1);
  CHECK(all_of(p, NodeKind::LambdaExpr).size() == 1);
  auto unary = all_of(p, NodeKind::UnaryOp);
  REQUIRE(unary.size() == 3);
  CHECK(unary[0]->op == "-");
  CHECK(unary[0]->children[0].literal_value == "5");
  CHECK(unary[1]->op == "~");
  CHECK(unary[2]->op == "not");
  auto walrus = all_of(p, NodeKind::Assign);
  CHECK(std::any_of(walrus.begin(), walrus.end(),
                    [](const Node *n) { return n->op == ":=" && !n->is_statement; }));
}

TEST_CASE("number literal forms keep their text") {
  auto p = ok("v = [0x1F, 0o17, 0b101, 1_000, 3.14, .5, 1e-3, 2j, 10.]\n");
  std::vector<std::string> values;
  for (const Node *n : all_of(p, NodeKind::NumberLiteral))
    values.push_back(*n->literal_value);
  CHECK(values == std::vector<std::string>{"0x1F", "0o17", "0b101", "1_000",
                                           "3.14", ".5", "1e-3", "2j", "10."});
}

TEST_CASE("strings, comments and continuation lines") {
  auto p = ok("s = r'a\\'b' + b\"x\" + f'{y}'\n"
              "t = '''multi\nline''' # trailing\n"
              "u = 1 + \\\n    2\n"
              "v = (1 +\n  2)\n"
              "w = 3\n");
  auto as = all_of(p, NodeKind::Assign);
  REQUIRE(as.size() == 5);
  CHECK(as[1]->span.line_start == 2);
  CHECK(as[1]->span.line_end == 3);
  CHECK(as[2]->span.line_end == 5);
  CHECK(as[4]->span.line_start == 8);
}

TEST_CASE("tabs and mixed indentation") {
  auto p = ok("def f():\n\tif x:\n\t\treturn 1\n\treturn 2\n");
  CHECK(all_of(p, NodeKind::Return).size() == 2);
  auto q = ok("if x:\n        a = 1\n\tb = 2\n"); // a tab reaches column 8
  CHECK(all_of(q, NodeKind::Assign).size() == 2);
}

TEST_CASE("constructs outside the subset are kept as OtherStmt") {
  auto p = ok("import os\nfrom x import y\nclass C:\n    def m(self):\n"
              "        return 1\n@deco\ndef g():\n    pass\n"
              "try:\n    a = 1\nexcept E as e:\n    raise\nfinally:\n    del a\n"
              "with open(p) as fh, x:\n    assert fh, 'msg'\n"
              "def h():\n    nonlocal q\n");
  auto others = all_of(p, NodeKind::OtherStmt);
  CHECK(others.size() >= 7);
  // the method inside the class is still a FunctionDef
  auto fns = all_of(p, NodeKind::FunctionDef);
  REQUIRE(fns.size() == 3);
  CHECK(fns[0]->name == "m");
  CHECK(fns[1]->name == "g");
  CHECK(all_of(p, NodeKind::Return).size() == 1);
}

TEST_CASE("one-line compound statements") {
  auto p = ok("def f(): return 1\nif x: a = 1; b = 2\nwhile y: break\n");
  CHECK(all_of(p, NodeKind::Return).size() == 1);
  CHECK(all_of(p, NodeKind::Assign).size() == 2);
  CHECK(all_of(p, NodeKind::Break).size() == 1);
}

TEST_CASE("non-ASCII identifiers and strings") {
  auto p = ok("def größe():\n    s = 'héllo'\n    return s\n");
  CHECK(all_of(p, NodeKind::FunctionDef).at(0)->name == "größe");
}

TEST_CASE("CRLF line endings") {
  auto p = ok("def f():\r\n    return 1\r\n");
  CHECK(all_of(p, NodeKind::Return).at(0)->span.line_start == 2);
}

TEST_CASE("spans of number literals map back to the source") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto src = gen::python_program(seed);
    auto p = ok(src);
    for (const Node *n : all_of(p, NodeKind::NumberLiteral))
      CHECK(text_at(src, n->span) == *n->literal_value);
    for (const Node *n : p.preorder()) {
      CHECK(n->span.valid());
      if (const Node *par = p.parent(*n); par && par->kind != NodeKind::Module)
        CHECK_FALSE(n->span.starts_before(par->span));
    }
  }
}

TEST_CASE("parsing is deterministic") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    auto src = gen::python_program(seed);
    CHECK(ok(src).dump_json() == ok(src).dump_json());
  }
}
