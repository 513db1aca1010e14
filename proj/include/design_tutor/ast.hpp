#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace design_tutor {

enum class Language { python, java };

std::string_view to_string(Language lang);
std::optional<Language> parse_language(std::string_view text);

/// Raised when a tree predicate is called with arguments that break its
/// contract (foreign nodes, a non-callable where a function is required).
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Source region. Lines and columns are 1-based byte positions; the end
/// column points one past the last character, so an empty region has
/// equal start and end.
struct Span {
  std::uint32_t line_start = 1;
  std::uint32_t col_start = 1;
  std::uint32_t line_end = 1;
  std::uint32_t col_end = 1;

  bool starts_before(const Span &other) const {
    return line_start < other.line_start ||
           (line_start == other.line_start && col_start < other.col_start);
  }
  bool valid() const;
  friend bool operator==(const Span &, const Span &) = default;
};

enum class NodeKind : std::uint8_t {
  Module,
  FunctionDef,
  ClassDef,
  MethodDef,
  FieldDecl,
  DeclaratorGroup,
  InitializerBlock,
  Block,
  If,
  While,
  CStyleFor,
  ForEach,
  Return,
  Break,
  Continue,
  Pass,
  GlobalStmt,
  LabeledStmt,
  LocalVarDecl,
  ExprStmt,
  Assign,
  Call,
  BinaryOp,
  UnaryOp,
  TernaryOp,
  InstanceOfOp,
  LambdaExpr,
  NumberLiteral,
  OtherExpr,
  OtherStmt,
};

std::string_view to_string(NodeKind kind);
/// Default statement-ness of a kind. Assign is an expression by default;
/// the Python frontend marks assignment statements explicitly.
bool is_statement_kind(NodeKind kind);

enum class Modifier : std::uint8_t {
  Public = 1 << 0,
  Private = 1 << 1,
  Protected = 1 << 2,
  Static = 1 << 3,
  Final = 1 << 4,
};

class Modifiers {
public:
  constexpr Modifiers() = default;
  constexpr bool has(Modifier m) const {
    return (bits_ & static_cast<std::uint8_t>(m)) != 0;
  }
  constexpr void add(Modifier m) { bits_ |= static_cast<std::uint8_t>(m); }
  constexpr bool empty() const { return bits_ == 0; }
  /// Keywords in canonical order (public, private, protected, static, final).
  std::vector<std::string_view> keywords() const;
  friend constexpr bool operator==(Modifiers, Modifiers) = default;

private:
  std::uint8_t bits_ = 0;
};

std::optional<Modifier> parse_modifier(std::string_view keyword);

/// One node of the language-neutral tree.
///
/// Structural conventions shared by both frontends:
///  - FunctionDef/MethodDef: parameter nodes (OtherExpr) followed by the
///    body Block as the last child (abstract Java methods have no Block).
///  - If: [condition, then-branch, else-branch?]; While: [condition, body].
///  - CStyleFor: [init, cond, update, body]; ForEach: [variable, iterable,
///    body, ...].
///  - Call with a simple-name callee carries `name` and only argument
///    children; any other callee is kept as the first child.
///  - `op` holds the operator text of Assign, BinaryOp and UnaryOp.
struct Node {
  std::uint32_t id = 0;
  NodeKind kind = NodeKind::OtherExpr;
  std::optional<std::string> name;
  std::optional<std::string> literal_value;
  std::optional<std::string> op;
  Modifiers modifiers;
  std::vector<Node> children;
  Span span;
  bool is_statement = false;

  Node() = default;
  Node(NodeKind k, Span s)
      : kind(k), span(s), is_statement(is_statement_kind(k)) {}

  bool is(NodeKind k) const { return kind == k; }
  bool is_callable() const {
    return kind == NodeKind::FunctionDef || kind == NodeKind::MethodDef;
  }
  /// Body block of a function/method, or nullptr when absent.
  const Node *body() const;
};

/// An immutable parsed program. Node ids are assigned in preorder on
/// construction, so `desc` and `child` are O(1). Copies share the tree.
class Program {
public:
  Program(Language language, Node root, std::string source_name = {});

  Language language() const { return impl_->language; }
  const Node &root() const { return impl_->root; }
  const std::string &source_name() const { return impl_->source_name; }
  std::size_t size() const { return impl_->by_id.size(); }

  bool contains(const Node &n) const;
  const Node &node(std::uint32_t id) const;
  /// nullptr for the root.
  const Node *parent(const Node &n) const;
  std::size_t depth(const Node &n) const;

  /// True iff `b` is a proper descendant of `a`.
  bool desc(const Node &a, const Node &b) const;
  /// True iff `s` is a statement of the body of callable `f`.
  bool child(const Node &f, const Node &s) const;
  /// True iff `x` starts strictly before `y` in the source.
  bool before(const Node &x, const Node &y) const;
  /// Statement descendants of callable `m`, not counting Block wrappers.
  std::size_t stmt_count(const Node &m) const;
  /// Every node, parents first, siblings in source order.
  const std::vector<const Node *> &preorder() const { return impl_->by_id; }

  /// Debug dump as JSON: {language, root:{id,kind,name?,value?,modifiers?,span,children}}.
  std::string dump_json(int indent = -1) const;

private:
  struct Impl {
    Language language;
    Node root;
    std::string source_name;
    std::vector<const Node *> by_id;
    std::vector<std::uint32_t> parent_id;
    std::vector<std::uint32_t> subtree_end; // one past the last descendant id
    std::vector<std::uint32_t> depth;
  };

  void require(const Node &n) const;
  std::shared_ptr<const Impl> impl_;
};

} // namespace design_tutor
