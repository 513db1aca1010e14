#include "design_tutor/ast.hpp"

#include <array>
#include <json.hpp>

namespace design_tutor {

namespace {

constexpr std::array<std::string_view, 30> kKindNames = {
    "Module",      "FunctionDef",  "ClassDef",      "MethodDef",
    "FieldDecl",   "DeclaratorGroup", "InitializerBlock", "Block",
    "If",          "While",        "CStyleFor",     "ForEach",
    "Return",      "Break",        "Continue",      "Pass",
    "GlobalStmt",  "LabeledStmt",  "LocalVarDecl",  "ExprStmt",
    "Assign",      "Call",         "BinaryOp",      "UnaryOp",
    "TernaryOp",   "InstanceOfOp", "LambdaExpr",    "NumberLiteral",
    "OtherExpr",   "OtherStmt",
};

static_assert(kKindNames.size() ==
              static_cast<std::size_t>(NodeKind::OtherStmt) + 1);

nlohmann::ordered_json node_to_json(const Node &n) {
  nlohmann::ordered_json j;
  j["id"] = n.id;
  j["kind"] = to_string(n.kind);
  if (n.name)
    j["name"] = *n.name;
  if (n.literal_value)
    j["value"] = *n.literal_value;
  if (!n.modifiers.empty()) {
    auto mods = nlohmann::ordered_json::array();
    for (auto kw : n.modifiers.keywords())
      mods.push_back(kw);
    j["modifiers"] = std::move(mods);
  }
  j["span"] = {n.span.line_start, n.span.col_start, n.span.line_end,
               n.span.col_end};
  auto kids = nlohmann::ordered_json::array();
  for (const auto &c : n.children)
    kids.push_back(node_to_json(c));
  j["children"] = std::move(kids);
  return j;
}

} // namespace

std::string_view to_string(Language lang) {
  return lang == Language::python ? "python" : "java";
}

std::optional<Language> parse_language(std::string_view text) {
  if (text == "python")
    return Language::python;
  if (text == "java")
    return Language::java;
  return std::nullopt;
}

bool Span::valid() const {
  if (line_start < 1 || col_start < 1 || line_end < 1 || col_end < 1)
    return false;
  return line_start < line_end ||
         (line_start == line_end && col_start <= col_end);
}

std::string_view to_string(NodeKind kind) {
  return kKindNames[static_cast<std::size_t>(kind)];
}

bool is_statement_kind(NodeKind kind) {
  switch (kind) {
  case NodeKind::FunctionDef:
  case NodeKind::ClassDef:
  case NodeKind::MethodDef:
  case NodeKind::FieldDecl:
  case NodeKind::InitializerBlock:
  case NodeKind::Block:
  case NodeKind::If:
  case NodeKind::While:
  case NodeKind::CStyleFor:
  case NodeKind::ForEach:
  case NodeKind::Return:
  case NodeKind::Break:
  case NodeKind::Continue:
  case NodeKind::Pass:
  case NodeKind::GlobalStmt:
  case NodeKind::LabeledStmt:
  case NodeKind::LocalVarDecl:
  case NodeKind::ExprStmt:
  case NodeKind::OtherStmt:
    return true;
  default:
    return false;
  }
}

std::vector<std::string_view> Modifiers::keywords() const {
  std::vector<std::string_view> out;
  if (has(Modifier::Public))
    out.push_back("public");
  if (has(Modifier::Private))
    out.push_back("private");
  if (has(Modifier::Protected))
    out.push_back("protected");
  if (has(Modifier::Static))
    out.push_back("static");
  if (has(Modifier::Final))
    out.push_back("final");
  return out;
}

std::optional<Modifier> parse_modifier(std::string_view keyword) {
  if (keyword == "public")
    return Modifier::Public;
  if (keyword == "private")
    return Modifier::Private;
  if (keyword == "protected")
    return Modifier::Protected;
  if (keyword == "static")
    return Modifier::Static;
  if (keyword == "final")
    return Modifier::Final;
  return std::nullopt;
}

const Node *Node::body() const {
  if (!is_callable() || children.empty() ||
      children.back().kind != NodeKind::Block)
    return nullptr;
  return &children.back();
}

Program::Program(Language language, Node root, std::string source_name) {
  if (root.kind != NodeKind::Module)
    throw ContractViolation("program root must be a Module node");

  auto impl = std::make_shared<Impl>();
  impl->language = language;
  impl->root = std::move(root);
  impl->source_name = std::move(source_name);

  // Iterative preorder numbering; deep expression chains must not blow the
  // stack.
  struct Frame {
    Node *node;
    std::uint32_t parent;
    std::uint32_t depth;
  };
  std::vector<Frame> stack{{&impl->root, 0, 0}};
  std::vector<std::uint32_t> open; // ids whose subtree is not closed yet
  while (!stack.empty()) {
    auto [n, parent, depth] = stack.back();
    stack.pop_back();
    auto id = static_cast<std::uint32_t>(impl->by_id.size());
    // Close every open subtree that this node is not inside of.
    while (!open.empty() && impl->depth[open.back()] >= depth) {
      impl->subtree_end[open.back()] = id;
      open.pop_back();
    }
    n->id = id;
    impl->by_id.push_back(n);
    impl->parent_id.push_back(id == 0 ? 0 : parent);
    impl->subtree_end.push_back(0);
    impl->depth.push_back(depth);
    open.push_back(id);
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it)
      stack.push_back({&*it, id, depth + 1});
  }
  auto total = static_cast<std::uint32_t>(impl->by_id.size());
  for (auto id : open)
    impl->subtree_end[id] = total;

  impl_ = std::move(impl);
}

bool Program::contains(const Node &n) const {
  return n.id < impl_->by_id.size() && impl_->by_id[n.id] == &n;
}

void Program::require(const Node &n) const {
  if (!contains(n))
    throw ContractViolation("node does not belong to this program");
}

const Node &Program::node(std::uint32_t id) const {
  if (id >= impl_->by_id.size())
    throw ContractViolation("node id out of range");
  return *impl_->by_id[id];
}

const Node *Program::parent(const Node &n) const {
  require(n);
  if (n.id == 0)
    return nullptr;
  return impl_->by_id[impl_->parent_id[n.id]];
}

std::size_t Program::depth(const Node &n) const {
  require(n);
  return impl_->depth[n.id];
}

bool Program::desc(const Node &a, const Node &b) const {
  require(a);
  require(b);
  return a.id < b.id && b.id < impl_->subtree_end[a.id];
}

bool Program::child(const Node &f, const Node &s) const {
  require(f);
  require(s);
  if (!f.is_callable())
    throw ContractViolation("child() requires a function or method");
  const Node *body = f.body();
  return body != nullptr && s.id != 0 &&
         impl_->parent_id[s.id] == body->id;
}

bool Program::before(const Node &x, const Node &y) const {
  require(x);
  require(y);
  return x.span.starts_before(y.span);
}

std::size_t Program::stmt_count(const Node &m) const {
  require(m);
  if (!m.is_callable())
    throw ContractViolation("stmt_count() requires a function or method");
  std::size_t count = 0;
  for (auto id = m.id + 1; id < impl_->subtree_end[m.id]; ++id) {
    const Node *n = impl_->by_id[id];
    if (n->is_statement && n->kind != NodeKind::Block)
      ++count;
  }
  return count;
}

std::string Program::dump_json(int indent) const {
  nlohmann::ordered_json j;
  j["language"] = to_string(language());
  j["root"] = node_to_json(root());
  return j.dump(indent);
}

} // namespace design_tutor
