#include "design_tutor/rules.hpp"
#include "rule_support.hpp"

#include <map>

namespace design_tutor::java_rules {

namespace {

void require_java(const Program &program) {
  if (program.language() != Language::java)
    throw ContractViolation("Java rules applied to a non-Java program");
}

// Which classes and methods the rules look at, and which method owns each
// node. By default only top-level classes are checked and nested class
// bodies are opaque to the enclosing method.
class Scope {
public:
  Scope(const Program &program, const Options &opts) : program_(program) {
    checked_class_.assign(program.size(), false);
    owner_.assign(program.size(), nullptr);
    for (const Node *n : program.preorder()) {
      const Node *parent = program.parent(*n);
      if (n->kind == NodeKind::ClassDef)
        checked_class_[n->id] = opts.include_nested_classes ||
                                parent->kind == NodeKind::Module;
      if (parent == nullptr)
        continue;
      if (parent->kind == NodeKind::MethodDef && is_checked_method(*parent))
        owner_[n->id] = parent;
      else if (parent->kind == NodeKind::ClassDef &&
               !opts.include_nested_classes)
        owner_[n->id] = nullptr;
      else
        owner_[n->id] = owner_[parent->id];
    }
  }

  bool is_checked_class(const Node &n) const {
    return n.kind == NodeKind::ClassDef && checked_class_[n.id];
  }

  bool is_checked_method(const Node &n) const {
    if (n.kind != NodeKind::MethodDef)
      return false;
    const Node *parent = program_.parent(n);
    return parent != nullptr && is_checked_class(*parent);
  }

  /// Innermost checked method that has `n` as a descendant.
  const Node *owner(const Node &n) const { return owner_[n.id]; }

  /// Every checked method that has `n` as a descendant, innermost first.
  std::vector<const Node *> owners(const Node &n) const {
    std::vector<const Node *> out;
    for (const Node *m = owner(n); m != nullptr; m = owner(*m))
      out.push_back(m);
    return out;
  }

private:
  const Program &program_;
  std::vector<bool> checked_class_;
  std::vector<const Node *> owner_;
};

bool is_block(const Node &n) { return n.kind == NodeKind::Block; }

struct FieldDeclarator {
  const Node *node;
  Span span;
};

std::vector<FieldDeclarator> declarators_of(const Node &decl) {
  if (decl.name)
    return {{&decl, decl.span}};
  std::vector<FieldDeclarator> out;
  for (const auto &c : decl.children)
    if (c.kind == NodeKind::DeclaratorGroup)
      for (const auto &d : c.children)
        out.push_back({&d, d.span});
  return out;
}

std::size_t declarator_count(const Node &decl) {
  for (const auto &c : decl.children)
    if (c.kind == NodeKind::DeclaratorGroup)
      return c.children.size();
  return decl.name ? 1 : 0;
}

void append(std::vector<Mistake> &out, std::vector<Mistake> part) {
  out.insert(out.end(), std::make_move_iterator(part.begin()),
             std::make_move_iterator(part.end()));
}

} // namespace

std::vector<Mistake> check_attributes(const Program &program,
                                      const Options &opts) {
  require_java(program);
  Scope scope(program, opts);
  std::vector<Mistake> out;
  for (const Node *cls : program.preorder()) {
    if (!scope.is_checked_class(*cls))
      continue;
    const std::string &class_name = *cls->name;
    for (const Node &member : cls->children) {
      if (member.kind == NodeKind::InitializerBlock) {
        out.push_back(make_mistake("JV05", class_name, member.span));
        continue;
      }
      if (member.kind != NodeKind::FieldDecl)
        continue;
      const Modifiers mods = member.modifiers;
      bool is_private = mods.has(Modifier::Private);
      bool is_static_final =
          mods.has(Modifier::Static) && mods.has(Modifier::Final);
      bool is_public_constant = mods.has(Modifier::Public) && is_static_final;
      for (const auto &[decl, span] : declarators_of(member)) {
        const std::string &name = *decl->name;
        if (!(is_private || is_public_constant))
          out.push_back(make_mistake("JV01", class_name, span, name));
        if (is_static_final) {
          if (!is_all_caps(name))
            out.push_back(make_mistake("JV03", class_name, span, name));
        } else if (name.empty() || name.front() != '_') {
          out.push_back(make_mistake("JV02", class_name, span, name));
        }
      }
      if (declarator_count(member) >= 2)
        out.push_back(make_mistake("JV04", class_name, member.span));
    }
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_method_limits(const Program &program,
                                         const Options &opts) {
  require_java(program);
  Scope scope(program, opts);
  std::vector<Mistake> out;
  std::map<std::uint32_t, std::size_t> returns;
  for (const Node *n : program.preorder()) {
    if (scope.is_checked_method(*n)) {
      auto count = program.stmt_count(*n);
      if (count > kMaxMethodStatements)
        out.push_back(make_mistake("JV10", *n->name, n->span,
                                   std::to_string(count)));
      continue;
    }
    const Node *m = scope.owner(*n);
    if (m == nullptr)
      continue;
    if (n->kind == NodeKind::Return) {
      for (const Node *owner : scope.owners(*n))
        ++returns[owner->id];
    } else if (n->kind == NodeKind::Break) {
      out.push_back(make_mistake("JV08", *m->name, n->span));
    } else if (n->kind == NodeKind::Continue) {
      out.push_back(make_mistake("JV09", *m->name, n->span));
    }
  }
  for (auto [id, count] : returns) {
    if (count < 2)
      continue;
    const Node &m = program.node(id);
    out.push_back(make_mistake("JV07", *m.name, m.span, std::to_string(count)));
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_forbidden_expressions(const Program &program,
                                                 const Options &opts) {
  require_java(program);
  Scope scope(program, opts);
  std::vector<Mistake> out;
  for (const Node *n : program.preorder()) {
    const Node *m = scope.owner(*n);
    if (m == nullptr)
      continue;
    std::string_view code;
    switch (n->kind) {
    case NodeKind::InstanceOfOp: code = "JV11"; break;
    case NodeKind::TernaryOp: code = "JV12"; break;
    case NodeKind::LabeledStmt: code = "JV13"; break;
    case NodeKind::LambdaExpr: code = "JV14"; break;
    default: continue;
    }
    out.push_back(make_mistake(code, *m->name, n->span));
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_declaration_placement(const Program &program,
                                                 const Options &opts) {
  require_java(program);
  Scope scope(program, opts);
  std::vector<Mistake> out;
  for (const Node *n : program.preorder()) {
    if (scope.is_checked_method(*n)) {
      const Node *body = n->body();
      if (body == nullptr)
        continue;
      // Body statements are in source order, so a declaration is on the fly
      // exactly when some non-declaration statement precedes it.
      bool seen_other = false;
      for (const Node &stmt : body->children) {
        if (stmt.kind != NodeKind::LocalVarDecl) {
          seen_other = true;
          continue;
        }
        if (seen_other) {
          std::string names;
          for (const auto &[decl, span] : declarators_of(stmt))
            names += (names.empty() ? "" : ", ") + *decl->name;
          out.push_back(make_mistake("JV15", *n->name, stmt.span, names));
        }
      }
      continue;
    }
    const Node *m = scope.owner(*n);
    if (m != nullptr && n->kind == NodeKind::LocalVarDecl &&
        declarator_count(*n) >= 2)
      out.push_back(make_mistake("JV20", *m->name, n->span));
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_control_blocks(const Program &program,
                                          const Options &opts) {
  require_java(program);
  Scope scope(program, opts);
  std::vector<Mistake> out;
  for (const Node *n : program.preorder()) {
    const Node *m = scope.owner(*n);
    if (m == nullptr)
      continue;
    const auto &kids = n->children;
    switch (n->kind) {
    case NodeKind::If: {
      bool then_ok = kids.size() > 1 && is_block(kids[1]);
      // An `else if` chain is checked link by link.
      bool else_ok = kids.size() < 3 || is_block(kids[2]) ||
                     kids[2].kind == NodeKind::If;
      if (!then_ok || !else_ok)
        out.push_back(make_mistake("JV16", *m->name, n->span));
      break;
    }
    case NodeKind::While:
      if (kids.size() < 2 || !is_block(kids[1]))
        out.push_back(make_mistake("JV17", *m->name, n->span));
      break;
    case NodeKind::CStyleFor: {
      if (kids.size() < 4 || !is_block(kids[3]))
        out.push_back(make_mistake("JV18", *m->name, n->span));
      bool conventional = kids.size() == 4 &&
                          kids[0].kind == NodeKind::LocalVarDecl &&
                          kids[1].kind == NodeKind::BinaryOp &&
                          kids[2].kind == NodeKind::UnaryOp;
      if (!conventional)
        out.push_back(make_mistake("JV19", *m->name, n->span));
      break;
    }
    case NodeKind::ForEach:
      if (kids.empty() || !is_block(kids.back()))
        out.push_back(make_mistake("JV18", *m->name, n->span));
      break;
    default:
      break;
    }
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_magic_numbers(const Program &program,
                                         const Options &opts) {
  require_java(program);
  Scope scope(program, opts);
  auto final_decl = detail::nearest_ancestor(program, [](const Node &a) {
    return (a.kind == NodeKind::LocalVarDecl ||
            a.kind == NodeKind::FieldDecl) &&
           a.modifiers.has(Modifier::Final);
  });
  std::vector<Mistake> out;
  for (const Node *n : program.preorder()) {
    if (n->kind != NodeKind::NumberLiteral)
      continue;
    const Node *m = scope.owner(*n);
    if (m == nullptr)
      continue;
    const Node *decl = final_decl[n->id];
    if (decl != nullptr && program.desc(*m, *decl))
      continue;
    bool neg = detail::negated(program, *n);
    if (!is_magic_number(*n->literal_value, neg, Language::java))
      continue;
    out.push_back(make_mistake("JV06", *m->name, n->span,
                               (neg ? "-" : "") + *n->literal_value));
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_all(const Program &program, const Options &opts) {
  std::vector<Mistake> out;
  append(out, check_attributes(program, opts));
  append(out, check_method_limits(program, opts));
  append(out, check_forbidden_expressions(program, opts));
  append(out, check_declaration_placement(program, opts));
  append(out, check_control_blocks(program, opts));
  append(out, check_magic_numbers(program, opts));
  sort_mistakes(out);
  return out;
}

} // namespace design_tutor::java_rules
