#include "design_tutor/rules.hpp"
#include "rule_support.hpp"

#include <map>

namespace design_tutor::python_rules {

namespace {

void require_python(const Program &program) {
  if (program.language() != Language::python)
    throw ContractViolation("Python rules applied to a non-Python program");
}

bool is_function(const Node &n) { return n.kind == NodeKind::FunctionDef; }

std::vector<const Node *> enclosing_functions(const Program &program) {
  return detail::nearest_ancestor(program, is_function);
}

bool named(const Node &n, std::string_view name) {
  return n.name && *n.name == name;
}

std::size_t parameter_count(const Node &fn) {
  return fn.body() != nullptr ? fn.children.size() - 1 : fn.children.size();
}

} // namespace

// PY01-PY04: Fun(f) ∧ Desc(f,s) ∧ Kind(s) ⟹ M(f,s). The innermost function
// is reported when several enclose s.
std::vector<Mistake> check_forbidden_statements(const Program &program) {
  require_python(program);
  auto enclosing = enclosing_functions(program);
  std::vector<Mistake> out;
  for (const Node *n : program.preorder()) {
    const Node *fn = enclosing[n->id];
    if (fn == nullptr)
      continue;
    std::string_view code;
    switch (n->kind) {
    case NodeKind::GlobalStmt: code = "PY01"; break;
    case NodeKind::Break: code = "PY02"; break;
    case NodeKind::Continue: code = "PY03"; break;
    case NodeKind::Pass: code = "PY04"; break;
    default: continue;
    }
    out.push_back(make_mistake(code, *fn->name, n->span));
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_main_conventions(const Program &program) {
  require_python(program);
  auto enclosing = enclosing_functions(program);
  std::vector<const Node *> functions;
  bool top_level_call = false;
  for (const Node *n : program.preorder()) {
    if (is_function(*n))
      functions.push_back(n);
    else if (n->kind == NodeKind::Call && named(*n, "main") &&
             enclosing[n->id] == nullptr)
      top_level_call = true;
  }

  bool has_main = false;
  bool main_not_first = false;
  bool main_has_args = false;
  bool all_main = !functions.empty();
  for (const Node *fn : functions) {
    if (named(*fn, "main")) {
      has_main = true;
      main_not_first |= fn != functions.front();
      main_has_args |= parameter_count(*fn) > 0;
    } else {
      all_main = false;
    }
  }

  std::vector<Mistake> out;
  if (!has_main)
    out.push_back(make_mistake("PY05", std::nullopt, std::nullopt));
  if (!top_level_call)
    out.push_back(make_mistake("PY06", std::nullopt, std::nullopt));
  if (main_not_first)
    out.push_back(make_mistake("PY07", std::nullopt, std::nullopt));
  if (main_has_args)
    out.push_back(make_mistake("PY08", std::nullopt, std::nullopt));
  if (all_main)
    out.push_back(make_mistake("PY09", std::nullopt, std::nullopt));
  return out;
}

std::vector<Mistake> check_nesting(const Program &program) {
  require_python(program);
  auto enclosing = enclosing_functions(program);
  std::vector<Mistake> out;
  std::map<std::uint32_t, std::size_t> returns_per_function;
  for (const Node *n : program.preorder()) {
    const Node *fn = enclosing[n->id];
    if (fn == nullptr)
      continue;
    if (is_function(*n)) {
      out.push_back(make_mistake("PY10", *fn->name, n->span));
    } else if (n->kind == NodeKind::Return) {
      // Nested return: some enclosing function f has r as a descendant but
      // not as a body statement. Report the innermost such f.
      for (const Node *f = fn; f != nullptr; f = enclosing[f->id]) {
        ++returns_per_function[f->id];
      }
      for (const Node *f = fn; f != nullptr; f = enclosing[f->id]) {
        if (!program.child(*f, *n)) {
          out.push_back(make_mistake("PY11", *f->name, n->span));
          break;
        }
      }
    }
  }
  for (auto [id, count] : returns_per_function) {
    if (count < 2)
      continue;
    const Node &fn = program.node(id);
    out.push_back(
        make_mistake("PY12", *fn.name, fn.span, std::to_string(count)));
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_calls(const Program &program) {
  require_python(program);
  auto enclosing = enclosing_functions(program);
  std::vector<Mistake> out;
  for (const Node *n : program.preorder()) {
    if (n->kind != NodeKind::Call || !n->name)
      continue;
    const std::string &callee = *n->name;
    if (callee == "main") {
      for (const Node *f = enclosing[n->id]; f != nullptr; f = enclosing[f->id]) {
        if (!named(*f, "main")) {
          out.push_back(make_mistake("PY13", *f->name, n->span));
          break;
        }
      }
    }
    for (const Node *f = enclosing[n->id]; f != nullptr; f = enclosing[f->id]) {
      if (named(*f, callee)) {
        out.push_back(make_mistake("PY14", *f->name, n->span));
        break;
      }
    }
    if (callee == "quit" || callee == "exit") {
      const Node *fn = enclosing[n->id];
      out.push_back(make_mistake(
          "PY15", fn ? std::optional<std::string>(*fn->name) : std::nullopt,
          n->span, callee));
    }
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_magic_numbers(const Program &program) {
  require_python(program);
  auto enclosing = enclosing_functions(program);
  std::vector<Mistake> out;
  for (const Node *n : program.preorder()) {
    if (n->kind != NodeKind::NumberLiteral || enclosing[n->id] == nullptr)
      continue;
    bool neg = detail::negated(program, *n);
    if (!is_magic_number(*n->literal_value, neg, Language::python))
      continue;
    std::string shown = (neg ? "-" : "") + *n->literal_value;
    out.push_back(
        make_mistake("PY16", *enclosing[n->id]->name, n->span, shown));
  }
  sort_mistakes(out);
  return out;
}

std::vector<Mistake> check_all(const Program &program) {
  std::vector<Mistake> out;
  for (auto check : {check_forbidden_statements, check_main_conventions,
                     check_nesting, check_calls, check_magic_numbers}) {
    auto part = check(program);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  sort_mistakes(out);
  return out;
}

} // namespace design_tutor::python_rules
