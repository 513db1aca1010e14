#pragma once

#include "design_tutor/ast.hpp"

#include <vector>

namespace design_tutor::detail {

/// For each node id, the nearest proper ancestor accepted by `pred`, or
/// nullptr. Relies on ids being preorder positions.
template <typename Pred>
std::vector<const Node *> nearest_ancestor(const Program &program, Pred pred) {
  std::vector<const Node *> out(program.size(), nullptr);
  for (const Node *n : program.preorder()) {
    const Node *parent = program.parent(*n);
    if (parent == nullptr)
      continue;
    out[n->id] = pred(*parent) ? parent : out[parent->id];
  }
  return out;
}

/// Whether `n` is the operand of a unary minus.
inline bool negated(const Program &program, const Node &n) {
  const Node *parent = program.parent(n);
  return parent != nullptr && parent->kind == NodeKind::UnaryOp &&
         parent->op && *parent->op == "-";
}

} // namespace design_tutor::detail
