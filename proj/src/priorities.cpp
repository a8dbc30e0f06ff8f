#include <algorithm>

#include "qmu/formula.hpp"

namespace qmu {

namespace {

struct Binder {
  std::string name;
  Op kind;
  int level;
};

// level(X) = 1 when X depends on no enclosing binder; otherwise the maximum
// over enclosing binders Y occurring free in the subformula of X of level(Y),
// plus one when Y and X are of different kinds.
void walk(const Formula& f, std::vector<Binder>& enclosing, PriorityAssignment& out) {
  if (f.is_fixpoint()) {
    auto deps = free_vars(f);
    int level = 1;
    for (const auto& y : enclosing) {
      if (deps.contains(y.name)) level = std::max(level, y.level + (y.kind != f.op() ? 1 : 0));
    }
    int prio = level - 1;
    int parity = f.op() == Op::Nu ? 0 : 1;
    if (prio % 2 != parity) ++prio;
    out.level[f.name()] = level;
    out.priority[f.name()] = prio;
    out.depth = std::max(out.depth, level);
    enclosing.push_back({f.name(), f.op(), level});
    walk(f.body(), enclosing, out);
    enclosing.pop_back();
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) walk(f.child(i), enclosing, out);
}

}  // namespace

PriorityAssignment assign_priorities(const Formula& f) {
  PriorityAssignment out;
  std::vector<Binder> enclosing;
  walk(f, enclosing, out);
  return out;
}

}  // namespace qmu
