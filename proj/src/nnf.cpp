#include <optional>

#include "qmu/formula.hpp"

namespace qmu {

namespace {

// `negated` is the parity of negations above the current node in the input.
// `flipped` holds the bound variables whose binder has been dualized by an
// odd number of pushed negations; their occurrences carry one extra negation
// from the substitution X -> ~X.
class NnfRewriter {
 public:
  Formula run(const Formula& f, bool negated) {
    switch (f.op()) {
      case Op::Pred:
        return negated ? Formula::negate(f) : f;
      case Op::Var: {
        auto it = scope_.find(f.name());
        if (it == scope_.end()) {
          if (negated) {
            throw ContractError("negation of free variable " + f.name() +
                                " cannot be pushed to predicates");
          }
          return f;
        }
        if (negated != it->second) {
          throw ContractError("variable " + f.name() +
                              " occurs under an odd number of negations inside its binder");
        }
        return f;
      }
      case Op::Not:
        return run(f.child(), !negated);
      case Op::And:
      case Op::Or: {
        Op op = negated ? (f.op() == Op::And ? Op::Or : Op::And) : f.op();
        Formula l = run(f.left(), negated);
        return Formula::binary(op, l, run(f.right(), negated));
      }
      case Op::Diamond:
      case Op::Box: {
        Op op = negated ? (f.op() == Op::Diamond ? Op::Box : Op::Diamond) : f.op();
        return Formula::unary(op, run(f.child(), negated));
      }
      case Op::Scale:
        // ~(d * phi) == (1/d) * ~phi under the reciprocal negation.
        return Formula::scale(negated ? 1.0 / f.number() : f.number(), run(f.child(), negated));
      case Op::Mu:
      case Op::Nu: {
        Op op = negated ? (f.op() == Op::Mu ? Op::Nu : Op::Mu) : f.op();
        auto saved = scope_.find(f.name());
        std::optional<bool> previous;
        if (saved != scope_.end()) previous = saved->second;
        scope_[f.name()] = negated;
        Formula body = run(f.body(), negated);
        if (previous) {
          scope_[f.name()] = *previous;
        } else {
          scope_.erase(f.name());
        }
        return Formula::fixpoint(op, f.name(), body);
      }
    }
    throw ContractError("to_nnf: unknown operator");
  }

 private:
  std::map<std::string, bool> scope_;  // bound variable -> flipped
};

}  // namespace

Formula to_nnf(const Formula& f) {
  NnfRewriter r;
  return r.run(f, false);
}

bool is_nnf(const Formula& f) {
  if (f.op() == Op::Not) return f.child().op() == Op::Pred;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    if (!is_nnf(f.child(i))) return false;
  }
  return true;
}

}  // namespace qmu
