#include <algorithm>
#include <cmath>
#include <optional>

#include "qmu/formula.hpp"

namespace qmu {

const char* op_name(Op op) {
  switch (op) {
    case Op::Pred: return "Pred";
    case Op::Var: return "Var";
    case Op::And: return "And";
    case Op::Or: return "Or";
    case Op::Diamond: return "Diamond";
    case Op::Box: return "Box";
    case Op::Scale: return "Scale";
    case Op::Mu: return "Mu";
    case Op::Nu: return "Nu";
    case Op::Not: return "Not";
  }
  return "?";
}

namespace {

std::shared_ptr<const Formula::Node> make(Op op, std::string name, double number,
                                          std::vector<Formula> children) {
  return std::make_shared<const Formula::Node>(
      Formula::Node{op, std::move(name), number, std::move(children)});
}

}  // namespace

Formula Formula::pred(std::string name, double c) {
  if (!(c >= 0.0) || std::isinf(c)) {
    throw ContractError("predicate constant must be finite and nonnegative");
  }
  return Formula(make(Op::Pred, std::move(name), c, {}));
}

Formula Formula::var(std::string name) { return Formula(make(Op::Var, std::move(name), 0, {})); }

Formula Formula::conj(Formula l, Formula r) { return binary(Op::And, std::move(l), std::move(r)); }
Formula Formula::disj(Formula l, Formula r) { return binary(Op::Or, std::move(l), std::move(r)); }
Formula Formula::diamond(Formula f) { return unary(Op::Diamond, std::move(f)); }
Formula Formula::box(Formula f) { return unary(Op::Box, std::move(f)); }
Formula Formula::negate(Formula f) { return unary(Op::Not, std::move(f)); }

Formula Formula::scale(double d, Formula f) {
  if (!(d > 0.0) || std::isinf(d)) {
    throw ContractError("discount factor must be strictly positive and finite");
  }
  return Formula(make(Op::Scale, "", d, {std::move(f)}));
}

Formula Formula::mu(std::string var, Formula body) {
  return fixpoint(Op::Mu, std::move(var), std::move(body));
}
Formula Formula::nu(std::string var, Formula body) {
  return fixpoint(Op::Nu, std::move(var), std::move(body));
}

Formula Formula::fixpoint(Op op, std::string var, Formula body) {
  if (op != Op::Mu && op != Op::Nu) throw ContractError("fixpoint: op must be Mu or Nu");
  return Formula(make(op, std::move(var), 0, {std::move(body)}));
}

Formula Formula::binary(Op op, Formula l, Formula r) {
  if (op != Op::And && op != Op::Or) throw ContractError("binary: op must be And or Or");
  return Formula(make(op, "", 0, {std::move(l), std::move(r)}));
}

Formula Formula::unary(Op op, Formula f) {
  if (op != Op::Diamond && op != Op::Box && op != Op::Not) {
    throw ContractError("unary: op must be Diamond, Box or Not");
  }
  return Formula(make(op, "", 0, {std::move(f)}));
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
double Formula::number() const { return node_->number; }
std::size_t Formula::arity() const { return node_->children.size(); }

const Formula& Formula::child(std::size_t i) const {
  if (i >= node_->children.size()) throw ContractError("formula child index out of range");
  return node_->children[i];
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.size();
  return n;
}

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const auto& c : node_->children) d = std::max(d, c.depth());
  return d + 1;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op() || a.name() != b.name() || a.number() != b.number() ||
      a.arity() != b.arity()) {
    return false;
  }
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!(a.child(i) == b.child(i))) return false;
  }
  return true;
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::Var:
      if (!bound.contains(f.name())) out.insert(f.name());
      return;
    case Op::Mu:
    case Op::Nu: {
      bool fresh = bound.insert(f.name()).second;
      collect_free(f.body(), bound, out);
      if (fresh) bound.erase(f.name());
      return;
    }
    default:
      for (std::size_t i = 0; i < f.arity(); ++i) collect_free(f.child(i), bound, out);
  }
}

void collect_bound(const Formula& f, std::multiset<std::string>& out) {
  if (f.is_fixpoint()) out.insert(f.name());
  for (std::size_t i = 0; i < f.arity(); ++i) collect_bound(f.child(i), out);
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<std::string> bound_vars(const Formula& f) {
  std::multiset<std::string> all;
  collect_bound(f, all);
  return {all.begin(), all.end()};
}

bool is_well_named(const Formula& f) {
  std::multiset<std::string> all;
  collect_bound(f, all);
  std::set<std::string> unique(all.begin(), all.end());
  if (unique.size() != all.size()) return false;
  for (const auto& v : free_vars(f)) {
    if (unique.contains(v)) return false;
  }
  return true;
}

namespace {

class Renamer {
 public:
  explicit Renamer(const Formula& f) {
    taken_ = free_vars(f);
    std::multiset<std::string> all;
    collect_bound(f, all);
    taken_.insert(all.begin(), all.end());
    reserved_ = free_vars(f);
  }

  Formula run(const Formula& f, std::map<std::string, std::string>& scope) {
    switch (f.op()) {
      case Op::Pred:
        return f;
      case Op::Var: {
        auto it = scope.find(f.name());
        if (it == scope.end() || it->second == f.name()) return f;
        return Formula::var(it->second);
      }
      case Op::Mu:
      case Op::Nu: {
        std::string name = f.name();
        if (used_.contains(name) || reserved_.contains(name)) name = fresh(name);
        used_.insert(name);
        auto saved = scope.find(f.name()) == scope.end()
                         ? std::optional<std::string>{}
                         : std::optional<std::string>{scope[f.name()]};
        scope[f.name()] = name;
        Formula body = run(f.body(), scope);
        if (saved) {
          scope[f.name()] = *saved;
        } else {
          scope.erase(f.name());
        }
        if (name == f.name() && body.id() == f.body().id()) return f;
        return Formula::fixpoint(f.op(), name, body);
      }
      case Op::Scale: {
        Formula c = run(f.child(), scope);
        return c.id() == f.child().id() ? f : Formula::scale(f.number(), c);
      }
      case Op::And:
      case Op::Or: {
        Formula l = run(f.left(), scope);
        Formula r = run(f.right(), scope);
        if (l.id() == f.left().id() && r.id() == f.right().id()) return f;
        return Formula::binary(f.op(), l, r);
      }
      default: {
        Formula c = run(f.child(), scope);
        return c.id() == f.child().id() ? f : Formula::unary(f.op(), c);
      }
    }
  }

 private:
  std::string fresh(const std::string& base) {
    for (int k = 1;; ++k) {
      std::string cand = base + "_" + std::to_string(k);
      if (!taken_.contains(cand)) {
        taken_.insert(cand);
        return cand;
      }
    }
  }

  std::set<std::string> taken_;
  std::set<std::string> reserved_;
  std::set<std::string> used_;
};

}  // namespace

Formula make_well_named(const Formula& f) {
  Renamer r(f);
  std::map<std::string, std::string> scope;
  return r.run(f, scope);
}

Formula negate_occurrences(const Formula& f, const std::string& var) {
  switch (f.op()) {
    case Op::Pred:
      return f;
    case Op::Var:
      return f.name() == var ? Formula::negate(f) : f;
    case Op::Mu:
    case Op::Nu:
      if (f.name() == var) return f;  // shadowed
      return Formula::fixpoint(f.op(), f.name(), negate_occurrences(f.body(), var));
    case Op::Scale:
      return Formula::scale(f.number(), negate_occurrences(f.child(), var));
    case Op::And:
    case Op::Or:
      return Formula::binary(f.op(), negate_occurrences(f.left(), var),
                             negate_occurrences(f.right(), var));
    default:
      return Formula::unary(f.op(), negate_occurrences(f.child(), var));
  }
}

}  // namespace qmu
