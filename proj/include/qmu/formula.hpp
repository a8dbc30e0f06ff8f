#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qmu/values.hpp"

namespace qmu {

enum class Op { Pred, Var, And, Or, Diamond, Box, Scale, Mu, Nu, Not };

const char* op_name(Op op);

/// Immutable formula tree with cheap copies (shared nodes).
///
/// Pred carries a predicate name and a finite constant c >= 0 and denotes
/// |P - c|. Scale carries a strictly positive finite factor. Mu and Nu carry
/// the bound variable name and one child (the body).
class Formula {
 public:
  struct Node;

  static Formula pred(std::string name, double c);
  static Formula var(std::string name);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula diamond(Formula f);
  static Formula box(Formula f);
  static Formula scale(double d, Formula f);
  static Formula mu(std::string var, Formula body);
  static Formula nu(std::string var, Formula body);
  static Formula negate(Formula f);
  static Formula fixpoint(Op op, std::string var, Formula body);
  static Formula binary(Op op, Formula l, Formula r);
  static Formula unary(Op op, Formula f);

  Op op() const;
  // Predicate name, variable name, or bound variable of Mu/Nu.
  const std::string& name() const;
  // Predicate constant c or Scale factor d.
  double number() const;
  std::size_t arity() const;
  const Formula& child(std::size_t i = 0) const;
  const Formula& left() const { return child(0); }
  const Formula& right() const { return child(1); }
  const Formula& body() const { return child(0); }

  bool is_fixpoint() const { return op() == Op::Mu || op() == Op::Nu; }
  // Identity of the underlying node; stable for the lifetime of the tree.
  const Node* id() const { return node_.get(); }

  std::size_t size() const;   // number of subformula occurrences
  std::size_t depth() const;  // height of the tree, leaves have depth 1

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op;
  std::string name;
  double number = 0.0;
  std::vector<Formula> children;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : InputError(msg + " at offset " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

/// Parses the concrete syntax:
///
///   formula := "mu" VAR "." formula | "nu" VAR "." formula | disj
///   disj    := conj ("\/" conj)*
///   conj    := unary ("/\" unary)*
///   unary   := "<>" unary | "[]" unary | NUMBER "*" unary | "~" unary | atom
///   atom    := "|" IDENT "-" NUMBER "|" | VAR | "(" formula ")"
///
/// A fixpoint may also stand in unary position, where its body extends as
/// far right as possible. Binary operators associate to the left. Free
/// variables are allowed; binding a variable twice, or using a name both
/// free and bound, is rejected.
Formula parse(std::string_view text);

/// Prints in the grammar accepted by parse, with minimal parentheses.
std::string print(const Formula& f);

std::set<std::string> free_vars(const Formula& f);
std::set<std::string> bound_vars(const Formula& f);

/// True iff no variable is bound twice and none occurs both free and bound.
bool is_well_named(const Formula& f);

/// Renames bound variables so that the result is well-named. Fresh names
/// are of the form <name>_<k>. Already well-named formulae come back equal.
Formula make_well_named(const Formula& f);

/// Replaces every free occurrence of `var` by ~var.
Formula negate_occurrences(const Formula& f, const std::string& var);

/// Pushes negation down to predicates. Throws ContractError when a bound
/// variable sits under an odd number of negations inside its binder, or a
/// free variable ends up negated.
Formula to_nnf(const Formula& f);

bool is_nnf(const Formula& f);

/// Fixpoint priorities for the model-checking game: nu-variables even,
/// mu-variables odd, ordered by alternation level. `depth` is the
/// alternation depth and also the priority of every non-variable position.
struct PriorityAssignment {
  std::map<std::string, int> priority;
  std::map<std::string, int> level;
  int depth = 0;
};

PriorityAssignment assign_priorities(const Formula& f);

}  // namespace qmu
