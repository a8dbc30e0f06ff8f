#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qmu/formula.hpp"
#include "qmu/values.hpp"

namespace qmu {

using StateId = std::size_t;
using Valuation = std::vector<ExtValue>;
using Environment = std::map<std::string, Valuation>;

struct Transition {
  StateId to;
  double discount;
};

/// Finite quantitative transition system: states with named predicate values
/// and edges carrying strictly positive finite discounts.
class Qts {
 public:
  StateId add_state(std::string id);
  void add_edge(StateId from, StateId to, double discount);
  void set_predicate(const std::string& name, StateId s, ExtValue v);

  std::size_t size() const { return ids_.size(); }
  const std::string& id(StateId s) const { return ids_.at(s); }
  const std::vector<std::string>& ids() const { return ids_; }
  StateId find(const std::string& id) const;  // throws InputError if unknown

  const std::vector<Transition>& successors(StateId s) const { return succ_.at(s); }
  bool is_terminal(StateId s) const { return succ_.at(s).empty(); }

  bool has_predicate(const std::string& name) const { return preds_.contains(name); }
  // Unset states read as 0.
  ExtValue predicate(const std::string& name, StateId s) const;
  const std::map<std::string, Valuation>& predicates() const { return preds_; }

  bool is_qualitative() const;
  bool is_non_discounted() const;

 private:
  std::vector<std::string> ids_;
  std::map<std::string, StateId> index_;
  std::vector<std::vector<Transition>> succ_;
  std::map<std::string, Valuation> preds_;
};

struct EvalStats {
  std::size_t fixpoint_iterations = 0;  // Kleene steps summed over all fixpoints
  std::size_t promotions = 0;           // coordinates lifted to inf by the cap
  std::size_t floors = 0;               // coordinates dropped to 0
};

/// Evaluates phi on every state.
///
/// ~ is interpreted directly as the reciprocal, so inputs need not be in
/// negation normal form. Fixpoints use Jacobi-style Kleene iteration from
/// all-0 (mu) or all-inf (nu) until the sup-norm change is at most
/// cfg.tol_fix. Ascending coordinates above cfg.cap become inf; descending
/// coordinates below tol_fix that are still shrinking become 0. Closed
/// subformulae are evaluated once per call.
///
/// Throws ContractError for unbound variables or unknown predicates and
/// NonConvergence when a fixpoint needs more than cfg.max_iters steps.
Valuation eval(const Qts& system, const Formula& phi, const Environment& env = {},
               const SolverConfig& cfg = {}, EvalStats* stats = nullptr);

/// As eval, but asserts that every intermediate valuation takes only the
/// values 0 and inf. Requires a qualitative, non-discounted system.
Valuation eval_qualitative(const Qts& system, const Formula& phi,
                           const SolverConfig& cfg = {});

}  // namespace qmu
