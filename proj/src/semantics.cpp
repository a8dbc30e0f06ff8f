#include <cmath>
#include <optional>
#include <unordered_map>

#include "qmu/semantics.hpp"

namespace qmu {

StateId Qts::add_state(std::string id) {
  if (index_.contains(id)) throw InputError("duplicate state id '" + id + "'");
  StateId s = ids_.size();
  index_.emplace(id, s);
  ids_.push_back(std::move(id));
  succ_.emplace_back();
  for (auto& [name, vals] : preds_) vals.push_back(ExtValue::zero());
  return s;
}

void Qts::add_edge(StateId from, StateId to, double discount) {
  if (from >= size() || to >= size()) throw ContractError("edge endpoint out of range");
  if (!(discount > 0.0) || std::isinf(discount)) {
    throw InputError("edge discount must be strictly positive and finite");
  }
  for (const auto& t : succ_[from]) {
    if (t.to == to) throw InputError("duplicate edge " + ids_[from] + " -> " + ids_[to]);
  }
  succ_[from].push_back({to, discount});
}

void Qts::set_predicate(const std::string& name, StateId s, ExtValue v) {
  if (s >= size()) throw ContractError("state out of range");
  auto [it, inserted] = preds_.try_emplace(name, Valuation(size(), ExtValue::zero()));
  it->second[s] = v;
}

StateId Qts::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown state '" + id + "'");
  return it->second;
}

ExtValue Qts::predicate(const std::string& name, StateId s) const {
  auto it = preds_.find(name);
  if (it == preds_.end()) throw ContractError("unknown predicate '" + name + "'");
  return it->second.at(s);
}

bool Qts::is_qualitative() const {
  for (const auto& [name, vals] : preds_) {
    for (auto v : vals) {
      if (!v.is_zero() && !v.is_infinite()) return false;
    }
  }
  return true;
}

bool Qts::is_non_discounted() const {
  for (const auto& ts : succ_) {
    for (const auto& t : ts) {
      if (t.discount != 1.0) return false;
    }
  }
  return true;
}

namespace {

class Evaluator {
 public:
  Evaluator(const Qts& k, const Environment& env, const SolverConfig& cfg, bool qualitative)
      : k_(k), env_(env), cfg_(cfg), qualitative_(qualitative) {}

  Valuation run(const Formula& f) {
    const auto* key = f.id();
    auto closed = closed_.find(key);
    if (closed == closed_.end()) {
      closed = closed_.emplace(key, free_vars(f).empty()).first;
    }
    if (closed->second) {
      auto hit = cache_.find(key);
      if (hit != cache_.end()) return hit->second;
    }
    Valuation v = compute(f);
    if (qualitative_) {
      for (auto x : v) {
        if (!x.is_zero() && !x.is_infinite()) {
          throw ContractError("qualitative evaluation produced " + to_string(x) + " at " +
                              print(f));
        }
      }
    }
    if (closed->second) cache_.emplace(key, v);
    return v;
  }

  EvalStats stats;

 private:
  Valuation compute(const Formula& f) {
    const std::size_t n = k_.size();
    Valuation out(n);
    switch (f.op()) {
      case Op::Pred:
        for (StateId s = 0; s < n; ++s) out[s] = ext_absdiff(k_.predicate(f.name(), s), f.number());
        return out;
      case Op::Var: {
        auto it = env_.find(f.name());
        if (it == env_.end()) throw ContractError("unbound variable " + f.name());
        if (it->second.size() != n) {
          throw ContractError("valuation of " + f.name() + " does not cover all states");
        }
        return it->second;
      }
      case Op::Not: {
        Valuation c = run(f.child());
        for (StateId s = 0; s < n; ++s) out[s] = ext_recip(c[s]);
        return out;
      }
      case Op::And:
      case Op::Or: {
        Valuation l = run(f.left());
        Valuation r = run(f.right());
        for (StateId s = 0; s < n; ++s) {
          out[s] = f.op() == Op::And ? ext_min(l[s], r[s]) : ext_max(l[s], r[s]);
        }
        return out;
      }
      case Op::Diamond:
      case Op::Box: {
        Valuation c = run(f.child());
        bool dia = f.op() == Op::Diamond;
        for (StateId s = 0; s < n; ++s) {
          // sup of the empty set is 0, inf of the empty set is inf
          ExtValue acc = dia ? ExtValue::zero() : kInfinity;
          for (const auto& t : k_.successors(s)) {
            if (dia) {
              acc = ext_max(acc, ext_mul(t.discount, c[t.to]));
            } else {
              acc = ext_min(acc, ext_mul(1.0 / t.discount, c[t.to]));
            }
          }
          out[s] = acc;
        }
        return out;
      }
      case Op::Scale: {
        Valuation c = run(f.child());
        for (StateId s = 0; s < n; ++s) out[s] = ext_mul(f.number(), c[s]);
        return out;
      }
      case Op::Mu:
      case Op::Nu:
        return fixpoint(f);
    }
    throw ContractError("eval: unknown operator");
  }

  Valuation fixpoint(const Formula& f) {
    const bool least = f.op() == Op::Mu;
    const std::size_t n = k_.size();
    Valuation cur(n, least ? ExtValue::zero() : kInfinity);

    std::optional<Valuation> shadowed;
    if (auto it = env_.find(f.name()); it != env_.end()) shadowed = it->second;

    double change = 0.0;
    for (std::size_t iter = 0; iter < cfg_.max_iters; ++iter) {
      env_[f.name()] = cur;
      Valuation next = run(f.body());
      ++stats.fixpoint_iterations;
      for (StateId s = 0; s < n; ++s) {
        if (least && next[s].is_finite() && next[s].value() > cfg_.cap && cur[s] < next[s]) {
          next[s] = kInfinity;
          ++stats.promotions;
        } else if (!least && !next[s].is_zero() && next[s].value() < cfg_.tol_fix &&
                   next[s] < cur[s]) {
          next[s] = ExtValue::zero();
          ++stats.floors;
        }
      }
      change = sup_distance(cur, next);
      cur = std::move(next);
      if (change <= cfg_.tol_fix) {
        if (shadowed) {
          env_[f.name()] = *shadowed;
        } else {
          env_.erase(f.name());
        }
        return cur;
      }
    }
    throw NonConvergence("fixpoint " + std::string(least ? "mu " : "nu ") + f.name() +
                             " did not stabilize within " + std::to_string(cfg_.max_iters) +
                             " iterations (last change " + format_number(change) + ")",
                         change);
  }

  const Qts& k_;
  Environment env_;
  const SolverConfig& cfg_;
  bool qualitative_;
  std::unordered_map<const Formula::Node*, bool> closed_;
  std::unordered_map<const Formula::Node*, Valuation> cache_;
};

}  // namespace

Valuation eval(const Qts& system, const Formula& phi, const Environment& env,
               const SolverConfig& cfg, EvalStats* stats) {
  cfg.validate();
  Evaluator e(system, env, cfg, false);
  Valuation v = e.run(phi);
  if (stats) *stats = e.stats;
  return v;
}

Valuation eval_qualitative(const Qts& system, const Formula& phi, const SolverConfig& cfg) {
  if (!system.is_qualitative()) throw ContractError("eval_qualitative: system is not qualitative");
  if (!system.is_non_discounted()) {
    throw ContractError("eval_qualitative: system is discounted");
  }
  cfg.validate();
  Evaluator e(system, {}, cfg, true);
  return e.run(phi);
}

}  // namespace qmu
