#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "qmu/bridge.hpp"

namespace qmu {

McGame build_mc_game(const Qts& system, const Formula& phi) {
  if (!free_vars(phi).empty()) throw ContractError("build_mc_game: formula is not closed");
  if (!is_nnf(phi)) throw ContractError("build_mc_game: formula is not in negation normal form");

  McGame mc;
  const Formula named = make_well_named(phi);
  const PriorityAssignment prio = assign_priorities(named);
  mc.depth = prio.depth;

  std::vector<std::vector<std::size_t>> kids;
  std::map<std::string, std::size_t> binder;  // variable -> occurrence of its fixpoint
  std::function<std::size_t(const Formula&)> number = [&](const Formula& f) {
    std::size_t k = mc.occurrences.size();
    mc.occurrences.push_back(f);
    kids.emplace_back();
    if (f.is_fixpoint()) binder[f.name()] = k;
    for (std::size_t i = 0; i < f.arity(); ++i) {
      std::size_t c = number(f.child(i));
      kids[k].push_back(c);
    }
    return k;
  };
  number(named);

  Game& g = mc.game;
  const std::size_t n = system.size();
  mc.at.assign(mc.occurrences.size(), std::vector<PositionId>(n));
  for (std::size_t k = 0; k < mc.occurrences.size(); ++k) {
    const Formula& f = mc.occurrences[k];
    const Op op = f.op();
    const Player owner = op == Op::Box || op == Op::And || op == Op::Nu ? Player::One : Player::Zero;
    const int priority = op == Op::Var ? prio.priority.at(f.name()) : prio.depth;
    const std::string text = print(f);
    for (StateId s = 0; s < n; ++s) {
      mc.at[k][s] = g.add_position("p" + std::to_string(k) + "@" + system.id(s), owner, priority);
      mc.labels.push_back(text);
    }
  }
  mc.zero_sink = g.add_position("zero", Player::Zero, prio.depth);
  mc.labels.push_back("0");
  mc.inf_sink = g.add_position("inf", Player::Zero, prio.depth);
  mc.labels.push_back("inf");
  g.set_payoff(mc.zero_sink, ExtValue::zero());
  g.set_payoff(mc.inf_sink, kInfinity);

  for (std::size_t k = 0; k < mc.occurrences.size(); ++k) {
    const Formula& f = mc.occurrences[k];
    for (StateId s = 0; s < n; ++s) {
      const PositionId v = mc.at[k][s];
      switch (f.op()) {
        case Op::Pred:
          g.set_payoff(v, ext_absdiff(system.predicate(f.name(), s), f.number()));
          break;
        case Op::Not: {
          const Formula& p = f.child();
          g.set_payoff(v, ext_recip(ext_absdiff(system.predicate(p.name(), s), p.number())));
          break;
        }
        case Op::And:
        case Op::Or:
          g.add_move(v, mc.at[kids[k][0]][s], 1.0);
          g.add_move(v, mc.at[kids[k][1]][s], 1.0);
          break;
        case Op::Diamond:
        case Op::Box: {
          const bool dia = f.op() == Op::Diamond;
          const auto& succ = system.successors(s);
          if (succ.empty()) {
            g.add_move(v, dia ? mc.zero_sink : mc.inf_sink, 1.0);
          }
          for (const auto& t : succ) {
            g.add_move(v, mc.at[kids[k][0]][t.to], dia ? t.discount : 1.0 / t.discount);
          }
          break;
        }
        case Op::Scale:
          g.add_move(v, mc.at[kids[k][0]][s], f.number());
          break;
        case Op::Mu:
        case Op::Nu:
          g.add_move(v, mc.at[kids[k][0]][s], 1.0);
          break;
        case Op::Var:
          g.add_move(v, mc.at[kids[binder.at(f.name())][0]][s], 1.0);
          break;
      }
    }
  }
  return mc;
}

Qts game_to_qts(const Game& game, int d) {
  if (d < 1) throw InputError("game_to_qts: d must be at least 1");
  game.validate();
  Qts k;
  for (PositionId v = 0; v < game.size(); ++v) {
    if (!game.is_terminal(v) && game.priority(v) >= d) {
      throw InputError("priority " + std::to_string(game.priority(v)) + " of '" + game.id(v) +
                       "' is not below d = " + std::to_string(d));
    }
    k.add_state(game.id(v));
  }
  for (PositionId v = 0; v < game.size(); ++v) {
    const bool p0 = game.owner(v) == Player::Zero;
    k.set_predicate("V0", v, p0 ? kInfinity : ExtValue::zero());
    k.set_predicate("V1", v, p0 ? ExtValue::zero() : kInfinity);
    if (game.is_terminal(v)) {
      k.set_predicate("Lambda", v, game.payoff(v));
      k.set_predicate("Omega", v, d);
    } else {
      k.set_predicate("Lambda", v, ExtValue::zero());
      k.set_predicate("Omega", v, game.priority(v));
    }
    for (const auto& m : game.moves(v)) k.add_edge(v, m.to, p0 ? m.discount : 1.0 / m.discount);
  }
  return k;
}

Formula priority_gadget(int j, const std::string& tag) {
  const std::string y = "Y" + std::to_string(j) + "_" + tag;
  return Formula::negate(Formula::mu(
      y, Formula::disj(Formula::scale(2.0, Formula::var(y)), Formula::pred("Omega", j))));
}

Formula win_formula(int d) {
  if (d < 1) throw ContractError("win_formula: d must be at least 1");
  std::optional<Formula> body;
  for (int j = 0; j < d; ++j) {
    const Formula x = Formula::var("X" + std::to_string(j));
    Formula mine = Formula::conj(Formula::conj(Formula::pred("V0", 0), priority_gadget(j, "a")),
                                 Formula::diamond(x));
    Formula theirs = Formula::conj(Formula::conj(Formula::pred("V1", 0), priority_gadget(j, "b")),
                                   Formula::box(x));
    Formula both = Formula::disj(mine, theirs);
    body = body ? Formula::disj(*body, both) : both;
  }
  Formula f = Formula::disj(*body, Formula::pred("Lambda", 0));
  for (int j = d - 1; j >= 0; --j) {
    f = Formula::fixpoint(j % 2 == 0 ? Op::Nu : Op::Mu, "X" + std::to_string(j), f);
  }
  return to_nnf(f);
}

namespace {

void add_entry(CheckReport& r, std::string id, ExtValue logic, ExtValue game, ExtValue close,
               ExtValue target, double tol) {
  CheckEntry e{std::move(id), logic, game, closeness_gap(close, target),
               eps_close(close, target, tol)};
  r.max_deviation = std::max(r.max_deviation, e.deviation);
  r.pass = r.pass && e.ok;
  r.entries.push_back(std::move(e));
}

}  // namespace

CheckReport check_mc_theorem(const Qts& system, const Formula& phi, const SolverConfig& cfg) {
  cfg.validate();
  const Formula nnf = to_nnf(phi);
  EvalStats es;
  const Valuation logic = eval(system, nnf, {}, cfg, &es);
  const McGame mc = build_mc_game(system, nnf);
  const SolveResult sr = solve(mc.game, cfg);

  CheckReport r;
  r.eval_iterations = es.fixpoint_iterations;
  r.stage_steps = sr.stats.stage_steps;
  r.stage_logs = sr.logs;
  for (StateId s = 0; s < system.size(); ++s) {
    const ExtValue game = sr.values[mc.root(s)];
    add_entry(r, system.id(s), logic[s], game, game, logic[s], cfg.tol_cmp);
  }
  return r;
}

CheckReport check_win_theorem(const Game& game, int d, const SolverConfig& cfg) {
  cfg.validate();
  const Qts k = game_to_qts(game, d);
  EvalStats es;
  const Valuation logic = eval(k, win_formula(d), {}, cfg, &es);
  const SolveResult sr = solve(game, cfg);

  CheckReport r;
  r.eval_iterations = es.fixpoint_iterations;
  r.stage_steps = sr.stats.stage_steps;
  r.stage_logs = sr.logs;
  for (PositionId v = 0; v < game.size(); ++v) {
    add_entry(r, game.id(v), logic[v], sr.values[v], logic[v], sr.values[v], cfg.tol_cmp);
  }
  return r;
}

CheckReport check_negation(const Qts& system, const Formula& phi, const SolverConfig& cfg) {
  cfg.validate();
  EvalStats a_stats;
  EvalStats b_stats;
  const Valuation negated = eval(system, to_nnf(Formula::negate(phi)), {}, cfg, &a_stats);
  const Valuation plain = eval(system, to_nnf(phi), {}, cfg, &b_stats);
  CheckReport r;
  r.eval_iterations = a_stats.fixpoint_iterations + b_stats.fixpoint_iterations;
  for (StateId s = 0; s < system.size(); ++s) {
    const ExtValue flipped = ext_recip(plain[s]);
    CheckEntry e{system.id(s), negated[s], flipped,
                 std::min(closeness_gap(negated[s], flipped), closeness_gap(flipped, negated[s])),
                 agree(negated[s], flipped, cfg.tol_cmp)};
    r.max_deviation = std::max(r.max_deviation, e.deviation);
    r.pass = r.pass && e.ok;
    r.entries.push_back(std::move(e));
  }
  return r;
}

}  // namespace qmu
