#pragma once

#include <string>
#include <vector>

#include "qmu/formula.hpp"
#include "qmu/games.hpp"
#include "qmu/semantics.hpp"

namespace qmu {

/// Model-checking game of a system and a closed NNF formula.
///
/// Subformula occurrences are numbered in preorder (0 is the whole formula).
/// The position for occurrence k at state s has id "p<k>@<state id>"; the
/// two sinks are "zero" and "inf".
struct McGame {
  Game game;
  std::vector<Formula> occurrences;       // preorder, of the well-named input
  std::vector<std::vector<PositionId>> at;  // at[k][s]
  PositionId zero_sink = 0;
  PositionId inf_sink = 0;
  std::vector<std::string> labels;        // per position: subformula text, or "0" / "inf"
  int depth = 0;

  PositionId root(StateId s) const { return at.at(0).at(s); }
};

/// Throws ContractError unless phi is closed and in negation normal form.
McGame build_mc_game(const Qts& system, const Formula& phi);

/// Encodes a game as a system over its positions with predicates V0, V1,
/// Lambda and Omega. Moves leaving player 1 positions get the reciprocal
/// discount. Throws InputError if a non-terminal priority is not below d.
Qts game_to_qts(const Game& game, int d);

/// The formula whose value on game_to_qts(G, d) is the value of G.
Formula win_formula(int d);

/// The priority test used inside win_formula, before negation normal form:
/// inf where Omega = j, 0 elsewhere. `tag` keeps bound names distinct.
Formula priority_gadget(int j, const std::string& tag);

struct CheckEntry {
  std::string id;
  ExtValue logic;
  ExtValue game;
  double deviation = 0.0;
  bool ok = false;
};

struct CheckReport {
  std::vector<CheckEntry> entries;
  double max_deviation = 0.0;
  bool pass = true;
  std::size_t eval_iterations = 0;
  std::size_t stage_steps = 0;
  std::vector<StageLog> stage_logs;
};

/// eval against the model-checking game at every state. phi must be closed;
/// it is brought into negation normal form first. Passes when every game
/// value is tol_cmp-close to the logic value.
CheckReport check_mc_theorem(const Qts& system, const Formula& phi, const SolverConfig& cfg = {});

/// solve against eval(win_formula(d)) on game_to_qts at every position.
/// Passes when every logic value is tol_cmp-close to the game value.
CheckReport check_win_theorem(const Game& game, int d, const SolverConfig& cfg = {});

/// The negation law on one system: eval(to_nnf(~phi)) against the
/// reciprocal of eval(to_nnf(phi)), compared with `agree` at tol_cmp. The
/// entries carry the former as `logic` and the latter as `game`.
CheckReport check_negation(const Qts& system, const Formula& phi, const SolverConfig& cfg = {});

}  // namespace qmu
