#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qmu/formula.hpp"
#include "qmu/games.hpp"
#include "qmu/semantics.hpp"

namespace qmu {

using Rng = std::mt19937_64;

// Discounts are drawn from a small grid inside [0.25, 4]; predicate values
// and payoffs from a grid that includes 0 and inf.
extern const std::vector<double> kDiscountGrid;

struct SystemOptions {
  std::size_t max_states = 6;
  std::vector<std::string> predicates = {"P", "Q"};
  double edge_probability = 0.4;
  bool qualitative = false;
  bool non_discounted = false;
};

/// Between max_states / 2 and max_states states (at least one).
Qts random_system(Rng& rng, const SystemOptions& opt = {});

struct FormulaOptions {
  std::size_t max_height = 5;
  int max_alternation = 2;
  int min_alternation = 0;
  std::size_t max_size = 0;  // 0: unbounded
  std::vector<std::string> predicates = {"P", "Q"};
  bool allow_negation = true;  // ~ over closed subformulae
  bool qualitative = false;    // no scaling, constants 0 only
};

/// A closed, well-named, monotone formula within the bounds. Every binder
/// uses its variable.
Formula random_formula(Rng& rng, const FormulaOptions& opt = {});

struct GameOptions {
  std::size_t max_positions = 6;
  int priorities = 3;  // priorities drawn from [0, priorities)
  double terminal_probability = 0.25;
  std::size_t max_moves = 3;
  bool qualitative = false;
  bool non_discounted = false;
  bool acyclic = false;
};

/// Between max_positions / 2 and max_positions positions (at least one).
Game random_game(Rng& rng, const GameOptions& opt = {});

/// Uniformly chosen positional strategy for `player`.
PositionalStrategy random_positional(Rng& rng, const Game& game, Player player);

}  // namespace qmu
