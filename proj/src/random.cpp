#include <algorithm>
#include <functional>
#include <limits>
#include <map>

#include "qmu/random.hpp"

namespace qmu {

const std::vector<double> kDiscountGrid = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0};

namespace {

const std::vector<double> kValueGrid = {0.0, 0.5, 1.0, 2.0, 3.0, 5.0,
                                        std::numeric_limits<double>::infinity()};
const std::vector<double> kConstantGrid = {0.0, 0.5, 1.0, 2.0, 3.0};
const std::vector<double> kScaleGrid = {0.5, 1.5, 2.0, 3.0};

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  std::uniform_int_distribution<std::size_t> d(0, xs.size() - 1);
  return xs[d(rng)];
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

ExtValue draw_value(Rng& rng, bool qualitative) {
  if (qualitative) return coin(rng, 0.5) ? kInfinity : ExtValue::zero();
  return pick(rng, kValueGrid);
}

}  // namespace

Qts random_system(Rng& rng, const SystemOptions& opt) {
  Qts k;
  const std::size_t n = uniform(rng, std::max<std::size_t>(1, opt.max_states / 2), opt.max_states);
  for (std::size_t s = 0; s < n; ++s) k.add_state("s" + std::to_string(s));
  for (StateId s = 0; s < n; ++s) {
    for (const auto& p : opt.predicates) k.set_predicate(p, s, draw_value(rng, opt.qualitative));
    for (StateId t = 0; t < n; ++t) {
      if (coin(rng, opt.edge_probability)) {
        k.add_edge(s, t, opt.non_discounted ? 1.0 : pick(rng, kDiscountGrid));
      }
    }
  }
  return k;
}

Formula random_formula(Rng& rng, const FormulaOptions& opt) {
  // Without a size bound, aim for about three nodes per level of height.
  const std::size_t cap = opt.max_size ? opt.max_size : 3 * opt.max_height;
  for (;;) {
    int fresh = 0;
    std::vector<std::string> scope;
    // `guarded`: a modality separates this point from the innermost binder.
    std::function<Formula(std::size_t, std::size_t, bool)> gen =
        [&](std::size_t budget, std::size_t height, bool guarded) -> Formula {
      if (budget <= 1 || height <= 1) {
        if (!scope.empty() && coin(rng, guarded ? 0.6 : 0.25)) return Formula::var(pick(rng, scope));
        double c = opt.qualitative ? 0.0 : pick(rng, kConstantGrid);
        Formula p = Formula::pred(pick(rng, opt.predicates), c);
        if (budget >= 2 && opt.allow_negation && coin(rng, 0.2)) return Formula::negate(p);
        return p;
      }
      const std::size_t choice = uniform(rng, budget >= 3 ? 0 : 2, 8);
      switch (choice) {
        case 0:
        case 1: {
          const std::size_t left = uniform(rng, 1, budget - 2);
          Formula l = gen(left, height - 1, guarded);
          Formula r = gen(budget - 1 - left, height - 1, guarded);
          return coin(rng, 0.5) ? Formula::conj(l, r) : Formula::disj(l, r);
        }
        case 2:
        case 3:
          return Formula::diamond(gen(budget - 1, height - 1, true));
        case 4:
          return Formula::box(gen(budget - 1, height - 1, true));
        case 5:
          if (opt.qualitative) return Formula::diamond(gen(budget - 1, height - 1, true));
          return Formula::scale(pick(rng, kScaleGrid), gen(budget - 1, height - 1, guarded));
        case 6:
        case 7: {
          std::string x = "X" + std::to_string(++fresh);
          scope.push_back(x);
          Formula body = gen(budget - 1, height - 1, false);
          for (int tries = 0; tries < 8 && !free_vars(body).contains(x); ++tries) {
            body = gen(budget - 1, height - 1, false);
          }
          scope.pop_back();
          if (!free_vars(body).contains(x)) return body;
          return coin(rng, 0.5) ? Formula::mu(x, body) : Formula::nu(x, body);
        }
        default: {
          Formula f = gen(budget - 1, height - 1, guarded);
          if (opt.allow_negation && free_vars(f).empty()) return Formula::negate(f);
          return f;
        }
      }
    };
    const std::size_t target = uniform(rng, std::max<std::size_t>(1, cap / 2), cap);
    Formula f = gen(target, opt.max_height, false);
    const int depth = assign_priorities(f).depth;
    if (depth > opt.max_alternation || depth < opt.min_alternation) continue;
    return f;
  }
}

Game random_game(Rng& rng, const GameOptions& opt) {
  Game g;
  const std::size_t n =
      uniform(rng, std::max<std::size_t>(1, opt.max_positions / 2), opt.max_positions);
  for (std::size_t v = 0; v < n; ++v) {
    g.add_position("v" + std::to_string(v), coin(rng, 0.5) ? Player::Zero : Player::One,
                   static_cast<int>(uniform(rng, 0, static_cast<std::size_t>(opt.priorities - 1))));
  }
  for (PositionId v = 0; v < n; ++v) {
    const PositionId lo = opt.acyclic ? v + 1 : 0;
    if (lo >= n || coin(rng, opt.terminal_probability)) {
      g.set_payoff(v, draw_value(rng, opt.qualitative));
      continue;
    }
    const std::size_t k = uniform(rng, 1, std::min(opt.max_moves, n - lo));
    std::vector<PositionId> targets;
    for (PositionId w = lo; w < n; ++w) targets.push_back(w);
    std::shuffle(targets.begin(), targets.end(), rng);
    for (std::size_t i = 0; i < k; ++i) {
      g.add_move(v, targets[i], opt.non_discounted ? 1.0 : pick(rng, kDiscountGrid));
    }
  }
  return g;
}

PositionalStrategy random_positional(Rng& rng, const Game& game, Player player) {
  std::map<PositionId, PositionId> choice;
  for (PositionId v = 0; v < game.size(); ++v) {
    if (game.is_terminal(v) || game.owner(v) != player) continue;
    choice[v] = pick(rng, game.moves(v)).to;
  }
  return PositionalStrategy(player, std::move(choice));
}

}  // namespace qmu
