#pragma once

// Fixtures and independent oracles shared by the test binaries.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <map>
#include <vector>

#include "qmu/games.hpp"
#include "qmu/semantics.hpp"

namespace qmu::testing {

// Player 1 at "start" (priority 0) loops with discount 1/2 or moves on to
// player 0 at "b" (priority 1), who loops with discount 2 or exits to "t"
// with payoff 1.
inline Game infinite_memory_game() {
  Game g;
  PositionId a = g.add_position("start", Player::One, 0);
  PositionId b = g.add_position("b", Player::Zero, 1);
  PositionId t = g.add_position("t", Player::Zero, 1);
  g.add_move(a, a, 0.5);
  g.add_move(a, b, 1.0);
  g.add_move(b, b, 2.0);
  g.add_move(b, t, 1.0);
  g.set_payoff(t, 1.0);
  return g;
}

// Exact value of an acyclic game by recursion over successors.
inline Valuation backward_induction(const Game& g) {
  std::vector<std::optional<ExtValue>> memo(g.size());
  std::function<ExtValue(PositionId)> value = [&](PositionId v) -> ExtValue {
    if (memo[v]) return *memo[v];
    ExtValue r;
    if (g.is_terminal(v)) {
      r = g.payoff(v);
    } else {
      const bool max = g.owner(v) == Player::Zero;
      r = max ? ExtValue::zero() : kInfinity;
      for (const auto& m : g.moves(v)) {
        ExtValue x = ext_mul(m.discount, value(m.to));
        r = max ? ext_max(r, x) : ext_min(r, x);
      }
    }
    memo[v] = r;
    return r;
  };
  Valuation out;
  for (PositionId v = 0; v < g.size(); ++v) out.push_back(value(v));
  return out;
}

// States from which some state satisfying `target` is reachable.
inline std::vector<bool> can_reach(const Qts& k, const std::vector<bool>& target) {
  std::vector<bool> seen = target;
  bool grew = true;
  while (grew) {
    grew = false;
    for (StateId s = 0; s < k.size(); ++s) {
      if (seen[s]) continue;
      for (const auto& t : k.successors(s)) {
        if (seen[t.to]) {
          seen[s] = true;
          grew = true;
          break;
        }
      }
    }
  }
  return seen;
}

// Outcome of the game above when player 1 loops n times at "start" and
// player 0 loops m times at "b" before leaving.
inline double infinite_memory_outcome(int n, int m) {
  double x = 1.0;
  for (int i = 0; i < n; ++i) x *= 0.5;
  for (int i = 0; i < m; ++i) x *= 2.0;
  return x;
}

// Player 1 strategy for the game above: loop n times at "start", then move on.
class LoopThenLeave : public Strategy {
 public:
  LoopThenLeave(const Game& g, int loops) : g_(g), loops_(loops) {}
  Player player() const override { return Player::One; }
  void start(PositionId) override { seen_ = 0; }
  void observe(PositionId from, PositionId to) override {
    if (from == to && g_.id(from) == "start") ++seen_;
  }
  PositionId choose(PositionId v) const override {
    return seen_ < loops_ ? v : g_.find("b");
  }
  std::string memory_key() const override { return std::to_string(std::min(seen_, loops_)); }

 private:
  const Game& g_;
  int loops_;
  int seen_ = 0;
};

}  // namespace qmu::testing
