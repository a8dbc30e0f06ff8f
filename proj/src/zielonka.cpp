#include <deque>

#include "qmu/games.hpp"

namespace qmu {

namespace {

using Region = std::vector<bool>;

struct Arena {
  std::vector<Player> owner;
  std::vector<int> priority;
  std::vector<std::vector<PositionId>> succ;
  std::vector<std::vector<PositionId>> pred;
};

// Positions in `sub` from which `p` can force a visit to `target`.
Region attractor(const Arena& a, const Region& sub, const Region& target, Player p) {
  const std::size_t n = a.owner.size();
  Region in = target;
  std::vector<std::size_t> escapes(n, 0);
  std::deque<PositionId> queue;
  for (PositionId v = 0; v < n; ++v) {
    if (!sub[v]) continue;
    if (in[v]) queue.push_back(v);
    for (PositionId w : a.succ[v]) {
      if (sub[w]) ++escapes[v];
    }
  }
  while (!queue.empty()) {
    PositionId w = queue.front();
    queue.pop_front();
    for (PositionId v : a.pred[w]) {
      if (!sub[v] || in[v]) continue;
      if (a.owner[v] == p || --escapes[v] == 0) {
        in[v] = true;
        queue.push_back(v);
      }
    }
  }
  return in;
}

Region minus(const Region& a, const Region& b) {
  Region r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] && !b[i];
  return r;
}

bool empty(const Region& r) {
  for (bool b : r) {
    if (b) return false;
  }
  return true;
}

// Returns the winning region of player 0 within `sub`.
Region solve(const Arena& a, const Region& sub) {
  const std::size_t n = a.owner.size();
  int least = -1;
  for (PositionId v = 0; v < n; ++v) {
    if (sub[v] && (least < 0 || a.priority[v] < least)) least = a.priority[v];
  }
  if (least < 0) return Region(n, false);

  const Player p = least % 2 == 0 ? Player::Zero : Player::One;
  Region top(n, false);
  for (PositionId v = 0; v < n; ++v) top[v] = sub[v] && a.priority[v] == least;
  Region rest = minus(sub, attractor(a, sub, top, p));
  Region w0 = solve(a, rest);
  Region opp_win = p == Player::Zero ? minus(rest, w0) : w0;
  if (empty(opp_win)) return p == Player::Zero ? sub : Region(n, false);

  Region b = attractor(a, sub, opp_win, opponent(p));
  Region w0b = solve(a, minus(sub, b));
  if (p == Player::Zero) return w0b;
  Region out = w0b;
  for (PositionId v = 0; v < n; ++v) out[v] = out[v] || b[v];
  return out;
}

}  // namespace

WinningRegions zielonka_qualitative(const Game& game) {
  game.validate();
  if (!game.is_qualitative()) throw ContractError("zielonka_qualitative: payoffs must be 0 or inf");
  if (!game.is_non_discounted()) throw ContractError("zielonka_qualitative: game is discounted");

  const std::size_t n = game.size();
  Arena a;
  a.owner.resize(n);
  a.priority.resize(n);
  a.succ.resize(n);
  a.pred.resize(n);
  for (PositionId v = 0; v < n; ++v) {
    a.owner[v] = game.owner(v);
    if (game.is_terminal(v)) {
      // A terminal becomes a self-loop won by the player its payoff favours.
      a.priority[v] = game.payoff(v).is_infinite() ? 0 : 1;
      a.succ[v].push_back(v);
    } else {
      a.priority[v] = game.priority(v);
      for (const auto& m : game.moves(v)) a.succ[v].push_back(m.to);
    }
  }
  for (PositionId v = 0; v < n; ++v) {
    for (PositionId w : a.succ[v]) a.pred[w].push_back(v);
  }
  return {solve(a, Region(n, true))};
}

}  // namespace qmu
