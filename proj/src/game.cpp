#include <algorithm>
#include <cmath>
#include <set>

#include "qmu/games.hpp"

namespace qmu {

PositionId Game::add_position(std::string id, Player owner, int priority) {
  if (index_.contains(id)) throw InputError("duplicate position id '" + id + "'");
  if (priority < 0) throw InputError("priority of '" + id + "' is negative");
  PositionId v = ids_.size();
  index_.emplace(id, v);
  ids_.push_back(std::move(id));
  owner_.push_back(owner);
  priority_.push_back(priority);
  moves_.emplace_back();
  payoff_.emplace_back();
  return v;
}

void Game::add_move(PositionId from, PositionId to, double discount) {
  if (from >= size() || to >= size()) throw ContractError("move endpoint out of range");
  if (!(discount > 0.0) || std::isinf(discount)) {
    throw InputError("move discount must be strictly positive and finite");
  }
  for (const auto& m : moves_[from]) {
    if (m.to == to) throw InputError("duplicate move " + ids_[from] + " -> " + ids_[to]);
  }
  moves_[from].push_back({to, discount});
}

void Game::set_payoff(PositionId v, ExtValue payoff) { payoff_.at(v) = payoff; }

PositionId Game::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InputError("unknown position '" + id + "'");
  return it->second;
}

ExtValue Game::payoff(PositionId v) const {
  const auto& p = payoff_.at(v);
  if (!p) throw ContractError("position '" + ids_.at(v) + "' has no payoff");
  return *p;
}

double Game::discount(PositionId from, PositionId to) const {
  for (const auto& m : moves_.at(from)) {
    if (m.to == to) return m.discount;
  }
  throw ContractError("no move " + ids_.at(from) + " -> " + ids_.at(to));
}

void Game::validate() const {
  for (PositionId v = 0; v < size(); ++v) {
    if (is_terminal(v) && !has_payoff(v)) {
      throw InputError("terminal position '" + ids_[v] + "' has no payoff");
    }
    if (!is_terminal(v) && has_payoff(v)) {
      throw InputError("non-terminal position '" + ids_[v] + "' has a payoff");
    }
  }
}

bool Game::is_qualitative() const {
  for (PositionId v = 0; v < size(); ++v) {
    if (has_payoff(v) && !payoff(v).is_zero() && !payoff(v).is_infinite()) return false;
  }
  return true;
}

bool Game::is_non_discounted() const {
  for (const auto& ms : moves_) {
    for (const auto& m : ms) {
      if (m.discount != 1.0) return false;
    }
  }
  return true;
}

std::vector<int> Game::live_priorities() const {
  std::set<int> ps;
  for (PositionId v = 0; v < size(); ++v) {
    if (!is_terminal(v)) ps.insert(priority_[v]);
  }
  return {ps.begin(), ps.end()};
}

ExtValue prefix_discount(const Game& game, const std::vector<PositionId>& positions,
                         std::size_t k) {
  double d = 1.0;
  for (std::size_t i = 0; i < k && i + 1 < positions.size(); ++i) {
    d *= game.discount(positions[i], positions[i + 1]);
  }
  return std::isinf(d) ? kInfinity : ExtValue(d);
}

ExtValue play_outcome(const Game& game, const Play& play) {
  const auto& ps = play.positions;
  if (ps.empty()) throw ContractError("play_outcome: empty play");
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) game.discount(ps[i], ps[i + 1]);
  if (play.cycle_start) {
    std::size_t c = *play.cycle_start;
    if (c >= ps.size()) throw ContractError("play_outcome: cycle start out of range");
    game.discount(ps.back(), ps[c]);
    int least = game.priority(ps[c]);
    for (std::size_t i = c; i < ps.size(); ++i) least = std::min(least, game.priority(ps[i]));
    // A positive finite prefix discount cannot change 0 or inf.
    return least % 2 == 0 ? kInfinity : ExtValue::zero();
  }
  if (!game.is_terminal(ps.back())) {
    throw ContractError("play_outcome: finite play does not end at a terminal position");
  }
  return ext_mul(prefix_discount(game, ps, ps.size() - 1), game.payoff(ps.back()));
}

Game normalize(const Game& game) {
  Game out = game;
  auto live = game.live_priorities();
  if (live.size() < 2) return out;
  const int top = live.back();
  for (PositionId v = 0; v < game.size(); ++v) {
    if (game.is_terminal(v) || game.priority(v) == top) continue;
    const auto& ms = game.moves(v);
    if (ms.size() == 1 && ms[0].discount == 1.0) continue;
    std::string id = game.id(v) + "'";
    while (out.contains(id)) id += "'";
    PositionId mid = out.add_position(id, game.owner(v), top);
    for (const auto& m : ms) out.add_move(mid, m.to, m.discount);
    out.clear_moves(v);
    out.add_move(v, mid, 1.0);
  }
  return out;
}

PositionId PositionalStrategy::choose(PositionId v) const {
  auto it = choice_.find(v);
  if (it == choice_.end()) throw ContractError("positional strategy has no choice at position");
  return it->second;
}

const char* play_kind_name(PlayKind k) {
  switch (k) {
    case PlayKind::Finite: return "finite";
    case PlayKind::Periodic: return "periodic";
    case PlayKind::Truncated: return "truncated";
  }
  return "?";
}

SimulationResult simulate(const Game& game, Strategy& s0, Strategy& s1, PositionId start,
                          std::size_t horizon) {
  if (horizon == 0) throw ContractError("simulate: horizon must be at least 1");
  if (s0.player() != Player::Zero || s1.player() != Player::One) {
    throw ContractError("simulate: strategies passed for the wrong players");
  }
  SimulationResult r;
  r.play.positions.push_back(start);
  s0.start(start);
  s1.start(start);
  std::map<std::string, std::size_t> seen;
  double delta = 1.0;
  PositionId v = start;
  for (std::size_t step = 0;; ++step) {
    if (game.is_terminal(v)) {
      r.kind = PlayKind::Finite;
      r.prefix_discount = delta;
      r.outcome = ext_mul(delta, game.payoff(v));
      return r;
    }
    std::string key = std::to_string(v) + '|' + s0.memory_key() + '|' + s1.memory_key();
    auto [it, fresh] = seen.emplace(std::move(key), r.play.positions.size() - 1);
    if (!fresh) {
      r.kind = PlayKind::Periodic;
      r.play.positions.pop_back();
      r.play.cycle_start = it->second;
      r.prefix_discount = delta;
      r.outcome = play_outcome(game, r.play);
      return r;
    }
    if (step == horizon) {
      r.kind = PlayKind::Truncated;
      r.prefix_discount = delta;
      r.outcome = ExtValue::zero();
      return r;
    }
    Strategy& mover = game.owner(v) == Player::Zero ? s0 : s1;
    PositionId w = mover.choose(v);
    delta *= game.discount(v, w);
    s0.observe(v, w);
    s1.observe(v, w);
    r.play.positions.push_back(w);
    v = w;
  }
}

}  // namespace qmu
