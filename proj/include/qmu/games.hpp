#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmu/values.hpp"

namespace qmu {

using PositionId = std::size_t;
using Valuation = std::vector<ExtValue>;

enum class Player { Zero = 0, One = 1 };

inline Player opponent(Player p) { return p == Player::Zero ? Player::One : Player::Zero; }

struct Move {
  PositionId to;
  double discount;
};

/// Finite quantitative parity game. Player 0 maximizes, player 1 minimizes.
/// A finite play pays the product of its discounts times the terminal payoff;
/// an infinite play pays inf if the least priority seen infinitely often is
/// even and 0 if it is odd.
class Game {
 public:
  PositionId add_position(std::string id, Player owner, int priority);
  void add_move(PositionId from, PositionId to, double discount);
  void set_payoff(PositionId v, ExtValue payoff);

  std::size_t size() const { return ids_.size(); }
  const std::string& id(PositionId v) const { return ids_.at(v); }
  PositionId find(const std::string& id) const;  // throws InputError if unknown
  bool contains(const std::string& id) const { return index_.contains(id); }

  Player owner(PositionId v) const { return owner_.at(v); }
  int priority(PositionId v) const { return priority_.at(v); }
  const std::vector<Move>& moves(PositionId v) const { return moves_.at(v); }
  bool is_terminal(PositionId v) const { return moves_.at(v).empty(); }
  bool has_payoff(PositionId v) const { return payoff_.at(v).has_value(); }
  ExtValue payoff(PositionId v) const;
  // Discount of the move from -> to; throws ContractError if there is none.
  double discount(PositionId from, PositionId to) const;

  /// Throws InputError unless payoffs are defined exactly on terminals.
  void validate() const;
  bool is_qualitative() const;
  bool is_non_discounted() const;
  /// Sorted distinct priorities of non-terminal positions.
  std::vector<int> live_priorities() const;

  // Drops every outgoing move of v (used to build truncated games).
  void clear_moves(PositionId v) { moves_.at(v).clear(); }
  void set_priority(PositionId v, int p) { priority_.at(v) = p; }

 private:
  std::vector<std::string> ids_;
  std::map<std::string, PositionId> index_;
  std::vector<Player> owner_;
  std::vector<int> priority_;
  std::vector<std::vector<Move>> moves_;
  std::vector<std::optional<ExtValue>> payoff_;
};

/// A finite play, or an ultimately periodic one when cycle_start is set: the
/// positions from cycle_start to the end repeat forever, and the last
/// position moves back to positions[*cycle_start].
struct Play {
  std::vector<PositionId> positions;
  std::optional<std::size_t> cycle_start;
};

ExtValue play_outcome(const Game& game, const Play& play);

/// Product of the discounts along positions[0..k].
ExtValue prefix_discount(const Game& game, const std::vector<PositionId>& positions,
                         std::size_t k);

/// Gives every non-terminal position whose priority is below the largest
/// live priority a unique discount-1 successor, by routing its moves through
/// a fresh intermediate position of the same owner and the largest live
/// priority. Original positions keep their indices; intermediates are
/// appended with id "<id>'" (primes added until unique).
Game normalize(const Game& game);

/// Unfolding stages of one priority level: the terminal valuations
/// lambda_alpha on the positions of minimal priority, in stage order.
struct StageLog {
  std::size_t level = 0;
  int priority = 0;
  bool ascending = false;  // odd minimal priority: stages start at 0 and rise
  std::vector<PositionId> truncated;    // indices in the normalized game
  std::vector<Valuation> stages;        // stages[alpha][i] for truncated[i]
};

struct SolveStats {
  std::size_t level_solves = 0;      // distinct truncated games solved
  std::size_t base_iterations = 0;   // value-iteration sweeps in single-priority games
  std::size_t stage_steps = 0;       // unfolding stages over all levels
  std::size_t promotions = 0;        // coordinates lifted to inf by the cap
  std::size_t floors = 0;            // coordinates dropped to 0
};

namespace detail {
class SolverContext;
}

struct SolveResult {
  Valuation values;             // on the positions of the input game
  std::vector<StageLog> logs;   // every unfolding performed, in completion order
  std::vector<std::string> normalized_ids;  // ids of the normalized game, for the logs
  SolveStats stats;
  std::shared_ptr<detail::SolverContext> context;

  /// Stage log of the outermost unfolding, if the game has two or more live
  /// priorities.
  const StageLog* top_stages() const;
};

/// Value of a game whose non-terminal positions all share one priority: the
/// least (odd) or greatest (even) fixpoint of the one-step operator.
SolveResult solve_reach_safe(const Game& game, const SolverConfig& cfg = {});

/// Value of an arbitrary game via the unfolding into truncated games.
SolveResult solve(const Game& game, const SolverConfig& cfg = {});

/// Pointwise monotonicity of every stage log: non-increasing for even
/// minimal priority, non-decreasing for odd.
bool stages_monotone(const SolveResult& result);

/// A strategy with memory. A simulation calls start() at the first position,
/// observe() after every move by either player, and choose() whenever the
/// strategy's player owns the current position.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual Player player() const = 0;
  virtual void start(PositionId v) = 0;
  virtual void observe(PositionId from, PositionId to) = 0;
  virtual PositionId choose(PositionId v) const = 0;
  /// Encodes the memory state; equal keys at equal positions mean equal
  /// future behaviour.
  virtual std::string memory_key() const = 0;
};

class PositionalStrategy : public Strategy {
 public:
  PositionalStrategy(Player p, std::map<PositionId, PositionId> choice)
      : player_(p), choice_(std::move(choice)) {}

  Player player() const override { return player_; }
  void start(PositionId) override {}
  void observe(PositionId, PositionId) override {}
  PositionId choose(PositionId v) const override;
  std::string memory_key() const override { return {}; }

 private:
  Player player_;
  std::map<PositionId, PositionId> choice_;
};

/// eps-optimal counter strategies built from the unfolding in `result`.
/// Player 0's strategy guarantees outcomes eps-above the value, player 1's
/// outcomes eps-below it. eps must lie in (0, 1).
std::unique_ptr<Strategy> strategy_p0(const SolveResult& result, double eps);
std::unique_ptr<Strategy> strategy_p1(const SolveResult& result, double eps);

enum class PlayKind { Finite, Periodic, Truncated };

const char* play_kind_name(PlayKind k);

struct SimulationResult {
  Play play;
  PlayKind kind = PlayKind::Truncated;
  ExtValue outcome;           // exact for Finite and Periodic plays, 0 if Truncated
  ExtValue prefix_discount;   // discount product of the simulated prefix
};

/// Runs the unique play consistent with both strategies for at most
/// `horizon` moves. Repetition of (position, memory of both strategies)
/// proves the play ultimately periodic.
SimulationResult simulate(const Game& game, Strategy& s0, Strategy& s1, PositionId start,
                          std::size_t horizon);

struct WinningRegions {
  std::vector<bool> player0;  // true: player 0 wins (payoff inf), else player 1 (payoff 0)
};

/// Classical attractor-based solver for qualitative non-discounted games.
WinningRegions zielonka_qualitative(const Game& game);

}  // namespace qmu
