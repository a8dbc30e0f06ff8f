#pragma once

// Shared state between the unfolding solver and the strategy constructions.

#include <limits>
#include <map>
#include <memory>
#include <vector>

#include "qmu/games.hpp"

namespace qmu::detail {

inline constexpr PositionId kNoPosition = std::numeric_limits<PositionId>::max();

/// Solution of the truncated game at one level for one terminal valuation.
struct LevelSolution {
  std::size_t level = 0;
  Valuation lam;     // terminal valuation this solution was computed for
  Valuation values;  // over all positions of the normalized game
  bool base = false;

  // Unfolding levels: stages[alpha][i] is lambda_alpha on truncated[i];
  // raw[alpha] is the same before cap/floor promotion (raw[0] = stages[0]).
  std::vector<Valuation> stages;
  std::vector<Valuation> raw;

  // Base levels: finite-horizon values, horizon[k] = k steps of the one-step
  // operator from the start valuation, without promotions. Filled lazily.
  mutable std::vector<Valuation> horizon;
};

class SolverContext {
 public:
  SolverContext(const Game& original, const SolverConfig& cfg);

  const Game& game() const { return game_; }
  const SolverConfig& config() const { return cfg_; }
  std::size_t original_size() const { return original_size_; }
  std::size_t levels() const { return priorities_.size(); }
  int level_priority(std::size_t level) const { return priorities_.at(level); }
  bool is_base(std::size_t level) const { return level + 1 == priorities_.size(); }

  // Non-terminal with priority at least that of the level.
  bool live(std::size_t level, PositionId v) const;
  // Minimal-priority position of a non-base level.
  bool truncated(std::size_t level, PositionId v) const;
  const std::vector<PositionId>& truncated_positions(std::size_t level) const {
    return truncated_.at(level);
  }
  // Unique successor of a truncated position.
  PositionId forced_successor(PositionId v) const;
  // Intermediate added by normalization for an original position, or kNoPosition.
  PositionId intermediate(PositionId v) const { return intermediate_.at(v); }

  Valuation initial_lam() const;
  Valuation lam_with_stage(std::size_t level, const Valuation& lam, const Valuation& stage) const;

  std::shared_ptr<const LevelSolution> solve_level(std::size_t level, const Valuation& lam);

  // horizon[k] of a base-level solution, computed on demand up to the budget.
  // Returns nullptr past the budget.
  const Valuation* horizon(const LevelSolution& sol, std::size_t k) const;

  const std::vector<StageLog>& logs() const { return logs_; }
  const SolveStats& stats() const { return stats_; }

 private:
  Valuation canonical(std::size_t level, const Valuation& lam) const;
  std::shared_ptr<LevelSolution> solve_base(std::size_t level, const Valuation& lam);
  std::shared_ptr<LevelSolution> solve_unfolding(std::size_t level, const Valuation& lam);
  // One application of the one-step operator at a base level.
  Valuation step(std::size_t level, const Valuation& lam, const Valuation& cur) const;

  Game game_;
  SolverConfig cfg_;
  std::size_t original_size_;
  std::vector<int> priorities_;
  std::vector<std::vector<PositionId>> truncated_;
  std::vector<PositionId> intermediate_;
  std::map<std::pair<std::size_t, Valuation>, std::shared_ptr<const LevelSolution>> memo_;
  std::vector<StageLog> logs_;
  SolveStats stats_;
};

}  // namespace qmu::detail
