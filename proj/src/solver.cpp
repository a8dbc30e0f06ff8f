#include <algorithm>

#include "qmu/games.hpp"
#include "solver_context.hpp"

namespace qmu {

namespace detail {

SolverContext::SolverContext(const Game& original, const SolverConfig& cfg)
    : cfg_(cfg), original_size_(original.size()) {
  cfg_.validate();
  original.validate();
  game_ = normalize(original);
  priorities_ = game_.live_priorities();
  truncated_.resize(priorities_.size());
  for (std::size_t level = 0; level + 1 < priorities_.size(); ++level) {
    for (PositionId v = 0; v < game_.size(); ++v) {
      if (!game_.is_terminal(v) && game_.priority(v) == priorities_[level]) {
        truncated_[level].push_back(v);
      }
    }
  }
  intermediate_.assign(original_size_, kNoPosition);
  for (PositionId v = 0; v < original_size_; ++v) {
    const auto& ms = game_.moves(v);
    if (ms.size() == 1 && ms[0].to >= original_size_) intermediate_[v] = ms[0].to;
  }
}

bool SolverContext::live(std::size_t level, PositionId v) const {
  return !game_.is_terminal(v) && game_.priority(v) >= priorities_.at(level);
}

bool SolverContext::truncated(std::size_t level, PositionId v) const {
  return !is_base(level) && !game_.is_terminal(v) && game_.priority(v) == priorities_.at(level);
}

PositionId SolverContext::forced_successor(PositionId v) const {
  const auto& ms = game_.moves(v);
  if (ms.size() != 1 || ms[0].discount != 1.0) {
    throw ContractError("position '" + game_.id(v) + "' has no forced successor");
  }
  return ms[0].to;
}

Valuation SolverContext::initial_lam() const {
  Valuation lam(game_.size(), ExtValue::zero());
  for (PositionId v = 0; v < game_.size(); ++v) {
    if (game_.is_terminal(v)) lam[v] = game_.payoff(v);
  }
  return lam;
}

Valuation SolverContext::lam_with_stage(std::size_t level, const Valuation& lam,
                                        const Valuation& stage) const {
  Valuation out = lam;
  const auto& ts = truncated_.at(level);
  for (std::size_t i = 0; i < ts.size(); ++i) out[ts[i]] = stage[i];
  return out;
}

Valuation SolverContext::canonical(std::size_t level, const Valuation& lam) const {
  Valuation out = lam;
  for (PositionId v = 0; v < game_.size(); ++v) {
    if (live(level, v)) out[v] = ExtValue::zero();
  }
  return out;
}

std::shared_ptr<const LevelSolution> SolverContext::solve_level(std::size_t level,
                                                                const Valuation& lam) {
  Valuation key = canonical(level, lam);
  auto it = memo_.find({level, key});
  if (it != memo_.end()) return it->second;
  std::shared_ptr<LevelSolution> sol =
      is_base(level) ? solve_base(level, key) : solve_unfolding(level, key);
  ++stats_.level_solves;
  memo_.emplace(std::make_pair(level, std::move(key)), sol);
  return sol;
}

Valuation SolverContext::step(std::size_t level, const Valuation& lam, const Valuation& cur) const {
  Valuation next = cur;
  for (PositionId v = 0; v < game_.size(); ++v) {
    if (!live(level, v)) {
      next[v] = lam[v];
      continue;
    }
    bool maximize = game_.owner(v) == Player::Zero;
    ExtValue acc = maximize ? ExtValue::zero() : kInfinity;
    for (const auto& m : game_.moves(v)) {
      ExtValue w = ext_mul(m.discount, live(level, m.to) ? cur[m.to] : lam[m.to]);
      acc = maximize ? ext_max(acc, w) : ext_min(acc, w);
    }
    next[v] = acc;
  }
  return next;
}

std::shared_ptr<LevelSolution> SolverContext::solve_base(std::size_t level, const Valuation& lam) {
  auto sol = std::make_shared<LevelSolution>();
  sol->level = level;
  sol->lam = lam;
  sol->base = true;
  const bool greatest = priorities_[level] % 2 == 0;
  Valuation cur = lam;
  for (PositionId v = 0; v < game_.size(); ++v) {
    if (live(level, v)) cur[v] = greatest ? kInfinity : ExtValue::zero();
  }
  sol->horizon.push_back(cur);

  double change = 0.0;
  for (std::size_t iter = 0; iter < cfg_.max_iters; ++iter) {
    Valuation next = step(level, lam, cur);
    ++stats_.base_iterations;
    for (PositionId v = 0; v < game_.size(); ++v) {
      if (!live(level, v)) continue;
      // Exact iterates never leave 0 going down or inf going up; snapped
      // coordinates stay snapped.
      if (greatest ? cur[v].is_zero() : cur[v].is_infinite()) {
        next[v] = cur[v];
      } else if (!greatest && next[v].is_finite() && next[v].value() > cfg_.cap && cur[v] < next[v]) {
        next[v] = kInfinity;
        ++stats_.promotions;
      } else if (greatest && !next[v].is_zero() && next[v].value() < cfg_.tol_fix &&
                 next[v] < cur[v]) {
        next[v] = ExtValue::zero();
        ++stats_.floors;
      }
    }
    change = sup_distance(cur, next);
    cur = std::move(next);
    if (change <= cfg_.tol_fix) {
      sol->values = std::move(cur);
      return sol;
    }
  }
  throw NonConvergence("value iteration at priority " + std::to_string(priorities_[level]) +
                           " did not stabilize within " + std::to_string(cfg_.max_iters) +
                           " sweeps (last change " + format_number(change) + ")",
                       change);
}

std::shared_ptr<LevelSolution> SolverContext::solve_unfolding(std::size_t level,
                                                              const Valuation& lam) {
  auto sol = std::make_shared<LevelSolution>();
  sol->level = level;
  sol->lam = lam;
  const auto& ts = truncated_[level];
  const bool descending = priorities_[level] % 2 == 0;

  Valuation stage(ts.size(), descending ? kInfinity : ExtValue::zero());
  sol->stages.push_back(stage);
  sol->raw.push_back(stage);

  std::shared_ptr<const LevelSolution> sub;
  double change = 0.0;
  bool done = false;
  for (std::size_t iter = 0; iter < cfg_.max_iters && !done; ++iter) {
    sub = solve_level(level + 1, lam_with_stage(level, lam, stage));
    ++stats_.stage_steps;
    Valuation raw(ts.size());
    Valuation next(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      raw[i] = sub->values[forced_successor(ts[i])];
      next[i] = raw[i];
      if (descending ? stage[i].is_zero() : stage[i].is_infinite()) {
        next[i] = stage[i];  // snapped earlier, as in the base case
      } else if (!descending && next[i].is_finite() && next[i].value() > cfg_.cap && stage[i] < next[i]) {
        next[i] = kInfinity;
        ++stats_.promotions;
      } else if (descending && !next[i].is_zero() && next[i].value() < cfg_.tol_fix &&
                 next[i] < stage[i]) {
        next[i] = ExtValue::zero();
        ++stats_.floors;
      }
    }
    change = sup_distance(stage, next);
    if (change == 0.0) {
      done = true;
      break;
    }
    sol->stages.push_back(next);
    sol->raw.push_back(raw);
    stage = std::move(next);
    if (change <= cfg_.tol_fix) {
      sub = solve_level(level + 1, lam_with_stage(level, lam, stage));
      done = true;
    }
  }
  if (!done) {
    throw NonConvergence("unfolding at priority " + std::to_string(priorities_[level]) +
                             " did not stabilize within " + std::to_string(cfg_.max_iters) +
                             " stages (last change " + format_number(change) + ")",
                         change);
  }
  sol->values = sub->values;

  StageLog log;
  log.level = level;
  log.priority = priorities_[level];
  log.ascending = !descending;
  log.truncated = ts;
  log.stages = sol->stages;
  logs_.push_back(std::move(log));
  return sol;
}

const Valuation* SolverContext::horizon(const LevelSolution& sol, std::size_t k) const {
  if (!sol.base) throw ContractError("finite-horizon values exist only at base levels");
  while (sol.horizon.size() <= k) {
    if (sol.horizon.size() > cfg_.max_iters) return nullptr;
    sol.horizon.push_back(step(sol.level, sol.lam, sol.horizon.back()));
  }
  return &sol.horizon[k];
}

}  // namespace detail

namespace {

SolveResult finish(std::shared_ptr<detail::SolverContext> ctx) {
  SolveResult r;
  Valuation all;
  if (ctx->levels() == 0) {
    all = ctx->initial_lam();
  } else {
    all = ctx->solve_level(0, ctx->initial_lam())->values;
  }
  r.values.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(ctx->original_size()));
  r.logs = ctx->logs();
  for (PositionId v = 0; v < ctx->game().size(); ++v) r.normalized_ids.push_back(ctx->game().id(v));
  r.stats = ctx->stats();
  r.context = std::move(ctx);
  return r;
}

}  // namespace

SolveResult solve_reach_safe(const Game& game, const SolverConfig& cfg) {
  if (game.live_priorities().size() > 1) {
    throw ContractError("solve_reach_safe: non-terminal positions have different priorities");
  }
  return finish(std::make_shared<detail::SolverContext>(game, cfg));
}

SolveResult solve(const Game& game, const SolverConfig& cfg) {
  return finish(std::make_shared<detail::SolverContext>(game, cfg));
}

const StageLog* SolveResult::top_stages() const {
  for (const auto& l : logs) {
    if (l.level == 0) return &l;
  }
  return nullptr;
}

bool stages_monotone(const SolveResult& result) {
  for (const auto& log : result.logs) {
    for (std::size_t a = 1; a < log.stages.size(); ++a) {
      for (std::size_t i = 0; i < log.truncated.size(); ++i) {
        const auto prev = log.stages[a - 1][i];
        const auto cur = log.stages[a][i];
        if (log.ascending ? cur < prev : prev < cur) return false;
      }
    }
  }
  return true;
}

}  // namespace qmu
