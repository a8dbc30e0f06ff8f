#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "qmu/games.hpp"
#include "solver_context.hpp"

namespace qmu {

namespace {

using detail::kNoPosition;
using detail::LevelSolution;
using detail::SolverContext;

std::string short_number(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

// Player favoured by infinite plays whose least priority is p.
Player favoured(int priority) { return priority % 2 == 0 ? Player::Zero : Player::One; }

// Strategy for one player inside the truncated game of one level.
class LevelStrategy {
 public:
  virtual ~LevelStrategy() = default;
  virtual void start(PositionId v) = 0;
  virtual void step(PositionId from, PositionId to) = 0;
  virtual PositionId choose(PositionId v) const = 0;
  virtual std::string key() const = 0;
};

std::unique_ptr<LevelStrategy> make_level_strategy(const std::shared_ptr<SolverContext>& ctx,
                                                   std::size_t level, const Valuation& lam,
                                                   Player player, double eps);

// Whether the behaviour of `player` at `level` depends on its eps budget.
bool eps_sensitive(const SolverContext& ctx, std::size_t level, Player player) {
  for (;; ++level) {
    if (player != favoured(ctx.level_priority(level))) return true;
    if (ctx.is_base(level)) return false;
  }
}

PositionId best_move(const Game& g, PositionId v, const Valuation& val, Player player) {
  const auto& ms = g.moves(v);
  if (ms.empty()) throw ContractError("choose called at terminal position '" + g.id(v) + "'");
  PositionId best = ms[0].to;
  ExtValue best_val = ext_mul(ms[0].discount, val[ms[0].to]);
  for (std::size_t i = 1; i < ms.size(); ++i) {
    ExtValue x = ext_mul(ms[i].discount, val[ms[i].to]);
    bool better = player == Player::Zero ? best_val < x : x < best_val;
    // ties go to the lowest position index
    if (better || (x == best_val && ms[i].to < best)) {
      best = ms[i].to;
      best_val = x;
    }
  }
  return best;
}

// Single-priority level, player who wins infinite plays: hold the value.
class GreedyBase : public LevelStrategy {
 public:
  GreedyBase(std::shared_ptr<SolverContext> ctx, std::shared_ptr<const LevelSolution> sol,
             Player player)
      : ctx_(std::move(ctx)), sol_(std::move(sol)), player_(player) {}

  void start(PositionId) override {}
  void step(PositionId, PositionId) override {}
  PositionId choose(PositionId v) const override {
    return best_move(ctx_->game(), v, sol_->values, player_);
  }
  std::string key() const override { return {}; }

 private:
  std::shared_ptr<SolverContext> ctx_;
  std::shared_ptr<const LevelSolution> sol_;
  Player player_;
};

// Single-priority level, player who must leave: follow the finite-horizon
// values for a number of moves fixed at the start.
class CountingBase : public LevelStrategy {
 public:
  CountingBase(std::shared_ptr<SolverContext> ctx, std::shared_ptr<const LevelSolution> sol,
               Player player, double eps)
      : ctx_(std::move(ctx)), sol_(std::move(sol)), player_(player), eps_(eps) {}

  void start(PositionId v) override {
    remaining_ = 0;
    if (!ctx_->live(sol_->level, v)) return;
    const ExtValue target = sol_->values[v];
    for (std::size_t k = 0;; ++k) {
      const Valuation* x = ctx_->horizon(*sol_, k);
      if (!x) return;  // budget exhausted: hold the value instead
      bool good = player_ == Player::Zero ? eps_above((*x)[v], target, eps_)
                                          : eps_below((*x)[v], target, eps_);
      if (good) {
        remaining_ = k;
        return;
      }
    }
  }

  void step(PositionId, PositionId) override {
    if (remaining_ > 0) --remaining_;
  }

  PositionId choose(PositionId v) const override {
    if (remaining_ == 0) return best_move(ctx_->game(), v, sol_->values, player_);
    return best_move(ctx_->game(), v, *ctx_->horizon(*sol_, remaining_ - 1), player_);
  }

  std::string key() const override { return std::to_string(remaining_); }

 private:
  std::shared_ptr<SolverContext> ctx_;
  std::shared_ptr<const LevelSolution> sol_;
  Player player_;
  double eps_;
  std::size_t remaining_ = 0;
};

// Shared bookkeeping of the two unfolding strategies: visits to the
// truncated positions of the level and the discount product since start().
class UnfoldingStrategy : public LevelStrategy {
 public:
  UnfoldingStrategy(std::shared_ptr<SolverContext> ctx, std::shared_ptr<const LevelSolution> sol,
                    Player player, double eps)
      : ctx_(std::move(ctx)), sol_(std::move(sol)), player_(player), eps_(eps),
        sensitive_(eps_sensitive(*ctx_, sol_->level + 1, player_)) {}

  void start(PositionId v) override {
    visits_ = 0;
    delta_ = 1.0;
    last_d_ = 1.0;
    on_start();
    if (ctx_->truncated(sol_->level, v)) {
      visit(v, 1.0);
    } else {
      restart(v);
    }
  }

  void step(PositionId from, PositionId to) override {
    const double before = delta_;
    delta_ *= ctx_->game().discount(from, to);
    if (ctx_->truncated(sol_->level, to)) {
      visit(to, before);
    } else if (pending_) {
      restart(to);
    } else {
      sub_->step(from, to);
    }
  }

  PositionId choose(PositionId v) const override {
    if (ctx_->truncated(sol_->level, v)) return ctx_->forced_successor(v);
    return sub_->choose(v);
  }

 protected:
  static double spread(double d) { return std::max(d, 1.0 / d); }
  // Keeps budgets inside (0, 1) when discount products overflow.
  static double budget(double e) {
    if (!(e > 0.0)) return std::numeric_limits<double>::denorm_min();  // also NaN
    return std::min(e, 0.5);
  }

  virtual void on_start() {}
  // Called on entering a truncated position; `before` is the discount
  // product of the history preceding it.
  virtual void on_visit(PositionId v, double before) = 0;
  // Budget and terminal valuation of the sub-strategy started at the
  // successor of the last truncated position (or at the first position).
  virtual double sub_eps() const = 0;
  virtual Valuation sub_lam() const = 0;

  std::string history_key() const {
    return std::to_string(visits_) + ':' + short_number(delta_);
  }

  std::shared_ptr<SolverContext> ctx_;
  std::shared_ptr<const LevelSolution> sol_;
  Player player_;
  double eps_;
  bool sensitive_;
  std::size_t visits_ = 0;
  double delta_ = 1.0;
  double last_d_ = 1.0;  // D of the history up to the last truncated position
  bool pending_ = false;
  std::unique_ptr<LevelStrategy> sub_;

 private:
  void visit(PositionId v, double before) {
    on_visit(v, before);
    ++visits_;
    last_d_ = spread(delta_);
    pending_ = true;
    sub_.reset();
  }

  void restart(PositionId v) {
    pending_ = false;
    sub_ = make_level_strategy(ctx_, sol_->level + 1, sub_lam(), player_, sub_eps());
    sub_->start(v);
  }
};

// Unfolding level, player who wins infinite plays: restart the strategy of
// the final stage after every truncated position with a shrinking budget.
class ResettingUnfolding : public UnfoldingStrategy {
 public:
  using UnfoldingStrategy::UnfoldingStrategy;

  std::string key() const override {
    std::string k = pending_ ? "*" : sub_->key();
    return sensitive_ ? history_key() + '/' + k : k;
  }

 protected:
  void on_visit(PositionId, double) override {}
  double sub_eps() const override {
    if (visits_ == 0) return budget(eps_ / 2);
    return budget(eps_ / std::ldexp(1.0, static_cast<int>(visits_) + 1) / last_d_);
  }
  Valuation sub_lam() const override {
    return ctx_->lam_with_stage(sol_->level, sol_->lam, sol_->stages.back());
  }
};

// Unfolding level, player who loses infinite plays: use the stage index as a
// counter that drops at every truncated position.
class CountingUnfolding : public UnfoldingStrategy {
 public:
  using UnfoldingStrategy::UnfoldingStrategy;

  std::string key() const override {
    std::string k = std::to_string(stage_) + '/' + (pending_ ? "*" : sub_->key());
    return stage_ > 0 || sensitive_ ? history_key() + '/' + k : k;
  }

 protected:
  void on_start() override { stage_ = sol_->stages.size() - 1; }

  void on_visit(PositionId v, double before) override {
    if (stage_ == 0) return;
    const auto& ts = ctx_->truncated_positions(sol_->level);
    const auto i = static_cast<std::size_t>(std::find(ts.begin(), ts.end(), v) - ts.begin());
    const double tight =
        budget(eps_ / std::pow(4.0, static_cast<double>(visits_) + 1) / spread(before));
    const ExtValue bound = sol_->stages[stage_][i];
    std::size_t next = stage_ - 1;
    for (std::size_t n = 0; n < stage_; ++n) {
      ExtValue val = sol_->raw[n + 1][i];
      bool ok = player_ == Player::Zero ? eps_above(val, bound, tight) : eps_below(val, bound, tight);
      if (ok) {
        next = n;
        break;
      }
    }
    stage_ = next;
  }

  double sub_eps() const override {
    double eps_h = visits_ == 0 ? eps_
                                : eps_ / std::pow(4.0, static_cast<double>(visits_)) / last_d_;
    return budget(eps_h / 4);
  }
  Valuation sub_lam() const override {
    return ctx_->lam_with_stage(sol_->level, sol_->lam, sol_->stages[stage_]);
  }

 private:
  std::size_t stage_ = 0;
};

std::unique_ptr<LevelStrategy> make_level_strategy(const std::shared_ptr<SolverContext>& ctx,
                                                   std::size_t level, const Valuation& lam,
                                                   Player player, double eps) {
  auto sol = ctx->solve_level(level, lam);
  const bool fav = player == favoured(ctx->level_priority(level));
  if (ctx->is_base(level)) {
    if (fav) return std::make_unique<GreedyBase>(ctx, sol, player);
    return std::make_unique<CountingBase>(ctx, sol, player, eps);
  }
  if (fav) return std::make_unique<ResettingUnfolding>(ctx, sol, player, eps);
  return std::make_unique<CountingUnfolding>(ctx, sol, player, eps);
}

// Strategy on the input game: translates to the normalized game, where an
// original position with an intermediate first takes the forced move to it.
class TopStrategy : public Strategy {
 public:
  TopStrategy(std::shared_ptr<SolverContext> ctx, Player player, double eps)
      : ctx_(std::move(ctx)), player_(player) {
    if (ctx_->levels() > 0) {
      root_ = make_level_strategy(ctx_, 0, ctx_->initial_lam(), player_, eps);
    }
  }

  Player player() const override { return player_; }

  void start(PositionId v) override {
    check(v);
    if (!root_) return;
    root_->start(v);
    enter(v);
  }

  void observe(PositionId from, PositionId to) override {
    check(from);
    check(to);
    if (!root_) return;
    root_->step(inner(from), to);
    enter(to);
  }

  PositionId choose(PositionId v) const override {
    check(v);
    if (!root_) throw ContractError("choose called in a game without moves");
    return root_->choose(inner(v));
  }

  std::string memory_key() const override { return root_ ? root_->key() : std::string(); }

 private:
  void check(PositionId v) const {
    if (v >= ctx_->original_size()) throw ContractError("position out of range");
  }
  PositionId inner(PositionId v) const {
    PositionId m = ctx_->intermediate(v);
    return m == kNoPosition ? v : m;
  }
  void enter(PositionId v) {
    PositionId m = ctx_->intermediate(v);
    if (m != kNoPosition) root_->step(v, m);
  }

  std::shared_ptr<SolverContext> ctx_;
  Player player_;
  std::unique_ptr<LevelStrategy> root_;
};

std::unique_ptr<Strategy> make_top(const SolveResult& result, Player player, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ContractError("strategy eps must lie in (0, 1)");
  if (!result.context) throw ContractError("solve result carries no solver context");
  return std::make_unique<TopStrategy>(result.context, player, eps);
}

}  // namespace

std::unique_ptr<Strategy> strategy_p0(const SolveResult& result, double eps) {
  return make_top(result, Player::Zero, eps);
}

std::unique_ptr<Strategy> strategy_p1(const SolveResult& result, double eps) {
  return make_top(result, Player::One, eps);
}

}  // namespace qmu
