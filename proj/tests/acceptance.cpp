// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qmu/bridge.hpp"
#include "qmu/random.hpp"
#include "support.hpp"

using namespace qmu;

namespace {

// Tolerances and sizes of the criteria.
constexpr double kLawTol = 1e-6;
constexpr double kCrossCheckTol = 1e-6;
constexpr double kAcyclicTol = 1e-9;
constexpr double kStrategyEps[] = {0.1, 0.01};
constexpr int kMaxLoops = 20;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Stage logs gathered by criteria 2 to 5 for criterion 8.
std::vector<StageLog> g_logs;
std::size_t g_gadget_checks = 0;
bool g_gadget_pass = true;

void keep_logs(const std::vector<StageLog>& logs) {
  g_logs.insert(g_logs.end(), logs.begin(), logs.end());
}

bool report(int id, double limit_seconds, const std::function<Outcome()>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_seconds <= 0 || secs < limit_seconds;
  const bool ok = o.pass && in_time;
  std::printf("criterion %d: %s  %s  [%.2f s%s]\n", id, ok ? "PASS" : "FAIL", o.detail.c_str(), secs,
              in_time ? "" : ", over time limit");
  std::fflush(stdout);
  return ok;
}

// Each law as a pair of formulas evaluated independently, without the
// rewriter: the left side always applies ~ to a compound formula.
std::vector<std::pair<Formula, Formula>> law_pairs(const Formula& phi, const Formula& psi, double d) {
  using F = Formula;
  auto neg = [](const F& f) { return F::negate(f); };
  std::vector<std::pair<F, F>> out = {
      {neg(neg(phi)), phi},
      {neg(F::conj(phi, psi)), F::disj(neg(phi), neg(psi))},
      {neg(F::disj(phi, psi)), F::conj(neg(phi), neg(psi))},
      {neg(F::box(phi)), F::diamond(neg(phi))},
      {neg(F::diamond(phi)), F::box(neg(phi))},
      {neg(F::scale(d, phi)), F::scale(1.0 / d, neg(phi))},
  };
  // Fixpoints over a body mixing both formulas with the bound variable.
  const F x = F::var("Xlaw");
  const std::vector<F> bodies = {F::disj(F::conj(phi, F::diamond(x)), psi),
                                 F::conj(F::disj(phi, F::box(x)), psi),
                                 F::disj(F::scale(d, F::diamond(x)), phi)};
  for (const F& body : bodies) {
    const F flipped = neg(negate_occurrences(body, "Xlaw"));
    out.push_back({neg(F::mu("Xlaw", body)), F::nu("Xlaw", flipped)});
    out.push_back({neg(F::nu("Xlaw", body)), F::mu("Xlaw", flipped)});
  }
  return out;
}

Outcome criterion1() {
  Rng rng(1001);
  const SolverConfig cfg;
  std::size_t laws = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Qts k = random_system(rng, {.max_states = 6});
    const Formula phi =
        random_formula(rng, {.max_height = 5, .max_alternation = 2, .min_alternation = i % 3});
    const Formula psi = random_formula(rng, {.max_height = 3, .max_alternation = 1});
    const double d = kDiscountGrid[std::uniform_int_distribution<std::size_t>(0, kDiscountGrid.size() - 1)(rng)];

    CheckReport r = check_negation(k, phi, cfg);
    worst = std::max(worst, r.max_deviation);
    if (!r.pass) ++failures;

    for (const auto& [lhs, rhs] : law_pairs(phi, psi, d)) {
      const Valuation a = eval(k, lhs, {}, cfg);
      const Valuation b = eval(k, rhs, {}, cfg);
      ++laws;
      for (StateId s = 0; s < k.size(); ++s) {
        if (!agree(a[s], b[s], kLawTol)) {
          ++failures;
          break;
        }
      }
    }
  }
  std::ostringstream os;
  os << "200 instances, " << laws << " law pairs, " << failures << " failures, max deviation " << worst;
  return {failures == 0, os.str()};
}

Outcome criterion2() {
  Rng rng(2002);
  SolverConfig cfg;
  cfg.tol_cmp = kCrossCheckTol;
  std::size_t failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Qts k = random_system(rng, {.max_states = 5});
    // spread over alternation depths 0, 1 and 2
    const Formula phi = to_nnf(random_formula(
        rng, {.max_height = 8, .max_alternation = 2, .min_alternation = i % 3, .max_size = 12}));
    CheckReport r = check_mc_theorem(k, phi, cfg);
    keep_logs(r.stage_logs);
    worst = std::max(worst, r.max_deviation);
    if (!r.pass) ++failures;
  }
  std::ostringstream os;
  os << "100 pairs, " << failures << " failures, max deviation " << worst;
  return {failures == 0, os.str()};
}

// Criterion 7 runs inside criterion 3 on the same encoded games.
void check_gadgets(const Game& g, int d) {
  const Qts k = game_to_qts(g, d);
  for (int j = 0; j < d; ++j) {
    const Formula gadget = priority_gadget(j, "a");
    for (const Formula& f : {gadget, to_nnf(gadget)}) {
      const Valuation v = eval(k, f);
      ++g_gadget_checks;
      for (PositionId p = 0; p < g.size(); ++p) {
        const bool hit = !g.is_terminal(p) && g.priority(p) == j;
        if (v[p] != (hit ? kInfinity : ExtValue::zero())) g_gadget_pass = false;
      }
    }
  }
}

Outcome criterion3() {
  Rng rng(3003);
  SolverConfig cfg;
  cfg.tol_cmp = kCrossCheckTol;
  std::size_t failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 3;
    const Game g = random_game(rng, {.max_positions = 6, .priorities = d});
    CheckReport r = check_win_theorem(g, d, cfg);
    keep_logs(r.stage_logs);
    worst = std::max(worst, r.max_deviation);
    if (!r.pass) ++failures;
    check_gadgets(g, d);
  }
  std::ostringstream os;
  os << "100 games, d in {1,2,3}, " << failures << " failures, max deviation " << worst;
  return {failures == 0, os.str()};
}

Outcome criterion4() {
  Rng rng(4004);
  std::size_t mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    const Game g = random_game(rng, {.max_positions = 8, .priorities = 4, .qualitative = true,
                                     .non_discounted = true});
    const SolveResult r = solve(g);
    keep_logs(r.logs);
    const WinningRegions w = zielonka_qualitative(g);
    for (PositionId v = 0; v < g.size(); ++v) {
      if (r.values[v] != (w.player0[v] ? kInfinity : ExtValue::zero())) ++mismatches;
    }
  }
  std::ostringstream os;
  os << "100 games, " << mismatches << " mismatching positions";
  return {mismatches == 0, os.str()};
}

Outcome criterion5() {
  const Game g = testing::infinite_memory_game();
  const PositionId start = g.find("start");
  const PositionId b = g.find("b");
  const SolverConfig cfg;
  const SolveResult r = solve(g, cfg);
  keep_logs(r.logs);
  bool ok = r.values[start] == kInfinity;

  // the outer stages pass the cap and are promoted
  const StageLog* top = r.top_stages();
  bool promoted = top != nullptr && r.stats.promotions > 0 && top->stages.back()[0] == kInfinity;
  ok = ok && promoted;

  std::size_t runs = 0;
  std::size_t below = 0;
  for (double eps : kStrategyEps) {
    for (int n = 0; n <= kMaxLoops; ++n) {
      auto s0 = strategy_p0(r, eps);
      testing::LoopThenLeave s1(g, n);
      const SimulationResult res = simulate(g, *s0, s1, start, 1000000);
      ++runs;
      if (res.kind != PlayKind::Finite || res.outcome.value() < 1.0 / eps) ++below;
    }
  }
  ok = ok && below == 0;

  // every positional choice at b misses the 0.1 bound for some n
  std::size_t positional_failing = 0;
  for (const auto& m : g.moves(b)) {
    PositionalStrategy s0(Player::Zero, {{b, m.to}});
    for (int n = 0; n <= kMaxLoops; ++n) {
      testing::LoopThenLeave s1(g, n);
      const SimulationResult res = simulate(g, s0, s1, start, 1000);
      if (res.kind != PlayKind::Truncated && !eps_above(res.outcome, kInfinity, 0.1)) {
        ++positional_failing;
        break;
      }
    }
  }
  ok = ok && positional_failing == g.moves(b).size();

  std::ostringstream os;
  os << "value at start " << format_number(r.values[start].is_infinite() ? INFINITY : r.values[start].value())
     << ", promotions " << r.stats.promotions << ", " << runs << " counter-strategy runs with "
     << below << " below 1/eps, " << positional_failing << "/" << g.moves(b).size()
     << " positional strategies fail";
  return {ok, os.str()};
}

Outcome criterion6() {
  Rng rng(6006);
  std::size_t mismatches = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Game g = random_game(rng, {.max_positions = 10, .priorities = 4, .acyclic = true});
    const Valuation expect = testing::backward_induction(g);
    const Valuation got = solve(g).values;
    for (PositionId v = 0; v < g.size(); ++v) {
      if (expect[v].is_infinite() || got[v].is_infinite()) {
        if (expect[v] != got[v]) ++mismatches;
        continue;
      }
      const double diff = std::fabs(got[v].value() - expect[v].value());
      worst = std::max(worst, diff);
      if (diff > kAcyclicTol) ++mismatches;
    }
  }
  std::ostringstream os;
  os << "200 games, " << mismatches << " mismatching positions, max difference " << worst;
  return {mismatches == 0, os.str()};
}

Outcome criterion7() {
  std::ostringstream os;
  os << g_gadget_checks << " gadget evaluations on the criterion 3 systems";
  return {g_gadget_pass && g_gadget_checks > 0, os.str()};
}

Outcome criterion8() {
  SolveResult all;
  all.logs = g_logs;
  std::size_t stages = 0;
  for (const auto& l : g_logs) stages += l.stages.size();
  std::ostringstream os;
  os << g_logs.size() << " stage logs, " << stages << " stages from criteria 2-5";
  return {stages_monotone(all) && !g_logs.empty(), os.str()};
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, 30, criterion1);
  ok &= report(2, 120, criterion2);
  ok &= report(3, 120, criterion3);
  ok &= report(4, 10, criterion4);
  ok &= report(5, 5, criterion5);
  ok &= report(6, 5, criterion6);
  ok &= report(7, 0, criterion7);
  ok &= report(8, 0, criterion8);
  std::printf("acceptance: %s\n", ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}
