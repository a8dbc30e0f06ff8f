// qmu: evaluate quantitative mu-calculus formulae, build and solve the
// matching parity games, and cross-check the two.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qmu/bridge.hpp"
#include "qmu/games.hpp"
#include "qmu/io.hpp"
#include "qmu/random.hpp"
#include "qmu/semantics.hpp"

namespace {

using namespace qmu;

enum Exit { kPass = 0, kFail = 1, kInput = 2, kDiverged = 3 };

struct Options {
  SolverConfig cfg;
  double epsilon = 0.1;
  std::size_t horizon = 1000;
  std::optional<std::uint64_t> seed;
  std::size_t samples = 8;
  std::size_t count = 50;
  bool simulate = false;
  bool oracle = false;
  bool stages = false;
  int d = 0;

  std::string system_file;
  std::string game_file;
  std::string formula;
  std::string mode;
};

Formula read_formula(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw InputError("cannot open '" + arg.substr(1) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }
  return parse(arg);
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

int default_d(const Game& g) {
  auto live = g.live_priorities();
  return live.empty() ? 1 : live.back() + 1;
}

std::uint64_t need_seed(const Options& o, const char* what) {
  if (!o.seed) throw InputError(std::string(what) + " needs an explicit --seed");
  return *o.seed;
}

int cmd_eval(const Options& o) {
  const Qts k = qts_from_json(read_json_file(o.system_file));
  const Formula phi = read_formula(o.formula);
  EvalStats st;
  const Valuation v = eval(k, phi, {}, o.cfg, &st);
  emit(valuation_to_json(k.ids(), v));
  std::cerr << "fixpoint iterations: " << st.fixpoint_iterations
            << ", promotions: " << st.promotions << ", floors: " << st.floors << '\n';
  return kPass;
}

// Plays each counter strategy against sampled positional opponents from every
// position. Truncated plays are reported but carry no verdict.
Json simulation_report(const Game& g, const SolveResult& sr, const Options& o, bool& ok) {
  Rng rng(need_seed(o, "--simulate"));
  Json per = Json::array();
  std::size_t runs = 0, conclusive = 0, violations = 0;
  for (PositionId v = 0; v < g.size(); ++v) {
    Json pos = {{"id", g.id(v)}, {"value", ext_to_json(sr.values[v])}};
    for (int p = 0; p < 2; ++p) {
      std::size_t c = 0, bad = 0, trunc = 0;
      for (std::size_t i = 0; i < o.samples; ++i) {
        auto mine = p == 0 ? strategy_p0(sr, o.epsilon) : strategy_p1(sr, o.epsilon);
        PositionalStrategy other = random_positional(rng, g, p == 0 ? Player::One : Player::Zero);
        SimulationResult res = p == 0 ? simulate(g, *mine, other, v, o.horizon)
                                      : simulate(g, other, *mine, v, o.horizon);
        ++runs;
        if (res.kind == PlayKind::Truncated) {
          ++trunc;
          continue;
        }
        ++c;
        bool good = p == 0 ? eps_above(res.outcome, sr.values[v], o.epsilon)
                           : eps_below(res.outcome, sr.values[v], o.epsilon);
        if (!good) ++bad;
      }
      conclusive += c;
      violations += bad;
      pos[p == 0 ? "player0" : "player1"] = {{"conclusive", c}, {"truncated", trunc}, {"violations", bad}};
    }
    per.push_back(std::move(pos));
  }
  ok = violations == 0;
  return {{"epsilon", o.epsilon},
          {"runs", runs},
          {"conclusive", conclusive},
          {"violations", violations},
          {"verdict", ok ? "pass" : "fail"},
          {"positions", per}};
}

Json oracle_report(const Game& g, const SolveResult& sr, bool& ok) {
  const WinningRegions w = zielonka_qualitative(g);
  Json mismatches = Json::array();
  for (PositionId v = 0; v < g.size(); ++v) {
    ExtValue expect = w.player0[v] ? kInfinity : ExtValue::zero();
    if (sr.values[v] != expect) mismatches.push_back(g.id(v));
  }
  ok = mismatches.empty();
  return {{"verdict", ok ? "pass" : "fail"}, {"mismatches", mismatches}};
}

Json stages_json(const SolveResult& sr) {
  Json logs = Json::array();
  for (const auto& l : sr.logs) logs.push_back(stage_log_to_json(l, sr.normalized_ids));
  return logs;
}

int cmd_solve(const Options& o) {
  const Game g = game_from_json(read_json_file(o.game_file));
  const SolveResult sr = solve(g, o.cfg);
  const Json values = valuation_to_json(position_ids(g), sr.values);
  if (!o.simulate && !o.oracle && !o.stages) {
    emit(values);
    return kPass;
  }
  Json out = {{"values", values}};
  bool ok = true;
  if (o.oracle) {
    bool good = true;
    out["oracle"] = oracle_report(g, sr, good);
    ok = ok && good;
  }
  if (o.simulate) {
    bool good = true;
    out["simulation"] = simulation_report(g, sr, o, good);
    ok = ok && good;
  }
  if (o.stages) out["stages"] = stages_json(sr);
  emit(out);
  return ok ? kPass : kFail;
}

int cmd_mcgame(const Options& o) {
  const Qts k = qts_from_json(read_json_file(o.system_file));
  const McGame mc = build_mc_game(k, to_nnf(read_formula(o.formula)));
  emit(game_to_json(mc.game, &mc.labels));
  return kPass;
}

int cmd_gts(const Options& o) {
  const Game g = game_from_json(read_json_file(o.game_file));
  emit(qts_to_json(game_to_qts(g, o.d > 0 ? o.d : default_d(g))));
  return kPass;
}

int cmd_winfmla(const Options& o) {
  std::cout << print(win_formula(o.d)) << '\n';
  return kPass;
}

int cmd_nnf(const Options& o) {
  std::cout << print(to_nnf(read_formula(o.formula))) << '\n';
  return kPass;
}

int cmd_check(const Options& o) {
  if (o.mode == "mc") {
    const Qts k = qts_from_json(read_json_file(o.system_file));
    CheckReport r = check_mc_theorem(k, read_formula(o.formula), o.cfg);
    emit(report_to_json(r, o.stages));
    return r.pass ? kPass : kFail;
  }
  if (o.mode == "win") {
    const Game g = game_from_json(read_json_file(o.game_file));
    CheckReport r = check_win_theorem(g, o.d > 0 ? o.d : default_d(g), o.cfg);
    emit(report_to_json(r, o.stages, position_ids(normalize(g))));
    return r.pass ? kPass : kFail;
  }
  // nnf: seeded batch of random systems and formulas
  Rng rng(need_seed(o, "check nnf"));
  Json instances = Json::array();
  bool pass = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < o.count; ++i) {
    const Qts k = random_system(rng);
    const Formula phi = random_formula(rng);
    CheckReport r = check_negation(k, phi, o.cfg);
    pass = pass && r.pass;
    worst = std::max(worst, r.max_deviation);
    instances.push_back({{"formula", print(phi)},
                         {"pass", r.pass},
                         {"max_deviation", ext_to_json(r.max_deviation)}});
  }
  emit({{"pass", pass},
        {"instances", o.count},
        {"max_deviation", ext_to_json(worst)},
        {"results", instances}});
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative mu-calculus evaluator and parity game solver"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--tol-fix", o.cfg.tol_fix, "Sup-norm change at which iteration stops");
  app.add_option("--tol-cmp", o.cfg.tol_cmp, "Tolerance of cross-checks");
  app.add_option("--cap", o.cfg.cap, "Ascending values above this become inf");
  app.add_option("--max-iters", o.cfg.max_iters, "Iteration budget per fixpoint or unfolding");
  app.add_option("--epsilon", o.epsilon, "Approximation target of simulated strategies");
  app.add_option("--horizon", o.horizon, "Maximum number of simulated moves");
  app.add_option("--seed", o.seed, "Seed for randomized modes");
  app.add_flag("--stages", o.stages, "Include the unfolding stage logs");

  auto* ev = app.add_subcommand("eval", "Evaluate a formula on a system");
  ev->add_option("system", o.system_file, "System JSON file")->required();
  ev->add_option("formula", o.formula, "Formula text or @file")->required();

  auto* so = app.add_subcommand("solve", "Solve a game");
  so->add_option("game", o.game_file, "Game JSON file")->required();
  so->add_flag("--simulate", o.simulate, "Simulate the counter strategies against sampled opponents");
  so->add_flag("--oracle", o.oracle, "Cross-check a qualitative game with the classical solver");
  so->add_option("--samples", o.samples, "Opponents sampled per position and player");

  auto* mg = app.add_subcommand("mcgame", "Build the model-checking game");
  mg->add_option("system", o.system_file, "System JSON file")->required();
  mg->add_option("formula", o.formula, "Closed formula text or @file")->required();

  auto* gt = app.add_subcommand("gts", "Encode a game as a transition system");
  gt->add_option("game", o.game_file, "Game JSON file")->required();
  gt->add_option("-d", o.d, "Number of priorities (default: largest live priority + 1)");

  auto* wf = app.add_subcommand("winfmla", "Print the winning formula for d priorities");
  wf->add_option("d", o.d, "Number of priorities")->required()->check(CLI::PositiveNumber);

  auto* nn = app.add_subcommand("nnf", "Print the negation normal form");
  nn->add_option("formula", o.formula, "Formula text or @file")->required();

  auto* ck = app.add_subcommand("check", "Cross-check logic against games");
  ck->require_subcommand(1);
  auto* ck_mc = ck->add_subcommand("mc", "eval against the model-checking game");
  ck_mc->add_option("system", o.system_file, "System JSON file")->required();
  ck_mc->add_option("formula", o.formula, "Closed formula text or @file")->required();
  auto* ck_win = ck->add_subcommand("win", "solve against the winning formula");
  ck_win->add_option("game", o.game_file, "Game JSON file")->required();
  ck_win->add_option("-d", o.d, "Number of priorities (default: largest live priority + 1)");
  auto* ck_nnf = ck->add_subcommand("nnf", "Negation law on a random batch");
  ck_nnf->add_option("--count", o.count, "Number of random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInput;
  }
  if (ck_mc->parsed()) o.mode = "mc";
  if (ck_win->parsed()) o.mode = "win";
  if (ck_nnf->parsed()) o.mode = "nnf";

  try {
    o.cfg.validate();
    if (!(o.epsilon > 0.0 && o.epsilon < 1.0)) throw InputError("--epsilon must lie in (0, 1)");
    if (o.horizon == 0) throw InputError("--horizon must be positive");
    if (ev->parsed()) return cmd_eval(o);
    if (so->parsed()) return cmd_solve(o);
    if (mg->parsed()) return cmd_mcgame(o);
    if (gt->parsed()) return cmd_gts(o);
    if (wf->parsed()) return cmd_winfmla(o);
    if (nn->parsed()) return cmd_nnf(o);
    return cmd_check(o);
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << " (residual " << format_number(e.residual()) << ")\n";
    return kDiverged;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
}
