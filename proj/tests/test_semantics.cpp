#include <doctest.h>

#include "qmu/bridge.hpp"
#include "qmu/random.hpp"
#include "qmu/semantics.hpp"
#include "support.hpp"

using namespace qmu;

namespace {

Qts one_state(double p, bool loop) {
  Qts k;
  StateId v = k.add_state("v");
  k.set_predicate("P", v, p);
  if (loop) k.add_edge(v, v, 1.0);
  return k;
}

ExtValue at(const Qts& k, const std::string& text, const std::string& state) {
  return eval(k, parse(text))[k.find(state)];
}

}  // namespace

TEST_CASE("predicates") {
  CHECK(at(one_state(5, false), "|P - 2|", "v") == ExtValue(3));
  CHECK(at(one_state(1, false), "|P - 2|", "v") == ExtValue(1));
  CHECK(at(one_state(INFINITY, false), "|P - 2|", "v") == kInfinity);
  CHECK(at(one_state(2, false), "~|P - 2|", "v") == kInfinity);
}

TEST_CASE("modalities at terminal states") {
  Qts k = one_state(5, false);
  CHECK(at(k, "<>|P - 0|", "v") == ExtValue::zero());
  CHECK(at(k, "[]|P - 0|", "v") == kInfinity);
}

TEST_CASE("discounted modalities") {
  Qts k;
  StateId v = k.add_state("v");
  StateId w = k.add_state("w");
  k.add_edge(v, w, 2.0);
  k.set_predicate("P", w, 3);
  CHECK(at(k, "<>|P - 0|", "v") == ExtValue(6));
  CHECK(at(k, "[]|P - 0|", "v") == ExtValue(1.5));
  CHECK(at(k, "3 * <>|P - 0|", "v") == ExtValue(18));
}

TEST_CASE("fixpoints of halving on a self-loop") {
  Qts k = one_state(0, true);
  CHECK(at(k, "nu X. 0.5 * X", "v") == kInfinity);
  CHECK(at(k, "mu X. 0.5 * X", "v") == ExtValue::zero());
  CHECK(at(k, "nu X. 0.5 * <>X", "v") == kInfinity);
  CHECK(at(k, "mu X. 2 * <>X", "v") == ExtValue::zero());
}

TEST_CASE("priority gadget diverges to inf or stays at 0") {
  Qts k;
  StateId a = k.add_state("a");
  StateId b = k.add_state("b");
  k.set_predicate("Omega", a, 3);
  k.set_predicate("Omega", b, 2);
  EvalStats st;
  Valuation v = eval(k, parse("mu X. (2 * X \\/ |Omega - 3|)"), {}, {}, &st);
  CHECK(v[a] == ExtValue::zero());
  CHECK(v[b] == kInfinity);
  CHECK(st.promotions >= 1);
}

TEST_CASE("errors") {
  Qts k = one_state(1, true);
  CHECK_THROWS_AS(eval(k, parse("<>X")), ContractError);
  CHECK_THROWS_AS(eval(k, parse("|R - 1|")), ContractError);
  SolverConfig tight;
  tight.max_iters = 3;
  Qts slow;
  StateId s = slow.add_state("s");
  slow.add_edge(s, s, 0.9);
  slow.set_predicate("P", s, 1);
  try {
    eval(slow, parse("nu X. <>X /\\ |P - 0|"), {}, tight);
    FAIL("expected non-convergence");
  } catch (const NonConvergence& e) {
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("environment") {
  Qts k = one_state(1, true);
  Environment env{{"X", {ExtValue(4)}}};
  CHECK(eval(k, parse("<>X \\/ |P - 0|"), env)[0] == ExtValue(4));
  Environment wrong{{"X", {ExtValue(4), ExtValue(1)}}};
  CHECK_THROWS_AS(eval(k, parse("<>X"), wrong), ContractError);
}

TEST_CASE("qualitative reachability matches graph search") {
  Rng rng(17);
  SystemOptions opt;
  opt.qualitative = true;
  opt.non_discounted = true;
  opt.predicates = {"P"};
  for (int i = 0; i < 100; ++i) {
    Qts k = random_system(rng, opt);
    std::vector<bool> target(k.size());
    for (StateId s = 0; s < k.size(); ++s) target[s] = k.predicate("P", s).is_zero();
    // |P - 0| is inf where P = inf, so reach the states where P is inf
    for (StateId s = 0; s < k.size(); ++s) target[s] = !target[s];
    std::vector<bool> expect = testing::can_reach(k, target);
    Valuation v = eval_qualitative(k, parse("mu X. (|P - 0| \\/ <>X)"));
    for (StateId s = 0; s < k.size(); ++s) CHECK(v[s] == (expect[s] ? kInfinity : ExtValue::zero()));
    Valuation id = eval_qualitative(k, parse("|P - 0|"));
    for (StateId s = 0; s < k.size(); ++s) CHECK(id[s] == k.predicate("P", s));
  }
}

TEST_CASE("nu X. []X is inf on total systems") {
  Qts k;
  for (int i = 0; i < 4; ++i) k.add_state("s" + std::to_string(i));
  for (StateId s = 0; s < 4; ++s) k.add_edge(s, (s + 1) % 4, 1.0);
  for (auto v : eval_qualitative(k, parse("nu X. []X"))) CHECK(v == kInfinity);
}

TEST_CASE("qualitative evaluation rejects quantitative input") {
  Qts k = one_state(3, true);
  CHECK_THROWS_AS(eval_qualitative(k, parse("|P - 0|")), ContractError);
  Qts q = one_state(0, true);
  CHECK_THROWS_AS(eval_qualitative(q, parse("|P - 1|")), ContractError);
}

TEST_CASE("monotone in the environment") {
  Rng rng(19);
  const char* texts[] = {"<>X \\/ |P - 1|", "mu Y. (X /\\ <>Y) \\/ |P - 2|",
                         "nu Y. 0.5 * X /\\ []Y", "2 * []X /\\ ~|Q - 1|",
                         "nu Y. mu Z. (X \\/ <>Z) /\\ []Y"};
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_real_distribution<double> u(0, 5);
  for (int i = 0; i < 100; ++i) {
    Qts k = random_system(rng);
    Valuation lo(k.size());
    Valuation hi(k.size());
    for (StateId s = 0; s < k.size(); ++s) {
      lo[s] = u(rng);
      hi[s] = pick(rng) == 0 ? kInfinity : ExtValue(lo[s].value() + u(rng));
    }
    Formula f = parse(texts[pick(rng)]);
    Valuation a = eval(k, f, {{"X", lo}});
    Valuation b = eval(k, f, {{"X", hi}});
    // Both sides are fixpoint approximations, so order holds up to tol_cmp.
    for (StateId s = 0; s < k.size(); ++s) CHECK(eps_below(a[s], b[s], SolverConfig{}.tol_cmp));
  }
}

TEST_CASE("negation laws on random instances") {
  Rng rng(23);
  SolverConfig cfg;
  for (int i = 0; i < 80; ++i) {
    Qts k = random_system(rng);
    Formula f = random_formula(rng);
    Formula g = random_formula(rng);
    CHECK(check_negation(k, f, cfg).pass);
    Valuation plain = eval(k, f);
    Valuation nnf = eval(k, to_nnf(f));
    Valuation lhs = eval(k, Formula::negate(Formula::conj(f, g)));
    Valuation rhs = eval(k, Formula::disj(Formula::negate(f), Formula::negate(g)));
    for (StateId s = 0; s < k.size(); ++s) {
      CHECK(agree(plain[s], nnf[s], cfg.tol_cmp));
      CHECK(agree(lhs[s], rhs[s], cfg.tol_cmp));
    }
  }
}

TEST_CASE("fixpoint duality and residual") {
  Rng rng(29);
  SolverConfig cfg;
  int checked = 0;
  while (checked < 60) {
    Qts k = random_system(rng);
    Formula f = to_nnf(random_formula(rng));
    if (!f.is_fixpoint()) continue;
    ++checked;
    const Op dual = f.op() == Op::Mu ? Op::Nu : Op::Mu;
    Formula neg = Formula::fixpoint(
        dual, f.name(), to_nnf(Formula::negate(negate_occurrences(f.body(), f.name()))));
    Valuation a = eval(k, Formula::negate(f));
    Valuation b = eval(k, neg);
    Valuation g = eval(k, f);
    Valuation next = eval(k, f.body(), {{f.name(), g}});
    for (StateId s = 0; s < k.size(); ++s) CHECK(agree(a[s], b[s], cfg.tol_cmp));
    // A promoted coordinate is a limit, not a finite iterate; compare the rest.
    for (StateId s = 0; s < k.size(); ++s) {
      if (g[s].is_infinite() || g[s].is_zero()) continue;
      CHECK(std::fabs(g[s].value() - next[s].value()) <= cfg.tol_fix);
    }
  }
}
