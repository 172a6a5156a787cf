#include <catch2/catch_amalgamated.hpp>

#include "nuqrom/bfqrom.hpp"
#include "nuqrom/microsuite.hpp"

using namespace nuqrom;

namespace {

// Trivial owf online stage: answer 0 regardless of the challenge.
double answer_zero_value(const GameSpec& g, const OracleTable& h) {
  i64 wins = 0;
  for (i64 r = 0; r < g.coin_count; ++r)
    if (evaluate(g, h, r, 0)) ++wins;
  return static_cast<double>(wins) / static_cast<double>(g.coin_count);
}

}  // namespace

TEST_CASE("a vacuous prefix reproduces the plain game value") {
  GameSpec g = owf_game(2, 2);
  OracleEnsemble e = enumerate_oracles(2, 2);
  BfAlgorithm bf = vacuous_prefix_with([&](const OracleTable& h) {
    return answer_zero_value(g, h);
  }, 0);
  BfGameResult res = run_bf_game(bf, g, e);
  CHECK(res.accept_rate == 1.0);
  CHECK(res.joint == res.conditional);
  CHECK(res.joint == 0.75);
}

TEST_CASE("classical fixing H(0)=0 with the answer-zero adversary") {
  GameSpec g = owf_game(2, 2);
  OracleEnsemble e = enumerate_oracles(2, 2);
  ClassicalFixing fixing{{{0, 0}}};
  fixing.validate(2, 2);
  BfAlgorithm bf = bf_from_fixing(
      g, fixing, [](const ClassicalFixing&, i64) { return i64{0}; }, "fix-h0=0");
  BfGameResult res = run_bf_game(bf, g, e);
  CHECK(res.accept_rate == 0.5);  // oracles [0,0] and [0,1]

  // brute force over the two accepted oracles and two coins:
  // H=[0,0] wins both coins; H=[0,1] wins coin 0, loses coin 1.
  double brute = 0.0;
  e.for_each([&](i64, const OracleTable& h, double w) {
    if (h.at(0) != 0) return;
    brute += w * answer_zero_value(g, h);
  });
  CHECK(res.joint == brute);
  CHECK(res.conditional == brute / res.accept_rate);
  CHECK(res.conditional == 0.75);
  CHECK(res.conditional >= 0.0);
  CHECK(res.conditional <= 1.0);
  CHECK(res.joint <= res.conditional);
}

TEST_CASE("prefixes that never accept are reported") {
  GameSpec g = owf_game(2, 2);
  OracleEnsemble e = enumerate_oracles(2, 2);
  BfAlgorithm bf;
  bf.id = "never";
  bf.prefix = [](const OracleTable&) { return PrefixResult{}; };
  bf.online_value = [](const PrefixResult&, const OracleTable&) { return 1.0; };
  CHECK_THROWS_AS(run_bf_game(bf, g, e), NeverAccepts);
}

TEST_CASE("empty alternating prefix (k=1) reduces to the plain game") {
  Rng rng(91);
  MicroInstance inst = random_micro_instance(rng());
  BfAlgorithm bf =
      build_prefix_from_altmeas(inst.advice, inst.strat, inst.game, inst.layout, 1);
  CHECK(bf.prefix_budget == 0);
  BfGameResult res = run_bf_game(bf, inst.game, inst.ensemble);
  double value = success_probability(inst.advice, inst.strat, inst.game, inst.ensemble,
                                     inst.layout);
  CHECK(res.accept_rate == 1.0);
  CHECK(std::abs(res.conditional - value) <= 1e-12);
}

TEST_CASE("k=3 prefix reproduces the third conditional on the owf instance") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  StrategyCircuit id = StrategyCircuit::identity();
  AdviceFamily uniform = AdviceFamily::uniform();
  OracleEnsemble e = enumerate_oracles(2, 2);

  WeightedSpectrum spec = ensemble_spectrum(uniform, id, g, e, layout);
  ConditionalSequence seq = conditional_probs(spec, 3);
  BfAlgorithm bf = build_prefix_from_altmeas(uniform, id, g, layout, 3);
  BfGameResult res = run_bf_game(bf, g, e);
  CHECK(std::abs(res.conditional - seq.eps[2]) <= 1e-9);
}

TEST_CASE("reduction equality across random instances and odd k") {
  Rng rng(97);
  for (int trial = 0; trial < 6; ++trial) {
    MicroInstance inst = random_micro_instance(rng());
    for (int k : {1, 3, 5}) CHECK(check_reduction_equality(inst, k, 1e-9).pass);
  }
}

TEST_CASE("prefix budgets are declared and respected") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}, {"qy", 2}}, {"ans"}, {"qy"}, "ans");
  StrategyCircuit strat;
  strat.set_default({StrategyStep::oracle("ans", "qy")});
  AdviceFamily uniform = AdviceFamily::uniform();
  int k = 5;
  BfAlgorithm bf = build_prefix_from_altmeas(uniform, strat, g, layout, k);
  i64 t = strat.query_count();
  CHECK(bf.prefix_budget == (k - 1) * (t + g.t_samp + g.t_verify));
  CHECK(bf.online_budget == t);

  OracleEnsemble e = enumerate_oracles(2, 2);
  BfGameResult res = run_bf_game(bf, g, e);
  CHECK(res.max_prefix_queries <= bf.prefix_budget);
}

TEST_CASE("even k is rejected; the monotonicity bound covers it instead") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  CHECK_THROWS_AS(build_prefix_from_altmeas(AdviceFamily::uniform(),
                                            StrategyCircuit::identity(), g, layout, 2),
                  EvenRounds);
  CHECK_THROWS_AS(build_prefix_from_altmeas(AdviceFamily::uniform(),
                                            StrategyCircuit::identity(), g, layout, 0),
                  EvenRounds);

  // for even k, eps^(k) <= eps^(k+1)
  Rng rng(103);
  for (int trial = 0; trial < 5; ++trial) {
    MicroInstance inst = random_micro_instance(rng());
    WeightedSpectrum spec =
        ensemble_spectrum(inst.advice, inst.strat, inst.game, inst.ensemble, inst.layout);
    ConditionalSequence seq = conditional_probs(spec, 6);
    for (std::size_t t = 1; t + 1 < seq.eps.size(); t += 2)
      CHECK(seq.eps[t] <= seq.eps[t + 1] + 1e-12);
  }
}

TEST_CASE("fixing enumeration counts and caps") {
  // 1-point fixings over a 2x2 oracle: empty + 4
  auto fixings = enumerate_fixings(2, 2, 1);
  CHECK(fixings.size() == 5);
  // 2-point fixings: empty + 4 + C(2,2)*2*2 = 9
  auto two = enumerate_fixings(2, 2, 2);
  CHECK(two.size() == 9);
  CHECK_THROWS_AS(enumerate_fixings(8, 8, 4, 100), CapExceeded);
}

TEST_CASE("nu estimates: vacuous family equals the best plain value") {
  GameSpec g = owf_game(2, 2);
  OracleEnsemble e = enumerate_oracles(2, 2);
  std::vector<BfAlgorithm> family;
  family.push_back(bf_from_fixing_best_response(g, e, ClassicalFixing{}, "empty"));
  NuEstimate est = estimate_nu(g, e, family);
  // best challenge->answer map without any fixing: the identity-style map
  // wins whenever the challenge has a preimage
  CHECK(est.best_conditional >= 0.75);
  CHECK(est.best_joint == est.best_conditional);  // accept rate 1
}

TEST_CASE("nu estimates grow with the fixing budget and beat 7/8 at P=1") {
  GameSpec g = owf_game(2, 2);
  OracleEnsemble e = enumerate_oracles(2, 2);

  double prev_joint = 0.0, prev_cond = 0.0;
  for (int p = 0; p <= 2; ++p) {
    std::vector<BfAlgorithm> family;
    auto fixings = enumerate_fixings(2, 2, p);
    for (std::size_t i = 0; i < fixings.size(); ++i)
      family.push_back(
          bf_from_fixing_best_response(g, e, fixings[i], "fix-" + std::to_string(i)));
    NuEstimate est = estimate_nu(g, e, family);
    CHECK(est.best_joint >= prev_joint - 1e-15);
    CHECK(est.best_conditional >= prev_cond - 1e-15);
    prev_joint = est.best_joint;
    prev_cond = est.best_conditional;
    if (p == 1) CHECK(est.best_conditional >= 7.0 / 8.0);
  }
}

TEST_CASE("joint never exceeds conditional") {
  Rng rng(107);
  GameSpec g = owf_game(2, 2);
  OracleEnsemble e = enumerate_oracles(2, 2);
  for (auto& fixing : enumerate_fixings(2, 2, 1)) {
    BfAlgorithm bf = bf_from_fixing_best_response(g, e, fixing, "f");
    BfGameResult res = run_bf_game(bf, g, e);
    CHECK(res.joint <= res.conditional + 1e-15);
    CHECK(res.accept_rate <= 1.0 + 1e-15);
  }
  (void)rng;
}

TEST_CASE("mixed advice cannot ride a single prefix state") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  AdviceFamily mixed = AdviceFamily::maximally_mixed_run(AdviceFamily::uniform());
  CHECK_THROWS_AS(
      build_prefix_from_altmeas(mixed, StrategyCircuit::identity(), g, layout, 3),
      ConfigError);
}
