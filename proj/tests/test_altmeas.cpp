#include <catch2/catch_amalgamated.hpp>

#include "nuqrom/altmeas.hpp"
#include "nuqrom/microsuite.hpp"

using namespace nuqrom;

namespace {

// Fraction arithmetic for the exact-rational cross-checks.
struct Frac {
  long long num = 0, den = 1;
  Frac(long long n, long long d) : num(n), den(d) { reduce(); }
  void reduce() {
    long long g = std::gcd(std::abs(num), std::abs(den));
    if (g > 0) {
      num /= g;
      den /= g;
    }
    if (den < 0) {
      num = -num;
      den = -den;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Two-coin game over a single trivial oracle whose POVM has a designed top
// eigenvalue: the answer-0 projector averaged with its rotation by theta.
struct ToyGame {
  GameSpec game;
  RegisterLayout layout{{{"ans", 2}}, {"ans"}, {}, "ans"};
  StrategyCircuit strat;
  OracleTable h{1, 1, {0}};

  explicit ToyGame(double theta) {
    game.name = "toy";
    game.coin_count = 2;
    game.challenge_count = 2;
    game.answer_count = 2;
    game.t_samp = 0;
    game.t_verify = 0;
    game.oracle_domain = 1;
    game.oracle_range = 1;
    game.samp = [](const CountingOracle&, i64 r) { return r; };
    game.verify = [](const CountingOracle&, i64, i64 ans) { return ans == 0; };
    Mat rot(2, 2);
    rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    strat.set_program(0, {});
    strat.set_program(1, {StrategyStep::local(rot, {"ans"})});
  }
};

}  // namespace

TEST_CASE("cp branch-0 squared norm on an eigenvector is its eigenvalue") {
  // theta = 60 degrees puts the top eigenvalue at (1 + cos 60) / 2 = 3/4
  ToyGame toy(M_PI / 3.0);
  PovmContext ctx(toy.game, toy.h, toy.strat, toy.layout);
  Mat p = game_povm(toy.game, toy.h, toy.strat, toy.layout).matrix;
  OptimalAdvice top = optimal_advice(p);
  REQUIRE(std::abs(top.value - 0.75) <= 1e-12);

  JointState joint = make_uniform_joint(2, top.state);
  CHECK(std::abs(cp_project(ctx, joint, 0).sq_norm() - 0.75) <= 1e-12);
  CHECK(std::abs(cp_project(ctx, joint, 1).sq_norm() - 0.25) <= 1e-12);
}

TEST_CASE("cp is the identity when every coin projector is the identity") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  StrategyCircuit id = StrategyCircuit::identity();
  OracleTable constant(2, 2, {1, 1});
  PovmContext ctx(g, constant, id, layout);
  Rng rng(3);
  JointState joint{2, 2, random_unit_vector(rng, 4)};
  CHECK((cp_project(ctx, joint, 0).vec - joint.vec).norm() <= 1e-12);
  CHECK(cp_project(ctx, joint, 1).vec.norm() <= 1e-12);
}

TEST_CASE("cp branches are complete on random joint states") {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    MicroInstance inst = random_micro_instance(rng());
    OracleTable h = inst.ensemble.table(static_cast<i64>(rng() % inst.ensemble.size()));
    PovmContext ctx(inst.game, h, inst.strat, inst.layout);
    JointState joint{ctx.coin_count(), inst.layout.dim(),
                     random_unit_vector(rng, ctx.coin_count() * inst.layout.dim())};
    double n0 = cp_project(ctx, joint, 0).sq_norm();
    double n1 = cp_project(ctx, joint, 1).sq_norm();
    CHECK(std::abs(n0 + n1 - joint.sq_norm()) <= 1e-10);
  }
}

TEST_CASE("isuniform fixes uniform-coin states and annihilates them on branch 1") {
  Rng rng(5);
  Vec psi = random_unit_vector(rng, 3);
  JointState uniform = make_uniform_joint(4, psi);
  CHECK((isuniform_project(uniform, 0).vec - uniform.vec).norm() <= 1e-12);
  CHECK(isuniform_project(uniform, 1).vec.norm() <= 1e-12);

  // a coin basis state overlaps the uniform state with probability 1/|R|
  JointState basis{4, 3, Vec::Zero(12)};
  basis.vec.segment(2 * 3, 3) = psi;
  CHECK(std::abs(isuniform_project(basis, 0).sq_norm() - 0.25) <= 1e-12);

  JointState random{4, 3, random_unit_vector(rng, 12)};
  double n0 = isuniform_project(random, 0).sq_norm();
  double n1 = isuniform_project(random, 1).sq_norm();
  CHECK(std::abs(n0 + n1 - 1.0) <= 1e-10);
}

TEST_CASE("single-oracle eigenvector advice: k rounds win with p^k") {
  ToyGame toy(M_PI / 3.0);
  PovmContext ctx(toy.game, toy.h, toy.strat, toy.layout);
  Mat p = game_povm(toy.game, toy.h, toy.strat, toy.layout).matrix;
  Vec top = optimal_advice(p).state;
  AltMeasTranscript t2 = alternating_exact(ctx, top, 2);
  CHECK(std::abs(t2.win_probability - 9.0 / 16.0) <= 1e-12);
  for (int k = 1; k <= 6; ++k) {
    AltMeasTranscript tk = alternating_exact(ctx, top, k);
    CHECK(std::abs(tk.win_probability - std::pow(0.75, k)) <= 1e-12);
  }
}

TEST_CASE("one round of alternating measurement is the game itself") {
  Rng rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    MicroInstance inst = random_micro_instance(rng());
    double game_value = success_probability(inst.advice, inst.strat, inst.game,
                                            inst.ensemble, inst.layout);
    double k1 = run_alternating(inst.advice, inst.strat, inst.game, inst.ensemble,
                                inst.layout, 1)
                    .ensemble_value;
    CHECK(std::abs(k1 - game_value) <= 1e-12);
  }
}

TEST_CASE("owf k=2 exact value matches the spectral closed form") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  StrategyCircuit id = StrategyCircuit::identity();
  AdviceFamily uniform = AdviceFamily::uniform();
  OracleEnsemble e = enumerate_oracles(2, 2);

  double exact = run_alternating(uniform, id, g, e, layout, 2).ensemble_value;
  WeightedSpectrum spec = ensemble_spectrum(uniform, id, g, e, layout);
  CHECK(std::abs(exact - closed_form_winprob(spec, 2)) <= 1e-9);
  // hand value: (1/4)(1^2 + (1/2)^2 + (1/2)^2 + 1^2) = 5/8
  CHECK(std::abs(exact - 0.625) <= 1e-12);
}

TEST_CASE("closed form: empty product and point spectra") {
  WeightedSpectrum spec;
  spec.add(1.0, 0.37);
  CHECK(closed_form_winprob(spec, 0) == 1.0);
  for (int k = 1; k < 6; ++k)
    CHECK(std::abs(closed_form_winprob(spec, k) - std::pow(0.37, k)) <= 1e-15);

  WeightedSpectrum two;
  two.add(0.5, 0.25);
  two.add(0.5, 0.75);
  CHECK(std::abs(closed_form_log_winprob(two, 3) - std::log(closed_form_winprob(two, 3))) <=
        1e-12);
}

TEST_CASE("closed form agrees with projector simulation on random instances") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    MicroInstance inst = random_micro_instance(rng());
    WeightedSpectrum spec =
        ensemble_spectrum(inst.advice, inst.strat, inst.game, inst.ensemble, inst.layout);
    int k = 1 + static_cast<int>(rng() % 6);
    double exact = run_alternating(inst.advice, inst.strat, inst.game, inst.ensemble,
                                   inst.layout, k)
                       .ensemble_value;
    CHECK(std::abs(exact - closed_form_winprob(spec, k)) <= 1e-9);
  }
}

TEST_CASE("conditional sequence: exact rationals, telescoping, constants") {
  WeightedSpectrum spec;
  spec.add(0.5, 0.25);
  spec.add(0.5, 0.75);
  ConditionalSequence seq = conditional_probs(spec, 3);
  REQUIRE(seq.eps.size() == 3);
  CHECK(seq.eps[0] == Frac(1, 2).value());
  CHECK(seq.eps[1] == Frac(5, 8).value());
  CHECK(seq.eps[2] == Frac(7, 10).value());

  // product of the first t terms telescopes to the t-th moment
  double prod = 1.0;
  for (int t = 0; t < 3; ++t) {
    prod *= seq.eps[static_cast<std::size_t>(t)];
    CHECK(std::abs(prod - closed_form_winprob(spec, t + 1)) <= 1e-10);
  }

  WeightedSpectrum point;
  point.add(1.0, 0.6);
  ConditionalSequence flat = conditional_probs(point, 5);
  for (double e : flat.eps) CHECK(std::abs(e - 0.6) <= 1e-15);

  WeightedSpectrum dead;
  dead.add(1.0, 0.0);
  CHECK_THROWS_AS(conditional_probs(dead, 3), ZeroSuccess);
}

TEST_CASE("conditional sequence truncates with a degenerate-tail marker") {
  WeightedSpectrum spec;
  spec.add(1.0, 1e-8);  // moments collapse below the floor quickly
  ConditionalSequence seq = conditional_probs(spec, 8);
  CHECK(seq.degenerate_tail);
  CHECK(seq.eps.size() < 8);
}

TEST_CASE("mw state family at p = 1/2 satisfies all relations") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  StrategyCircuit id = StrategyCircuit::identity();
  OracleTable h(2, 2, {1, 0});
  PovmContext ctx(g, h, id, layout);
  Mat p = game_povm(g, h, id, layout).matrix;
  SpectralData sd = decompose(p, Vec::Unit(2, 0));
  REQUIRE(sd.spaces.size() == 1);
  REQUIRE(std::abs(sd.spaces[0].value - 0.5) <= 1e-12);

  Vec phi = sd.spaces[0].basis.col(0);
  MwStateFamily fam = mw_state_family(ctx, phi, 0.5);
  CHECK(fam.has_w0);
  CHECK(fam.has_w1);
  CHECK(fam.max_residual <= 1e-9);
  CHECK(std::abs(fam.w0.dot(fam.w1)) <= 1e-9);
}

TEST_CASE("mw state family collapses at p = 1 and throws on bad eigenvalues") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  StrategyCircuit id = StrategyCircuit::identity();
  OracleTable constant(2, 2, {0, 0});
  PovmContext ctx(g, constant, id, layout);
  Vec phi = Vec::Unit(2, 1);

  MwStateFamily fam = mw_state_family(ctx, phi, 1.0);
  CHECK(fam.has_w0);
  CHECK_FALSE(fam.has_w1);
  CHECK((fam.w0 - fam.v0).norm() <= 1e-12);
  CHECK(fam.max_residual <= 1e-9);
  CHECK_THROWS_AS(fam.w1_state(), DegenerateEigenvalue);
  CHECK_THROWS_AS(mw_state_family(ctx, phi, 1.5), DegenerateEigenvalue);
}

TEST_CASE("mw state family on random instances") {
  Rng rng(71);
  MicroInstance inst = random_micro_instance(rng());
  OracleTable h = inst.ensemble.table(0);
  PovmContext ctx(inst.game, h, inst.strat, inst.layout);
  Mat p = game_povm(inst.game, h, inst.strat, inst.layout).matrix;
  StartState start = prepare_start_state(inst.advice, inst.layout, h);
  SpectralData sd = decompose(p, start.branches.front().state);
  for (const auto& e : sd.spaces) {
    if (e.value < 1e-6 || e.value > 1.0 - 1e-6) continue;
    MwStateFamily fam = mw_state_family(ctx, Vec(e.basis.col(0)), e.value);
    CHECK(fam.max_residual <= 1e-9);
  }
}

TEST_CASE("trajectory sampling agrees with the exact value at 1e4 samples") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  StrategyCircuit id = StrategyCircuit::identity();
  AdviceFamily uniform = AdviceFamily::uniform();
  OracleEnsemble e = enumerate_oracles(2, 2);
  int k = 3;
  double exact = run_alternating(uniform, id, g, e, layout, k).ensemble_value;

  Rng rng(123);
  std::uniform_int_distribution<i64> pick(0, e.size() - 1);
  const i64 samples = 10000;
  i64 wins = 0;
  for (i64 i = 0; i < samples; ++i) {
    OracleTable h = e.table(pick(rng));
    PovmContext ctx(g, h, id, layout);
    StartState start = prepare_start_state(uniform, layout, h);
    if (alternating_trajectory(ctx, start.vector(), k, rng).won) ++wins;
  }
  double freq = static_cast<double>(wins) / static_cast<double>(samples);
  double sigma = std::sqrt(exact * (1.0 - exact) / static_cast<double>(samples));
  CHECK(std::abs(freq - exact) <= 4.0 * sigma);
}

TEST_CASE("trajectory transcripts renormalize and record outcomes") {
  ToyGame toy(M_PI / 4.0);
  PovmContext ctx(toy.game, toy.h, toy.strat, toy.layout);
  Rng rng(9);
  Vec start = Vec::Unit(2, 0);
  for (int rep = 0; rep < 20; ++rep) {
    AltMeasTranscript t = alternating_trajectory(ctx, start, 4, rng);
    REQUIRE(t.outcomes.size() == 4);
    bool all_zero = true;
    for (int b : t.outcomes) {
      CHECK((b == 0 || b == 1));
      if (b != 0) all_zero = false;
    }
    CHECK(t.won == all_zero);
    CHECK(std::abs(std::sqrt(t.post.sq_norm()) - 1.0) <= 1e-9);
  }
}

TEST_CASE("run_alternating in trajectory mode records realized outcomes") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  AltMeasRun run = run_alternating(AdviceFamily::uniform(), StrategyCircuit::identity(), g,
                                   enumerate_oracles(2, 2), layout, 3,
                                   AltMeasMode::Trajectory, 77);
  REQUIRE(run.transcripts.size() == 4);
  CHECK(run.ensemble_value >= 0.0);
  CHECK(run.ensemble_value <= 1.0);
  for (const auto& t : run.transcripts) {
    CHECK(t.outcomes.size() == 3);
    CHECK(t.win_probability == (t.won ? 1.0 : 0.0));
  }
  // seeded: two runs produce the same outcomes
  AltMeasRun again = run_alternating(AdviceFamily::uniform(), StrategyCircuit::identity(),
                                     g, enumerate_oracles(2, 2), layout, 3,
                                     AltMeasMode::Trajectory, 77);
  for (std::size_t i = 0; i < run.transcripts.size(); ++i)
    CHECK(run.transcripts[i].outcomes == again.transcripts[i].outcomes);
}

TEST_CASE("exact mode rejects out-of-range round counts") {
  ToyGame toy(M_PI / 3.0);
  PovmContext ctx(toy.game, toy.h, toy.strat, toy.layout);
  Vec start = Vec::Unit(2, 0);
  CHECK_THROWS_AS(alternating_exact(ctx, start, 65), ConfigError);
  CHECK_THROWS_AS(
      run_alternating(AdviceFamily::uniform(), toy.strat, toy.game,
                      enumerate_oracles(1, 1), toy.layout, 0),
      ConfigError);
}

TEST_CASE("jensen consistency on the micro suite") {
  Rng rng(83);
  for (int trial = 0; trial < 5; ++trial) {
    MicroInstance inst = random_micro_instance(rng());
    for (auto& row : check_jensen_step(inst, 8, 1e-12)) CHECK(row.pass);
  }
}
