#include <catch2/catch_amalgamated.hpp>

#include "nuqrom/microsuite.hpp"
#include "nuqrom/separation.hpp"

using namespace nuqrom;

namespace {

// Independent per-codeword match counter for cross-checking good_set.
i64 brute_good_count(const ListRecoveryInstance& inst) {
  i64 count = 0;
  for (const auto& w : inst.code.codewords) {
    i64 matches = 0;
    for (i64 i = 0; i < inst.code.n; ++i)
      for (int c : inst.lists[static_cast<std::size_t>(i)])
        if (c == w[static_cast<std::size_t>(i)]) {
          ++matches;
          break;
        }
    if (static_cast<double>(matches) >= (1.0 - inst.zeta) * static_cast<double>(inst.code.n))
      ++count;
  }
  return count;
}

YzCode random_code(Rng& rng, i64 n, i64 sigma) {
  YzCode code;
  code.n = n;
  code.alphabet = sigma;
  i64 total = code.word_space();
  std::uniform_int_distribution<int> bit(0, 1);
  do {
    code.codewords.clear();
    for (i64 w = 0; w < total; ++w)
      if (bit(rng)) code.codewords.push_back(code.decode(w));
  } while (code.codewords.empty());
  return code;
}

}  // namespace

TEST_CASE("good set on the worked toy instances") {
  YzCode code;
  code.n = 2;
  code.alphabet = 2;
  code.codewords = {{0, 0}, {1, 1}};

  ListRecoveryInstance inst{code, {{0}, {0}}, 0.0, 1};
  GoodSet good = good_set(inst);
  CHECK(good.count == 1);
  CHECK(good.codewords[0] == std::vector<int>{0, 0});

  ListRecoveryInstance full{code, {{0, 1}, {0, 1}}, 0.0, 2};
  CHECK(good_set(full).count == 2);

  ListRecoveryInstance loose{code, {{0}, {0}}, 1.0, 1};
  CHECK(good_set(loose).count == 2);  // zero matches required
}

TEST_CASE("good set matches the brute-force counter on random toy codes") {
  Rng rng(5);
  int done = 0;
  while (done < 12) {
    i64 n = 2 + static_cast<i64>(rng() % 2);
    i64 sigma = 2 + static_cast<i64>(rng() % 2);
    YzCode code = random_code(rng, n, sigma);
    ListRecoveryInstance inst;
    inst.code = code;
    inst.zeta = static_cast<double>(rng() % 5) / 4.0;
    inst.ell = sigma;
    for (i64 i = 0; i < n; ++i) {
      std::vector<int> list;
      for (int c = 0; c < sigma; ++c)
        if (rng() % 2) list.push_back(c);
      inst.lists.push_back(list);
    }
    CHECK(good_set(inst).count == brute_good_count(inst));
    ++done;
  }
}

TEST_CASE("counting bound arithmetic") {
  CHECK(counting_bound(1, 2, 0.5) == 0.75);  // 1/4 + 1/2
  CHECK(counting_bound(3, 2, 0.0) == 1.0);   // clamps
  CHECK(counting_bound(0, 20, 1.0) == std::pow(2.0, -20.0));
  CHECK(counting_bound(0, 0, 0.0) == 1.0);
}

TEST_CASE("coverage: worked instances, exact and greedy") {
  CoverageInstance cov;
  cov.weights = {0.25, 0.25, 0.25, 0.25};
  cov.win = {{1, 0}, {1, 0}, {0, 1}, {0, 1}};

  CoverageResult s0 = optimal_classical_advice(cov, 0, CoverageMethod::Exact);
  CHECK(s0.value == 0.5);
  CHECK(s0.chosen.size() == 1);

  CoverageResult s1 = optimal_classical_advice(cov, 1, CoverageMethod::Exact);
  CHECK(s1.value == 1.0);
  CHECK(s1.chosen.size() == 2);

  CoverageInstance single;
  single.weights = {1.0};
  single.win = {{0.3, 0.9, 0.1}};
  for (int s = 0; s <= 2; ++s)
    CHECK(optimal_classical_advice(single, s, CoverageMethod::Exact).value == 0.9);

  CoverageResult g0 = optimal_classical_advice(cov, 0, CoverageMethod::Greedy);
  CHECK(g0.value == 0.5);
  CoverageResult g1 = optimal_classical_advice(cov, 1, CoverageMethod::Greedy);
  CHECK(g1.value == 1.0);
}

TEST_CASE("greedy coverage keeps the (1 - 1/e) guarantee on random instances") {
  Rng rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double ratio = 1.0 - 1.0 / std::exp(1.0);
  for (int trial = 0; trial < 40; ++trial) {
    CoverageInstance cov;
    int oracles = 2 + static_cast<int>(rng() % 5);
    int maps = 2 + static_cast<int>(rng() % 5);
    double total = 0.0;
    for (int h = 0; h < oracles; ++h) {
      cov.weights.push_back(unif(rng) + 0.01);
      total += cov.weights.back();
      std::vector<double> row;
      for (int m = 0; m < maps; ++m) row.push_back(unif(rng));
      cov.win.push_back(row);
    }
    for (double& w : cov.weights) w /= total;
    int s = static_cast<int>(rng() % 3);
    CoverageResult exact = optimal_classical_advice(cov, s, CoverageMethod::Exact);
    CoverageResult greedy = optimal_classical_advice(cov, s, CoverageMethod::Greedy);
    CHECK(greedy.value >= ratio * exact.value - 1e-12);
    CHECK(greedy.value <= exact.value + 1e-12);
  }
}

TEST_CASE("exact coverage enforces its subset cap") {
  CoverageInstance cov;
  cov.weights.assign(4, 0.25);
  cov.win.assign(4, std::vector<double>(40, 0.1));
  CHECK_THROWS_AS(optimal_classical_advice(cov, 4, CoverageMethod::Exact, 10), CapExceeded);
  CHECK_NOTHROW(optimal_classical_advice(cov, 4, CoverageMethod::Greedy, 10));
}

TEST_CASE("quantum vs classical report on the owf example") {
  GameSpec g = owf_game(2, 2);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  SeparationRow row = quantum_vs_classical_report(g, StrategyCircuit::identity(),
                                                  enumerate_oracles(2, 2), layout, 1);
  CHECK(std::abs(row.quantum_value - 0.75) <= 1e-12);
  CHECK(std::abs(row.classical_value - 0.75) <= 1e-12);
  CHECK(std::abs(row.gap) <= 1e-12);

  RegisterLayout wrong({{"ans", 2}}, {"ans"}, {}, "ans");
  CHECK_THROWS_AS(quantum_vs_classical_report(g, StrategyCircuit::identity(),
                                              enumerate_oracles(2, 2), wrong, 2),
                  DimensionMismatch);
}

TEST_CASE("single-oracle ensembles have zero gap") {
  GameSpec g = owf_game(2, 1);
  RegisterLayout layout({{"ans", 2}}, {"ans"}, {}, "ans");
  SeparationRow row = quantum_vs_classical_report(g, StrategyCircuit::identity(),
                                                  enumerate_oracles(2, 1), layout, 1);
  CHECK(std::abs(row.gap) <= 1e-12);
  CHECK(std::abs(row.quantum_value - 1.0) <= 1e-12);
}

TEST_CASE("quantum optimum dominates the classical coverage optimum") {
  Rng rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    MicroInstance inst = random_micro_instance(rng());
    i64 ds = inst.layout.advice_dim();
    if ((ds & (ds - 1)) != 0) continue;  // report requires a power-of-two register
    int s = 0;
    while ((i64{1} << s) < ds) ++s;
    SeparationRow row =
        quantum_vs_classical_report(inst.game, inst.strat, inst.ensemble, inst.layout, s);
    CHECK(row.gap >= -1e-9);
  }
}

TEST_CASE("fixed-point coverage stays below the counting bound on micro yz codes") {
  // the Case-1/Case-2 split: conditioned on any fixing of oracle points, a
  // T=0 adversary peaking per challenge cannot beat |Good|/2^n + 2^{-zeta n}
  Rng rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    YzCode code = random_code(rng, 2, 2);
    GameSpec g = yz_game(code);
    OracleEnsemble e = enumerate_oracles(g.oracle_domain, g.oracle_range);
    for (const auto& fixing : enumerate_fixings(g.oracle_domain, g.oracle_range, 2, 1000)) {
      // conditioned win of the per-challenge best answer
      double accept = 0.0;
      std::vector<double> best_by_challenge(static_cast<std::size_t>(g.challenge_count), 0.0);
      std::vector<std::vector<double>> win_by_ans(
          static_cast<std::size_t>(g.challenge_count),
          std::vector<double>(static_cast<std::size_t>(g.answer_count), 0.0));
      e.for_each([&](i64, const OracleTable& h, double w) {
        if (!fixing.accepts(h)) return;
        accept += w;
        for (i64 y = 0; y < g.coin_count; ++y)
          for (i64 a = 0; a < g.answer_count; ++a)
            if (evaluate(g, h, y, a))
              win_by_ans[static_cast<std::size_t>(y)][static_cast<std::size_t>(a)] += w;
      });
      if (accept <= 0.0) continue;
      double value = 0.0;
      for (i64 y = 0; y < g.challenge_count; ++y) {
        double best = 0.0;
        for (double v : win_by_ans[static_cast<std::size_t>(y)]) best = std::max(best, v);
        value += best / accept;
      }
      value /= static_cast<double>(g.challenge_count);

      // lists = the symbols fixed per coordinate
      for (double zeta : {0.0, 0.5, 1.0}) {
        ListRecoveryInstance inst;
        inst.code = code;
        inst.zeta = zeta;
        inst.ell = code.alphabet;
        inst.lists.assign(static_cast<std::size_t>(code.n), {});
        for (auto [x, v] : fixing.constraints)
          inst.lists[static_cast<std::size_t>(x / code.alphabet)].push_back(
              static_cast<int>(x % code.alphabet));
        double bound = counting_bound(good_set(inst).count, code.n, zeta);
        CHECK(value <= bound + 1e-12);
      }
    }
  }
}
