#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nuqrom/altmeas.hpp"
#include "nuqrom/bfqrom.hpp"
#include "nuqrom/spectral.hpp"

namespace nuqrom {

// A self-contained micro-scale configuration: game, exhaustive ensemble,
// layout, strategy and advice, sized so that every expectation is exact.
struct MicroInstance {
  std::string description;
  GameSpec game;
  OracleEnsemble ensemble;
  RegisterLayout layout;
  StrategyCircuit strat;
  AdviceFamily advice;
};

namespace detail {

inline std::uint64_t table_hash(const OracleTable& h) {
  std::string bytes;
  bytes.reserve(h.entries.size());
  for (int v : h.entries) bytes.push_back(static_cast<char>(v));
  return fnv1a64(bytes);
}

inline AdviceFamily random_explicit_advice(std::uint64_t seed, i64 dim) {
  return AdviceFamily::explicit_family([seed, dim](const OracleTable& h) {
    Rng rng(split_seed(seed, table_hash(h)));
    return random_unit_vector(rng, dim);
  });
}

inline StepList random_steps(Rng& rng, const RegisterLayout& layout, int max_calls) {
  StepList steps;
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> gates(1, 2);
  int calls = std::uniform_int_distribution<int>(0, max_calls)(rng);
  int unitaries = gates(rng);
  std::vector<int> kinds;
  for (int i = 0; i < unitaries; ++i) kinds.push_back(0);
  for (int i = 0; i < calls; ++i) kinds.push_back(1);
  std::shuffle(kinds.begin(), kinds.end(), rng);
  for (int kind : kinds) {
    if (kind == 1) {
      steps.push_back(StrategyStep::oracle("qx", "qy"));
      continue;
    }
    // single-register gate, or a two-register gate when small enough
    const auto& subs = layout.subsystems();
    std::uniform_int_distribution<std::size_t> pick(0, subs.size() - 1);
    std::size_t a = pick(rng);
    std::vector<std::string> targets{subs[a].label};
    i64 d = subs[a].dim;
    if (coin(rng) && subs.size() > 1) {
      std::size_t b = pick(rng);
      if (b != a && d * subs[b].dim <= 16) {
        targets.push_back(subs[b].label);
        d *= subs[b].dim;
      }
    }
    steps.push_back(StrategyStep::local(random_unitary(rng, d), targets));
  }
  return steps;
}

}  // namespace detail

// Draws one random micro instance. Every size is held small enough that the
// exhaustive ensemble, dense spectral data and exact alternating runs stay
// well under a second.
inline MicroInstance random_micro_instance(std::uint64_t seed) {
  Rng rng(seed);
  MicroInstance inst;
  std::uniform_int_distribution<int> kind_d(0, 3);
  int kind = kind_d(rng);
  switch (kind) {
    case 0: {
      i64 n = std::uniform_int_distribution<i64>(2, 4)(rng);
      i64 m = std::uniform_int_distribution<i64>(2, 4)(rng);
      while (std::pow(static_cast<double>(m), static_cast<double>(n)) > 256 ||
             n * n * m > 64) {
        m = 2;
        if (n * n * m > 64) n = 3;
      }
      inst.game = owf_game(n, m);
      inst.description = "owf-" + std::to_string(n) + "x" + std::to_string(m);
      break;
    }
    case 1: {
      i64 n = std::uniform_int_distribution<i64>(2, 3)(rng);
      i64 m = std::uniform_int_distribution<i64>(2, 3)(rng);
      inst.game = prg_game(n, m);
      inst.description = "prg-" + std::to_string(n) + "x" + std::to_string(m);
      break;
    }
    case 2: {
      inst.game = salt_game(owf_game(2, 2), 2);
      inst.description = "salted-owf-2x2-k2";
      break;
    }
    default: {
      YzCode code;
      code.n = 2;
      code.alphabet = 2;
      std::uniform_int_distribution<int> bit(0, 1);
      do {
        code.codewords.clear();
        for (int w = 0; w < 4; ++w)
          if (bit(rng)) code.codewords.push_back({w / 2, w % 2});
      } while (code.codewords.empty());
      inst.game = yz_game(code);
      inst.description = "yz-n2-c" + std::to_string(code.codewords.size());
      break;
    }
  }

  inst.ensemble = OracleEnsemble::exhaustive(inst.game.oracle_domain, inst.game.oracle_range);

  std::vector<Subsystem> subs{{"ans", inst.game.answer_count},
                              {"qx", inst.game.oracle_domain},
                              {"qy", inst.game.oracle_range}};
  bool wide_advice = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  std::vector<std::string> advice_labels{"ans"};
  std::vector<std::string> work_labels{"qy"};
  if (wide_advice)
    advice_labels.push_back("qx");
  else
    work_labels.insert(work_labels.begin(), "qx");
  inst.layout = RegisterLayout(subs, advice_labels, work_labels, "ans");

  inst.strat = StrategyCircuit();
  inst.strat.set_default(detail::random_steps(rng, inst.layout, 2));
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 1)
    inst.strat.set_program(0, detail::random_steps(rng, inst.layout, 2));
  inst.strat.validate(inst.layout);

  if (std::uniform_int_distribution<int>(0, 1)(rng) == 1)
    inst.advice = AdviceFamily::uniform();
  else
    inst.advice = detail::random_explicit_advice(rng(), inst.layout.advice_dim());
  return inst;
}

struct CheckRow {
  std::string lemma;
  std::string instance;
  double lhs = 0.0;
  double rhs = 0.0;
  double err = 0.0;
  double tol = 0.0;
  bool pass = false;
};

namespace detail {

inline CheckRow make_row(std::string lemma, std::string instance, double lhs, double rhs,
                         double tol) {
  CheckRow row;
  row.lemma = std::move(lemma);
  row.instance = std::move(instance);
  row.lhs = lhs;
  row.rhs = rhs;
  row.err = std::abs(lhs - rhs);
  row.tol = tol;
  row.pass = row.err <= tol;
  return row;
}

// One-sided rows: pass iff lhs <= rhs + tol.
inline CheckRow make_le_row(std::string lemma, std::string instance, double lhs, double rhs,
                            double tol) {
  CheckRow row;
  row.lemma = std::move(lemma);
  row.instance = std::move(instance);
  row.lhs = lhs;
  row.rhs = rhs;
  row.err = std::max(0.0, lhs - rhs);
  row.tol = tol;
  row.pass = lhs <= rhs + tol;
  return row;
}

}  // namespace detail

// Projector-simulation run vs. the spectral closed form sum c p^k.
inline std::vector<CheckRow> check_moment_identity(const MicroInstance& inst, int k_max,
                                                   double tol) {
  std::vector<CheckRow> rows;
  WeightedSpectrum spec =
      ensemble_spectrum(inst.advice, inst.strat, inst.game, inst.ensemble, inst.layout);
  for (int k = 1; k <= k_max; ++k) {
    double exact = run_alternating(inst.advice, inst.strat, inst.game, inst.ensemble,
                                   inst.layout, k, AltMeasMode::Exact)
                       .ensemble_value;
    double closed = closed_form_winprob(spec, k);
    rows.push_back(detail::make_row("moment-identity-k" + std::to_string(k),
                                    inst.description, exact, closed, tol));
  }
  return rows;
}

// Fidelity between the evolved sub-normalized state and the spectral
// prediction sum alpha p^{k/2} (v0 or w0), per oracle and advice branch.
inline CheckRow check_leftover_law(const MicroInstance& inst, int k, double tol) {
  double worst = 1.0;
  inst.ensemble.for_each([&](i64, const OracleTable& h, double) {
    PovmContext ctx(inst.game, h, inst.strat, inst.layout);
    Mat povm = game_povm(inst.game, h, inst.strat, inst.layout).matrix;
    StartState start = prepare_start_state(inst.advice, inst.layout, h);
    for (const auto& b : start.branches) {
      AltMeasTranscript tr = alternating_exact(ctx, b.state, k);
      if (tr.win_probability < 1e-18) continue;  // all outcomes annihilated
      SpectralData sd = decompose(povm, b.state);
      Vec predicted = Vec::Zero(static_cast<i64>(ctx.coin_count()) * inst.layout.dim());
      for (const auto& e : sd.spaces) {
        Vec u = e.basis * (e.basis.adjoint() * b.state);  // unnormalized projection
        if (k % 2 == 0) {
          predicted += std::pow(e.value, k / 2.0) * make_uniform_joint(ctx.coin_count(), u).vec;
        } else {
          JointState cp0 = cp_project(ctx, make_uniform_joint(ctx.coin_count(), u), 0);
          predicted += std::pow(e.value, (k - 1) / 2.0) * cp0.vec;
        }
      }
      double pn = predicted.norm(), an = tr.post.vec.norm();
      if (pn < 1e-18 || an < 1e-18) continue;
      double fidelity = std::norm(predicted.dot(tr.post.vec)) / (pn * pn * an * an);
      worst = std::min(worst, fidelity);
    }
  });
  CheckRow row;
  row.lemma = "leftover-law-k" + std::to_string(k);
  row.instance = inst.description;
  row.lhs = worst;
  row.rhs = 1.0;
  row.err = std::max(0.0, 1.0 - worst);
  row.tol = tol;
  row.pass = worst >= 1.0 - tol;
  return row;
}

// eps^(t) non-decreasing in t.
inline CheckRow check_conditional_monotonicity(const MicroInstance& inst, int t_max,
                                               double tol) {
  WeightedSpectrum spec =
      ensemble_spectrum(inst.advice, inst.strat, inst.game, inst.ensemble, inst.layout);
  double worst_drop = 0.0;
  bool ok = true;
  try {
    ConditionalSequence seq = conditional_probs(spec, t_max);
    for (std::size_t t = 1; t < seq.eps.size(); ++t)
      worst_drop = std::max(worst_drop, seq.eps[t - 1] - seq.eps[t]);
    ok = worst_drop <= tol;
  } catch (const ZeroSuccess&) {
    // no round-1 success; the sequence is empty and trivially monotone
  }
  CheckRow row;
  row.lemma = "conditional-monotonicity";
  row.instance = inst.description;
  row.lhs = worst_drop;
  row.rhs = 0.0;
  row.err = worst_drop;
  row.tol = tol;
  row.pass = ok;
  return row;
}

// success probability <= (k-th moment)^{1/k}.
inline std::vector<CheckRow> check_jensen_step(const MicroInstance& inst, int k_max,
                                               double tol) {
  std::vector<CheckRow> rows;
  WeightedSpectrum spec =
      ensemble_spectrum(inst.advice, inst.strat, inst.game, inst.ensemble, inst.layout);
  double value =
      success_probability(inst.advice, inst.strat, inst.game, inst.ensemble, inst.layout);
  for (int k = 1; k <= k_max; ++k) {
    double root = std::pow(closed_form_winprob(spec, k), 1.0 / static_cast<double>(k));
    rows.push_back(detail::make_le_row("jensen-step-k" + std::to_string(k),
                                       inst.description, value, root, tol));
  }
  return rows;
}

// run_bf_game on the (k-1)-round prefix equals the k-th conditional.
inline CheckRow check_reduction_equality(const MicroInstance& inst, int k, double tol) {
  WeightedSpectrum spec =
      ensemble_spectrum(inst.advice, inst.strat, inst.game, inst.ensemble, inst.layout);
  CheckRow row;
  row.lemma = "reduction-equality-k" + std::to_string(k);
  row.instance = inst.description;
  row.tol = tol;
  try {
    ConditionalSequence seq = conditional_probs(spec, k);
    if (static_cast<int>(seq.eps.size()) < k || spec.moment(k - 1) < 1e-10) {
      // conditioning probability (numerically) vanished; the conditional is
      // undefined and the normalized leftover state is pure rounding noise
      row.pass = true;
      return row;
    }
    BfAlgorithm bf =
        build_prefix_from_altmeas(inst.advice, inst.strat, inst.game, inst.layout, k);
    BfGameResult res = run_bf_game(bf, inst.game, inst.ensemble);
    row.lhs = res.conditional;
    row.rhs = seq.eps[static_cast<std::size_t>(k - 1)];
    row.err = std::abs(row.lhs - row.rhs);
    row.pass = row.err <= tol;
  } catch (const ZeroSuccess&) {
    row.pass = true;
  } catch (const NeverAccepts&) {
    row.pass = true;
  }
  return row;
}

// Mixture identity for advice guessing: running on the maximally mixed
// advice achieves 2^-S p + (1 - 2^-S) q with q >= 0, hence at least 2^-S p.
inline std::vector<CheckRow> check_advice_guessing(const MicroInstance& inst, int s,
                                                   double tol) {
  std::vector<CheckRow> rows;
  if (s < 1) throw ConfigError("advice guessing needs S >= 1");
  if (inst.layout.advice_dim() != (i64{1} << s))
    throw DimensionMismatch("instance advice dimension != 2^S");
  double ds = static_cast<double>(i64{1} << s);
  AdviceFamily mixed = AdviceFamily::maximally_mixed_run(inst.advice);

  double mixed_value =
      success_probability(mixed, inst.strat, inst.game, inst.ensemble, inst.layout);
  double explicit_value =
      success_probability(inst.advice, inst.strat, inst.game, inst.ensemble, inst.layout);

  // Independent route through the compressed operator: q from the residual
  // density matrix (I/d - 2^-S |sigma><sigma|) / (1 - 2^-S).
  double identity_value = 0.0;
  double min_q = 1.0;
  inst.ensemble.for_each([&](i64, const OracleTable& h, double w) {
    Mat q = compressed_operator(game_povm(inst.game, h, inst.strat, inst.layout).matrix,
                                inst.layout);
    StartState start = prepare_start_state(inst.advice, inst.layout, h);
    Vec sigma(inst.layout.advice_dim());
    for (i64 a = 0; a < inst.layout.advice_dim(); ++a)
      sigma[a] = start.vector()[inst.layout.embed_advice(a)];
    double p = sigma.dot(q * sigma).real();
    double trace = q.trace().real();
    double qq = (trace / ds - p / ds) / (1.0 - 1.0 / ds);
    min_q = std::min(min_q, qq);
    identity_value += w * (p / ds + (1.0 - 1.0 / ds) * qq);
  });

  rows.push_back(detail::make_row("advice-guessing-identity-s" + std::to_string(s),
                                  inst.description, mixed_value, identity_value, tol));
  rows.push_back(detail::make_le_row("advice-guessing-factor-s" + std::to_string(s),
                                     inst.description, explicit_value / ds, mixed_value,
                                     tol));
  rows.push_back(detail::make_le_row("advice-guessing-residual-s" + std::to_string(s),
                                     inst.description, 0.0, min_q, tol));
  return rows;
}

// A micro instance with a power-of-two advice register for the guessing
// checks: OWF over N = M = 2 with S - 1 extra advice qubits.
inline MicroInstance advice_guessing_instance(int s, std::uint64_t seed) {
  MicroInstance inst;
  inst.game = owf_game(2, 2);
  inst.description = "owf-2x2-s" + std::to_string(s);
  inst.ensemble = OracleEnsemble::exhaustive(2, 2);
  std::vector<Subsystem> subs{{"ans", 2}};
  std::vector<std::string> advice{"ans"};
  for (int i = 1; i < s; ++i) {
    subs.push_back({"a" + std::to_string(i), 2});
    advice.push_back("a" + std::to_string(i));
  }
  subs.push_back({"qy", 2});
  inst.layout = RegisterLayout(subs, advice, {"qy"}, "ans");
  Rng rng(seed);
  inst.strat = StrategyCircuit();
  StepList steps;
  steps.push_back(StrategyStep::local(random_unitary(rng, 2), {"ans"}));
  steps.push_back(StrategyStep::oracle("ans", "qy"));
  steps.push_back(StrategyStep::local(random_unitary(rng, 2), {"ans"}));
  inst.strat.set_default(std::move(steps));
  inst.advice = detail::random_explicit_advice(rng(), inst.layout.advice_dim());
  return inst;
}

}  // namespace nuqrom
