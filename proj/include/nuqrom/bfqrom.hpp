#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nuqrom/altmeas.hpp"

namespace nuqrom {

// Up to P (input, output) constraints pinning oracle values.
struct ClassicalFixing {
  std::vector<std::pair<i64, int>> constraints;

  void validate(i64 domain, i64 range) const {
    for (std::size_t i = 0; i < constraints.size(); ++i) {
      auto [x, v] = constraints[i];
      if (x < 0 || x >= domain) throw DimensionMismatch("fixing input out of domain");
      if (v < 0 || v >= range) throw DimensionMismatch("fixing output out of range");
      for (std::size_t j = i + 1; j < constraints.size(); ++j)
        if (constraints[j].first == x) throw DimensionMismatch("duplicate fixing input");
    }
  }

  bool accepts(const OracleTable& h) const {
    for (auto [x, v] : constraints)
      if (h.at(x) != v) return false;
    return true;
  }

  std::size_t points() const { return constraints.size(); }
};

// What a prefix leaves behind for the online stage, per oracle.
struct PrefixResult {
  double accept_prob = 0.0;              // Pr[f^H = 0]
  std::optional<JointState> residual;    // normalized leftover, quantum prefixes
  std::optional<ClassicalFixing> token;  // classical prefixes
  i64 queries_used = 0;
};

// A bit-fixing algorithm: an input-less prefix f that conditions the oracle
// distribution, and an online stage whose exact win probability over the
// coins is evaluated per oracle.
struct BfAlgorithm {
  std::string id;
  std::function<PrefixResult(const OracleTable&)> prefix;
  std::function<double(const PrefixResult&, const OracleTable&)> online_value;
  i64 prefix_budget = 0;
  i64 online_budget = 0;
};

struct BfGameResult {
  double joint = 0.0;        // Pr[f = 0 and win]
  double conditional = 0.0;  // Pr[win | f = 0]
  double accept_rate = 0.0;  // Pr[f = 0]
  i64 max_prefix_queries = 0;
};

// Exact conditioning over the enumerated ensemble; no rejection loop.
inline BfGameResult run_bf_game(const BfAlgorithm& bf, const GameSpec&,
                                const OracleEnsemble& ensemble) {
  BfGameResult out;
  ensemble.for_each([&](i64, const OracleTable& h, double w) {
    PrefixResult pre = bf.prefix(h);
    out.max_prefix_queries = std::max(out.max_prefix_queries, pre.queries_used);
    if (pre.accept_prob <= 0.0) return;
    double win = bf.online_value(pre, h);
    out.joint += w * pre.accept_prob * win;
    out.accept_rate += w * pre.accept_prob;
  });
  if (out.accept_rate <= 0.0) throw NeverAccepts("prefix never outputs 0");
  out.conditional = out.joint / out.accept_rate;
  return out;
}

// The empty prefix: accepts every oracle with probability 1 and no queries.
inline BfAlgorithm vacuous_prefix_with(const std::function<double(const OracleTable&)>& online,
                                       i64 online_budget, std::string id = "vacuous") {
  BfAlgorithm bf;
  bf.id = std::move(id);
  bf.prefix = [](const OracleTable&) {
    PrefixResult r;
    r.accept_prob = 1.0;
    return r;
  };
  bf.online_value = [online](const PrefixResult&, const OracleTable& h) { return online(h); };
  bf.prefix_budget = 0;
  bf.online_budget = online_budget;
  return bf;
}

// f runs the alternating measurement game for k-1 rounds and accepts iff all
// outcomes are 0; the online stage replays the adversary on the leftover
// adversary registers. Only odd k is admitted: at even k the final round is
// the coin-register test, which is not a game execution; those rounds are
// handled through the monotonicity bound instead.
inline BfAlgorithm build_prefix_from_altmeas(const AdviceFamily& adv,
                                             const StrategyCircuit& strat,
                                             const GameSpec& game,
                                             const RegisterLayout& layout, int k) {
  if (k < 1 || k % 2 == 0)
    throw EvenRounds("the alternating-measurement prefix requires odd k > 0");
  if (adv.kind == AdviceFamily::Kind::MaximallyMixedRun)
    throw ConfigError("mixed advice cannot be carried as a single prefix state");

  auto game_ptr = std::make_shared<GameSpec>(game);
  auto strat_ptr = std::make_shared<StrategyCircuit>(strat);
  auto layout_ptr = std::make_shared<RegisterLayout>(layout);
  auto adv_ptr = std::make_shared<AdviceFamily>(adv);

  BfAlgorithm bf;
  bf.id = "altmeas-prefix-k" + std::to_string(k);
  i64 t = strat.query_count();
  bf.prefix_budget = static_cast<i64>(k - 1) * (t + game.t_samp + game.t_verify);
  bf.online_budget = t;

  bf.prefix = [=](const OracleTable& h) {
    PovmContext ctx(*game_ptr, h, *strat_ptr, *layout_ptr);
    StartState start = prepare_start_state(*adv_ptr, *layout_ptr, h);
    AltMeasTranscript tr = alternating_exact(ctx, start.vector(), k - 1);
    PrefixResult res;
    res.accept_prob = tr.win_probability;
    res.queries_used = tr.prefix_queries;
    if (res.accept_prob > 0.0) {
      JointState residual = std::move(tr.post);
      residual.vec /= std::sqrt(res.accept_prob);
      res.residual = std::move(residual);
    }
    return res;
  };
  bf.online_value = [=](const PrefixResult& pre, const OracleTable& h) {
    PovmContext ctx(*game_ptr, h, *strat_ptr, *layout_ptr);
    // After an even number of rounds the leftover factors as |1_R> (x) tau[A].
    Vec tau = contract_uniform_coin(*pre.residual);
    double n2 = tau.squaredNorm();
    if (n2 <= 0.0) return 0.0;
    return ctx.quadratic_form(tau) / n2;
  };
  return bf;
}

// Classical prefix: accept iff the oracle matches the fixing; the token is
// handed to a deterministic challenge -> answer response.
inline BfAlgorithm bf_from_fixing(const GameSpec& game, const ClassicalFixing& fixing,
                                  const std::function<i64(const ClassicalFixing&, i64)>& response,
                                  std::string id) {
  auto game_ptr = std::make_shared<GameSpec>(game);
  BfAlgorithm bf;
  bf.id = std::move(id);
  bf.prefix_budget = static_cast<i64>(fixing.points());
  bf.online_budget = 0;
  bf.prefix = [fixing](const OracleTable& h) {
    PrefixResult r;
    r.accept_prob = fixing.accepts(h) ? 1.0 : 0.0;
    r.token = fixing;
    r.queries_used = static_cast<i64>(fixing.points());
    return r;
  };
  bf.online_value = [game_ptr, response](const PrefixResult& pre, const OracleTable& h) {
    i64 wins = 0;
    for (i64 r = 0; r < game_ptr->coin_count; ++r) {
      i64 ch = sample_challenge(*game_ptr, h, r);
      if (evaluate(*game_ptr, h, r, response(*pre.token, ch))) ++wins;
    }
    return static_cast<double>(wins) / static_cast<double>(game_ptr->coin_count);
  };
  return bf;
}

// Per-challenge best deterministic answer against the conditioned ensemble.
// Exact for T = 0 online stages: the objective is additive over challenges.
inline BfAlgorithm bf_from_fixing_best_response(const GameSpec& game,
                                                const OracleEnsemble& ensemble,
                                                const ClassicalFixing& fixing,
                                                std::string id) {
  std::vector<std::vector<double>> gain(
      static_cast<std::size_t>(game.challenge_count),
      std::vector<double>(static_cast<std::size_t>(game.answer_count), 0.0));
  ensemble.for_each([&](i64, const OracleTable& h, double w) {
    if (!fixing.accepts(h)) return;
    for (i64 r = 0; r < game.coin_count; ++r) {
      i64 ch = sample_challenge(game, h, r);
      for (i64 a = 0; a < game.answer_count; ++a)
        if (evaluate(game, h, r, a))
          gain[static_cast<std::size_t>(ch)][static_cast<std::size_t>(a)] += w;
    }
  });
  std::vector<i64> best(static_cast<std::size_t>(game.challenge_count), 0);
  for (i64 ch = 0; ch < game.challenge_count; ++ch) {
    const auto& row = gain[static_cast<std::size_t>(ch)];
    best[static_cast<std::size_t>(ch)] =
        std::max_element(row.begin(), row.end()) - row.begin();
  }
  return bf_from_fixing(
      game, fixing, [best](const ClassicalFixing&, i64 ch) { return best[static_cast<std::size_t>(ch)]; },
      std::move(id));
}

// All fixings with at most max_points constraints (the empty fixing
// included), capped by total count.
inline std::vector<ClassicalFixing> enumerate_fixings(i64 domain, i64 range, int max_points,
                                                      i64 cap = 100000) {
  std::vector<ClassicalFixing> out;
  out.push_back({});
  std::vector<std::pair<i64, int>> current;
  std::function<void(i64, int)> rec = [&](i64 start, int remaining) {
    if (remaining == 0) return;
    for (i64 x = start; x < domain; ++x) {
      for (int v = 0; v < range; ++v) {
        current.emplace_back(x, v);
        out.push_back({current});
        if (static_cast<i64>(out.size()) > cap)
          throw CapExceeded("fixing family exceeds the enumeration cap");
        rec(x + 1, remaining - 1);
        current.pop_back();
      }
    }
  };
  rec(0, max_points);
  return out;
}

struct NuEstimateRow {
  std::string id;
  double joint = 0.0;
  double conditional = 0.0;
  double accept_rate = 0.0;
};

struct NuEstimate {
  double best_joint = 0.0;
  double best_conditional = 0.0;
  std::vector<NuEstimateRow> rows;
};

// Lower-bound estimate of nu(P, T): a max over a finite family of bit-fixing
// algorithms. Both the joint and conditional semantics are reported.
inline NuEstimate estimate_nu(const GameSpec& game, const OracleEnsemble& ensemble,
                              const std::vector<BfAlgorithm>& family) {
  NuEstimate est;
  for (const auto& bf : family) {
    BfGameResult res;
    try {
      res = run_bf_game(bf, game, ensemble);
    } catch (const NeverAccepts&) {
      continue;
    }
    est.rows.push_back({bf.id, res.joint, res.conditional, res.accept_rate});
    est.best_joint = std::max(est.best_joint, res.joint);
    est.best_conditional = std::max(est.best_conditional, res.conditional);
  }
  return est;
}

}  // namespace nuqrom
