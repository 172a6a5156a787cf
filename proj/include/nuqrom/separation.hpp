#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nuqrom/bfqrom.hpp"
#include "nuqrom/game.hpp"
#include "nuqrom/spectral.hpp"

namespace nuqrom {

// A code together with per-coordinate candidate lists S_1..S_n and the
// mismatch fraction zeta of the list-recoverability definition.
struct ListRecoveryInstance {
  YzCode code;
  std::vector<std::vector<int>> lists;  // lists[i] subseteq [0, |Sigma|)
  double zeta = 0.0;
  i64 ell = 0;  // declared per-coordinate list-size bound

  void validate() const {
    code.validate();
    if (static_cast<i64>(lists.size()) != code.n)
      throw DimensionMismatch("need one candidate list per coordinate");
    for (const auto& l : lists) {
      if (ell > 0 && static_cast<i64>(l.size()) > ell)
        throw DimensionMismatch("candidate list larger than the declared bound");
      for (int c : l)
        if (c < 0 || c >= code.alphabet)
          throw DimensionMismatch("candidate symbol out of range");
    }
    if (zeta < 0.0 || zeta > 1.0) throw DimensionMismatch("zeta must lie in [0, 1]");
  }
};

struct GoodSet {
  std::vector<std::vector<int>> codewords;
  i64 count = 0;
};

// Good = { x in C : #{ i : x_i in S_i } >= (1 - zeta) n }, by enumeration.
inline GoodSet good_set(const ListRecoveryInstance& inst) {
  inst.validate();
  GoodSet out;
  double need = (1.0 - inst.zeta) * static_cast<double>(inst.code.n);
  for (const auto& w : inst.code.codewords) {
    i64 matches = 0;
    for (i64 i = 0; i < inst.code.n; ++i) {
      const auto& l = inst.lists[static_cast<std::size_t>(i)];
      if (std::find(l.begin(), l.end(), w[static_cast<std::size_t>(i)]) != l.end())
        ++matches;
    }
    if (static_cast<double>(matches) >= need) out.codewords.push_back(w);
  }
  out.count = static_cast<i64>(out.codewords.size());
  return out;
}

// L / 2^n + 2^{-zeta n}, clamped to 1.
inline double counting_bound(i64 l_count, i64 n, double zeta) {
  double v = static_cast<double>(l_count) * std::pow(2.0, -static_cast<double>(n)) +
             std::pow(2.0, -zeta * static_cast<double>(n));
  return std::min(1.0, v);
}

// Choosing at most 2^S response maps; each oracle contributes its best
// chosen map. This is the exact semantics of S-bit advice at T = 0.
struct CoverageInstance {
  std::vector<double> weights;           // per oracle
  std::vector<std::vector<double>> win;  // win[oracle][map] in [0, 1]

  i64 map_count() const { return win.empty() ? 0 : static_cast<i64>(win.front().size()); }

  void validate() const {
    if (weights.size() != win.size())
      throw DimensionMismatch("coverage instance needs one weight per oracle");
    for (const auto& row : win) {
      if (static_cast<i64>(row.size()) != map_count())
        throw DimensionMismatch("ragged win matrix");
      for (double v : row)
        if (v < -1e-12 || v > 1.0 + 1e-12)
          throw DimensionMismatch("win entries must lie in [0, 1]");
    }
  }

  double value_of(const std::vector<int>& chosen) const {
    double total = 0.0;
    for (std::size_t h = 0; h < win.size(); ++h) {
      double best = 0.0;
      for (int m : chosen) best = std::max(best, win[h][static_cast<std::size_t>(m)]);
      total += weights[h] * best;
    }
    return total;
  }
};

enum class CoverageMethod { Exact, Greedy };

struct CoverageResult {
  std::vector<int> chosen;
  double value = 0.0;
};

namespace detail {

inline double binomial(i64 n, i64 k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (i64 i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace detail

inline CoverageResult optimal_classical_advice(const CoverageInstance& cov, int s,
                                               CoverageMethod method,
                                               i64 subset_cap = 5'000'000) {
  cov.validate();
  i64 maps = cov.map_count();
  if (maps == 0) throw DimensionMismatch("coverage instance has no response maps");
  i64 budget = std::min<i64>(maps, i64{1} << s);

  CoverageResult best;
  if (method == CoverageMethod::Exact) {
    if (detail::binomial(maps, budget) > static_cast<double>(subset_cap))
      throw CapExceeded("exact subset search exceeds the configured cap");
    // The objective is monotone, so size-exactly-budget subsets suffice.
    std::vector<int> idx(static_cast<std::size_t>(budget));
    for (i64 i = 0; i < budget; ++i) idx[static_cast<std::size_t>(i)] = static_cast<int>(i);
    while (true) {
      double v = cov.value_of(idx);
      if (v > best.value || best.chosen.empty()) {
        best.value = v;
        best.chosen = idx;
      }
      // next combination
      i64 i = budget - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == maps - budget + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (i64 j = i + 1; j < budget; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
  }

  // Greedy max coverage: add the map with the largest marginal gain.
  std::vector<double> current(cov.weights.size(), 0.0);
  std::vector<char> used(static_cast<std::size_t>(maps), 0);
  for (i64 pick = 0; pick < budget; ++pick) {
    int arg = -1;
    double gain_best = -1.0;
    for (i64 m = 0; m < maps; ++m) {
      if (used[static_cast<std::size_t>(m)]) continue;
      double gain = 0.0;
      for (std::size_t h = 0; h < cov.win.size(); ++h)
        gain += cov.weights[h] *
                std::max(0.0, cov.win[h][static_cast<std::size_t>(m)] - current[h]);
      if (gain > gain_best) {
        gain_best = gain;
        arg = static_cast<int>(m);
      }
    }
    if (arg < 0) break;
    used[static_cast<std::size_t>(arg)] = 1;
    best.chosen.push_back(arg);
    for (std::size_t h = 0; h < cov.win.size(); ++h)
      current[h] = std::max(current[h], cov.win[h][static_cast<std::size_t>(arg)]);
  }
  best.value = cov.value_of(best.chosen);
  return best;
}

// Coverage instance induced by a strategy: the response maps are the advice
// basis states and win[H][a] is the diagonal of the compressed operator.
inline CoverageInstance coverage_from_strategy(const GameSpec& game,
                                               const StrategyCircuit& strat,
                                               const OracleEnsemble& ensemble,
                                               const RegisterLayout& layout) {
  CoverageInstance cov;
  ensemble.for_each([&](i64, const OracleTable& h, double w) {
    PovmContext ctx(game, h, strat, layout);
    std::vector<double> row(static_cast<std::size_t>(layout.advice_dim()), 0.0);
    for (i64 a = 0; a < layout.advice_dim(); ++a) {
      Vec basis = Vec::Zero(layout.dim());
      basis[layout.embed_advice(a)] = 1.0;
      row[static_cast<std::size_t>(a)] = ctx.quadratic_form(basis);
    }
    cov.weights.push_back(w);
    cov.win.push_back(std::move(row));
  });
  return cov;
}

struct SeparationRow {
  int s = 0;
  double quantum_value = 0.0;
  double classical_value = 0.0;
  double gap = 0.0;
};

// Desk-scale contrast between the spectral quantum-advice optimum and the
// max-coverage classical-advice optimum under the same readout layout. The
// asymptotic separation is not reproducible at this scale; the row only
// reports the two optima and their gap.
inline SeparationRow quantum_vs_classical_report(const GameSpec& game,
                                                 const StrategyCircuit& strat,
                                                 const OracleEnsemble& ensemble,
                                                 const RegisterLayout& layout, int s) {
  if (layout.advice_dim() != (i64{1} << s))
    throw DimensionMismatch("layout advice dimension must equal 2^S");
  SeparationRow row;
  row.s = s;
  row.quantum_value = optimal_nonuniform_value(game, strat, ensemble, layout);
  CoverageInstance cov = coverage_from_strategy(game, strat, ensemble, layout);
  row.classical_value = optimal_classical_advice(cov, s, CoverageMethod::Exact).value;
  row.gap = row.quantum_value - row.classical_value;
  return row;
}

}  // namespace nuqrom
