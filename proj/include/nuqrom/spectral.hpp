#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "nuqrom/adversary.hpp"
#include "nuqrom/game.hpp"
#include "nuqrom/linalg.hpp"

namespace nuqrom {

inline constexpr double kEigenMergeTol = 1e-9;

// Diagonal projector onto the answers that Verify accepts for coin r,
// tensored with identity on the remaining registers.
struct WinProjector {
  i64 coin = 0;
  std::vector<char> answer_wins;  // indexed by answer value

  Eigen::ArrayXd full_diag(const RegisterLayout& layout) const {
    Eigen::ArrayXd d(layout.dim());
    for (i64 i = 0; i < layout.dim(); ++i)
      d[i] = answer_wins[static_cast<std::size_t>(layout.answer_of(i))] ? 1.0 : 0.0;
    return d;
  }

  Mat matrix(const RegisterLayout& layout) const {
    return full_diag(layout).cast<cxd>().matrix().asDiagonal();
  }
};

inline WinProjector win_projector(const GameSpec& game, const OracleTable& h, i64 r,
                                  const RegisterLayout& layout) {
  if (layout.answer_dim() != game.answer_count)
    throw DimensionMismatch("answer register dimension != answer space");
  WinProjector v;
  v.coin = r;
  v.answer_wins.resize(static_cast<std::size_t>(game.answer_count));
  for (i64 a = 0; a < game.answer_count; ++a)
    v.answer_wins[static_cast<std::size_t>(a)] = evaluate(game, h, r, a) ? 1 : 0;
  return v;
}

// Matrix-free application of the conjugated win projectors for one oracle.
// Tabulates challenges and the win predicate once per (game, H).
class PovmContext {
public:
  PovmContext(const GameSpec& game, const OracleTable& h, const StrategyCircuit& strat,
              const RegisterLayout& layout)
      : game_(&game), h_(&h), strat_(&strat), layout_(&layout),
        coins_(make_coin_table(game, h)) {
    if (layout.answer_dim() != game.answer_count)
      throw DimensionMismatch("answer register dimension != answer space");
  }

  const GameSpec& game() const { return *game_; }
  const OracleTable& oracle() const { return *h_; }
  const RegisterLayout& layout() const { return *layout_; }
  const CoinTable& coins() const { return coins_; }
  i64 coin_count() const { return game_->coin_count; }

  i64 challenge_of(i64 r) const { return coins_.challenge[static_cast<std::size_t>(r)]; }

  bool wins(i64 r, i64 ans) const {
    return coins_.win[static_cast<std::size_t>(r)][static_cast<std::size_t>(ans)] != 0;
  }

  Vec apply_win(i64 r, Vec v) const {
    const auto& row = coins_.win[static_cast<std::size_t>(r)];
    for (i64 i = 0; i < v.size(); ++i)
      if (!row[static_cast<std::size_t>(layout_->answer_of(i))]) v[i] = 0.0;
    return v;
  }

  // P_r v = U† V_r U v for the strategy keyed by the sampled challenge.
  Vec apply_p_r(i64 r, const Vec& v) const {
    i64 ch = challenge_of(r);
    Vec u = apply_strategy(*strat_, ch, *h_, *layout_, v);
    u = apply_win(r, std::move(u));
    return apply_strategy_adjoint(*strat_, ch, *h_, *layout_, u);
  }

  // P_H v = (1/|R|) sum_r P_r v.
  Vec apply_povm(const Vec& v) const {
    Vec acc = Vec::Zero(v.size());
    for (i64 r = 0; r < coin_count(); ++r) acc += apply_p_r(r, v);
    return acc / static_cast<double>(coin_count());
  }

  double quadratic_form(const Vec& v) const {
    double acc = 0.0;
    for (i64 r = 0; r < coin_count(); ++r) {
      i64 ch = challenge_of(r);
      Vec u = apply_strategy(*strat_, ch, *h_, *layout_, v);
      u = apply_win(r, std::move(u));
      acc += u.squaredNorm();
    }
    return acc / static_cast<double>(coin_count());
  }

  // Oracle uses of one coherent controlled-projection round:
  // the strategy and its inverse (with Samp run to address them), plus Verify.
  i64 cp_query_cost() const {
    return 2 * (strat_->query_count() + game_->t_samp) + game_->t_verify;
  }

private:
  const GameSpec* game_;
  const OracleTable* h_;
  const StrategyCircuit* strat_;
  const RegisterLayout* layout_;
  CoinTable coins_;
};

struct GamePovm {
  Mat matrix;
  std::optional<std::vector<Mat>> per_coin;
};

inline GamePovm game_povm(const GameSpec& game, const OracleTable& h,
                          const StrategyCircuit& strat, const RegisterLayout& layout,
                          bool keep_per_coin = false) {
  PovmContext ctx(game, h, strat, layout);
  i64 d = layout.dim();
  GamePovm out;
  out.matrix = Mat::Zero(d, d);
  if (keep_per_coin) out.per_coin.emplace();
  for (i64 r = 0; r < ctx.coin_count(); ++r) {
    Mat pr(d, d);
    for (i64 j = 0; j < d; ++j) {
      Vec e = Vec::Zero(d);
      e[j] = 1.0;
      pr.col(j) = ctx.apply_p_r(r, e);
    }
    out.matrix += pr;
    if (keep_per_coin) out.per_coin->push_back(std::move(pr));
  }
  out.matrix /= static_cast<double>(ctx.coin_count());
  return out;
}

struct Eigenspace {
  double value = 0.0;   // clamped to [0, 1]
  Mat basis;            // orthonormal columns spanning the space
  double overlap = 0.0; // squared projection of the start state
};

// Eigenvalues sorted descending, merged into eigenspaces at kEigenMergeTol.
struct SpectralData {
  std::vector<Eigenspace> spaces;

  double overlap_sum() const {
    double s = 0.0;
    for (const auto& e : spaces) s += e.overlap;
    return s;
  }

  Mat reconstruct() const {
    if (spaces.empty()) return Mat();
    i64 d = spaces.front().basis.rows();
    Mat p = Mat::Zero(d, d);
    for (const auto& e : spaces) p += e.value * (e.basis * e.basis.adjoint());
    return p;
  }
};

inline SpectralData decompose(const Mat& povm, const Vec& start,
                              double merge_tol = kEigenMergeTol) {
  if (povm.rows() != start.size())
    throw DimensionMismatch("start vector does not match the operator");
  if (std::abs(start.norm() - 1.0) > 1e-8)
    throw DimensionMismatch("start state must have unit norm");
  Eigen::SelfAdjointEigenSolver<Mat> solver(povm);
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("Hermitian eigendecomposition did not converge");

  // Ascending from Eigen; regroup descending with clamped values.
  const auto& values = solver.eigenvalues();
  const Mat& vectors = solver.eigenvectors();
  i64 d = values.size();

  SpectralData out;
  i64 i = d - 1;
  while (i >= 0) {
    i64 j = i;
    while (j - 1 >= 0 && std::abs(values[j - 1] - values[i]) <= merge_tol) --j;
    Eigenspace space;
    double mean = 0.0;
    for (i64 k = j; k <= i; ++k) mean += values[k];
    mean /= static_cast<double>(i - j + 1);
    space.value = std::clamp(mean, 0.0, 1.0);
    space.basis = vectors.middleCols(j, i - j + 1);
    space.overlap = (space.basis.adjoint() * start).squaredNorm();
    out.spaces.push_back(std::move(space));
    i = j - 1;
  }
  return out;
}

// Flattened (weight, eigenvalue) pairs across an ensemble: c_i sums to 1
// whenever it is built from unit start states and ensemble weights.
struct WeightedSpectrum {
  std::vector<double> weights;
  std::vector<double> values;

  void add(double c, double p) {
    weights.push_back(c);
    values.push_back(p);
  }

  double moment(int k) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
      s += weights[i] * std::pow(values[i], k);
    return s;
  }
};

inline double success_probability(const AdviceFamily& adv, const StrategyCircuit& strat,
                                  const GameSpec& game, const OracleEnsemble& ensemble,
                                  const RegisterLayout& layout) {
  double total = 0.0;
  ensemble.for_each([&](i64, const OracleTable& h, double w) {
    PovmContext ctx(game, h, strat, layout);
    StartState start = prepare_start_state(adv, layout, h);
    for (const auto& b : start.branches)
      total += w * b.weight * ctx.quadratic_form(b.state);
  });
  return total;
}

// Per-(oracle, branch, eigenspace) weights |alpha|^2 against the game POVM.
inline WeightedSpectrum ensemble_spectrum(const AdviceFamily& adv,
                                          const StrategyCircuit& strat, const GameSpec& game,
                                          const OracleEnsemble& ensemble,
                                          const RegisterLayout& layout) {
  WeightedSpectrum spec;
  ensemble.for_each([&](i64, const OracleTable& h, double w) {
    Mat p = game_povm(game, h, strat, layout).matrix;
    StartState start = prepare_start_state(adv, layout, h);
    for (const auto& b : start.branches) {
      SpectralData sd = decompose(p, b.state);
      for (const auto& e : sd.spaces)
        if (e.overlap > 0.0) spec.add(w * b.weight * e.overlap, e.value);
    }
  });
  return spec;
}

// Q[a, b] = <a, 0_work| P_H |b, 0_work> over advice basis states; the
// quadratic form of any advice vector through Q equals the full-space form
// with the work registers pinned to |0>.
inline Mat compressed_operator(const Mat& povm, const RegisterLayout& layout) {
  if (povm.rows() != layout.dim())
    throw DimensionMismatch("operator does not match the layout");
  i64 ds = layout.advice_dim();
  Mat q(ds, ds);
  for (i64 a = 0; a < ds; ++a)
    for (i64 b = 0; b < ds; ++b)
      q(a, b) = povm(layout.embed_advice(a), layout.embed_advice(b));
  return q;
}

struct OptimalAdvice {
  Vec state;
  double value = 0.0;
};

inline OptimalAdvice optimal_advice(const Mat& q) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(q);
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("Hermitian eigendecomposition did not converge");
  OptimalAdvice out;
  i64 top = q.rows() - 1;
  out.state = solver.eigenvectors().col(top);
  out.value = solver.eigenvalues()[top];
  return out;
}

// E_H[lambda_max(Q_H)]: the best explicit advice family for this strategy.
inline double optimal_nonuniform_value(const GameSpec& game, const StrategyCircuit& strat,
                                       const OracleEnsemble& ensemble,
                                       const RegisterLayout& layout) {
  double total = 0.0;
  ensemble.for_each([&](i64, const OracleTable& h, double w) {
    Mat p = game_povm(game, h, strat, layout).matrix;
    total += w * optimal_advice(compressed_operator(p, layout)).value;
  });
  return total;
}

// Per-eigenspace rows for CSV export: (oracle index, eigenvalue, overlap).
struct SpectralRow {
  i64 oracle_index = 0;
  double eigenvalue = 0.0;
  double overlap = 0.0;
};

inline std::vector<SpectralRow> spectral_rows(const AdviceFamily& adv,
                                              const StrategyCircuit& strat,
                                              const GameSpec& game,
                                              const OracleEnsemble& ensemble,
                                              const RegisterLayout& layout) {
  std::vector<SpectralRow> rows;
  ensemble.for_each([&](i64 idx, const OracleTable& h, double) {
    Mat p = game_povm(game, h, strat, layout).matrix;
    StartState start = prepare_start_state(adv, layout, h);
    for (const auto& b : start.branches) {
      SpectralData sd = decompose(p, b.state);
      for (const auto& e : sd.spaces)
        rows.push_back({idx, e.value, b.weight * e.overlap});
    }
  });
  return rows;
}

}  // namespace nuqrom
