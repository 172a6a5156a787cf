#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "nuqrom/spectral.hpp"

namespace nuqrom {

inline constexpr int kMaxExactRounds = 64;
inline constexpr double kDenominatorFloor = 1e-14;

// State over the coin register tensored with the adversary registers,
// indexed r * D + a. Kept sub-normalized during exact evolution so the
// squared norm is the probability of the tracked outcome branch.
struct JointState {
  i64 coin_count = 0;
  i64 inner_dim = 0;
  Vec vec;

  i64 dim() const { return coin_count * inner_dim; }
  double sq_norm() const { return vec.squaredNorm(); }

  Eigen::VectorBlock<Vec> block(i64 r) { return vec.segment(r * inner_dim, inner_dim); }
  Eigen::VectorBlock<const Vec> block(i64 r) const {
    return vec.segment(r * inner_dim, inner_dim);
  }
};

// |1_R> tensor inner: uniform superposition on the coin register.
inline JointState make_uniform_joint(i64 coin_count, const Vec& inner) {
  JointState j;
  j.coin_count = coin_count;
  j.inner_dim = inner.size();
  j.vec = Vec(j.dim());
  double amp = 1.0 / std::sqrt(static_cast<double>(coin_count));
  for (i64 r = 0; r < coin_count; ++r) j.block(r) = amp * inner;
  return j;
}

// Extract the adversary part of a joint state of the form |1_R> tensor psi.
// Throws if the coin register is not (numerically) in the uniform state.
inline Vec contract_uniform_coin(const JointState& j, double tol = 1e-9) {
  double amp = 1.0 / std::sqrt(static_cast<double>(j.coin_count));
  Vec psi = Vec::Zero(j.inner_dim);
  for (i64 r = 0; r < j.coin_count; ++r) psi += amp * j.block(r);
  double residual = 0.0;
  for (i64 r = 0; r < j.coin_count; ++r)
    residual += (j.block(r) - amp * psi).squaredNorm();
  if (std::sqrt(residual) > tol * std::max(1.0, std::sqrt(j.sq_norm())))
    throw NumericError("joint state does not factor through the uniform coin state");
  return psi;
}

// Controlled projection: blockwise P_r (branch 0) or I - P_r (branch 1) on
// each coin block; never materializes the |R| * D matrix.
inline JointState cp_project(const PovmContext& ctx, const JointState& joint, int branch) {
  if (joint.coin_count != ctx.coin_count() || joint.inner_dim != ctx.layout().dim())
    throw DimensionMismatch("joint state does not match the game and layout");
  JointState out = joint;
  for (i64 r = 0; r < joint.coin_count; ++r) {
    Vec projected = ctx.apply_p_r(r, joint.block(r));
    if (branch == 0)
      out.block(r) = projected;
    else
      out.block(r) = joint.block(r) - projected;
  }
  return out;
}

inline JointState cp_project(const GameSpec& game, const OracleTable& h,
                             const StrategyCircuit& strat, const RegisterLayout& layout,
                             const JointState& joint, int branch) {
  PovmContext ctx(game, h, strat, layout);
  return cp_project(ctx, joint, branch);
}

// Projection of the coin register onto |1_R> (branch 0) or its complement.
inline JointState isuniform_project(const JointState& joint, int branch) {
  double amp = 1.0 / std::sqrt(static_cast<double>(joint.coin_count));
  Vec mean = Vec::Zero(joint.inner_dim);
  for (i64 r = 0; r < joint.coin_count; ++r) mean += amp * joint.block(r);
  JointState out = joint;
  for (i64 r = 0; r < joint.coin_count; ++r) {
    if (branch == 0)
      out.block(r) = amp * mean;
    else
      out.block(r) = joint.block(r) - amp * mean;
  }
  return out;
}

struct AltMeasTranscript {
  i64 oracle_index = 0;
  double weight = 1.0;          // ensemble weight times advice-branch weight
  std::vector<int> outcomes;    // b_1 .. b_k
  double win_probability = 0.0; // exact mode: squared norm of the k-fold projection
  bool won = false;             // trajectory mode: all outcomes zero
  JointState post;
  i64 prefix_queries = 0;       // instrumented oracle uses of the measurement rounds
};

// Exact evolution along the all-zeros branch, sub-normalized throughout.
inline AltMeasTranscript alternating_exact(const PovmContext& ctx, const Vec& start, int k) {
  if (k < 0 || k > kMaxExactRounds)
    throw ConfigError("exact alternating rounds must be in [0, 64]");
  AltMeasTranscript t;
  JointState joint = make_uniform_joint(ctx.coin_count(), start);
  for (int i = 1; i <= k; ++i) {
    if (i % 2 == 1) {
      joint = cp_project(ctx, joint, 0);
      t.prefix_queries += ctx.cp_query_cost();
    } else {
      joint = isuniform_project(joint, 0);
    }
    t.outcomes.push_back(0);
  }
  t.win_probability = joint.sq_norm();
  t.post = std::move(joint);
  return t;
}

// One Born-rule trajectory; the state is renormalized after each outcome.
inline AltMeasTranscript alternating_trajectory(const PovmContext& ctx, const Vec& start,
                                                int k, Rng& rng) {
  AltMeasTranscript t;
  JointState joint = make_uniform_joint(ctx.coin_count(), start);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  t.won = true;
  for (int i = 1; i <= k; ++i) {
    JointState zero = (i % 2 == 1) ? cp_project(ctx, joint, 0) : isuniform_project(joint, 0);
    if (i % 2 == 1) t.prefix_queries += ctx.cp_query_cost();
    double total = joint.sq_norm();
    double p0 = total > 0.0 ? std::min(1.0, zero.sq_norm() / total) : 0.0;
    int b = u(rng) < p0 ? 0 : 1;
    t.outcomes.push_back(b);
    if (b == 0) {
      joint = std::move(zero);
    } else {
      JointState one = (i % 2 == 1) ? cp_project(ctx, joint, 1) : isuniform_project(joint, 1);
      joint = std::move(one);
      t.won = false;
    }
    double n = std::sqrt(joint.sq_norm());
    if (n > 0.0) joint.vec /= n;
  }
  t.win_probability = t.won ? 1.0 : 0.0;
  t.post = std::move(joint);
  return t;
}

enum class AltMeasMode { Exact, Trajectory };

struct AltMeasRun {
  std::vector<AltMeasTranscript> transcripts;  // per (oracle, advice branch)
  double ensemble_value = 0.0;
};

inline AltMeasRun run_alternating(const AdviceFamily& adv, const StrategyCircuit& strat,
                                  const GameSpec& game, const OracleEnsemble& ensemble,
                                  const RegisterLayout& layout, int k,
                                  AltMeasMode mode = AltMeasMode::Exact,
                                  std::uint64_t seed = 0) {
  if (k < 1) throw ConfigError("alternating measurement needs k >= 1");
  AltMeasRun run;
  ensemble.for_each([&](i64 idx, const OracleTable& h, double w) {
    PovmContext ctx(game, h, strat, layout);
    StartState start = prepare_start_state(adv, layout, h);
    std::size_t branch = 0;
    for (const auto& b : start.branches) {
      AltMeasTranscript t;
      if (mode == AltMeasMode::Exact) {
        t = alternating_exact(ctx, b.state, k);
      } else {
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(idx) * 131 + branch));
        t = alternating_trajectory(ctx, b.state, k, rng);
      }
      t.oracle_index = idx;
      t.weight = w * b.weight;
      run.ensemble_value += t.weight * t.win_probability;
      run.transcripts.push_back(std::move(t));
      ++branch;
    }
  });
  return run;
}

// sum_i c_i p_i^k over the flattened ensemble spectrum; k = 0 returns the
// total weight (1 for a complete spectrum).
inline double closed_form_winprob(const WeightedSpectrum& spec, int k) {
  if (k < 0) throw ConfigError("moment order must be non-negative");
  return spec.moment(k);
}

// log of the k-th moment, stable for k far beyond the exact-mode cap.
inline double closed_form_log_winprob(const WeightedSpectrum& spec, int k) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    if (spec.weights[i] <= 0.0 || spec.values[i] <= 0.0) continue;
    best = std::max(best, std::log(spec.weights[i]) + k * std::log(spec.values[i]));
  }
  if (!std::isfinite(best)) return -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    if (spec.weights[i] <= 0.0 || spec.values[i] <= 0.0) continue;
    acc += std::exp(std::log(spec.weights[i]) + k * std::log(spec.values[i]) - best);
  }
  return best + std::log(acc);
}

struct ConditionalSequence {
  std::vector<double> eps;  // eps[t-1] = Pr[b_t = 0 | b_<t = 0]
  bool degenerate_tail = false;
};

// Ratio sequence of consecutive moments. Truncates once the conditioning
// probability falls below the floor; the conditional is undefined there.
inline ConditionalSequence conditional_probs(const WeightedSpectrum& spec, int t_max) {
  ConditionalSequence out;
  double denom = spec.moment(0);
  double num = spec.moment(1);
  if (num <= 0.0) throw ZeroSuccess("zero first-round success probability");
  for (int t = 1; t <= t_max; ++t) {
    if (denom <= kDenominatorFloor) {
      out.degenerate_tail = true;
      break;
    }
    out.eps.push_back(num / denom);
    denom = num;
    num = spec.moment(t + 1);
  }
  return out;
}

struct MwStateFamily {
  Vec v0;                 // |1_R> |phi>
  Vec w0;                 // (p |R|)^{-1/2} sum_r |r> P_r |phi>   (p > 0)
  Vec w1;                 // ((1-p)|R|)^{-1/2} sum_r |r> (I-P_r)|phi>  (p < 1)
  Vec v1;                 // sqrt(1-p) w0 - sqrt(p) w1
  bool has_w0 = false;
  bool has_w1 = false;
  double max_residual = 0.0;  // worst constraint violation among the checks below

  const Vec& w0_state() const {
    if (!has_w0) throw DegenerateEigenvalue("w0 undefined at eigenvalue 0");
    return w0;
  }
  const Vec& w1_state() const {
    if (!has_w1) throw DegenerateEigenvalue("w1 undefined at eigenvalue 1");
    return w1;
  }
};

// The four states tied to one eigenvector, with their defining relations
// verified: norms, CP_0 w0 = w0, CP_1 w0 = 0, IsUniform_0 v0 = v0,
// w0 = sqrt(p) v0 + sqrt(1-p) v1 and v0 = sqrt(p) w0 + sqrt(1-p) w1.
inline MwStateFamily mw_state_family(const PovmContext& ctx, const Vec& phi, double p) {
  constexpr double kEdge = 1e-12;
  if (p < -kEdge || p > 1.0 + kEdge)
    throw DegenerateEigenvalue("eigenvalue outside [0, 1]");
  MwStateFamily fam;
  i64 rr = ctx.coin_count();
  i64 d = phi.size();

  JointState v0 = make_uniform_joint(rr, phi);
  fam.v0 = v0.vec;

  JointState w0raw = cp_project(ctx, v0, 0);
  JointState w1raw = cp_project(ctx, v0, 1);
  // sum_r |r> P_r |phi> / sqrt(|R|) has squared norm p; rescale to unit.
  if (p > kEdge) {
    fam.w0 = w0raw.vec / std::sqrt(p);
    fam.has_w0 = true;
  }
  if (p < 1.0 - kEdge) {
    fam.w1 = w1raw.vec / std::sqrt(1.0 - p);
    fam.has_w1 = true;
  }

  auto track = [&](double r) { fam.max_residual = std::max(fam.max_residual, r); };
  track(std::abs(fam.v0.norm() - 1.0));
  JointState v0u = isuniform_project(v0, 0);
  track((v0u.vec - fam.v0).norm());

  if (fam.has_w0) {
    track(std::abs(fam.w0.norm() - 1.0));
    JointState w0j{rr, d, fam.w0};
    track((cp_project(ctx, w0j, 0).vec - fam.w0).norm());
    track(cp_project(ctx, w0j, 1).vec.norm());
  }
  if (fam.has_w1) track(std::abs(fam.w1.norm() - 1.0));

  if (fam.has_w0 && fam.has_w1) {
    fam.v1 = std::sqrt(1.0 - p) * fam.w0 - std::sqrt(p) * fam.w1;
    track((fam.v0 - std::sqrt(p) * fam.w0 - std::sqrt(1.0 - p) * fam.w1).norm());
    track((fam.w0 - std::sqrt(p) * fam.v0 - std::sqrt(1.0 - p) * fam.v1).norm());
    track(std::abs(fam.w0.dot(fam.w1)));
  } else if (fam.has_w0) {
    // p = 1: the relations collapse to w0 = v0.
    track((fam.w0 - fam.v0).norm());
  }
  return fam;
}

inline MwStateFamily mw_state_family(const GameSpec& game, const OracleTable& h,
                                     const StrategyCircuit& strat,
                                     const RegisterLayout& layout, const Vec& phi,
                                     double p) {
  PovmContext ctx(game, h, strat, layout);
  return mw_state_family(ctx, phi, p);
}

}  // namespace nuqrom
