#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nuqrom/game.hpp"
#include "nuqrom/linalg.hpp"
#include "nuqrom/oracle.hpp"
#include "nuqrom/registers.hpp"

namespace nuqrom {

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr i64 kDefaultDimCap = 1 << 14;

struct StrategyStep {
  enum class Kind { LocalUnitary, OracleCall };
  Kind kind = Kind::LocalUnitary;
  Mat matrix;                        // LocalUnitary
  std::vector<std::string> targets;  // LocalUnitary
  std::string x_label, y_label;      // OracleCall

  static StrategyStep local(Mat m, std::vector<std::string> t) {
    StrategyStep s;
    s.kind = Kind::LocalUnitary;
    s.matrix = std::move(m);
    s.targets = std::move(t);
    return s;
  }
  static StrategyStep oracle(std::string x, std::string y) {
    StrategyStep s;
    s.kind = Kind::OracleCall;
    s.x_label = std::move(x);
    s.y_label = std::move(y);
    return s;
  }
};

using StepList = std::vector<StrategyStep>;

// Per-challenge program of local gates and counted oracle calls. A program
// registered under "default" covers challenges without their own entry.
class StrategyCircuit {
public:
  StrategyCircuit() : default_program_(StepList{}) {}

  static StrategyCircuit identity() { return StrategyCircuit(); }

  void set_program(i64 challenge, StepList steps) {
    programs_[challenge] = std::move(steps);
  }
  void set_default(StepList steps) { default_program_ = std::move(steps); }
  void clear_default() { default_program_.reset(); }

  const StepList& program_for(i64 challenge) const {
    auto it = programs_.find(challenge);
    if (it != programs_.end()) return it->second;
    if (default_program_) return *default_program_;
    throw UnknownChallenge("no program for challenge " + std::to_string(challenge));
  }

  i64 query_count(i64 challenge) const {
    i64 q = 0;
    for (const auto& s : program_for(challenge))
      if (s.kind == StrategyStep::Kind::OracleCall) ++q;
    return q;
  }

  // T: the worst case over registered programs (including the default).
  i64 query_count() const {
    i64 q = default_program_ ? count_calls(*default_program_) : 0;
    for (const auto& [ch, steps] : programs_) q = std::max(q, count_calls(steps));
    return q;
  }

  void validate(const RegisterLayout& layout) const {
    if (default_program_) validate_steps(*default_program_, layout);
    for (const auto& [ch, steps] : programs_) validate_steps(steps, layout);
  }

private:
  static i64 count_calls(const StepList& steps) {
    i64 q = 0;
    for (const auto& s : steps)
      if (s.kind == StrategyStep::Kind::OracleCall) ++q;
    return q;
  }

  static void validate_steps(const StepList& steps, const RegisterLayout& layout) {
    for (const auto& s : steps) {
      if (s.kind == StrategyStep::Kind::OracleCall) {
        (void)layout.index_of(s.x_label);
        (void)layout.index_of(s.y_label);
        continue;
      }
      i64 d = 1;
      for (const auto& t : s.targets) d *= layout.subsystem_dim(t);
      if (s.matrix.rows() != d || s.matrix.cols() != d)
        throw DimensionMismatch("gate matrix does not match its target dimension");
      if (!is_unitary(s.matrix, kUnitaryTol))
        throw DimensionMismatch("gate matrix is not unitary");
    }
  }

  std::map<i64, StepList> programs_;
  std::optional<StepList> default_program_;
};

namespace detail {

// Apply a dense gate on the product subspace of `targets` (listed order is
// the row-major digit order of the matrix, first target most significant).
inline Vec apply_local(const Mat& gate, const std::vector<std::string>& targets,
                       const RegisterLayout& layout, const Vec& state, bool adjoint) {
  std::vector<i64> strides, dims;
  strides.reserve(targets.size());
  for (const auto& t : targets) {
    strides.push_back(layout.stride(t));
    dims.push_back(layout.subsystem_dim(t));
  }
  i64 m = gate.rows();
  // offsets[t] = global index offset of target sub-index t
  std::vector<i64> offsets(static_cast<std::size_t>(m));
  for (i64 t = 0; t < m; ++t) {
    i64 rem = t, off = 0;
    for (int j = static_cast<int>(targets.size()) - 1; j >= 0; --j) {
      off += (rem % dims[static_cast<std::size_t>(j)]) * strides[static_cast<std::size_t>(j)];
      rem /= dims[static_cast<std::size_t>(j)];
    }
    offsets[static_cast<std::size_t>(t)] = off;
  }

  Mat g = adjoint ? gate.adjoint() : gate;
  Vec out = state;
  Vec scratch(m);
  for (i64 base = 0; base < state.size(); ++base) {
    bool is_base = true;
    for (std::size_t j = 0; j < targets.size() && is_base; ++j)
      is_base = (base / strides[j]) % dims[j] == 0;
    if (!is_base) continue;
    for (i64 t = 0; t < m; ++t) scratch[t] = state[base + offsets[static_cast<std::size_t>(t)]];
    scratch = g * scratch;
    for (i64 t = 0; t < m; ++t) out[base + offsets[static_cast<std::size_t>(t)]] = scratch[t];
  }
  return out;
}

}  // namespace detail

struct StrategyApplication {
  Vec state;
  i64 oracle_calls = 0;
};

inline StrategyApplication apply_strategy_counted(const StrategyCircuit& strat, i64 challenge,
                                                  const OracleTable& h,
                                                  const RegisterLayout& layout, Vec state,
                                                  bool adjoint = false) {
  if (state.size() != layout.dim())
    throw DimensionMismatch("state dimension != layout dimension");
  const StepList& steps = strat.program_for(challenge);
  StrategyApplication out;
  auto run_step = [&](const StrategyStep& s) {
    if (s.kind == StrategyStep::Kind::OracleCall) {
      state = oracle_unitary_step(h, state, layout, s.x_label, s.y_label, adjoint);
      ++out.oracle_calls;
    } else {
      state = detail::apply_local(s.matrix, s.targets, layout, state, adjoint);
    }
  };
  if (!adjoint) {
    for (const auto& s : steps) run_step(s);
  } else {
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) run_step(*it);
  }
  out.state = std::move(state);
  return out;
}

inline Vec apply_strategy(const StrategyCircuit& strat, i64 challenge, const OracleTable& h,
                          const RegisterLayout& layout, const Vec& state) {
  return apply_strategy_counted(strat, challenge, h, layout, state, false).state;
}

inline Vec apply_strategy_adjoint(const StrategyCircuit& strat, i64 challenge,
                                  const OracleTable& h, const RegisterLayout& layout,
                                  const Vec& state) {
  return apply_strategy_counted(strat, challenge, h, layout, state, true).state;
}

// Oracle-dependent advice. Uniform is the all-|0> convention of uniform
// algorithms; Explicit carries a per-oracle unit vector on the advice
// registers; MaximallyMixedRun replaces an explicit family's advice with the
// maximally mixed state (a uniform classical mixture over advice basis
// states) to model advice guessing.
struct AdviceFamily {
  enum class Kind { Uniform, Explicit, MaximallyMixedRun };
  Kind kind = Kind::Uniform;
  std::function<Vec(const OracleTable&)> vector_for;  // Explicit / wrapped family

  static AdviceFamily uniform() { return AdviceFamily{}; }

  static AdviceFamily explicit_family(std::function<Vec(const OracleTable&)> f) {
    AdviceFamily a;
    a.kind = Kind::Explicit;
    a.vector_for = std::move(f);
    return a;
  }

  static AdviceFamily maximally_mixed_run(const AdviceFamily& wrapped) {
    AdviceFamily a;
    a.kind = Kind::MaximallyMixedRun;
    a.vector_for = wrapped.vector_for;
    return a;
  }
};

struct WeightedState {
  double weight = 1.0;
  Vec state;
};

struct StartState {
  std::vector<WeightedState> branches;

  bool pure() const { return branches.size() == 1; }
  const Vec& vector() const {
    if (!pure()) throw DimensionMismatch("start state is a mixture, not a vector");
    return branches.front().state;
  }
};

inline Vec embed_on_layout(const RegisterLayout& layout, const Vec& advice) {
  if (advice.size() != layout.advice_dim())
    throw DimensionMismatch("advice vector dimension != advice register dimension");
  Vec full = Vec::Zero(layout.dim());
  for (i64 a = 0; a < advice.size(); ++a) full[layout.embed_advice(a)] = advice[a];
  return full;
}

// sigma_H tensor |0...0>_work as a unit vector of the full dimension; for
// MaximallyMixedRun, the classical mixture {(2^-S, |a> tensor |0>_work)}.
inline StartState prepare_start_state(const AdviceFamily& adv, const RegisterLayout& layout,
                                      const OracleTable& h) {
  StartState out;
  switch (adv.kind) {
    case AdviceFamily::Kind::Uniform: {
      Vec advice = Vec::Zero(layout.advice_dim());
      advice[0] = 1.0;
      out.branches.push_back({1.0, embed_on_layout(layout, advice)});
      break;
    }
    case AdviceFamily::Kind::Explicit: {
      Vec advice = adv.vector_for(h);
      if (std::abs(advice.norm() - 1.0) > kUnitaryTol)
        throw DimensionMismatch("explicit advice vector is not unit norm");
      out.branches.push_back({1.0, embed_on_layout(layout, advice)});
      break;
    }
    case AdviceFamily::Kind::MaximallyMixedRun: {
      i64 ds = layout.advice_dim();
      double w = 1.0 / static_cast<double>(ds);
      for (i64 a = 0; a < ds; ++a) {
        Vec advice = Vec::Zero(ds);
        advice[a] = 1.0;
        out.branches.push_back({w, embed_on_layout(layout, advice)});
      }
      break;
    }
  }
  return out;
}

struct RunOutcome {
  i64 answer = 0;
  bool win = false;
};

// One sampled game round: prepare, run the strategy for the sampled
// challenge, read the answer register by the Born rule, verify.
inline RunOutcome run_and_measure(const AdviceFamily& adv, const StrategyCircuit& strat,
                                  const GameSpec& game, const OracleTable& h,
                                  const RegisterLayout& layout, i64 r, Rng& rng) {
  StartState start = prepare_start_state(adv, layout, h);
  const Vec* state = nullptr;
  Vec chosen;
  if (start.pure()) {
    state = &start.branches.front().state;
  } else {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double pick = u(rng), acc = 0.0;
    chosen = start.branches.back().state;
    for (const auto& b : start.branches) {
      acc += b.weight;
      if (pick < acc) {
        chosen = b.state;
        break;
      }
    }
    state = &chosen;
  }
  i64 ch = sample_challenge(game, h, r);
  Vec evolved = apply_strategy(strat, ch, h, layout, *state);

  i64 adim = layout.answer_dim();
  std::vector<double> probs(static_cast<std::size_t>(adim), 0.0);
  for (i64 i = 0; i < evolved.size(); ++i)
    probs[static_cast<std::size_t>(layout.answer_of(i))] += std::norm(evolved[i]);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double pick = u(rng) * evolved.squaredNorm();
  i64 ans = adim - 1;
  double acc = 0.0;
  for (i64 a = 0; a < adim; ++a) {
    acc += probs[static_cast<std::size_t>(a)];
    if (pick < acc) {
      ans = a;
      break;
    }
  }
  RunOutcome out;
  out.answer = ans;
  out.win = evaluate(game, h, r, ans);
  return out;
}

// T = 0 adversary: classical advice chosen from H, deterministic response
// from (advice, challenge), no online queries.
struct ClassicalAdversary {
  int advice_bits = 0;
  std::function<std::uint64_t(const OracleTable&)> advice_fn;
  std::function<i64(std::uint64_t, i64)> response;
};

inline bool classical_run(const ClassicalAdversary& adv, const GameSpec& game,
                          const OracleTable& h, i64 r) {
  std::uint64_t advice = adv.advice_fn ? adv.advice_fn(h) : 0;
  i64 ch = sample_challenge(game, h, r);
  return evaluate(game, h, r, adv.response(advice, ch));
}

inline double classical_value(const ClassicalAdversary& adv, const GameSpec& game,
                              const OracleEnsemble& ensemble) {
  double total = 0.0;
  ensemble.for_each([&](i64, const OracleTable& h, double w) {
    i64 wins = 0;
    for (i64 r = 0; r < game.coin_count; ++r)
      if (classical_run(adv, game, h, r)) ++wins;
    total += w * static_cast<double>(wins) / static_cast<double>(game.coin_count);
  });
  return total;
}

// --- strategy files ---------------------------------------------------------
//
// {
//   "subsystems": [["ans", 2], ["w", 2]],
//   "advice": ["ans"], "work": ["w"], "answer": "ans",
//   "programs": {
//     "default": [
//       {"type": "unitary", "targets": ["ans"], "matrix": [[[re,im],...],...]},
//       {"type": "oracle", "x": "ans", "y": "w"}
//     ],
//     "3": [ ... ]
//   }
// }

struct StrategyFile {
  RegisterLayout layout;
  StrategyCircuit circuit;
};

inline Mat parse_gate_matrix(const json& rows) {
  i64 d = static_cast<i64>(rows.size());
  Mat m(d, d);
  for (i64 i = 0; i < d; ++i) {
    const auto& row = rows.at(static_cast<std::size_t>(i));
    if (static_cast<i64>(row.size()) != d)
      throw ConfigError("gate matrix is not square");
    for (i64 j = 0; j < d; ++j) {
      const auto& cell = row.at(static_cast<std::size_t>(j));
      if (!cell.is_array() || cell.size() != 2)
        throw ConfigError("matrix entries must be [re, im] pairs");
      m(i, j) = cxd(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

inline StrategyFile parse_strategy(const json& j) {
  StrategyFile out;
  std::vector<Subsystem> subsystems;
  for (const auto& s : j.at("subsystems"))
    subsystems.push_back({s.at(0).get<std::string>(), s.at(1).get<i64>()});
  out.layout = RegisterLayout(subsystems, j.at("advice").get<std::vector<std::string>>(),
                              j.at("work").get<std::vector<std::string>>(),
                              j.at("answer").get<std::string>());
  if (out.layout.dim() > kDefaultDimCap)
    throw CapExceeded("layout dimension exceeds the configured cap");

  out.circuit.clear_default();
  if (j.contains("programs")) {
    for (const auto& [key, steps] : j.at("programs").items()) {
      StepList list;
      for (const auto& step : steps) {
        std::string type = step.at("type").get<std::string>();
        if (type == "unitary") {
          list.push_back(StrategyStep::local(
              parse_gate_matrix(step.at("matrix")),
              step.at("targets").get<std::vector<std::string>>()));
        } else if (type == "oracle") {
          list.push_back(StrategyStep::oracle(step.at("x").get<std::string>(),
                                              step.at("y").get<std::string>()));
        } else {
          throw ConfigError("unknown strategy step type: " + type);
        }
      }
      if (key == "default")
        out.circuit.set_default(std::move(list));
      else
        out.circuit.set_program(std::stoll(key), std::move(list));
    }
  } else {
    out.circuit.set_default({});
  }
  out.circuit.validate(out.layout);
  return out;
}

}  // namespace nuqrom
