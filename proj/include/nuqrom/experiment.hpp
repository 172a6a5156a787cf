#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nuqrom/bounds.hpp"
#include "nuqrom/microsuite.hpp"
#include "nuqrom/separation.hpp"

namespace nuqrom {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Experiment configuration: a JSON object with an "experiment" name plus the
// parameters that experiment reads. Unknown keys are ignored. File paths are
// resolved relative to the config file's directory.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  json raw;
  fs::path base_dir;

  std::string name() const { return require_string("experiment"); }

  bool has(const std::string& key) const { return raw.contains(key); }

  std::string require_string(const std::string& key) const {
    if (!raw.contains(key) || !raw.at(key).is_string())
      throw ConfigError("config needs string field '" + key + "'");
    return raw.at(key).get<std::string>();
  }

  std::string get_string(const std::string& key, const std::string& dflt) const {
    if (!raw.contains(key)) return dflt;
    if (!raw.at(key).is_string()) throw ConfigError("field '" + key + "' must be a string");
    return raw.at(key).get<std::string>();
  }

  i64 get_i64(const std::string& key, i64 dflt) const {
    if (!raw.contains(key)) return dflt;
    if (!raw.at(key).is_number_integer())
      throw ConfigError("field '" + key + "' must be an integer");
    return raw.at(key).get<i64>();
  }

  double get_double(const std::string& key, double dflt) const {
    if (!raw.contains(key)) return dflt;
    if (!raw.at(key).is_number()) throw ConfigError("field '" + key + "' must be a number");
    return raw.at(key).get<double>();
  }

  std::optional<double> opt_double(const std::string& key) const {
    if (!raw.contains(key)) return std::nullopt;
    if (!raw.at(key).is_number()) throw ConfigError("field '" + key + "' must be a number");
    return raw.at(key).get<double>();
  }

  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& dflt) const {
    if (!raw.contains(key)) return dflt;
    if (!raw.at(key).is_array()) throw ConfigError("field '" + key + "' must be an array");
    return raw.at(key).get<std::vector<double>>();
  }

  std::vector<i64> get_i64s(const std::string& key, const std::vector<i64>& dflt) const {
    if (!raw.contains(key)) return dflt;
    if (!raw.at(key).is_array()) throw ConfigError("field '" + key + "' must be an array");
    return raw.at(key).get<std::vector<i64>>();
  }

  fs::path resolve(const std::string& rel) const {
    fs::path p(rel);
    return p.is_absolute() ? p : base_dir / p;
  }
};

inline ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  ExperimentConfig cfg;
  try {
    in >> cfg.raw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!cfg.raw.is_object()) throw ConfigError("config must be a JSON object");
  cfg.base_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  return cfg;
}

inline std::string config_hash(const json& j) { return hex64(fnv1a64(j.dump())); }

// ---------------------------------------------------------------------------
// CSV output with deterministic formatting; every row carries the config hash.
// ---------------------------------------------------------------------------

class CsvWriter {
public:
  CsvWriter(const fs::path& path, std::vector<std::string> columns, std::string hash)
      : out_(path), hash_(std::move(hash)) {
    if (!out_) throw Error("cannot open output file: " + path.string());
    columns.push_back("config_hash");
    for (std::size_t i = 0; i < columns.size(); ++i)
      out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
    width_ = columns.size();
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() + 1 != width_) throw Error("csv row width mismatch");
    for (const auto& c : cells) out_ << c << ",";
    out_ << hash_ << "\n";
  }

private:
  std::ofstream out_;
  std::string hash_;
  std::size_t width_ = 0;
};

inline std::string cell(double v) { return fmt_double(v); }
inline std::string cell(i64 v) { return std::to_string(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(bool v) { return v ? "1" : "0"; }

// ---------------------------------------------------------------------------
// Config -> domain objects
// ---------------------------------------------------------------------------

struct GameSetup {
  GameSpec game;
  OracleEnsemble ensemble;
  RegisterLayout layout;
  StrategyCircuit strat;
  AdviceFamily advice;
};

inline GameSpec make_game_from_selector(const std::string& selector, i64 n, i64 m,
                                        const ExperimentConfig& cfg) {
  if (selector == "owf") return owf_game(n, m);
  if (selector == "prg") return prg_game(n, m);
  if (selector.rfind("salted:", 0) == 0) {
    std::string rest = selector.substr(7);
    auto pos = rest.rfind(':');
    if (pos == std::string::npos)
      throw ConfigError("salted game selector must be salted:<inner>:<K>");
    i64 k = 0;
    try {
      k = std::stoll(rest.substr(pos + 1));
    } catch (...) {
      throw ConfigError("bad salt space in game selector");
    }
    GameSpec inner = make_game_from_selector(rest.substr(0, pos), n, m, cfg);
    return salt_game(inner, k);
  }
  if (selector.rfind("yz:", 0) == 0) {
    fs::path code_path = cfg.resolve(selector.substr(3));
    std::ifstream in(code_path);
    if (!in) throw ConfigError("cannot open code file: " + code_path.string());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("code file parse error: ") + e.what());
    }
    return yz_game(j.get<YzCode>());
  }
  throw ConfigError("unknown game selector: " + selector);
}

// Layout with advice register dimension 2^s built from the answer register
// plus auxiliary qubits; s = 0 yields an adviceless layout.
inline RegisterLayout advice_layout(const GameSpec& game, int s) {
  i64 a = game.answer_count;
  if (s == 0)
    return RegisterLayout({{"ans", a}}, {}, {"ans"}, "ans");
  i64 ds = i64{1} << s;
  if (ds % a != 0)
    throw ConfigError("2^S must be a multiple of the answer-space size " + std::to_string(a));
  std::vector<Subsystem> subs{{"ans", a}};
  std::vector<std::string> advice{"ans"};
  if (ds / a > 1) {
    subs.push_back({"aux", ds / a});
    advice.push_back("aux");
  }
  return RegisterLayout(subs, advice, {}, "ans");
}

inline GameSetup load_game_setup(const ExperimentConfig& cfg) {
  GameSetup setup;
  i64 n = 2, m = 2;
  if (cfg.has("ensemble")) {
    const json& e = cfg.raw.at("ensemble");
    n = e.value("n", i64{2});
    m = e.value("m", i64{2});
  }
  setup.game = make_game_from_selector(cfg.get_string("game", "owf"), n, m, cfg);

  i64 cap = kDefaultEnumerationCap;
  std::string mode = "exhaustive";
  i64 count = 0;
  std::uint64_t eseed = 0;
  if (cfg.has("ensemble")) {
    const json& e = cfg.raw.at("ensemble");
    cap = e.value("cap", kDefaultEnumerationCap);
    mode = e.value("mode", std::string("exhaustive"));
    count = e.value("count", i64{0});
    eseed = e.value("seed", std::uint64_t{0});
  }
  if (mode == "exhaustive") {
    setup.ensemble =
        OracleEnsemble::exhaustive(setup.game.oracle_domain, setup.game.oracle_range, cap);
  } else if (mode == "sampled") {
    if (count < 1) throw ConfigError("sampled ensemble needs a positive 'count'");
    setup.ensemble =
        OracleEnsemble::sampled(setup.game.oracle_domain, setup.game.oracle_range, count, eseed);
  } else {
    throw ConfigError("ensemble mode must be 'exhaustive' or 'sampled'");
  }

  if (cfg.has("strategy")) {
    fs::path p = cfg.resolve(cfg.require_string("strategy"));
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open strategy file: " + p.string());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("strategy file parse error: ") + e.what());
    }
    StrategyFile sf = parse_strategy(j);
    setup.layout = sf.layout;
    setup.strat = sf.circuit;
  } else {
    setup.layout = RegisterLayout({{"ans", setup.game.answer_count}}, {"ans"}, {}, "ans");
    setup.strat = StrategyCircuit::identity();
  }
  if (setup.layout.answer_dim() != setup.game.answer_count)
    throw ConfigError("strategy layout answer dimension does not match the game");

  std::string advice = cfg.get_string("advice", "uniform");
  if (advice == "uniform")
    setup.advice = AdviceFamily::uniform();
  else if (advice == "mixed")
    setup.advice = AdviceFamily::maximally_mixed_run(AdviceFamily::uniform());
  else
    throw ConfigError("advice must be 'uniform' or 'mixed'");
  return setup;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> summary;
  std::vector<fs::path> outputs;
};

struct RunOptions {
  fs::path out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 1;
};

namespace experiments {

inline RunResult verify_lemmas(const ExperimentConfig& cfg, const RunOptions& opt,
                               CsvWriter& csv) {
  int instances = static_cast<int>(cfg.get_i64("instances", 20));
  int k_max = static_cast<int>(cfg.get_i64("k_max", 6));
  int t_max = static_cast<int>(cfg.get_i64("t_max", 8));
  std::uint64_t seed = cfg.has("seed") ? cfg.get_i64("seed", 0) : opt.seed;

  std::vector<std::vector<CheckRow>> buckets(static_cast<std::size_t>(instances));
  parallel_for(instances, opt.threads, [&](i64 i) {
    MicroInstance inst = random_micro_instance(split_seed(seed, static_cast<std::uint64_t>(i)));
    auto& rows = buckets[static_cast<std::size_t>(i)];
    for (auto& r : check_moment_identity(inst, k_max, 1e-9)) rows.push_back(r);
    for (int k = 1; k <= k_max; ++k) rows.push_back(check_leftover_law(inst, k, 1e-9));
    rows.push_back(check_conditional_monotonicity(inst, t_max, 1e-12));
    for (auto& r : check_jensen_step(inst, t_max, 1e-12)) rows.push_back(r);
    for (int k : {1, 3, 5}) rows.push_back(check_reduction_equality(inst, k, 1e-9));
  });
  std::vector<CheckRow> rows;
  for (auto& b : buckets)
    for (auto& r : b) rows.push_back(std::move(r));
  for (int s : {1, 2, 3}) {
    MicroInstance inst = advice_guessing_instance(s, split_seed(seed, 1000 + s));
    for (auto& r : check_advice_guessing(inst, s, 1e-12)) rows.push_back(r);
  }

  int failed = 0;
  for (const auto& r : rows) {
    csv.row({r.lemma, r.instance, cell(r.lhs), cell(r.rhs), cell(r.err), cell(r.tol),
             cell(r.pass)});
    if (!r.pass) ++failed;
  }
  RunResult res;
  res.summary.push_back(std::to_string(rows.size() - failed) + "/" +
                        std::to_string(rows.size()) + " lemma checks passed");
  if (failed > 0) {
    res.exit_code = 5;
    res.summary.push_back("FAIL: " + std::to_string(failed) + " checks violated");
  } else {
    res.summary.push_back("all-pass");
  }
  return res;
}

inline RunResult altmeas_sweep(const ExperimentConfig& cfg, const RunOptions& opt,
                               CsvWriter& csv) {
  GameSetup s = load_game_setup(cfg);
  int k_max = static_cast<int>(cfg.get_i64("k_max", 6));
  i64 samples = cfg.get_i64("samples", 10000);
  std::uint64_t seed = cfg.has("seed") ? cfg.get_i64("seed", 0) : opt.seed;

  for (int k = 1; k <= k_max; ++k) {
    double exact =
        run_alternating(s.advice, s.strat, s.game, s.ensemble, s.layout, k).ensemble_value;
    Rng rng(split_seed(seed, static_cast<std::uint64_t>(k)));
    std::uniform_int_distribution<i64> pick(0, s.ensemble.size() - 1);
    i64 wins = 0;
    for (i64 i = 0; i < samples; ++i) {
      OracleTable h = s.ensemble.table(pick(rng));
      PovmContext ctx(s.game, h, s.strat, s.layout);
      StartState start = prepare_start_state(s.advice, s.layout, h);
      const Vec* state = &start.branches.front().state;
      if (!start.pure()) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double p = u(rng), acc = 0.0;
        for (const auto& b : start.branches) {
          acc += b.weight;
          if (p < acc) {
            state = &b.state;
            break;
          }
        }
      }
      if (alternating_trajectory(ctx, *state, k, rng).won) ++wins;
    }
    double est = static_cast<double>(wins) / static_cast<double>(samples);
    double stderr_ = std::sqrt(std::max(0.0, est * (1.0 - est) / static_cast<double>(samples)));
    csv.row({cell(k), cell(exact), cell(est), cell(stderr_), cell(samples)});
  }
  RunResult res;
  res.summary.push_back("k = 1.." + std::to_string(k_max) + " done");
  return res;
}

inline RunResult conditional_monotonicity(const ExperimentConfig& cfg, const RunOptions&,
                                          CsvWriter& csv) {
  GameSetup s = load_game_setup(cfg);
  int t_max = static_cast<int>(cfg.get_i64("t_max", 8));

  bool monotone = true;
  auto emit = [&](i64 oracle_index, const WeightedSpectrum& spec) {
    ConditionalSequence seq;
    try {
      seq = conditional_probs(spec, t_max);
    } catch (const ZeroSuccess&) {
      return;
    }
    for (std::size_t t = 0; t < seq.eps.size(); ++t) {
      if (t > 0 && seq.eps[t] < seq.eps[t - 1] - 1e-12) monotone = false;
      csv.row({cell(oracle_index), cell(static_cast<i64>(t + 1)), cell(seq.eps[t]),
               cell(seq.degenerate_tail)});
    }
  };

  s.ensemble.for_each([&](i64 idx, const OracleTable& h, double) {
    WeightedSpectrum spec;
    Mat p = game_povm(s.game, h, s.strat, s.layout).matrix;
    StartState start = prepare_start_state(s.advice, s.layout, h);
    for (const auto& b : start.branches) {
      SpectralData sd = decompose(p, b.state);
      for (const auto& e : sd.spaces)
        if (e.overlap > 0) spec.add(b.weight * e.overlap, e.value);
    }
    emit(idx, spec);
  });
  emit(-1, ensemble_spectrum(s.advice, s.strat, s.game, s.ensemble, s.layout));

  RunResult res;
  res.summary.push_back(monotone ? "monotone" : "violation detected");
  if (!monotone) res.exit_code = 5;
  return res;
}

inline RunResult reduction_equality(const ExperimentConfig& cfg, const RunOptions&,
                                    CsvWriter& csv) {
  GameSetup s = load_game_setup(cfg);
  std::vector<i64> ks = cfg.get_i64s("k_list", {1, 3, 5});
  WeightedSpectrum spec = ensemble_spectrum(s.advice, s.strat, s.game, s.ensemble, s.layout);
  bool all_ok = true;
  for (i64 k : ks) {
    if (k % 2 == 0) throw ConfigError("reduction-equality needs odd k");
    ConditionalSequence seq = conditional_probs(spec, static_cast<int>(k));
    if (static_cast<i64>(seq.eps.size()) < k) continue;
    BfAlgorithm bf =
        build_prefix_from_altmeas(s.advice, s.strat, s.game, s.layout, static_cast<int>(k));
    BfGameResult res = run_bf_game(bf, s.game, s.ensemble);
    double eps_k = seq.eps[static_cast<std::size_t>(k - 1)];
    double err = std::abs(res.conditional - eps_k);
    bool ok = err <= 1e-9;
    all_ok = all_ok && ok;
    csv.row({cell(k), cell(res.conditional), cell(eps_k), cell(err), cell(ok)});
  }
  RunResult res;
  res.summary.push_back(all_ok ? "reduction equalities hold" : "mismatch detected");
  if (!all_ok) res.exit_code = 5;
  return res;
}

inline Application parse_application(const std::string& which) {
  if (which == "owf") return Application::Owf;
  if (which == "prg") return Application::Prg;
  if (which == "salt-general") return Application::SaltGeneral;
  if (which == "salt-decision") return Application::SaltDecision;
  if (which == "classical-general") return Application::ClassicalGeneral;
  throw ConfigError("unknown bound: " + which +
                    " (owf, prg, salt-general, salt-decision, classical-general)");
}

inline BoundParams bound_params_from(const ExperimentConfig& cfg) {
  BoundParams bp;
  bp.s = cfg.opt_double("s");
  bp.t = cfg.opt_double("t");
  bp.n = cfg.opt_double("n");
  bp.m = cfg.opt_double("m");
  bp.k = cfg.opt_double("k");
  bp.t_samp = cfg.opt_double("t_samp");
  bp.t_verify = cfg.opt_double("t_verify");
  bp.nu_t = cfg.opt_double("nu_t");
  bp.nu_value = cfg.opt_double("nu_value");
  bp.c = cfg.get_double("c", 1.0);
  return bp;
}

inline std::vector<std::string> bound_row(const std::string& which, const BoundParams& bp,
                                          const BoundReport& rep) {
  auto opt_cell = [](const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string("");
  };
  return {which,          opt_cell(bp.s),   opt_cell(bp.t),    opt_cell(bp.n),
          opt_cell(bp.m), opt_cell(bp.k),   opt_cell(bp.nu_t), opt_cell(bp.nu_value),
          cell(bp.c),     cell(rep.value)};
}

inline RunResult bound_calculator(const ExperimentConfig& cfg, const RunOptions&,
                                  CsvWriter& csv) {
  std::string which = cfg.require_string("which");
  BoundParams bp = bound_params_from(cfg);
  BoundReport rep = application_bound(parse_application(which), bp);
  csv.row(bound_row(which, bp, rep));
  RunResult res;
  res.summary.push_back(which + " bound = " + fmt_double(rep.value));
  return res;
}

inline RunResult bound_sweep(const ExperimentConfig& cfg, const RunOptions&, CsvWriter& csv) {
  std::string which = cfg.require_string("which");
  if (!cfg.has("sweep")) throw ConfigError("bound-sweep needs a 'sweep' object");
  const json& sweep = cfg.raw.at("sweep");
  std::string param = sweep.value("param", std::string());
  if (!sweep.contains("values") || !sweep.at("values").is_array())
    throw ConfigError("sweep needs 'param' and 'values'");
  Application app = parse_application(which);
  for (const auto& v : sweep.at("values")) {
    BoundParams bp = bound_params_from(cfg);
    double value = v.get<double>();
    if (param == "s")
      bp.s = value;
    else if (param == "t")
      bp.t = value;
    else if (param == "n")
      bp.n = value;
    else if (param == "m")
      bp.m = value;
    else if (param == "k")
      bp.k = value;
    else if (param == "c")
      bp.c = value;
    else
      throw ConfigError("sweep param must be one of s, t, n, m, k, c");
    csv.row(bound_row(which, bp, application_bound(app, bp)));
  }
  RunResult res;
  res.summary.push_back("swept " + param);
  return res;
}

inline RunResult advice_optimum_curve(const ExperimentConfig& cfg, const RunOptions&,
                                      CsvWriter& csv) {
  GameSetup s = load_game_setup(cfg);
  RunResult res;
  if (cfg.has("strategies")) {
    for (const auto& entry : cfg.raw.at("strategies")) {
      fs::path p = cfg.resolve(entry.get<std::string>());
      std::ifstream in(p);
      if (!in) throw ConfigError("cannot open strategy file: " + p.string());
      json j;
      in >> j;
      StrategyFile sf = parse_strategy(j);
      double value = optimal_nonuniform_value(s.game, sf.circuit, s.ensemble, sf.layout);
      double bits = std::log2(static_cast<double>(sf.layout.advice_dim()));
      csv.row({cell(bits), cell(sf.layout.advice_dim()), cell(value)});
    }
  } else {
    for (i64 sv : cfg.get_i64s("s_grid", {0, 1, 2})) {
      RegisterLayout layout = advice_layout(s.game, static_cast<int>(sv));
      double value = optimal_nonuniform_value(s.game, s.strat, s.ensemble, layout);
      csv.row({cell(sv), cell(layout.advice_dim()), cell(value)});
    }
  }
  res.summary.push_back("curve written");
  return res;
}

inline RunResult bfqrom_estimate(const ExperimentConfig& cfg, const RunOptions&,
                                 CsvWriter& csv) {
  GameSetup s = load_game_setup(cfg);
  int p = static_cast<int>(cfg.get_i64("p", 1));
  i64 family_cap = cfg.get_i64("family_cap", 4096);

  std::vector<BfAlgorithm> family;
  std::vector<ClassicalFixing> fixings =
      enumerate_fixings(s.game.oracle_domain, s.game.oracle_range, p, family_cap);
  for (std::size_t i = 0; i < fixings.size(); ++i)
    family.push_back(bf_from_fixing_best_response(s.game, s.ensemble, fixings[i],
                                                  "fixing-" + std::to_string(i)));
  NuEstimate est = estimate_nu(s.game, s.ensemble, family);
  for (const auto& row : est.rows)
    csv.row({cell(static_cast<i64>(p)), cell(i64{0}), row.id, cell(row.joint),
             cell(row.conditional), cell(row.accept_rate)});
  csv.row({cell(static_cast<i64>(p)), cell(i64{0}), "best", cell(est.best_joint),
           cell(est.best_conditional), cell(1.0)});

  RunResult res;
  res.summary.push_back("nu lower bound (joint) = " + fmt_double(est.best_joint) +
                        ", (conditional) = " + fmt_double(est.best_conditional));
  return res;
}

inline RunResult spectral_export(const ExperimentConfig& cfg, const RunOptions&,
                                 CsvWriter& csv) {
  GameSetup s = load_game_setup(cfg);
  auto rows = spectral_rows(s.advice, s.strat, s.game, s.ensemble, s.layout);
  for (const auto& r : rows)
    csv.row({cell(r.oracle_index), cell(r.eigenvalue), cell(r.overlap)});
  RunResult res;
  res.summary.push_back(std::to_string(rows.size()) + " eigenspace rows written");
  return res;
}

inline RunResult separation_report(const ExperimentConfig& cfg, const RunOptions&,
                                   CsvWriter& csv) {
  GameSetup s = load_game_setup(cfg);
  RunResult res;
  for (i64 sv : cfg.get_i64s("s_grid", {0, 1, 2})) {
    RegisterLayout layout = advice_layout(s.game, static_cast<int>(sv));
    SeparationRow row =
        quantum_vs_classical_report(s.game, s.strat, s.ensemble, layout, static_cast<int>(sv));
    csv.row({cell(row.s), cell(row.quantum_value), cell(row.classical_value), cell(row.gap)});
  }
  res.summary.push_back("separation rows written");
  return res;
}

}  // namespace experiments

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

struct ExperimentEntry {
  std::string name;
  std::string description;
  std::vector<std::string> columns;
  RunResult (*run)(const ExperimentConfig&, const RunOptions&, CsvWriter&);
};

inline const std::vector<ExperimentEntry>& experiment_registry() {
  static const std::vector<ExperimentEntry> reg = {
      {"verify-lemmas",
       "micro-scale identity checks: moments, leftover states, monotonicity, Jensen, reduction",
       {"lemma", "instance", "lhs", "rhs", "err", "tol", "pass"},
       &experiments::verify_lemmas},
      {"altmeas-sweep",
       "exact vs. sampled alternating-measurement win probability for k = 1..k_max",
       {"k", "exact_winprob", "trajectory_estimate", "stderr", "samples"},
       &experiments::altmeas_sweep},
      {"conditional-monotonicity",
       "per-round conditional success probabilities, per oracle and ensemble-wide",
       {"oracle_index", "t", "eps_t", "degenerate_tail"},
       &experiments::conditional_monotonicity},
      {"reduction-equality",
       "bit-fixing prefix built from k-1 alternating rounds vs. the k-th conditional",
       {"k", "bf_conditional", "eps_k", "abs_err", "pass"},
       &experiments::reduction_equality},
      {"bound-calculator",
       "evaluate one closed-form security bound",
       {"which", "s", "t", "n", "m", "k", "nu_t", "nu_value", "c", "value"},
       &experiments::bound_calculator},
      {"bound-sweep",
       "evaluate a closed-form bound over a parameter grid",
       {"which", "s", "t", "n", "m", "k", "nu_t", "nu_value", "c", "value"},
       &experiments::bound_sweep},
      {"advice-optimum-curve",
       "spectrally optimal advice value as a function of the advice size",
       {"s", "d_s", "value"},
       &experiments::advice_optimum_curve},
      {"bfqrom-estimate",
       "lower-bound nu(P, T) by classical fixings with best-response online answers",
       {"p", "t", "family_id", "joint", "conditional", "accept_rate"},
       &experiments::bfqrom_estimate},
      {"spectral-export",
       "per-oracle POVM eigenvalues and start-state overlaps",
       {"oracle_index", "eigenvalue", "overlap"},
       &experiments::spectral_export},
      {"separation-report",
       "quantum-advice optimum vs. optimal classical advice at T = 0",
       {"s", "quantum_value", "classical_value", "gap"},
       &experiments::separation_report},
  };
  return reg;
}

inline std::vector<std::pair<std::string, std::string>> list_experiments() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : experiment_registry()) out.emplace_back(e.name, e.description);
  return out;
}

inline RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  const ExperimentEntry* entry = nullptr;
  for (const auto& e : experiment_registry())
    if (e.name == cfg.name()) entry = &e;
  if (!entry) {
    std::string names;
    for (const auto& e : experiment_registry()) names += " " + e.name;
    throw ConfigError("unknown experiment '" + cfg.name() + "'; registered:" + names);
  }

  fs::create_directories(opt.out_dir);
  fs::path csv_path = opt.out_dir / (entry->name + ".csv");
  fs::path sidecar_path = opt.out_dir / (entry->name + ".json");
  std::string hash = config_hash(cfg.raw);

  CsvWriter csv(csv_path, entry->columns, hash);
  RunResult res = entry->run(cfg, opt, csv);
  res.outputs.push_back(csv_path);

  json sidecar = {{"experiment", entry->name},
                  {"config", cfg.raw},
                  {"config_hash", hash},
                  {"seed", opt.seed},
                  {"version", kVersion}};
  std::ofstream out(sidecar_path);
  out << sidecar.dump(2) << "\n";
  res.outputs.push_back(sidecar_path);
  return res;
}

}  // namespace nuqrom
