#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nuqrom/experiment.hpp"

namespace {

int cmd_list() {
  for (const auto& [name, desc] : nuqrom::list_experiments())
    std::printf("%-26s %s\n", name.c_str(), desc.c_str());
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::uint64_t seed, bool seed_given, int threads) {
  nuqrom::ExperimentConfig cfg = nuqrom::load_config(config_path);
  nuqrom::RunOptions opt;
  opt.out_dir = out_dir.empty() ? cfg.get_string("out", ".") : out_dir;
  opt.seed = seed_given ? seed : static_cast<std::uint64_t>(cfg.get_i64("seed", 0));
  opt.threads = threads;
  if (!seed_given && !cfg.has("seed")) opt.seed = 0;
  nuqrom::RunResult res = nuqrom::run_experiment(cfg, opt);
  for (const auto& line : res.summary) std::printf("%s\n", line.c_str());
  for (const auto& p : res.outputs) std::printf("wrote %s\n", p.string().c_str());
  return res.exit_code;
}

int cmd_bound(const std::string& which, const nuqrom::BoundParams& bp) {
  nuqrom::BoundReport rep =
      nuqrom::application_bound(nuqrom::experiments::parse_application(which), bp);
  auto opt_cell = [](const std::optional<double>& v) {
    return v ? nuqrom::fmt_double(*v) : std::string("");
  };
  std::printf("which,s,t,n,m,k,nu_t,nu_value,c,value\n");
  std::printf("%s,%s,%s,%s,%s,%s,%s,%s,%s,%s\n", which.c_str(), opt_cell(bp.s).c_str(),
              opt_cell(bp.t).c_str(), opt_cell(bp.n).c_str(), opt_cell(bp.m).c_str(),
              opt_cell(bp.k).c_str(), opt_cell(bp.nu_t).c_str(),
              opt_cell(bp.nu_value).c_str(), nuqrom::fmt_double(bp.c).c_str(),
              nuqrom::fmt_double(rep.value).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nuqrom: desk-scale simulator and bound calculator for "
               "non-uniform security games against random oracles"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list registered experiments");

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_option("--out", out_dir, "output directory (default: config 'out' or cwd)");
  run->add_option("--threads", threads, "worker threads")->default_val(1);

  std::string which;
  double s_v = 0, t_v = 0, n_v = 0, m_v = 0, k_v = 0, ts_v = 0, tv_v = 0, nut_v = 0,
         nuv_v = 0, c_v = 1.0;
  auto* bound = app.add_subcommand("bound", "evaluate one closed-form bound as a CSV row");
  bound->add_option("--which", which, "owf | prg | salt-general | salt-decision | classical-general")
      ->required();
  auto* so = bound->add_option("--s", s_v, "advice size S");
  auto* to = bound->add_option("--t", t_v, "online queries T");
  auto* no = bound->add_option("--n", n_v, "domain size N");
  auto* mo = bound->add_option("--m", m_v, "range size M");
  auto* ko = bound->add_option("--k", k_v, "salt space K");
  auto* tso = bound->add_option("--tsamp", ts_v, "sampler queries");
  auto* tvo = bound->add_option("--tverify", tv_v, "verifier queries");
  auto* nuto = bound->add_option("--nu", nut_v, "uniform security nu(T) of the inner game");
  auto* nuvo = bound->add_option("--nu-value", nuv_v, "bit-fixing security nu(P,T)");
  bound->add_option("--c", c_v, "explicit constant in place of the big-O")->default_val(1.0);

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) return cmd_list();
    if (run->parsed())
      return cmd_run(config_path, out_dir, seed, seed_opt->count() > 0, threads);
    if (bound->parsed()) {
      nuqrom::BoundParams bp;
      if (so->count()) bp.s = s_v;
      if (to->count()) bp.t = t_v;
      if (no->count()) bp.n = n_v;
      if (mo->count()) bp.m = m_v;
      if (ko->count()) bp.k = k_v;
      if (tso->count()) bp.t_samp = ts_v;
      if (tvo->count()) bp.t_verify = tv_v;
      if (nuto->count()) bp.nu_t = nut_v;
      if (nuvo->count()) bp.nu_value = nuv_v;
      bp.c = c_v;
      return cmd_bound(which, bp);
    }
  } catch (const nuqrom::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 5;
  }
  return 0;
}
