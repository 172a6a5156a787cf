#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nuqrom/errors.hpp"

namespace nuqrom {

// A distribution c_i over nonnegative values p_i.
struct WeightedValues {
  std::vector<double> weights;
  std::vector<double> values;

  void validate() const {
    if (weights.size() != values.size() || weights.empty())
      throw DimensionMismatch("weights and values must be nonempty and aligned");
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw DimensionMismatch("weights must be finite and nonnegative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw DimensionMismatch("weights must sum to 1");
    for (double p : values)
      if (!(p >= 0.0) || !std::isfinite(p))
        throw DimensionMismatch("values must be finite and nonnegative");
  }

  double moment(int k) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
      s += weights[i] * std::pow(values[i], k);
    return s;
  }
};

struct ReweightResult {
  double before = 0.0;  // sum alpha_i p_i
  double after = 0.0;   // sum beta_i p_i with beta_i = alpha_i p_i / mu
};

// Reweighting by the values themselves never decreases the mean.
inline ReweightResult reweight_check(const WeightedValues& wv) {
  wv.validate();
  double mu = wv.moment(1);
  if (mu <= 0.0) throw ZeroMean("mean is zero; reweighting undefined");
  ReweightResult r;
  r.before = mu;
  r.after = wv.moment(2) / mu;
  return r;
}

// S_k = sum c p^k / sum c p^{k-1}, k = 1..k_max; monotonically non-decreasing.
inline std::vector<double> moment_ratio_sequence(const WeightedValues& wv, int k_max) {
  wv.validate();
  if (wv.moment(1) <= 0.0) throw ZeroMean("mean is zero; ratios undefined");
  std::vector<double> seq;
  double denom = wv.moment(0);
  for (int k = 1; k <= k_max; ++k) {
    double num = wv.moment(k);
    if (denom <= 0.0) break;
    seq.push_back(num / denom);
    denom = num;
  }
  return seq;
}

struct JensenResult {
  double mean = 0.0;
  double g_root_of_moment = 0.0;  // (sum c p^g)^{1/g}
};

inline JensenResult jensen_bound(const WeightedValues& wv, int g) {
  wv.validate();
  if (g < 1) throw ConfigError("Jensen exponent must be >= 1");
  JensenResult r;
  r.mean = wv.moment(1);
  r.g_root_of_moment = std::pow(wv.moment(g), 1.0 / static_cast<double>(g));
  return r;
}

struct BoundReport {
  std::string name;
  std::map<std::string, double> params;
  double value = 0.0;  // clamped to [0, 1]
  std::string assumptions;
};

using NuFn = std::function<double(double P, double T)>;

enum class TheoremMode { General, Decision };

inline double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

namespace detail {

// Golden-section refinement of g(gamma) = nu(P/gamma, T) + gamma around a
// bracketing interval; assumes a well-behaved objective on the bracket.
inline std::pair<double, double> golden_min(const std::function<double(double)>& g,
                                            double lo, double hi, int iters = 60) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = g(x2);
    }
  }
  double x = (f1 <= f2) ? x1 : x2;
  return {x, g(x)};
}

}  // namespace detail

// General: 2 nu(P, T) with P = S (T + T_Samp + T_Verify).
// Decision: min over the gamma grid of nu(P/gamma, T) + gamma.
inline BoundReport main_theorem_bound(const NuFn& nu, double s, double t, double t_samp,
                                      double t_verify, TheoremMode mode,
                                      const std::vector<double>& gamma_grid = {},
                                      bool refine = false) {
  double p = s * (t + t_samp + t_verify);
  BoundReport rep;
  rep.params = {{"S", s}, {"T", t}, {"t_samp", t_samp}, {"t_verify", t_verify}, {"P", p}};
  if (mode == TheoremMode::General) {
    rep.name = "main-general";
    rep.value = clamp01(2.0 * nu(p, t));
    rep.assumptions = "nu(P,T) supplied by caller";
    return rep;
  }
  rep.name = "main-decision";
  if (gamma_grid.empty()) throw EmptyGrid("decision mode needs a gamma grid");
  double best = std::numeric_limits<double>::infinity();
  double best_gamma = 0.0;
  for (double gamma : gamma_grid) {
    if (!(gamma > 0.0) || gamma > 1.0)
      throw ConfigError("gamma grid entries must lie in (0, 1]");
    double v = nu(p / gamma, t) + gamma;
    if (v < best) {
      best = v;
      best_gamma = gamma;
    }
  }
  if (refine) {
    std::vector<double> sorted = gamma_grid;
    std::sort(sorted.begin(), sorted.end());
    auto it = std::find(sorted.begin(), sorted.end(), best_gamma);
    double lo = (it == sorted.begin()) ? best_gamma / 4.0 : *(it - 1);
    double hi = (it + 1 == sorted.end()) ? std::min(1.0, best_gamma * 4.0) : *(it + 1);
    auto [x, v] = detail::golden_min([&](double g) { return nu(p / g, t) + g; },
                                     std::max(lo, 1e-9), hi);
    if (v < best) {
      best = v;
      best_gamma = x;
    }
  }
  rep.params["gamma"] = best_gamma;
  rep.value = clamp01(best);
  rep.assumptions = "nu(P,T) supplied by caller; gamma minimized over a grid";
  return rep;
}

enum class Application { Owf, Prg, SaltGeneral, SaltDecision, ClassicalGeneral };

// Every closed form keeps the undetermined constant explicit; c defaults to 1
// and is illustrative, not a proven value.
struct BoundParams {
  std::optional<double> s, t, n, m, k;
  std::optional<double> t_samp, t_verify;
  std::optional<double> nu_t;      // nu(T) of the unsalted game
  std::optional<double> nu_value;  // nu(P, T) for the classical analog
  double c = 1.0;
};

namespace detail {

inline double need(const std::optional<double>& v, const char* name) {
  if (!v) throw MissingParam(std::string("missing bound parameter: ") + name);
  return *v;
}

}  // namespace detail

inline BoundReport application_bound(Application which, const BoundParams& bp) {
  BoundReport rep;
  rep.params["c"] = bp.c;
  using detail::need;
  switch (which) {
    case Application::Owf: {
      double s = need(bp.s, "s"), t = need(bp.t, "t");
      double n = need(bp.n, "n"), m = need(bp.m, "m");
      double ts = bp.t_samp.value_or(1.0), tv = bp.t_verify.value_or(2.0);
      double p = s * (t + ts + tv);
      double alpha = std::min(n, m);
      double nu = bp.c * (p + t * t) / alpha;
      rep.name = "owf";
      rep.params.insert({{"S", s}, {"T", t}, {"N", n}, {"M", m}, {"P", p}});
      rep.value = clamp01(2.0 * nu);
      rep.assumptions = "nu(P,T) = c (P + T^2) / min(N, M)";
      break;
    }
    case Application::Prg: {
      double s = need(bp.s, "s"), t = need(bp.t, "t"), n = need(bp.n, "n");
      rep.name = "prg";
      rep.params.insert({{"S", s}, {"T", t}, {"N", n}});
      rep.value = clamp01(0.5 + bp.c * std::sqrt(t * t / n) +
                          bp.c * std::cbrt(s * t / n));
      rep.assumptions = "1/2 + c sqrt(T^2/N) + c (S T / N)^{1/3}";
      break;
    }
    case Application::SaltGeneral: {
      double s = need(bp.s, "s"), t = need(bp.t, "t"), k = need(bp.k, "k");
      double ts = bp.t_samp.value_or(0.0), tv = bp.t_verify.value_or(0.0);
      double nu_t = need(bp.nu_t, "nu_t");
      rep.name = "salt-general";
      rep.params.insert({{"S", s}, {"T", t}, {"K", k}});
      rep.value = clamp01(4.0 * nu_t + bp.c * s * (t + ts + tv) / k);
      rep.assumptions = "4 nu(T) + c S (T + T_Samp + T_Verify) / K";
      break;
    }
    case Application::SaltDecision: {
      double s = need(bp.s, "s"), t = need(bp.t, "t"), k = need(bp.k, "k");
      double ts = bp.t_samp.value_or(0.0), tv = bp.t_verify.value_or(0.0);
      double nu_t = need(bp.nu_t, "nu_t");
      rep.name = "salt-decision";
      rep.params.insert({{"S", s}, {"T", t}, {"K", k}});
      rep.value = clamp01(nu_t + bp.c * std::cbrt(s * (t + ts + tv) / k));
      rep.assumptions = "nu(T) + c (S (T + T_Samp + T_Verify) / K)^{1/3}";
      break;
    }
    case Application::ClassicalGeneral: {
      double s = need(bp.s, "s"), t = need(bp.t, "t");
      double ts = bp.t_samp.value_or(0.0), tv = bp.t_verify.value_or(0.0);
      double nu = need(bp.nu_value, "nu_value");
      rep.name = "classical-general";
      rep.params.insert({{"S", s}, {"T", t}, {"P", s * (t + ts + tv)}});
      rep.value = clamp01(2.0 * bp.c * nu);
      rep.assumptions = "2 nu(P,T), classical advice, P = S (T + T_Samp + T_Verify)";
      break;
    }
  }
  return rep;
}

struct BoundComparison {
  double empirical = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool violation = false;  // meaningful only when the constant is a proven one
};

inline BoundComparison empirical_vs_bound(double empirical, const BoundReport& report,
                                          bool constant_is_proven = false) {
  BoundComparison cmp;
  cmp.empirical = empirical;
  cmp.bound = report.value;
  cmp.slack = report.value - empirical;
  cmp.violation = constant_is_proven && empirical > report.value;
  return cmp;
}

}  // namespace nuqrom
