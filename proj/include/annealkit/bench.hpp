#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "annealkit/errors.hpp"
#include "annealkit/model.hpp"

namespace annealkit {

inline double success_probability(const SampleSet& samples, double ground_energy,
                                  double tol = 1e-9) {
  if (samples.total_reads < 1) throw parameter_error("empty sample set");
  long long good = 0;
  for (const auto& e : samples.entries)
    if (e.energy <= ground_energy + tol) good += e.count;
  return static_cast<double>(good) / static_cast<double>(samples.total_reads);
}

// Expected total time for target confidence p: t_run * log(1-p)/log(1-p_s),
// with fractional (un-ceiled) repetitions. p_s = 0 maps to infinity and
// p_s = 1 to t_run (the limit of the formula).
inline double tts(double p_s, double t_run, double p = 0.99) {
  if (!(p > 0.0 && p < 1.0)) throw parameter_error("target probability must lie in (0,1)");
  if (p_s < 0.0 || p_s > 1.0) throw parameter_error("p_s must lie in [0,1]");
  if (!(t_run > 0.0)) throw parameter_error("t_run must be positive");
  if (p_s == 0.0) return std::numeric_limits<double>::infinity();
  if (p_s >= 1.0) return t_run;
  return t_run * std::log1p(-p) / std::log1p(-p_s);
}

// Same repetition formula with success redefined as E <= E* + eps.
inline double time_to_epsilon(const SampleSet& samples, double t_run, double e_star, double eps,
                              double p = 0.99, double tol = 1e-9) {
  if (eps < 0.0) throw parameter_error("epsilon must be nonnegative");
  double p_eps = success_probability(samples, e_star + eps, tol);
  return tts(p_eps, t_run, p);
}

inline double approximation_ratio(double best_energy, double e_star, double e_worst) {
  if (!(e_worst > e_star)) throw parameter_error("degenerate energy range");
  return (e_worst - best_energy) / (e_worst - e_star);
}

struct BetaFit {
  double beta = 0.0;
  double r2 = 0.0;
};

// Least-squares fit of ln(count/degeneracy) against -E over the observed
// configurations; degeneracies come from exhaustive enumeration.
inline BetaFit beta_eff_fit(const SampleSet& samples, const IsingModel& m) {
  m.validate();
  if (m.num_vars > 20) throw capacity_error("beta_eff_fit supports at most 20 spins");
  if (samples.total_reads < 1) throw parameter_error("empty sample set");

  std::map<long long, long long> degeneracy;  // quantised energy -> count of configs
  auto quantise = [](double e) { return std::llround(e * 1e9); };
  for (std::uint32_t mask = 0; mask < (1u << m.num_vars); ++mask)
    degeneracy[quantise(ising_energy(m, SpinConfig(mask, m.num_vars)))]++;

  std::vector<double> xs, ys;
  std::map<long long, long long> observed;  // energy level -> total reads
  for (const auto& e : samples.entries) observed[quantise(e.energy)] += e.count;
  for (const auto& [qe, count] : observed) {
    double energy = static_cast<double>(qe) * 1e-9;
    double deg = static_cast<double>(degeneracy.at(qe));
    xs.push_back(-energy);
    ys.push_back(std::log(static_cast<double>(count) / deg));
  }
  if (xs.size() < 2) throw parameter_error("need at least two distinct energies for a fit");

  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-15) throw parameter_error("degenerate energies; cannot fit");
  BetaFit fit;
  fit.beta = (n * sxy - sx * sy) / denom;
  double ss_tot = syy - sy * sy / n;
  double intercept = (sy - fit.beta * sx) / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (intercept + fit.beta * xs[i]);
    ss_res += r * r;
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

struct InstanceMetrics {
  double p_s = 0.0;
  double tts_value = 0.0;
  double time_to_eps = 0.0;
  double approx_ratio = 0.0;
  double t_run = 0.0;
};

struct Percentiles {
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
};

inline Percentiles percentiles_25_50_75(std::vector<double> values) {
  if (values.empty()) throw parameter_error("no values");
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    double pos = q * (values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
  };
  return {at(0.25), at(0.50), at(0.75)};
}

}  // namespace annealkit
