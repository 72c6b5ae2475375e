#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "annealkit/errors.hpp"
#include "annealkit/dynamics.hpp"
#include "annealkit/model.hpp"

namespace annealkit {

struct SaParams {
  long long sweeps = 1000;
  double beta0 = 0.1;
  double beta1 = 10.0;
  int restarts = 1;
};

namespace detail {

struct Adjacency {
  std::vector<double> h;
  std::vector<std::vector<std::pair<int, double>>> neighbors;
};

inline Adjacency build_adjacency(const IsingModel& m) {
  Adjacency adj;
  adj.h.assign(m.num_vars, 0.0);
  adj.neighbors.assign(m.num_vars, {});
  for (const auto& [i, v] : m.h) adj.h[i] = v;
  for (const auto& [ij, v] : m.J) {
    adj.neighbors[ij.first].push_back({ij.second, v});
    adj.neighbors[ij.second].push_back({ij.first, v});
  }
  return adj;
}

// Energy change from flipping spin i: -2 s_i (h_i + sum_j J_ij s_j).
inline double flip_delta(const Adjacency& adj, const std::vector<int>& spins, int i) {
  double local = adj.h[i];
  for (const auto& [j, v] : adj.neighbors[i]) local += v * spins[j];
  return -2.0 * spins[i] * local;
}

}  // namespace detail

// Metropolis single-spin flips in fixed index order, geometric beta ladder
// from beta0 to beta1, one returned configuration per restart.
inline SampleSet simulated_annealing(const IsingModel& m, const SaParams& params,
                                     std::uint64_t seed) {
  m.validate();
  if (params.sweeps < 1) throw parameter_error("sweeps must be >= 1");
  if (!(params.beta0 > 0.0) || !(params.beta0 < params.beta1))
    throw parameter_error("need 0 < beta0 < beta1 for a geometric increase");
  if (params.restarts < 1) throw parameter_error("restarts must be >= 1");
  if (m.num_vars > 32) throw capacity_error("sampler limited to 32 spins");

  const auto adj = detail::build_adjacency(m);
  const double ratio = params.beta1 / params.beta0;
  SampleSet out;
  for (int restart = 0; restart < params.restarts; ++restart) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(restart)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> spins(m.num_vars);
    for (int i = 0; i < m.num_vars; ++i) spins[i] = (rng() & 1u) ? 1 : -1;
    for (long long sweep = 0; sweep < params.sweeps; ++sweep) {
      double frac = params.sweeps > 1
                        ? static_cast<double>(sweep) / static_cast<double>(params.sweeps - 1)
                        : 1.0;
      double beta = params.beta0 * std::pow(ratio, frac);
      for (int i = 0; i < m.num_vars; ++i) {
        double delta = detail::flip_delta(adj, spins, i);
        if (delta <= 0.0 || unit(rng) < std::exp(-beta * delta)) spins[i] = -spins[i];
      }
    }
    SpinConfig c = SpinConfig::from_spins(spins);
    out.add(c, ising_energy(m, c), 1);
  }
  out.sort();
  return out;
}

// Steepest-descent single-spin flips; deterministic tie-break (lowest index).
inline SpinConfig greedy_descent(const IsingModel& m, SpinConfig start) {
  m.validate();
  if (start.num_vars != m.num_vars) throw dimension_error("start length != model num_vars");
  const auto adj = detail::build_adjacency(m);
  std::vector<int> spins(m.num_vars);
  for (int i = 0; i < m.num_vars; ++i) spins[i] = start.spin(i);
  for (;;) {
    int best = -1;
    double best_delta = -1e-15;
    for (int i = 0; i < m.num_vars; ++i) {
      double delta = detail::flip_delta(adj, spins, i);
      if (delta < best_delta) {
        best_delta = delta;
        best = i;
      }
    }
    if (best < 0) break;
    spins[best] = -spins[best];
  }
  return SpinConfig::from_spins(spins);
}

}  // namespace annealkit
