#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "annealkit/errors.hpp"

namespace annealkit {

/// A configuration of +/-1 spins, stored as a bitmask (bit set <=> spin +1).
struct SpinConfig {
  std::uint32_t bits = 0;
  int num_vars = 0;

  SpinConfig() = default;
  SpinConfig(std::uint32_t mask, int n) : bits(mask), num_vars(n) {}

  static SpinConfig from_spins(const std::vector<int>& spins) {
    if (spins.size() > 32) throw capacity_error("SpinConfig limited to 32 spins");
    SpinConfig c;
    c.num_vars = static_cast<int>(spins.size());
    for (int i = 0; i < c.num_vars; ++i) {
      if (spins[i] != 1 && spins[i] != -1) throw parameter_error("spins must be +1 or -1");
      if (spins[i] == 1) c.bits |= (1u << i);
    }
    return c;
  }

  int spin(int i) const { return (bits >> i) & 1u ? 1 : -1; }

  SpinConfig flipped_all() const {
    std::uint32_t mask = num_vars >= 32 ? 0xFFFFFFFFu : ((1u << num_vars) - 1u);
    return SpinConfig(~bits & mask, num_vars);
  }

  // Little-endian string, qubit 0 first, '+'/'-' per spin.
  std::string to_string() const {
    std::string s;
    s.reserve(num_vars);
    for (int i = 0; i < num_vars; ++i) s += spin(i) > 0 ? '+' : '-';
    return s;
  }

  bool operator==(const SpinConfig& o) const { return bits == o.bits && num_vars == o.num_vars; }
  bool operator<(const SpinConfig& o) const { return bits < o.bits; }
};

/// Ising model: E(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j.
struct IsingModel {
  int num_vars = 0;
  std::map<int, double> h;
  std::map<std::pair<int, int>, double> J;
  double offset = 0.0;

  IsingModel() = default;
  explicit IsingModel(int n) : num_vars(n) {}

  void add_h(int i, double v) {
    if (v != 0.0) h[i] += v;
  }
  void add_J(int i, int j, double v) {
    if (i == j) throw parameter_error("self-coupling J(i,i) not allowed");
    if (i > j) std::swap(i, j);
    if (v != 0.0) J[{i, j}] += v;
  }

  void validate() const {
    if (num_vars < 1) throw parameter_error("num_vars must be positive");
    for (const auto& [i, v] : h) {
      if (i < 0 || i >= num_vars) throw parameter_error("h index out of range");
      if (!std::isfinite(v)) throw parameter_error("non-finite h coefficient");
    }
    for (const auto& [ij, v] : J) {
      if (ij.first < 0 || ij.second >= num_vars || ij.first >= ij.second)
        throw parameter_error("bad J key");
      if (!std::isfinite(v)) throw parameter_error("non-finite J coefficient");
    }
    if (!std::isfinite(offset)) throw parameter_error("non-finite offset");
  }
};

/// QUBO model: E(x) = offset + sum_{i<=j} Q_ij x_i x_j over x in {0,1}.
struct QuboModel {
  int num_vars = 0;
  std::map<std::pair<int, int>, double> Q;  // keys have i <= j; (i,i) holds linear terms
  double offset = 0.0;

  QuboModel() = default;
  explicit QuboModel(int n) : num_vars(n) {}

  void add_Q(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    if (v != 0.0) Q[{i, j}] += v;
  }

  void validate() const {
    if (num_vars < 1) throw parameter_error("num_vars must be positive");
    for (const auto& [ij, v] : Q) {
      if (ij.first < 0 || ij.second >= num_vars || ij.first > ij.second)
        throw parameter_error("bad Q key");
      if (!std::isfinite(v)) throw parameter_error("non-finite Q coefficient");
    }
  }
};

// Summation order is fixed (ascending i, then lexicographic (i,j)) so repeated
// evaluations are bit-identical.
inline double ising_energy(const IsingModel& m, const SpinConfig& c) {
  if (c.num_vars != m.num_vars) throw dimension_error("config length != model num_vars");
  double e = m.offset;
  for (const auto& [i, v] : m.h) e += v * c.spin(i);
  for (const auto& [ij, v] : m.J) e += v * c.spin(ij.first) * c.spin(ij.second);
  return e;
}

inline double qubo_energy(const QuboModel& m, const std::vector<int>& x) {
  if (static_cast<int>(x.size()) != m.num_vars) throw dimension_error("vector length != model num_vars");
  double e = m.offset;
  for (const auto& [ij, v] : m.Q) e += v * x[ij.first] * x[ij.second];
  return e;
}

inline double qubo_energy(const QuboModel& m, std::uint32_t mask) {
  double e = m.offset;
  for (const auto& [ij, v] : m.Q)
    e += v * ((mask >> ij.first) & 1u) * ((mask >> ij.second) & 1u);
  return e;
}

// s_i = 2 x_i - 1
inline QuboModel ising_to_qubo(const IsingModel& m) {
  m.validate();
  QuboModel q(m.num_vars);
  q.offset = m.offset;
  for (const auto& [i, v] : m.h) {
    q.add_Q(i, i, 2.0 * v);
    q.offset -= v;
  }
  for (const auto& [ij, v] : m.J) {
    q.add_Q(ij.first, ij.second, 4.0 * v);
    q.add_Q(ij.first, ij.first, -2.0 * v);
    q.add_Q(ij.second, ij.second, -2.0 * v);
    q.offset += v;
  }
  return q;
}

// x_i = (s_i + 1) / 2
inline IsingModel qubo_to_ising(const QuboModel& m) {
  m.validate();
  IsingModel out(m.num_vars);
  out.offset = m.offset;
  for (const auto& [ij, v] : m.Q) {
    if (ij.first == ij.second) {
      out.add_h(ij.first, v / 2.0);
      out.offset += v / 2.0;
    } else {
      out.add_J(ij.first, ij.second, v / 4.0);
      out.add_h(ij.first, v / 4.0);
      out.add_h(ij.second, v / 4.0);
      out.offset += v / 4.0;
    }
  }
  return out;
}

struct GroundResult {
  double min_energy = 0.0;
  std::vector<SpinConfig> configs;  // every config within the tie tolerance
};

inline constexpr double kGroundTieTol = 1e-9;
inline constexpr int kBruteForceMaxVars = 26;

inline GroundResult brute_force_ground(const IsingModel& m) {
  m.validate();
  if (m.num_vars > kBruteForceMaxVars)
    throw capacity_error("brute_force_ground supports at most 26 spins");
  const std::uint32_t count = 1u << m.num_vars;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    double e = ising_energy(m, SpinConfig(mask, m.num_vars));
    if (e < best) best = e;
  }
  GroundResult r;
  r.min_energy = best;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    SpinConfig c(mask, m.num_vars);
    if (ising_energy(m, c) <= best + kGroundTieTol) r.configs.push_back(c);
  }
  return r;
}

inline double brute_force_max_energy(const IsingModel& m) {
  m.validate();
  if (m.num_vars > kBruteForceMaxVars)
    throw capacity_error("brute_force_max_energy supports at most 26 spins");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << m.num_vars); ++mask)
    worst = std::max(worst, ising_energy(m, SpinConfig(mask, m.num_vars)));
  return worst;
}

enum class CouplingLaw { pm_one, uniform };

inline IsingModel random_spin_glass(int n, std::uint64_t seed, CouplingLaw law, double density) {
  if (n < 1) throw parameter_error("need at least one spin");
  if (!(density > 0.0 && density <= 1.0)) throw parameter_error("density must lie in (0,1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  IsingModel m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (density < 1.0 && unit(rng) >= density) continue;
      double v;
      if (law == CouplingLaw::pm_one)
        v = (rng() & 1u) ? 1.0 : -1.0;
      else
        v = 2.0 * unit(rng) - 1.0;
      m.add_J(i, j, v);
    }
  }
  return m;
}

struct ScaleResult {
  IsingModel model;
  double factor = 1.0;
  std::string warning;  // nonempty when scaling shrank the coefficients
};

// Uniform shrink (factor <= 1) placing every h in h_range and every J in j_range.
// The argmin set is unchanged under positive scaling.
inline ScaleResult scale_to_range(const IsingModel& m, std::pair<double, double> h_range,
                                  std::pair<double, double> j_range) {
  m.validate();
  if (!(h_range.first < 0.0 && h_range.second > 0.0) ||
      !(j_range.first < 0.0 && j_range.second > 0.0))
    throw parameter_error("ranges must contain 0 in their interior");
  double factor = 1.0;
  auto clip = [&factor](double v, std::pair<double, double> range) {
    if (v > 0.0)
      factor = std::min(factor, range.second / v);
    else if (v < 0.0)
      factor = std::min(factor, range.first / v);
  };
  for (const auto& [i, v] : m.h) clip(v, h_range);
  for (const auto& [ij, v] : m.J) clip(v, j_range);
  ScaleResult r;
  r.factor = factor;
  r.model = m;
  if (factor < 1.0) {
    for (auto& [i, v] : r.model.h) v *= factor;
    for (auto& [ij, v] : r.model.J) v *= factor;
    r.model.offset *= factor;
    r.warning = "coefficients scaled by " + std::to_string(factor) +
                "; penalty gaps are weakened by the same factor";
  }
  return r;
}

/// Multiset of measured configurations with energies and read counts.
struct SampleEntry {
  SpinConfig config;
  double energy = 0.0;
  long long count = 0;
};

struct SampleSet {
  std::vector<SampleEntry> entries;
  long long total_reads = 0;

  void add(const SpinConfig& c, double energy, long long count) {
    for (auto& e : entries) {
      if (e.config == c) {
        e.count += count;
        total_reads += count;
        return;
      }
    }
    entries.push_back({c, energy, count});
    total_reads += count;
  }

  // canonical order: energy ascending, then bitmask
  void sort() {
    std::sort(entries.begin(), entries.end(), [](const SampleEntry& a, const SampleEntry& b) {
      if (a.energy != b.energy) return a.energy < b.energy;
      return a.config.bits < b.config.bits;
    });
  }

  double best_energy() const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) best = std::min(best, e.energy);
    return best;
  }
};

}  // namespace annealkit
