#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "annealkit/errors.hpp"
#include "annealkit/model.hpp"
#include "annealkit/schedule.hpp"

namespace annealkit {

inline constexpr int kEvolveMaxQubits = 22;
inline constexpr int kDenseMaxQubits = 12;
inline constexpr double kGapDegeneracyTol = 1e-9;

/// 2^n complex amplitudes; basis index bit i encodes the spin of qubit i
/// (bit set <=> s_i = +1).
struct StateVector {
  int n = 0;
  std::vector<std::complex<double>> amp;

  double norm_sq() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return s;
  }
};

inline StateVector prepare_driver_ground(int n) {
  if (n < 1 || n > kEvolveMaxQubits) throw capacity_error("qubit count must be in [1,22]");
  StateVector psi;
  psi.n = n;
  psi.amp.assign(std::size_t{1} << n, std::complex<double>(std::pow(2.0, -n / 2.0), 0.0));
  return psi;
}

inline StateVector prepare_basis_state(const SpinConfig& c) {
  if (c.num_vars < 1 || c.num_vars > kEvolveMaxQubits)
    throw capacity_error("qubit count must be in [1,22]");
  StateVector psi;
  psi.n = c.num_vars;
  psi.amp.assign(std::size_t{1} << c.num_vars, {0.0, 0.0});
  psi.amp[c.bits] = {1.0, 0.0};
  return psi;
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  std::complex<double> ov = 0.0;
  for (std::size_t i = 0; i < a.amp.size(); ++i) ov += std::conj(a.amp[i]) * b.amp[i];
  return std::norm(ov);
}

namespace detail {

// Diagonal classical energy tables over all basis states: field part (scaled
// by the h-gain C during evolution) and coupling part separately.
struct DiagonalTables {
  std::vector<double> field;     // sum_i h_i s_i
  std::vector<double> coupling;  // sum_{i<j} J_ij s_i s_j (offset excluded)
};

inline DiagonalTables build_diagonal(const IsingModel& m) {
  const std::size_t dim = std::size_t{1} << m.num_vars;
  DiagonalTables t;
  t.field.assign(dim, 0.0);
  t.coupling.assign(dim, 0.0);
  for (const auto& [i, v] : m.h) {
    const std::size_t bit = std::size_t{1} << i;
    for (std::size_t idx = 0; idx < dim; ++idx) t.field[idx] += (idx & bit) ? v : -v;
  }
  for (const auto& [ij, v] : m.J) {
    const std::size_t bi = std::size_t{1} << ij.first;
    const std::size_t bj = std::size_t{1} << ij.second;
    for (std::size_t idx = 0; idx < dim; ++idx) {
      bool same = static_cast<bool>(idx & bi) == static_cast<bool>(idx & bj);
      t.coupling[idx] += same ? v : -v;
    }
  }
  return t;
}

inline void apply_diagonal_phase(StateVector& psi, const DiagonalTables& t, double c_gain,
                                 double angle_scale) {
  // amp[idx] *= exp(-i * angle_scale * (C*field + coupling))
  for (std::size_t idx = 0; idx < psi.amp.size(); ++idx) {
    double theta = angle_scale * (c_gain * t.field[idx] + t.coupling[idx]);
    psi.amp[idx] *= std::complex<double>(std::cos(theta), -std::sin(theta));
  }
}

// exp(+i * theta * sigma^x) on every qubit (the driver is -sum sigma^x).
inline void apply_transverse_rotations(StateVector& psi, double theta) {
  const std::complex<double> c(std::cos(theta), 0.0);
  const std::complex<double> is(0.0, std::sin(theta));
  for (int q = 0; q < psi.n; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t idx = 0; idx < psi.amp.size(); ++idx) {
      if (idx & bit) continue;
      std::complex<double> a = psi.amp[idx];
      std::complex<double> b = psi.amp[idx | bit];
      psi.amp[idx] = c * a + is * b;
      psi.amp[idx | bit] = is * a + c * b;
    }
  }
}

// Unitary Walsh-Hadamard transform (its own inverse).
inline void walsh_hadamard(StateVector& psi) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int q = 0; q < psi.n; ++q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t idx = 0; idx < psi.amp.size(); ++idx) {
      if (idx & bit) continue;
      std::complex<double> a = psi.amp[idx];
      std::complex<double> b = psi.amp[idx | bit];
      psi.amp[idx] = (a + b) * inv_sqrt2;
      psi.amp[idx | bit] = (a - b) * inv_sqrt2;
    }
  }
}

// In the x basis (after the Walsh-Hadamard transform) both the driver and any
// XX catalyst are diagonal: sigma^x has eigenvalue +1 on bit 0, -1 on bit 1.
inline void apply_x_basis_step(StateVector& psi, double a_env, double g_env,
                               const std::vector<std::tuple<int, int, double>>& pairs, double dt) {
  walsh_hadamard(psi);
  for (std::size_t idx = 0; idx < psi.amp.size(); ++idx) {
    double x_sum = 0.0;
    for (int q = 0; q < psi.n; ++q) x_sum += (idx >> q) & 1ull ? -1.0 : 1.0;
    double xx = 0.0;
    for (const auto& [i, j, w] : pairs) {
      double si = (idx >> i) & 1ull ? -1.0 : 1.0;
      double sj = (idx >> j) & 1ull ? -1.0 : 1.0;
      xx += w * si * sj;
    }
    // exp(-i dt (-A*x_sum + g*xx))
    double theta = dt * (-a_env * x_sum + g_env * xx);
    psi.amp[idx] *= std::complex<double>(std::cos(theta), -std::sin(theta));
  }
  walsh_hadamard(psi);
}

}  // namespace detail

struct EvolveStats {
  long long steps = 0;
  double norm_drift = 0.0;  // |1 - ||psi||^2| before the final renormalisation
};

// Second-order symmetric splitting at the step midpoint:
//   diag(dt/2) . transverse[+catalyst](dt) . diag(dt/2)
// Every factor is exactly unitary; the state is renormalised once at the end.
inline StateVector evolve(const IsingModel& m, const Schedule& sch, StateVector psi, double dt,
                          EvolveStats* stats = nullptr) {
  m.validate();
  if (psi.n != m.num_vars) throw dimension_error("state size != model num_vars");
  if (psi.n > kEvolveMaxQubits) throw capacity_error("evolution supports at most 22 qubits");
  if (!(dt > 0.0)) throw parameter_error("dt must be positive");
  const double tau = sch.total_duration();
  if (dt > tau * (1.0 + 1e-12)) throw parameter_error("dt exceeds total schedule duration");

  const long long nsteps = std::max<long long>(1, std::llround(tau / dt));
  const double h = tau / static_cast<double>(nsteps);
  const auto tables = detail::build_diagonal(m);
  const bool has_catalyst = sch.catalyst.has_value();

  for (long long k = 0; k < nsteps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * h;
    const SchedulePoint pt = evaluate(sch, t_mid);
    detail::apply_diagonal_phase(psi, tables, pt.C, 0.5 * h * pt.B);
    if (has_catalyst)
      detail::apply_x_basis_step(psi, pt.A, pt.g, sch.catalyst->pairs, h);
    else
      detail::apply_transverse_rotations(psi, h * pt.A);
    detail::apply_diagonal_phase(psi, tables, pt.C, 0.5 * h * pt.B);
  }

  double nrm = psi.norm_sq();
  if (stats) {
    stats->steps = nsteps;
    stats->norm_drift = std::abs(1.0 - nrm);
  }
  const double scale = 1.0 / std::sqrt(nrm);
  for (auto& a : psi.amp) a *= scale;
  return psi;
}

inline SampleSet sample_measurements(const StateVector& psi, const IsingModel& m, long long shots,
                                     std::uint64_t seed) {
  if (shots < 1) throw parameter_error("shots must be positive");
  if (std::abs(1.0 - psi.norm_sq()) > 1e-8) throw parameter_error("state is not normalised");
  std::vector<double> cdf(psi.amp.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    acc += std::norm(psi.amp[i]);
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::map<std::uint32_t, long long> counts;
  for (long long s = 0; s < shots; ++s) {
    double u = unit(rng) * acc;
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = std::min<std::size_t>(cdf.size() - 1, it - cdf.begin());
    counts[static_cast<std::uint32_t>(idx)]++;
  }
  SampleSet out;
  for (const auto& [mask, count] : counts) {
    SpinConfig c(mask, psi.n);
    out.add(c, ising_energy(m, c), count);
  }
  out.sort();
  return out;
}

struct SpectrumPoint {
  double s = 0.0;
  std::vector<double> evals;  // lowest m_levels, ascending
  double gap = 0.0;           // first eigenvalue strictly above E0 + tol, minus E0
};

struct SpectrumTrace {
  std::vector<SpectrumPoint> points;
};

namespace detail {

inline Eigen::MatrixXd assemble_hamiltonian(const IsingModel& m, const Schedule& sch, double s) {
  const int n = m.num_vars;
  const std::size_t dim = std::size_t{1} << n;
  const double A = sch.A(s), B = sch.B(s), C = sch.C(s);
  const double g = sch.catalyst ? sch.catalyst->g(s) : 0.0;
  const auto tables = build_diagonal(m);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t idx = 0; idx < dim; ++idx)
    H(idx, idx) = B * (C * tables.field[idx] + tables.coupling[idx] + m.offset);
  for (std::size_t idx = 0; idx < dim; ++idx)
    for (int q = 0; q < n; ++q) H(idx, idx ^ (std::size_t{1} << q)) += -A;
  if (sch.catalyst)
    for (const auto& [i, j, w] : sch.catalyst->pairs)
      for (std::size_t idx = 0; idx < dim; ++idx)
        H(idx, idx ^ (std::size_t{1} << i) ^ (std::size_t{1} << j)) += g * w;
  return H;
}

}  // namespace detail

inline SpectrumTrace instantaneous_spectrum(const IsingModel& m, const Schedule& sch,
                                            const std::vector<double>& s_grid, int m_levels) {
  m.validate();
  if (m.num_vars > kDenseMaxQubits)
    throw capacity_error("dense diagonalisation supports at most 12 qubits");
  if (m_levels < 1) throw parameter_error("m_levels must be positive");
  SpectrumTrace trace;
  for (double s : s_grid) {
    Eigen::MatrixXd H = detail::assemble_hamiltonian(m, sch, s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    SpectrumPoint pt;
    pt.s = s;
    const int keep = std::min<int>(m_levels, ev.size());
    for (int k = 0; k < keep; ++k) pt.evals.push_back(ev[k]);
    pt.gap = 0.0;
    for (int k = 1; k < ev.size(); ++k)
      if (ev[k] > ev[0] + kGapDegeneracyTol) {
        pt.gap = ev[k] - ev[0];
        break;
      }
    trace.points.push_back(std::move(pt));
  }
  return trace;
}

struct MinGap {
  double gap = 0.0;
  double s_star = 0.0;
};

// Grid minimum with parabolic refinement through the three bracketing points.
inline MinGap min_gap(const SpectrumTrace& trace) {
  if (trace.points.empty()) throw parameter_error("empty spectrum trace");
  std::size_t best = 0;
  for (std::size_t i = 1; i < trace.points.size(); ++i)
    if (trace.points[i].gap < trace.points[best].gap) best = i;
  MinGap out{trace.points[best].gap, trace.points[best].s};
  if (best == 0 || best + 1 == trace.points.size()) return out;
  const double x0 = trace.points[best - 1].s, y0 = trace.points[best - 1].gap;
  const double x1 = trace.points[best].s, y1 = trace.points[best].gap;
  const double x2 = trace.points[best + 1].s, y2 = trace.points[best + 1].gap;
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curv = (d12 - d01) / (x2 - x0);
  if (curv <= 0.0) return out;
  double sv = 0.5 * (x0 + x1 - d01 / curv);
  if (sv < x0 || sv > x2) return out;
  // parabola value at the vertex (Newton form)
  double gv = y0 + d01 * (sv - x0) + curv * (sv - x0) * (sv - x1);
  out.s_star = sv;
  out.gap = std::min(out.gap, std::max(gv, 0.0));
  return out;
}

inline double landau_zener_prob(double delta, double v) {
  if (delta < 0.0) throw parameter_error("gap must be nonnegative");
  if (!(v > 0.0)) throw parameter_error("sweep rate must be positive");
  return std::exp(-M_PI * delta * delta / (2.0 * v));
}

// max_s ||dH/ds|| / gap_min^2, a heuristic runtime scale (not a bound
// constant). Depends on the s-grid only, not on the time parametrisation.
inline double adiabatic_time_estimate(const IsingModel& m, const Schedule& sch,
                                      const SpectrumTrace& trace) {
  m.validate();
  if (m.num_vars > kDenseMaxQubits)
    throw capacity_error("dense diagonalisation supports at most 12 qubits");
  MinGap mg = min_gap(trace);
  if (mg.gap <= 1e-12) return std::numeric_limits<double>::infinity();
  double max_norm = 0.0;
  const double eps = 1e-6;
  for (const auto& pt : trace.points) {
    double lo = std::max(0.0, pt.s - eps);
    double hi = std::min(1.0, pt.s + eps);
    Eigen::MatrixXd dH = (detail::assemble_hamiltonian(m, sch, hi) -
                          detail::assemble_hamiltonian(m, sch, lo)) /
                         (hi - lo);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dH, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    max_norm = std::max({max_norm, std::abs(ev[0]), std::abs(ev[ev.size() - 1])});
  }
  return max_norm / (mg.gap * mg.gap);
}

struct AnnealResult {
  StateVector final_state;
  SampleSet samples;
  EvolveStats stats;
};

struct AnnealInit {
  std::optional<SpinConfig> config;  // empty: start from the driver ground state
};

inline AnnealResult anneal_run(const IsingModel& m, const Schedule& sch, const AnnealInit& init,
                               double dt, long long shots, std::uint64_t seed) {
  StateVector psi = init.config ? prepare_basis_state(*init.config)
                                : prepare_driver_ground(m.num_vars);
  AnnealResult out;
  out.final_state = evolve(m, sch, std::move(psi), dt, &out.stats);
  out.samples = sample_measurements(out.final_state, m, shots, seed);
  return out;
}

// Per-run RNG derivation for ensembles: fixed mixing of (master seed, run index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t run_index) {
  std::uint64_t x = master + 0x9E3779B97F4A7C15ull * (run_index + 1);
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

}  // namespace annealkit
