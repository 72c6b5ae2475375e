#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "annealkit/baseline.hpp"
#include "annealkit/bench.hpp"
#include "annealkit/dynamics.hpp"
#include "annealkit/embed.hpp"
#include "annealkit/encode.hpp"
#include "annealkit/errors.hpp"
#include "annealkit/model.hpp"
#include "annealkit/model_io.hpp"
#include "annealkit/quadratize.hpp"
#include "annealkit/schedule.hpp"

namespace annealkit {

// ---------------------------------------------------------------------------
// Two-level Landau-Zener benchmark: H = (v t / 2) sigma^z + (delta / 2) sigma^x
// swept over t in [-T, T], realised through the generic schedule machinery
// (single spin with h = 1, tabulated B(s) = vT(s - 1/2), constant A = -delta/2).

struct LzResult {
  double p_excited = 0.0;
  double p_formula = 0.0;
};

inline LzResult lz_sweep(double delta, double v, double half_window_T, double dt) {
  if (!(v > 0.0) || !(half_window_T > 0.0)) throw parameter_error("v and T must be positive");
  IsingModel m(1);
  m.add_h(0, 1.0);

  Schedule sch;
  const double a = v * half_window_T / 2.0;  // |diagonal| at the window edge
  sch.B = Envelope::from_knots({{0.0, -a}, {1.0, a}});
  sch.A = Envelope::constant(-delta / 2.0);
  sch.path.segments = {{2.0 * half_window_T, 0.0, 1.0}};
  sch.path.validate();

  // Basis: index 0 <=> s=-1 (diagonal +B), index 1 <=> s=+1 (diagonal -B).
  // Exact eigenvectors of the 2x2 endpoint Hamiltonians.
  const double b = delta / 2.0;
  const double r = std::sqrt(a * a + b * b);
  StateVector psi;
  psi.n = 1;
  if (delta > 0.0) {
    double nrm = std::sqrt(b * b + (a + r) * (a + r));
    psi.amp = {{b / nrm, 0.0}, {-(a + r) / nrm, 0.0}};  // ground state at t=-T
  } else {
    psi.amp = {{0.0, 0.0}, {1.0, 0.0}};
  }
  psi = evolve(m, sch, std::move(psi), dt);

  LzResult out;
  if (delta > 0.0) {
    double nrm = std::sqrt(b * b + (a + r) * (a + r));
    std::complex<double> excited0(b / nrm, 0.0), excited1((a + r) / nrm, 0.0);
    std::complex<double> ov = std::conj(excited0) * psi.amp[0] + std::conj(excited1) * psi.amp[1];
    out.p_excited = std::norm(ov);
  } else {
    out.p_excited = std::norm(psi.amp[1]);  // diabatic state
  }
  out.p_formula = landau_zener_prob(delta, v);
  return out;
}

// Double-well potential used by the false-vacuum experiment: metastable
// minimum at level 1, true minimum at level 4, two-site barrier between, and a
// rising wall beyond. The wells are nearly degenerate so that wall tunnelling
// at the reverse-anneal hold point is close to resonant.
inline PotentialSpec default_double_well() {
  PotentialSpec p;
  p.phi_min = 0.0;
  p.delta_phi = 0.3;
  p.values = {0.8, 0.0, 0.7, 0.7, -0.05, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3};
  return p;
}

struct FalseVacuumRow {
  double hold = 0.0;
  int d = 0;
  double phi = 0.0;
  double fraction = 0.0;  // reads in this bin / total reads
  double density = 0.0;   // (1/N_tot) dN/dphi
};

struct FalseVacuumReport {
  std::vector<FalseVacuumRow> rows;
  std::vector<double> holds;
  std::vector<double> true_mass;     // per hold time
  std::vector<double> false_mass;
  std::vector<double> invalid_mass;
  int false_level = 0;
  int true_level = 0;
};

inline FalseVacuumReport false_vacuum_experiment(const PotentialSpec& pot,
                                                 const std::vector<double>& holds,
                                                 double s_target, double ramp, double dt,
                                                 long long shots, std::uint64_t seed) {
  auto [model, code] = encode_domain_wall_potential(pot);
  const int M = code.spins;
  int false_level = 1, true_level = 0;
  for (int d = 0; d < pot.levels(); ++d)
    if (pot.values[d] < pot.values[true_level]) true_level = d;
  // metastable start: lowest local minimum that is not the global one
  for (int d = 1; d + 1 < pot.levels(); ++d)
    if (d != true_level && pot.values[d] <= pot.values[d - 1] && pot.values[d] <= pot.values[d + 1]) {
      false_level = d;
      break;
    }

  std::vector<int> start_spins(M);
  for (int i = 0; i < M; ++i) start_spins[i] = i < false_level ? -1 : 1;
  SpinConfig start = SpinConfig::from_spins(start_spins);

  FalseVacuumReport rep;
  rep.holds = holds;
  rep.false_level = false_level;
  rep.true_level = true_level;
  std::uint64_t run = 0;
  for (double hold : holds) {
    Schedule sch = hold > 0.0 ? reverse_path(s_target, ramp, hold, ramp)
                              : reverse_path(s_target, ramp, 0.0, ramp);
    AnnealInit init;
    init.config = start;
    AnnealResult res = anneal_run(model, sch, init, dt, shots, derive_seed(seed, run++));

    std::vector<double> bin_mass(pot.levels(), 0.0);
    double invalid = 0.0;
    for (const auto& e : res.samples.entries) {
      auto dec = decode_domain_wall(code, e.config);
      double w = static_cast<double>(e.count) / static_cast<double>(shots);
      if (dec.valid)
        bin_mass[dec.d] += w;
      else
        invalid += w;
    }
    for (int d = 0; d < pot.levels(); ++d)
      rep.rows.push_back({hold, d, pot.phi(d), bin_mass[d], bin_mass[d] / pot.delta_phi});
    rep.true_mass.push_back(bin_mass[true_level]);
    rep.false_mass.push_back(bin_mass[false_level]);
    rep.invalid_mass.push_back(invalid);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Named experiments. Each writes a CSV and a JSON summary into out_dir and
// returns the summary.

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline double cfg_num(const nlohmann::json& cfg, const char* key, double fallback) {
  return cfg.contains(key) ? cfg[key].get<double>() : fallback;
}
inline long long cfg_int(const nlohmann::json& cfg, const char* key, long long fallback) {
  return cfg.contains(key) ? cfg[key].get<long long>() : fallback;
}

inline std::string csv_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

}  // namespace detail

inline nlohmann::ordered_json run_mis_fig2(const nlohmann::json& cfg,
                                           const std::filesystem::path& out_dir) {
  double lam = detail::cfg_num(cfg, "lambda", 1.0);
  double lam_prime = detail::cfg_num(cfg, "lambda_prime", 1.0);
  Graph g = five_node_network();
  IsingModel m = encode_max_independent_set(g, lam, lam_prime);
  GroundResult ground = brute_force_ground(m);

  std::ostringstream csv;
  csv << "config_bitstring,energy,selected_nodes,independent\n";
  nlohmann::ordered_json sets = nlohmann::ordered_json::array();
  bool all_independent = true;
  for (const auto& c : ground.configs) {
    auto dec = decode_mis(c, g);
    all_independent = all_independent && dec.independent;
    std::string nodes;
    for (int v : dec.selected) nodes += (nodes.empty() ? "" : " ") + std::to_string(v);
    csv << c.to_string() << "," << format_double(ising_energy(m, c)) << "," << nodes << ","
        << (dec.independent ? 1 : 0) << "\n";
    sets.push_back(dec.selected);
  }
  detail::write_file(out_dir / "mis-fig2.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["experiment"] = "mis-fig2";
  summary["ground_energy"] = ground.min_energy;
  summary["ground_sets"] = sets;
  summary["all_independent"] = all_independent;
  detail::write_file(out_dir / "mis-fig2.json", summary.dump(2) + "\n");
  return summary;
}

inline nlohmann::ordered_json run_interface_grid(const nlohmann::json& cfg,
                                                 const std::filesystem::path& out_dir) {
  int side = static_cast<int>(detail::cfg_int(cfg, "side", 2));
  double lam = detail::cfg_num(cfg, "lambda", 1.0);
  double lam_prime = detail::cfg_num(cfg, "lambda_prime", 10.0 * lam);
  GridSpec grid(side);
  IsingModel m = encode_interface_min(grid, lam, lam_prime);
  GroundResult ground = brute_force_ground(m);

  std::ostringstream csv;
  csv << "config_bitstring,energy,magnetization\n";
  bool balanced = true;
  for (const auto& c : ground.configs) {
    int mag = 0;
    for (int i = 0; i < c.num_vars; ++i) mag += c.spin(i);
    balanced = balanced && (mag == 0);
    csv << c.to_string() << "," << format_double(ising_energy(m, c)) << "," << mag << "\n";
  }
  detail::write_file(out_dir / "interface-grid.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["experiment"] = "interface-grid";
  summary["side"] = side;
  summary["ground_energy"] = ground.min_energy;
  summary["ground_count"] = ground.configs.size();
  summary["all_balanced"] = balanced;
  detail::write_file(out_dir / "interface-grid.json", summary.dump(2) + "\n");
  return summary;
}

inline nlohmann::ordered_json run_cubic_reduction(const nlohmann::json& cfg,
                                                  const std::filesystem::path& out_dir) {
  double lambda = detail::cfg_num(cfg, "penalty", 8.0);
  PolyBinary spin;
  spin.add_term({0, 1, 2}, 1.0);
  PolyBinary binary = spin_poly_to_binary(spin);
  ReductionResult red = reduce_to_quadratic(binary, lambda);
  ReductionReport rep = verify_reduction(binary, red.qubo, red.ancillae);

  std::ostringstream csv;
  csv << "term,coefficient\n";
  for (const auto& [idx, c] : binary.terms) {
    std::string key = "c";
    for (int i : idx) key += "_" + std::to_string(i);
    csv << key << "," << format_double(c) << "\n";
  }
  detail::write_file(out_dir / "cubic-reduction.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["experiment"] = "cubic-reduction";
  summary["penalty"] = lambda;
  summary["ancilla_count"] = red.ancillae.records.size();
  summary["verification_passed"] = rep.passed;
  summary["offset_shift"] = rep.offset_shift;
  detail::write_file(out_dir / "cubic-reduction.json", summary.dump(2) + "\n");
  return summary;
}

inline nlohmann::ordered_json run_lz_sweep(const nlohmann::json& cfg,
                                           const std::filesystem::path& out_dir) {
  std::vector<double> vs = {0.5, 1.0, 2.0, 4.0};
  if (cfg.contains("rates")) vs = cfg["rates"].get<std::vector<double>>();
  double delta = detail::cfg_num(cfg, "delta", 1.0);
  double dt = detail::cfg_num(cfg, "dt", 0.002);

  std::ostringstream csv;
  csv << "v,p_simulated,p_formula,abs_error\n";
  double max_err = 0.0;
  for (double v : vs) {
    double T = 40.0 / v;  // vT = 40 >> delta
    LzResult r = lz_sweep(delta, v, T, dt);
    double err = std::abs(r.p_excited - r.p_formula);
    max_err = std::max(max_err, err);
    csv << format_double(v) << "," << format_double(r.p_excited) << ","
        << format_double(r.p_formula) << "," << format_double(err) << "\n";
  }
  detail::write_file(out_dir / "lz-sweep.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["experiment"] = "lz-sweep";
  summary["delta"] = delta;
  summary["max_abs_error"] = max_err;
  detail::write_file(out_dir / "lz-sweep.json", summary.dump(2) + "\n");
  return summary;
}

inline nlohmann::ordered_json run_gap_trace(const nlohmann::json& cfg,
                                            const std::filesystem::path& out_dir) {
  IsingModel m;
  if (cfg.contains("model")) {
    m = ising_from_json(cfg["model"]);
  } else {
    m = IsingModel(1);
    m.add_h(0, 1.0);
  }
  int grid_points = static_cast<int>(detail::cfg_int(cfg, "grid_points", 101));
  Schedule sch = linear_forward(1.0);
  std::vector<double> grid;
  for (int i = 0; i < grid_points; ++i)
    grid.push_back(static_cast<double>(i) / static_cast<double>(grid_points - 1));
  SpectrumTrace trace = instantaneous_spectrum(m, sch, grid, 2);
  MinGap mg = min_gap(trace);

  std::ostringstream csv;
  csv << "s,E0,E1,gap\n";
  for (const auto& pt : trace.points)
    csv << format_double(pt.s) << "," << format_double(pt.evals[0]) << ","
        << format_double(pt.evals.size() > 1 ? pt.evals[1] : pt.evals[0]) << ","
        << format_double(pt.gap) << "\n";
  detail::write_file(out_dir / "gap-trace.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["experiment"] = "gap-trace";
  summary["gap_min"] = mg.gap;
  summary["s_star"] = mg.s_star;
  summary["adiabatic_time_estimate"] = adiabatic_time_estimate(m, sch, trace);
  detail::write_file(out_dir / "gap-trace.json", summary.dump(2) + "\n");
  return summary;
}

inline nlohmann::ordered_json run_glass_tts(const nlohmann::json& cfg,
                                            const std::filesystem::path& out_dir,
                                            std::uint64_t seed) {
  int n = static_cast<int>(detail::cfg_int(cfg, "n", 16));
  int instances = static_cast<int>(detail::cfg_int(cfg, "instances", 10));
  SaParams params;
  params.sweeps = detail::cfg_int(cfg, "sweeps", 1000);
  params.restarts = static_cast<int>(detail::cfg_int(cfg, "restarts", 200));
  double p_target = detail::cfg_num(cfg, "p", 0.99);
  double eps_rel = detail::cfg_num(cfg, "epsilon_rel", 0.05);
  // deterministic abstract cost per restart: one unit per attempted spin flip
  const double t_run = static_cast<double>(params.sweeps) * n;

  std::ostringstream csv;
  csv << "instance,seed,ground_energy,p_s,tts,time_to_eps,approx_ratio\n";
  std::vector<double> tts_values;
  for (int k = 0; k < instances; ++k) {
    std::uint64_t inst_seed = derive_seed(seed, static_cast<std::uint64_t>(k));
    IsingModel m = random_spin_glass(n, inst_seed, CouplingLaw::pm_one, 1.0);
    GroundResult ground = brute_force_ground(m);
    double worst = brute_force_max_energy(m);
    SampleSet samples = simulated_annealing(m, params, derive_seed(seed, 1000 + k));
    double p_s = success_probability(samples, ground.min_energy);
    double t = tts(p_s, t_run, p_target);
    double t_eps = time_to_epsilon(samples, t_run, ground.min_energy,
                                   eps_rel * std::abs(ground.min_energy), p_target);
    double ratio = approximation_ratio(samples.best_energy(), ground.min_energy, worst);
    tts_values.push_back(t);
    csv << k << "," << inst_seed << "," << format_double(ground.min_energy) << ","
        << format_double(p_s) << "," << detail::csv_num(t) << "," << detail::csv_num(t_eps) << ","
        << format_double(ratio) << "\n";
  }
  detail::write_file(out_dir / "glass-tts.csv", csv.str());

  Percentiles pct = percentiles_25_50_75(tts_values);
  nlohmann::ordered_json summary;
  summary["experiment"] = "glass-tts";
  summary["n"] = n;
  summary["instances"] = instances;
  summary["t_run"] = t_run;
  summary["tts_p25"] = pct.p25;
  summary["tts_p50"] = pct.p50;
  summary["tts_p75"] = pct.p75;
  detail::write_file(out_dir / "glass-tts.json", summary.dump(2) + "\n");
  return summary;
}

inline nlohmann::ordered_json run_false_vacuum(const nlohmann::json& cfg,
                                               const std::filesystem::path& out_dir,
                                               std::uint64_t seed, long long shots) {
  PotentialSpec pot =
      cfg.contains("potential") ? potential_from_json(cfg["potential"]) : default_double_well();
  std::vector<double> holds = {0.0, 5.0, 20.0, 80.0};
  if (cfg.contains("holds")) holds = cfg["holds"].get<std::vector<double>>();
  double s_target = detail::cfg_num(cfg, "s_target", 0.75);
  double ramp = detail::cfg_num(cfg, "ramp", 8.0);
  double dt = detail::cfg_num(cfg, "dt", 0.01);

  FalseVacuumReport rep = false_vacuum_experiment(pot, holds, s_target, ramp, dt, shots, seed);

  std::ostringstream csv;
  csv << "hold,d,phi,fraction,density\n";
  for (const auto& row : rep.rows)
    csv << format_double(row.hold) << "," << row.d << "," << format_double(row.phi) << ","
        << format_double(row.fraction) << "," << format_double(row.density) << "\n";
  detail::write_file(out_dir / "false-vacuum.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["experiment"] = "false-vacuum";
  summary["false_level"] = rep.false_level;
  summary["true_level"] = rep.true_level;
  summary["holds"] = rep.holds;
  summary["true_mass"] = rep.true_mass;
  summary["false_mass"] = rep.false_mass;
  summary["invalid_mass"] = rep.invalid_mass;
  detail::write_file(out_dir / "false-vacuum.json", summary.dump(2) + "\n");
  return summary;
}

inline nlohmann::ordered_json run_factor_small(const nlohmann::json& cfg,
                                               const std::filesystem::path& out_dir) {
  std::uint64_t N = static_cast<std::uint64_t>(detail::cfg_int(cfg, "N", 15));
  int bits_p = static_cast<int>(detail::cfg_int(cfg, "bits_p", 3));
  int bits_q = static_cast<int>(detail::cfg_int(cfg, "bits_q", 3));
  FactoringEncoding enc = encode_factoring_poly(N, bits_p, bits_q);
  ReductionResult red = reduce_to_quadratic(enc.poly);

  if (red.qubo.num_vars > 24) throw capacity_error("reduced factoring instance too large to enumerate");
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 0; mask < (1u << red.qubo.num_vars); ++mask)
    best = std::min(best, qubo_energy(red.qubo, mask));

  std::ostringstream csv;
  csv << "p,q,energy\n";
  nlohmann::ordered_json factors = nlohmann::ordered_json::array();
  for (std::uint32_t mask = 0; mask < (1u << red.qubo.num_vars); ++mask) {
    if (qubo_energy(red.qubo, mask) > best + 1e-9) continue;
    std::uint64_t p = enc.decode_p(mask);
    std::uint64_t q = enc.decode_q(mask);
    csv << p << "," << q << "," << format_double(qubo_energy(red.qubo, mask)) << "\n";
    factors.push_back({p, q});
  }
  detail::write_file(out_dir / "factor-small.csv", csv.str());

  nlohmann::ordered_json summary;
  summary["experiment"] = "factor-small";
  summary["N"] = N;
  summary["ground_energy"] = best;
  summary["certified"] = std::abs(best) <= 1e-9;
  summary["factors"] = factors;
  detail::write_file(out_dir / "factor-small.json", summary.dump(2) + "\n");
  return summary;
}

inline nlohmann::ordered_json run_experiment(const std::string& name, const nlohmann::json& cfg,
                                             const std::filesystem::path& out_dir,
                                             std::uint64_t seed, long long shots) {
  if (name == "mis-fig2") return run_mis_fig2(cfg, out_dir);
  if (name == "interface-grid") return run_interface_grid(cfg, out_dir);
  if (name == "cubic-reduction") return run_cubic_reduction(cfg, out_dir);
  if (name == "lz-sweep") return run_lz_sweep(cfg, out_dir);
  if (name == "gap-trace") return run_gap_trace(cfg, out_dir);
  if (name == "glass-tts") return run_glass_tts(cfg, out_dir, seed);
  if (name == "false-vacuum") return run_false_vacuum(cfg, out_dir, seed, shots);
  if (name == "factor-small") return run_factor_small(cfg, out_dir);
  throw parameter_error("unknown experiment '" + name + "'");
}

}  // namespace annealkit
