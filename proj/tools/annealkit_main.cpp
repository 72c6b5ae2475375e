#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "annealkit/baseline.hpp"
#include "annealkit/embed.hpp"
#include "annealkit/errors.hpp"
#include "annealkit/experiments.hpp"
#include "annealkit/model.hpp"
#include "annealkit/model_io.hpp"
#include "annealkit/poly.hpp"
#include "annealkit/quadratize.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw annealkit::format_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

annealkit::HardwareGraph hardware_from_text(const std::string& text) {
  std::istringstream in(text);
  int n, m;
  if (!(in >> n >> m)) throw annealkit::format_error("expected 'n m' header");
  annealkit::HardwareGraph hw(n);
  for (int k = 0; k < m; ++k) {
    int i, j;
    if (!(in >> i >> j)) throw annealkit::format_error("truncated edge list");
    hw.add_edge(i, j);
  }
  return hw;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::filesystem::path p(out_path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"annealkit: Ising/QUBO encoding, annealing simulation and benchmarking"};
  app.require_subcommand(1);

  const std::vector<std::string> experiment_names = {
      "mis-fig2",  "interface-grid", "cubic-reduction", "lz-sweep",
      "gap-trace", "glass-tts",      "false-vacuum",    "factor-small"};

  struct ExperimentArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    long long shots = 1000;
  };
  std::map<std::string, ExperimentArgs> exp_args;
  for (const auto& name : experiment_names) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    auto& args = exp_args[name];
    sub->add_option("--config", args.config_path, "experiment parameter overrides (JSON)");
    sub->add_option("--out", args.out_dir, "output directory for CSV and summary JSON");
    sub->add_option("--seed", args.seed, "master RNG seed");
    sub->add_option("--shots", args.shots, "measurement shots where applicable");
  }

  auto* solve = app.add_subcommand("solve", "solve an Ising model instance");
  std::string solve_model, solve_method = "brute", solve_out;
  std::uint64_t solve_seed = 0;
  long long solve_shots = 1000, solve_sweeps = 1000;
  int solve_restarts = 1;
  double solve_tau = 10.0, solve_dt = 0.01;
  solve->add_option("--model", solve_model, "Ising model JSON file")->required();
  solve->add_option("--method", solve_method, "sim | sa | brute")
      ->check(CLI::IsMember({"sim", "sa", "brute"}));
  solve->add_option("--out", solve_out, "CSV output file (default stdout)");
  solve->add_option("--seed", solve_seed, "RNG seed");
  solve->add_option("--shots", solve_shots, "shots (sim)");
  solve->add_option("--sweeps", solve_sweeps, "sweeps (sa)");
  solve->add_option("--restarts", solve_restarts, "restarts (sa)");
  solve->add_option("--tau", solve_tau, "anneal duration (sim)");
  solve->add_option("--dt", solve_dt, "time step (sim)");

  auto* reduce = app.add_subcommand("reduce", "reduce a binary polynomial to quadratic");
  std::string reduce_poly, reduce_out;
  double reduce_penalty = 0.0;
  reduce->add_option("--poly", reduce_poly, "polynomial text file")->required();
  reduce->add_option("--penalty", reduce_penalty, "penalty weight (default: automatic bound)");
  reduce->add_option("--out", reduce_out, "JSON output file (default stdout)");

  auto* embed = app.add_subcommand("embed", "embed a logical model onto a hardware graph");
  std::string embed_model, embed_hw, embed_map, embed_out;
  double embed_chain = 0.0;
  embed->add_option("--model", embed_model, "logical Ising model JSON file")->required();
  embed->add_option("--hardware", embed_hw, "hardware edge-list text file")->required();
  embed->add_option("--embedding", embed_map, "chain map JSON file")->required();
  embed->add_option("--chain-strength", embed_chain, "override the default chain strength");
  embed->add_option("--out", embed_out, "JSON output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (const auto& name : experiment_names) {
      if (!app.got_subcommand(name)) continue;
      const auto& args = exp_args[name];
      nlohmann::json cfg = nlohmann::json::object();
      if (!args.config_path.empty()) {
        try {
          cfg = nlohmann::json::parse(slurp(args.config_path));
        } catch (const nlohmann::json::exception& e) {
          throw annealkit::format_error(args.config_path + ": " + e.what());
        }
      }
      auto summary = annealkit::run_experiment(name, cfg, args.out_dir, args.seed, args.shots);
      std::cout << summary.dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(solve)) {
      annealkit::IsingModel m = annealkit::load_ising(solve_model);
      annealkit::SampleSet samples;
      if (solve_method == "brute") {
        annealkit::GroundResult g = annealkit::brute_force_ground(m);
        for (const auto& c : g.configs) samples.add(c, g.min_energy, 1);
        samples.sort();
      } else if (solve_method == "sa") {
        annealkit::SaParams params;
        params.sweeps = solve_sweeps;
        params.restarts = solve_restarts;
        samples = annealkit::simulated_annealing(m, params, solve_seed);
      } else {
        annealkit::Schedule sch = annealkit::linear_forward(solve_tau);
        annealkit::AnnealResult res =
            annealkit::anneal_run(m, sch, {}, solve_dt, solve_shots, solve_seed);
        samples = std::move(res.samples);
      }
      emit(solve_out, annealkit::sampleset_to_csv(samples));
      return 0;
    }

    if (app.got_subcommand(reduce)) {
      annealkit::PolyBinary p = annealkit::poly_from_text(slurp(reduce_poly));
      std::optional<double> penalty;
      if (reduce_penalty != 0.0) penalty = reduce_penalty;
      annealkit::ReductionResult r = annealkit::reduce_to_quadratic(p, penalty);
      nlohmann::ordered_json j;
      j["qubo"] = annealkit::qubo_to_json(r.qubo);
      j["penalty"] = r.penalty;
      j["ancillae"] = nlohmann::ordered_json::array();
      for (const auto& rec : r.ancillae.records)
        j["ancillae"].push_back({{"ancilla", rec.ancilla},
                                 {"parent_i", rec.parent_i},
                                 {"parent_j", rec.parent_j}});
      if (!r.warning.empty()) j["warning"] = r.warning;
      emit(reduce_out, j.dump(2) + "\n");
      return 0;
    }

    if (app.got_subcommand(embed)) {
      annealkit::IsingModel logical = annealkit::load_ising(embed_model);
      annealkit::HardwareGraph hw = hardware_from_text(slurp(embed_hw));
      annealkit::Embedding e;
      try {
        e = annealkit::embedding_from_json(nlohmann::json::parse(slurp(embed_map)));
      } catch (const nlohmann::json::exception& ex) {
        throw annealkit::format_error(embed_map + ": " + ex.what());
      }
      annealkit::EmbeddingReport rep = annealkit::validate_embedding(hw, logical, e);
      if (!rep.valid) {
        for (const auto& v : rep.violations) std::cerr << "embedding error: " << v << "\n";
        return 2;
      }
      double chain =
          embed_chain > 0.0 ? embed_chain : annealkit::default_chain_strength(logical);
      annealkit::IsingModel phys = annealkit::apply_embedding(hw, logical, e, chain);
      nlohmann::ordered_json j;
      j["physical_model"] = annealkit::ising_to_json(phys);
      j["chain_strength"] = chain;
      emit(embed_out, j.dump(2) + "\n");
      return 0;
    }
  } catch (const annealkit::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
