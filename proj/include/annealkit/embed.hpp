#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "annealkit/errors.hpp"
#include "annealkit/model.hpp"

namespace annealkit {

struct HardwareGraph {
  int num_qubits = 0;
  std::set<std::pair<int, int>> edges;  // i < j
  std::string name;

  HardwareGraph() = default;
  explicit HardwareGraph(int n, std::string label = "") : num_qubits(n), name(std::move(label)) {}

  void add_edge(int i, int j) {
    if (i == j) throw parameter_error("self-loop");
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= num_qubits) throw parameter_error("edge endpoint out of range");
    edges.insert({i, j});
  }
  bool has_edge(int i, int j) const {
    if (i > j) std::swap(i, j);
    return edges.count({i, j}) > 0;
  }

  static HardwareGraph grid(int rows, int cols) {
    HardwareGraph hw(rows * cols, "grid");
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        if (c + 1 < cols) hw.add_edge(r * cols + c, r * cols + c + 1);
        if (r + 1 < rows) hw.add_edge(r * cols + c, (r + 1) * cols + c);
      }
    return hw;
  }

  static HardwareGraph king_graph(int rows, int cols) {
    HardwareGraph hw(rows * cols, "king-graph");
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        for (int dr = 0; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc <= 0) continue;
            int rr = r + dr, cc = c + dc;
            if (rr < rows && cc >= 0 && cc < cols) hw.add_edge(r * cols + c, rr * cols + cc);
          }
    return hw;
  }
};

/// Map from logical variable to its chain of physical qubits.
struct Embedding {
  std::map<int, std::vector<int>> chains;

  static Embedding identity(int n) {
    Embedding e;
    for (int i = 0; i < n; ++i) e.chains[i] = {i};
    return e;
  }
};

// JSON: {"0":[q,...], "1":[q,...], ...}
inline Embedding embedding_from_json(const nlohmann::json& j) {
  Embedding e;
  for (const auto& [key, arr] : j.items()) e.chains[std::stoi(key)] = arr.get<std::vector<int>>();
  return e;
}

struct EmbeddingReport {
  bool valid = true;
  std::vector<std::string> violations;

  void fail(std::string msg) {
    valid = false;
    violations.push_back(std::move(msg));
  }
};

inline EmbeddingReport validate_embedding(const HardwareGraph& hw, const IsingModel& logical,
                                          const Embedding& e) {
  EmbeddingReport rep;
  std::set<int> used;
  for (const auto& [var, chain] : e.chains) {
    if (chain.empty()) {
      rep.fail("chain for logical " + std::to_string(var) + " is empty");
      continue;
    }
    for (int q : chain) {
      if (q < 0 || q >= hw.num_qubits)
        rep.fail("qubit " + std::to_string(q) + " out of hardware range");
      else if (!used.insert(q).second)
        rep.fail("qubit " + std::to_string(q) + " appears in more than one chain");
    }
    // connectivity within the hardware graph
    std::set<int> members(chain.begin(), chain.end());
    std::set<int> seen{chain.front()};
    std::queue<int> frontier;
    frontier.push(chain.front());
    while (!frontier.empty()) {
      int q = frontier.front();
      frontier.pop();
      for (int r : members)
        if (!seen.count(r) && hw.has_edge(q, r)) {
          seen.insert(r);
          frontier.push(r);
        }
    }
    if (seen.size() != members.size())
      rep.fail("chain for logical " + std::to_string(var) + " is not connected");
  }
  for (int i = 0; i < logical.num_vars; ++i)
    if (!e.chains.count(i)) rep.fail("logical variable " + std::to_string(i) + " has no chain");
  for (const auto& [ij, v] : logical.J) {
    auto ci = e.chains.find(ij.first);
    auto cj = e.chains.find(ij.second);
    if (ci == e.chains.end() || cj == e.chains.end()) continue;
    bool linked = false;
    for (int a : ci->second)
      for (int b : cj->second)
        if (hw.has_edge(a, b)) linked = true;
    if (!linked)
      rep.fail("logical coupling (" + std::to_string(ij.first) + "," + std::to_string(ij.second) +
               ") has no physical edge between its chains");
  }
  return rep;
}

// Logical fields split equally over chain members; each logical coupling split
// equally over every available inter-chain edge; intra-chain hardware edges get
// -chain_strength (ferromagnetic under the Eq.-style sign convention).
inline IsingModel apply_embedding(const HardwareGraph& hw, const IsingModel& logical,
                                  const Embedding& e, double chain_strength) {
  if (!(chain_strength > 0.0)) throw parameter_error("chain_strength must be positive");
  auto rep = validate_embedding(hw, logical, e);
  if (!rep.valid) throw parameter_error("invalid embedding: " + rep.violations.front());

  IsingModel phys(hw.num_qubits);
  for (const auto& [i, v] : logical.h) {
    const auto& chain = e.chains.at(i);
    for (int q : chain) phys.add_h(q, v / static_cast<double>(chain.size()));
  }
  for (const auto& [ij, v] : logical.J) {
    std::vector<std::pair<int, int>> cross;
    for (int a : e.chains.at(ij.first))
      for (int b : e.chains.at(ij.second))
        if (hw.has_edge(a, b)) cross.push_back({std::min(a, b), std::max(a, b)});
    for (const auto& [a, b] : cross) phys.add_J(a, b, v / static_cast<double>(cross.size()));
  }
  for (const auto& [var, chain] : e.chains)
    for (std::size_t a = 0; a < chain.size(); ++a)
      for (std::size_t b = a + 1; b < chain.size(); ++b)
        if (hw.has_edge(chain[a], chain[b])) phys.add_J(chain[a], chain[b], -chain_strength);
  phys.offset = logical.offset;
  return phys;
}

// Conservative sufficient default: 2*sum|J| + sum|h|.
inline double default_chain_strength(const IsingModel& logical) {
  double s = 0.0;
  for (const auto& [i, v] : logical.h) s += std::abs(v);
  double js = 0.0;
  for (const auto& [ij, v] : logical.J) js += std::abs(v);
  double out = 2.0 * js + s;
  return out > 0.0 ? out : 1.0;
}

struct ChainStats {
  double chain_break_fraction = 0.0;
  std::vector<long long> per_chain_breaks;
};

namespace detail {
// Deterministic tie coin: one bit derived from (seed, chain index).
inline int tie_coin(std::uint64_t seed, int chain_index) {
  std::uint64_t x = seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(chain_index) + 1));
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return (x & 1ull) ? 1 : -1;
}
}  // namespace detail

inline std::pair<SpinConfig, ChainStats> decode_majority(const Embedding& e,
                                                         const SpinConfig& physical,
                                                         std::uint64_t seed) {
  std::vector<int> spins;
  ChainStats stats;
  int chain_index = 0;
  long long broken = 0;
  for (const auto& [var, chain] : e.chains) {
    int plus = 0;
    for (int q : chain) {
      if (q >= physical.num_vars) throw dimension_error("physical config does not cover chain");
      if (physical.spin(q) > 0) ++plus;
    }
    int minus = static_cast<int>(chain.size()) - plus;
    int s;
    if (plus > minus)
      s = 1;
    else if (minus > plus)
      s = -1;
    else
      s = detail::tie_coin(seed, chain_index);
    bool unanimous = (plus == 0 || minus == 0);
    stats.per_chain_breaks.push_back(unanimous ? 0 : 1);
    if (!unanimous) ++broken;
    spins.push_back(s);
    ++chain_index;
  }
  stats.chain_break_fraction =
      e.chains.empty() ? 0.0 : static_cast<double>(broken) / static_cast<double>(e.chains.size());
  return {SpinConfig::from_spins(spins), stats};
}

// ---------------------------------------------------------------------------
// QAC repetition code: k copies per logical qubit, ferromagnetic penalty
// between copies, majority-vote decoding (k odd, so no ties).

struct QacCode {
  int num_logical = 0;
  int k = 0;
  double penalty = 0.0;

  int physical_index(int logical, int copy) const { return logical * k + copy; }
};

inline std::pair<IsingModel, QacCode> qac_encode(const IsingModel& logical, int k, double penalty) {
  if (k < 3 || k % 2 == 0) throw parameter_error("k must be odd and >= 3");
  if (!(penalty > 0.0)) throw parameter_error("penalty must be positive");
  logical.validate();
  QacCode code{logical.num_vars, k, penalty};
  IsingModel phys(logical.num_vars * k);
  for (const auto& [i, v] : logical.h)
    for (int c = 0; c < k; ++c) phys.add_h(code.physical_index(i, c), v);
  for (const auto& [ij, v] : logical.J)
    for (int c = 0; c < k; ++c)
      phys.add_J(code.physical_index(ij.first, c), code.physical_index(ij.second, c), v);
  for (int i = 0; i < logical.num_vars; ++i)
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        phys.add_J(code.physical_index(i, a), code.physical_index(i, b), -penalty);
  phys.offset = k * logical.offset;
  return {phys, code};
}

inline double default_qac_penalty(const IsingModel& logical) {
  double total = 0.0;
  for (const auto& [i, v] : logical.h) total += std::abs(v);
  for (const auto& [ij, v] : logical.J) total += std::abs(v);
  return total > 0.0 ? 4.0 * total : 1.0;
}

inline SpinConfig qac_decode(const QacCode& code, const SpinConfig& physical) {
  if (physical.num_vars != code.num_logical * code.k)
    throw dimension_error("physical config length != num_logical * k");
  std::vector<int> spins(code.num_logical);
  for (int i = 0; i < code.num_logical; ++i) {
    int plus = 0;
    for (int c = 0; c < code.k; ++c)
      if (physical.spin(code.physical_index(i, c)) > 0) ++plus;
    spins[i] = (2 * plus > code.k) ? 1 : -1;
  }
  return SpinConfig::from_spins(spins);
}

inline SpinConfig qac_encode_config(const QacCode& code, const SpinConfig& logical) {
  std::vector<int> spins(code.num_logical * code.k);
  for (int i = 0; i < code.num_logical; ++i)
    for (int c = 0; c < code.k; ++c) spins[code.physical_index(i, c)] = logical.spin(i);
  return SpinConfig::from_spins(spins);
}

}  // namespace annealkit
