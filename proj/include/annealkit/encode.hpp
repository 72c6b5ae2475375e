#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "annealkit/errors.hpp"
#include "annealkit/model.hpp"
#include "annealkit/poly.hpp"

namespace annealkit {

struct Graph {
  int num_nodes = 0;
  std::set<std::pair<int, int>> edges;  // i < j

  Graph() = default;
  explicit Graph(int n) : num_nodes(n) {}

  void add_edge(int i, int j) {
    if (i == j) throw parameter_error("self-loop");
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= num_nodes) throw parameter_error("edge endpoint out of range");
    edges.insert({i, j});
  }
};

// Edge-list text: first line "n m", then m lines "i j".
inline Graph graph_from_text(const std::string& text) {
  std::istringstream in(text);
  int n, m;
  if (!(in >> n >> m)) throw format_error("expected 'n m' header");
  Graph g(n);
  for (int k = 0; k < m; ++k) {
    int i, j;
    if (!(in >> i >> j)) throw format_error("truncated edge list");
    g.add_edge(i, j);
  }
  return g;
}

// H = -Lam * sum_i s_i + Lam' * sum_{(i,j) in E} (1+s_i)(1+s_j)
// Lam < 4 Lam' keeps constraint violations energetically unfavourable.
inline IsingModel encode_max_independent_set(const Graph& g, double lam, double lam_prime,
                                             bool allow_weak_penalty = false) {
  if (!(lam > 0.0 && lam_prime > 0.0)) throw parameter_error("Lambda and Lambda' must be positive");
  if (!(lam < 4.0 * lam_prime) && !allow_weak_penalty)
    throw parameter_error("requires Lambda < 4*Lambda' (set allow_weak_penalty to override)");
  IsingModel m(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) m.add_h(i, -lam);
  for (const auto& [i, j] : g.edges) {
    m.offset += lam_prime;
    m.add_h(i, lam_prime);
    m.add_h(j, lam_prime);
    m.add_J(i, j, lam_prime);
  }
  return m;
}

struct MisDecode {
  std::vector<int> selected;  // nodes with spin +1
  bool independent = true;
  std::vector<std::pair<int, int>> violated_edges;
};

inline MisDecode decode_mis(const SpinConfig& c, const Graph& g) {
  MisDecode d;
  for (int i = 0; i < c.num_vars; ++i)
    if (c.spin(i) > 0) d.selected.push_back(i);
  for (const auto& [i, j] : g.edges)
    if (i < c.num_vars && j < c.num_vars && c.spin(i) > 0 && c.spin(j) > 0) {
      d.independent = false;
      d.violated_edges.push_back({i, j});
    }
  return d;
}

struct GridSpec {
  int side = 0;  // grid is side x side; side must be even

  explicit GridSpec(int n) : side(n) {
    if (n < 2 || n % 2 != 0) throw parameter_error("grid side must be even and >= 2");
  }
  int index(int row, int col) const { return row * side + col; }
  int num_cells() const { return side * side; }
};

// H_P = Lam * sum_<u,v> (1 - s_u s_v) over grid nearest neighbours,
// H_C = Lam' * (sum s)^2 expanded into all-pairs couplings.
inline IsingModel encode_interface_min(const GridSpec& grid, double lam, double lam_prime) {
  if (!(lam > 0.0) || !(lam_prime > 0.0)) throw parameter_error("Lambda and Lambda' must be positive");
  const int n = grid.num_cells();
  IsingModel m(n);
  for (int r = 0; r < grid.side; ++r)
    for (int c = 0; c < grid.side; ++c) {
      if (c + 1 < grid.side) {
        m.offset += lam;
        m.add_J(grid.index(r, c), grid.index(r, c + 1), -lam);
      }
      if (r + 1 < grid.side) {
        m.offset += lam;
        m.add_J(grid.index(r, c), grid.index(r + 1, c), -lam);
      }
    }
  // (sum s)^2 = n + 2 sum_{i<j} s_i s_j
  m.offset += lam_prime * n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.add_J(i, j, 2.0 * lam_prime);
  return m;
}

// ---------------------------------------------------------------------------
// Factoring: (N - p*q)^2 over binary encodings of p and q.

struct FactoringEncoding {
  PolyBinary poly;       // residual polynomial over the free bits
  int bits_p = 0;        // total bit width of p (including any fixed bit)
  int bits_q = 0;
  std::vector<int> p_free_bits;  // polynomial variable index of each free p bit
  std::vector<int> q_free_bits;
  bool lsb_fixed = false;        // odd N: least-significant bits of p and q pinned to 1

  std::uint64_t decode_p(std::uint64_t assignment) const {
    std::uint64_t p = lsb_fixed ? 1 : 0;
    for (std::size_t k = 0; k < p_free_bits.size(); ++k)
      if ((assignment >> p_free_bits[k]) & 1ull) p += 1ull << (k + (lsb_fixed ? 1 : 0));
    return p;
  }
  std::uint64_t decode_q(std::uint64_t assignment) const {
    std::uint64_t q = lsb_fixed ? 1 : 0;
    for (std::size_t k = 0; k < q_free_bits.size(); ++k)
      if ((assignment >> q_free_bits[k]) & 1ull) q += 1ull << (k + (lsb_fixed ? 1 : 0));
    return q;
  }
};

// For odd N the least-significant bit of each factor is fixed to 1 (both
// factors must be odd), which together with the bit widths excludes the
// trivial factorisation 1*N at desk scale. Even N should be reduced with
// peel_factors_of_two first.
inline FactoringEncoding encode_factoring_poly(std::uint64_t N, int bits_p, int bits_q) {
  if (N < 4) throw parameter_error("N must be at least 4");
  if (bits_p < 1 || bits_q < 1) throw parameter_error("bit widths must be positive");
  FactoringEncoding enc;
  enc.bits_p = bits_p;
  enc.bits_q = bits_q;
  enc.lsb_fixed = (N % 2 == 1);

  int next = 0;
  const int skip = enc.lsb_fixed ? 1 : 0;
  PolyBinary p_val = PolyBinary::constant(enc.lsb_fixed ? 1.0 : 0.0);
  for (int k = skip; k < bits_p; ++k) {
    enc.p_free_bits.push_back(next);
    p_val += PolyBinary::variable(next++).scaled(std::pow(2.0, k));
  }
  PolyBinary q_val = PolyBinary::constant(enc.lsb_fixed ? 1.0 : 0.0);
  for (int k = skip; k < bits_q; ++k) {
    enc.q_free_bits.push_back(next);
    q_val += PolyBinary::variable(next++).scaled(std::pow(2.0, k));
  }
  PolyBinary residual = PolyBinary::constant(static_cast<double>(N)) - p_val * q_val;
  enc.poly = residual * residual;
  enc.poly.num_vars = std::max(enc.poly.num_vars, next);
  return enc;
}

inline std::pair<std::uint64_t, int> peel_factors_of_two(std::uint64_t N) {
  int twos = 0;
  while (N % 2 == 0 && N > 1) {
    N /= 2;
    ++twos;
  }
  return {N, twos};
}

// ---------------------------------------------------------------------------
// Diophantine residual H = (x^5 + y^5 - z^5 - t^5)^2 - lambda (d_{x,z} + d_{x,t})
// over bit encodings of x, y, z, t; the equality indicator d is the exact
// multilinear product of per-bit agreements.

inline PolyBinary bits_value(int first_var, int width) {
  PolyBinary v = PolyBinary::constant(0.0);
  for (int k = 0; k < width; ++k) v += PolyBinary::variable(first_var + k).scaled(std::pow(2.0, k));
  return v;
}

inline PolyBinary equality_indicator(int first_a, int first_b, int width) {
  PolyBinary d = PolyBinary::constant(1.0);
  for (int k = 0; k < width; ++k) {
    PolyBinary a = PolyBinary::variable(first_a + k);
    PolyBinary b = PolyBinary::variable(first_b + k);
    // a*b + (1-a)(1-b)
    PolyBinary agree = a * b + (PolyBinary::constant(1.0) - a) * (PolyBinary::constant(1.0) - b);
    d = d * agree;
  }
  return d;
}

inline PolyBinary encode_diophantine_power4(int width, double lambda = 1.0) {
  if (width < 1) throw parameter_error("width must be >= 1");
  auto pow5 = [](const PolyBinary& v) {
    PolyBinary p = v;
    for (int k = 1; k < 5; ++k) p = p * v;
    return p;
  };
  const int x0 = 0, y0 = width, z0 = 2 * width, t0 = 3 * width;
  PolyBinary residual = pow5(bits_value(x0, width)) + pow5(bits_value(y0, width)) -
                        pow5(bits_value(z0, width)) - pow5(bits_value(t0, width));
  PolyBinary h = residual * residual;
  h -= (equality_indicator(x0, z0, width) + equality_indicator(x0, t0, width)).scaled(lambda);
  h.num_vars = std::max(h.num_vars, 4 * width);
  return h;
}

// ---------------------------------------------------------------------------
// Domain-wall encoding of a discretised scalar potential.

struct PotentialSpec {
  double phi_min = 0.0;
  double delta_phi = 1.0;
  std::vector<double> values;  // U(phi_d) for d = 0..M

  int levels() const { return static_cast<int>(values.size()); }
  double phi(int d) const { return phi_min + d * delta_phi; }

  void validate() const {
    if (levels() < 2) throw parameter_error("need at least 2 potential levels");
    if (!(delta_phi > 0.0)) throw parameter_error("delta_phi must be positive");
    for (double v : values)
      if (!std::isfinite(v)) throw parameter_error("non-finite potential value");
  }
};

inline PotentialSpec potential_from_json(const nlohmann::json& j) {
  PotentialSpec p;
  p.phi_min = j.at("phi_min").get<double>();
  p.delta_phi = j.at("delta_phi").get<double>();
  p.values = j.at("values").get<std::vector<double>>();
  p.validate();
  return p;
}

struct DomainWallCode {
  int spins = 0;          // M physical spins encode M+1 levels
  double lambda_chain = 0.0;
  PotentialSpec potential;
};

// Ferromagnetic chain -Lam * sum s_k s_{k+1} with virtual boundaries
// s_left = -1, s_right = +1 folded into local fields, plus telescoping field
// weights w_k = U(phi_{k-1}) - U(phi_k) realising U on the single-wall sector.
// The model offset is chosen so that a single-wall configuration with the wall
// at level d has energy exactly U(phi_d). Invalid (multi-wall) configurations
// cost at least 4*Lam extra in the chain term.
inline std::pair<IsingModel, DomainWallCode> encode_domain_wall_potential(
    const PotentialSpec& p, std::optional<double> lam = std::nullopt) {
  p.validate();
  const int M = p.levels() - 1;
  double spread = *std::max_element(p.values.begin(), p.values.end()) -
                  *std::min_element(p.values.begin(), p.values.end());
  double lambda = lam.value_or(std::max(2.0 * spread, 1.0));
  if (!(lambda > 0.0)) throw parameter_error("chain penalty must be positive");

  IsingModel m(M);
  // chain links between physical spins
  for (int k = 0; k + 1 < M; ++k) m.add_J(k, k + 1, -lambda);
  // virtual boundary links: -Lam*(-1)*s_0 and -Lam*s_{M-1}*(+1)
  m.add_h(0, lambda);
  m.add_h(M - 1, -lambda);
  // telescoping potential fields: w_k = U(phi_{k-1}) - U(phi_k), k = 1..M
  double w_sum = 0.0;
  for (int k = 1; k <= M; ++k) {
    double w = p.values[k - 1] - p.values[k];
    w_sum += w;
    m.add_h(k - 1, w / 2.0);
  }
  // single-wall chain energy is -Lam*(M-1); field part is U(phi_d) - U(phi_0) + w_sum/2
  m.offset = p.values[0] - w_sum / 2.0 + lambda * (M - 1);

  DomainWallCode code;
  code.spins = M;
  code.lambda_chain = lambda;
  code.potential = p;
  return {m, code};
}

struct DomainWallDecode {
  int d = 0;        // wall position = number of -1 spins
  bool valid = false;  // single-wall sector: all -1 spins precede all +1 spins
};

inline DomainWallDecode decode_domain_wall(const DomainWallCode& code, const SpinConfig& c) {
  if (c.num_vars != code.spins) throw dimension_error("config length != code spins");
  DomainWallDecode out;
  for (int i = 0; i < c.num_vars; ++i)
    if (c.spin(i) < 0) ++out.d;
  out.valid = true;
  for (int i = 0; i + 1 < c.num_vars; ++i)
    if (c.spin(i) > 0 && c.spin(i + 1) < 0) out.valid = false;
  return out;
}

// Fig.-style 5-node network used throughout the tests:
// nodes {TL,TR,BL,BR,C} = {0,1,2,3,4}.
inline Graph five_node_network() {
  Graph g(5);
  g.add_edge(0, 2);  // TL-BL
  g.add_edge(2, 3);  // BL-BR
  g.add_edge(4, 0);  // C-TL
  g.add_edge(4, 1);  // C-TR
  g.add_edge(4, 2);  // C-BL
  g.add_edge(4, 3);  // C-BR
  return g;
}

}  // namespace annealkit
