#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "annealkit/errors.hpp"
#include "annealkit/model.hpp"
#include "annealkit/poly.hpp"

namespace annealkit {

/// One ancilla substitution record: `ancilla` stands for the product
/// `parent_i * parent_j`. Parents may themselves be earlier ancillas.
struct AncillaRecord {
  int ancilla;
  int parent_i;
  int parent_j;
};

struct AncillaMap {
  std::vector<AncillaRecord> records;
  bool empty() const { return records.empty(); }
};

// Substitute s_i = 2 tau_i - 1 into a multilinear spin polynomial.
// Constants are kept (the usual presentation drops them).
inline PolyBinary spin_poly_to_binary(const PolyBinary& spin_terms) {
  PolyBinary out(spin_terms.num_vars);
  for (const auto& [idx, c] : spin_terms.terms) {
    PolyBinary prod = PolyBinary::constant(c);
    for (int i : idx) {
      PolyBinary factor = PolyBinary::variable(i).scaled(2.0);
      factor += PolyBinary::constant(-1.0);
      prod = prod * factor;
    }
    out += prod;
  }
  return out;
}

// Auto penalty weight: 1 + 2 * sum of |coeff| over all terms of degree >= 3.
// Flipping one ancilla constraint costs at least the penalty minimum (>= Lambda
// once violated) and can gain at most the total magnitude of affected terms.
inline double penalty_weight_bound(const PolyBinary& p) {
  double total = 0.0;
  for (const auto& [idx, c] : p.terms)
    if (idx.size() >= 3) total += std::abs(c);
  return 1.0 + 2.0 * total;
}

// Penalty enforcing tau_a = tau_i tau_j:
//   Q = Lambda (tau_i tau_j - 2 tau_a (tau_i + tau_j) + 3 tau_a)
// Zero on the four consistent assignments, >= Lambda otherwise.
inline PolyBinary ancilla_penalty(int a, int i, int j, double lambda) {
  PolyBinary q;
  q.add_term({i, j}, lambda);
  q.add_term({a, i}, -2.0 * lambda);
  q.add_term({a, j}, -2.0 * lambda);
  q.add_term({a}, 3.0 * lambda);
  return q;
}

struct ReductionResult {
  QuboModel qubo;
  AncillaMap ancillae;
  double penalty = 0.0;
  std::string warning;  // set when the penalty dwarfs the problem coefficients
};

// Iteratively replace the most frequent variable pair among cubic-or-higher
// terms by an ancilla (lexicographically smallest pair on ties) until the
// polynomial is quadratic.
inline ReductionResult reduce_to_quadratic(const PolyBinary& p,
                                           std::optional<double> penalty = std::nullopt) {
  double lambda = penalty.value_or(penalty_weight_bound(p));
  if (!(lambda > 0.0)) throw parameter_error("penalty weight must be positive");

  PolyBinary work = p;
  ReductionResult result;
  result.penalty = lambda;
  int next_var = p.num_vars;

  for (;;) {
    std::map<std::pair<int, int>, int> pair_count;
    for (const auto& [idx, c] : work.terms) {
      if (idx.size() < 3) continue;
      for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b) pair_count[{idx[a], idx[b]}]++;
    }
    if (pair_count.empty()) break;

    std::pair<int, int> best = pair_count.begin()->first;
    int best_count = pair_count.begin()->second;
    for (const auto& [pr, n] : pair_count)
      if (n > best_count) {  // map order gives the lexicographic tie-break
        best = pr;
        best_count = n;
      }

    int anc = next_var++;
    result.ancillae.records.push_back({anc, best.first, best.second});

    PolyBinary substituted(next_var);
    for (const auto& [idx, c] : work.terms) {
      bool has_i = std::binary_search(idx.begin(), idx.end(), best.first);
      bool has_j = std::binary_search(idx.begin(), idx.end(), best.second);
      if (idx.size() >= 3 && has_i && has_j) {
        std::vector<int> repl;
        for (int v : idx)
          if (v != best.first && v != best.second) repl.push_back(v);
        repl.push_back(anc);
        substituted.add_term(std::move(repl), c);
      } else {
        substituted.add_term(idx, c);
      }
    }
    substituted += ancilla_penalty(anc, best.first, best.second, lambda);
    work = std::move(substituted);
  }

  QuboModel q(std::max(next_var, 1));
  for (const auto& [idx, c] : work.terms) {
    if (idx.empty())
      q.offset += c;
    else if (idx.size() == 1)
      q.add_Q(idx[0], idx[0], c);
    else
      q.add_Q(idx[0], idx[1], c);
  }
  result.qubo = std::move(q);

  double max_coeff = 0.0;
  for (const auto& [idx, c] : p.terms)
    if (!idx.empty()) max_coeff = std::max(max_coeff, std::abs(c));
  if (max_coeff > 0.0 && lambda / max_coeff > 100.0)
    result.warning = "penalty weight exceeds 100x the largest problem coefficient; "
                     "downstream range scaling will compress the problem terms";
  return result;
}

struct ReductionReport {
  bool passed = false;
  double offset_shift = 0.0;  // reduced-minus-original energy on consistent assignments
  std::string detail;
};

// Exhaustive equivalence check: for every assignment of the original variables,
// the ancilla-minimised reduced energy must equal the original energy up to a
// fixed constant, and the ground-state projections must agree as sets.
inline ReductionReport verify_reduction(const PolyBinary& original, const QuboModel& reduced,
                                        const AncillaMap& map, double tol = 1e-9) {
  const int n = original.num_vars;
  const int total = reduced.num_vars;
  if (n > 16) throw capacity_error("verify_reduction supports at most 16 original variables");
  if (total > 24) throw capacity_error("verify_reduction supports at most 24 total variables");
  const int n_anc = total - n;

  ReductionReport rep;
  bool have_shift = false;
  double best_orig = std::numeric_limits<double>::infinity();
  double best_red = std::numeric_limits<double>::infinity();
  std::vector<double> orig_e(1u << n), red_min(1u << n);

  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double eo = original.evaluate(mask);
    double er = std::numeric_limits<double>::infinity();
    for (std::uint32_t anc = 0; anc < (1u << n_anc); ++anc)
      er = std::min(er, qubo_energy(reduced, mask | (anc << n)));
    orig_e[mask] = eo;
    red_min[mask] = er;
    best_orig = std::min(best_orig, eo);
    best_red = std::min(best_red, er);
    if (!have_shift) {
      rep.offset_shift = er - eo;
      have_shift = true;
    }
  }

  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::abs((red_min[mask] - orig_e[mask]) - rep.offset_shift) > tol) {
      rep.detail = "energy mismatch at assignment " + std::to_string(mask);
      return rep;
    }
  }
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool g_orig = orig_e[mask] <= best_orig + tol;
    bool g_red = red_min[mask] <= best_red + tol;
    if (g_orig != g_red) {
      rep.detail = "ground-set mismatch at assignment " + std::to_string(mask);
      return rep;
    }
  }
  (void)map;
  rep.passed = true;
  return rep;
}

}  // namespace annealkit
