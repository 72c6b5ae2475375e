#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "annealkit/errors.hpp"

namespace annealkit {

/// Multilinear polynomial over binary variables tau_i in {0,1}.
/// Keys are sorted, deduplicated index sets; the empty set is the constant term.
/// Idempotence (tau^2 = tau) is applied on every insertion and product.
struct PolyBinary {
  int num_vars = 0;
  std::map<std::vector<int>, double> terms;

  PolyBinary() = default;
  explicit PolyBinary(int n) : num_vars(n) {}

  static PolyBinary constant(double c) {
    PolyBinary p;
    if (c != 0.0) p.terms[{}] = c;
    return p;
  }

  static PolyBinary variable(int i, int n = 0) {
    PolyBinary p(std::max(n, i + 1));
    p.terms[{i}] = 1.0;
    return p;
  }

  void add_term(std::vector<int> idx, double c) {
    if (c == 0.0) return;
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (!idx.empty()) num_vars = std::max(num_vars, idx.back() + 1);
    auto& slot = terms[idx];
    slot += c;
    if (slot == 0.0) terms.erase(idx);
  }

  int degree() const {
    std::size_t d = 0;
    for (const auto& [idx, c] : terms) d = std::max(d, idx.size());
    return static_cast<int>(d);
  }

  double evaluate(std::uint64_t mask) const {
    double e = 0.0;
    for (const auto& [idx, c] : terms) {
      bool on = true;
      for (int i : idx)
        if (!((mask >> i) & 1ull)) {
          on = false;
          break;
        }
      if (on) e += c;
    }
    return e;
  }

  PolyBinary& operator+=(const PolyBinary& o) {
    num_vars = std::max(num_vars, o.num_vars);
    for (const auto& [idx, c] : o.terms) {
      auto& slot = terms[idx];
      slot += c;
      if (slot == 0.0) terms.erase(idx);
    }
    return *this;
  }

  PolyBinary& operator-=(const PolyBinary& o) {
    PolyBinary neg = o;
    for (auto& [idx, c] : neg.terms) c = -c;
    return *this += neg;
  }

  PolyBinary operator*(const PolyBinary& o) const {
    PolyBinary out(std::max(num_vars, o.num_vars));
    for (const auto& [ia, ca] : terms)
      for (const auto& [ib, cb] : o.terms) {
        std::vector<int> merged;
        merged.reserve(ia.size() + ib.size());
        std::set_union(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(merged));
        out.add_term(std::move(merged), ca * cb);
      }
    return out;
  }

  PolyBinary operator+(const PolyBinary& o) const {
    PolyBinary out = *this;
    out += o;
    return out;
  }

  PolyBinary operator-(const PolyBinary& o) const {
    PolyBinary out = *this;
    out -= o;
    return out;
  }

  PolyBinary scaled(double a) const {
    PolyBinary out(num_vars);
    if (a == 0.0) return out;
    for (const auto& [idx, c] : terms) out.terms[idx] = a * c;
    return out;
  }

  double coeff(std::vector<int> idx) const {
    std::sort(idx.begin(), idx.end());
    auto it = terms.find(idx);
    return it == terms.end() ? 0.0 : it->second;
  }
};

// Text format: one term per line, "coeff i1 i2 ... ik"; a bare "coeff" is the constant.
inline PolyBinary poly_from_text(const std::string& text) {
  PolyBinary p;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double c;
    if (!(ls >> c)) {
      std::string rest;
      if (ls.clear(), ls >> rest) throw format_error("bad polynomial line: " + line);
      continue;  // blank line
    }
    std::vector<int> idx;
    int i;
    while (ls >> i) {
      if (i < 0) throw format_error("negative variable index");
      idx.push_back(i);
    }
    if (!ls.eof()) throw format_error("bad polynomial line: " + line);
    p.add_term(std::move(idx), c);
  }
  return p;
}

inline std::string poly_to_text(const PolyBinary& p) {
  std::ostringstream out;
  for (const auto& [idx, c] : p.terms) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", c);
    out << buf;
    for (int i : idx) out << " " << i;
    out << "\n";
  }
  return out.str();
}

}  // namespace annealkit
