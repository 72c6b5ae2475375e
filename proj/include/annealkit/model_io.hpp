#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "annealkit/errors.hpp"
#include "annealkit/model.hpp"

namespace annealkit {

inline constexpr const char* kIsingFormat = "annealkit-ising-v1";
inline constexpr const char* kQuboFormat = "annealkit-qubo-v1";

namespace detail {

inline std::string pair_key(int i, int j) {
  return std::to_string(i) + "," + std::to_string(j);
}

inline std::pair<int, int> parse_pair_key(const std::string& key) {
  auto comma = key.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 >= key.size())
    throw format_error("bad coupling key '" + key + "'");
  try {
    int i = std::stoi(key.substr(0, comma));
    int j = std::stoi(key.substr(comma + 1));
    return {i, j};
  } catch (const std::exception&) {
    throw format_error("bad coupling key '" + key + "'");
  }
}

}  // namespace detail

inline nlohmann::ordered_json ising_to_json(const IsingModel& m) {
  m.validate();
  nlohmann::ordered_json j;
  j["format"] = kIsingFormat;
  j["num_vars"] = m.num_vars;
  j["h"] = nlohmann::ordered_json::object();
  for (const auto& [i, v] : m.h) j["h"][std::to_string(i)] = v;
  j["J"] = nlohmann::ordered_json::object();
  for (const auto& [ij, v] : m.J) j["J"][detail::pair_key(ij.first, ij.second)] = v;
  j["offset"] = m.offset;
  return j;
}

inline IsingModel ising_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("format") || j["format"] != kIsingFormat)
    throw format_error("not an annealkit-ising-v1 document");
  IsingModel m(j.at("num_vars").get<int>());
  if (j.contains("h"))
    for (const auto& [key, v] : j["h"].items()) m.add_h(std::stoi(key), v.get<double>());
  if (j.contains("J"))
    for (const auto& [key, v] : j["J"].items()) {
      auto [a, b] = detail::parse_pair_key(key);
      if (a >= b) throw format_error("J key requires i<j");
      m.add_J(a, b, v.get<double>());
    }
  if (j.contains("offset")) m.offset = j["offset"].get<double>();
  m.validate();
  return m;
}

inline nlohmann::ordered_json qubo_to_json(const QuboModel& m) {
  m.validate();
  nlohmann::ordered_json j;
  j["format"] = kQuboFormat;
  j["num_vars"] = m.num_vars;
  j["Q"] = nlohmann::ordered_json::object();
  for (const auto& [ij, v] : m.Q) j["Q"][detail::pair_key(ij.first, ij.second)] = v;
  j["offset"] = m.offset;
  return j;
}

inline QuboModel qubo_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("format") || j["format"] != kQuboFormat)
    throw format_error("not an annealkit-qubo-v1 document");
  QuboModel m(j.at("num_vars").get<int>());
  if (j.contains("Q"))
    for (const auto& [key, v] : j["Q"].items()) {
      auto [a, b] = detail::parse_pair_key(key);
      if (a > b) throw format_error("Q key requires i<=j");
      m.add_Q(a, b, v.get<double>());
    }
  if (j.contains("offset")) m.offset = j["offset"].get<double>();
  m.validate();
  return m;
}

inline IsingModel load_ising(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw format_error(path + ": " + e.what());
  }
  return ising_from_json(j);
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Fixed header; '.' decimal separator regardless of locale.
inline std::string sampleset_to_csv(const SampleSet& s) {
  std::ostringstream out;
  out << "config_bitstring,energy,count\n";
  for (const auto& e : s.entries)
    out << e.config.to_string() << "," << format_double(e.energy) << "," << e.count << "\n";
  return out.str();
}

}  // namespace annealkit
