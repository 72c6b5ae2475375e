#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "annealkit/errors.hpp"

namespace annealkit {

/// Piecewise-linear envelope on s in [0,1], defined by strictly increasing
/// knots covering the whole interval.
struct Envelope {
  std::vector<std::pair<double, double>> knots;  // (s, value)

  static Envelope from_knots(std::vector<std::pair<double, double>> k) {
    if (k.size() < 2) throw parameter_error("envelope needs at least two knots");
    if (k.front().first != 0.0 || k.back().first != 1.0)
      throw parameter_error("envelope knots must cover [0,1]");
    for (std::size_t i = 0; i + 1 < k.size(); ++i)
      if (!(k[i].first < k[i + 1].first)) throw parameter_error("knot s-values must increase");
    for (const auto& [s, v] : k)
      if (!std::isfinite(v)) throw parameter_error("non-finite envelope value");
    Envelope e;
    e.knots = std::move(k);
    return e;
  }

  static Envelope linear_up() { return from_knots({{0.0, 0.0}, {1.0, 1.0}}); }
  static Envelope linear_down() { return from_knots({{0.0, 1.0}, {1.0, 0.0}}); }
  static Envelope constant(double v) { return from_knots({{0.0, v}, {1.0, v}}); }

  double operator()(double s) const {
    if (s <= knots.front().first) return knots.front().second;
    if (s >= knots.back().first) return knots.back().second;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      if (s <= knots[i + 1].first) {
        double t = (s - knots[i].first) / (knots[i + 1].first - knots[i].first);
        return knots[i].second + t * (knots[i + 1].second - knots[i].second);
      }
    }
    return knots.back().second;
  }
};

struct PathSegment {
  double duration = 0.0;
  double s_start = 0.0;
  double s_end = 0.0;
};

/// The s(t) control path: ordered segments with continuous s at the joints.
struct SPath {
  std::vector<PathSegment> segments;

  void validate() const {
    if (segments.empty()) throw parameter_error("path needs at least one segment");
    for (const auto& seg : segments) {
      if (!(seg.duration > 0.0)) throw parameter_error("segment durations must be positive");
      if (seg.s_start < 0.0 || seg.s_start > 1.0 || seg.s_end < 0.0 || seg.s_end > 1.0)
        throw parameter_error("s must stay in [0,1]");
    }
    for (std::size_t i = 0; i + 1 < segments.size(); ++i)
      if (segments[i].s_end != segments[i + 1].s_start)
        throw parameter_error("s must be continuous across segments");
  }

  double total_duration() const {
    double t = 0.0;
    for (const auto& seg : segments) t += seg.duration;
    return t;
  }

  double s_at(double t) const {
    if (t < 0.0 || t > total_duration() * (1.0 + 1e-12))
      throw parameter_error("time outside path duration");
    double acc = 0.0;
    for (const auto& seg : segments) {
      if (t <= acc + seg.duration) {
        double frac = (t - acc) / seg.duration;
        return seg.s_start + frac * (seg.s_end - seg.s_start);
      }
      acc += seg.duration;
    }
    return segments.back().s_end;
  }
};

/// Transverse-pair (XX) catalyst with an envelope vanishing at both endpoints.
struct CatalystTerm {
  std::vector<std::tuple<int, int, double>> pairs;  // (i, j, weight)
  Envelope g = Envelope::constant(0.0);

  void validate() const {
    if (std::abs(g(0.0)) > 1e-12 || std::abs(g(1.0)) > 1e-12)
      throw parameter_error("catalyst envelope must vanish at s=0 and s=1");
    for (const auto& [i, j, w] : pairs) {
      if (i == j) throw parameter_error("catalyst pair needs distinct qubits");
      if (!std::isfinite(w)) throw parameter_error("non-finite catalyst weight");
    }
  }
};

struct Schedule {
  Envelope A = Envelope::linear_down();
  Envelope B = Envelope::linear_up();
  Envelope C = Envelope::constant(1.0);  // h-gain, scales local fields only
  std::optional<CatalystTerm> catalyst;
  SPath path;

  double total_duration() const { return path.total_duration(); }
};

struct SchedulePoint {
  double s = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 1.0;
  double g = 0.0;
};

inline SchedulePoint evaluate(const Schedule& sch, double t) {
  SchedulePoint p;
  p.s = sch.path.s_at(t);
  p.A = sch.A(p.s);
  p.B = sch.B(p.s);
  p.C = sch.C(p.s);
  p.g = sch.catalyst ? sch.catalyst->g(p.s) : 0.0;
  return p;
}

// Boundary intent A(0) > B(0), A(1) < B(1) is advisory; violations warn, not fail.
inline std::vector<std::string> boundary_warnings(const Schedule& sch) {
  std::vector<std::string> w;
  if (!(sch.A(0.0) > sch.B(0.0))) w.push_back("A(0) <= B(0): anneal does not start driver-dominated");
  if (!(sch.A(1.0) < sch.B(1.0))) w.push_back("A(1) >= B(1): anneal does not end problem-dominated");
  return w;
}

inline Schedule linear_forward(double tau) {
  if (!(tau > 0.0)) throw parameter_error("tau must be positive");
  Schedule sch;
  sch.path.segments = {{tau, 0.0, 1.0}};
  sch.path.validate();
  return sch;
}

// Reverse protocol: ramp from s=1 down to s_target, hold, ramp back up.
inline Schedule reverse_path(double s_target, double ramp_down, double hold, double ramp_up) {
  if (!(s_target > 0.0 && s_target < 1.0)) throw parameter_error("s_target must lie in (0,1)");
  if (!(ramp_down > 0.0 && ramp_up > 0.0)) throw parameter_error("ramp durations must be positive");
  if (hold < 0.0) throw parameter_error("hold must be nonnegative");
  Schedule sch;
  sch.path.segments.push_back({ramp_down, 1.0, s_target});
  if (hold > 0.0) sch.path.segments.push_back({hold, s_target, s_target});
  sch.path.segments.push_back({ramp_up, s_target, 1.0});
  sch.path.validate();
  return sch;
}

// Insert a constant-s hold at the first time the base path attains s_pause.
// Every other segment keeps its own duration.
inline Schedule with_pause(const Schedule& base, double s_pause, double pause_duration) {
  if (!(pause_duration > 0.0)) throw parameter_error("pause duration must be positive");
  if (s_pause < 0.0 || s_pause > 1.0) throw parameter_error("s_pause must lie in [0,1]");
  Schedule out = base;
  out.path.segments.clear();
  bool inserted = false;
  for (const auto& seg : base.path.segments) {
    if (inserted) {
      out.path.segments.push_back(seg);
      continue;
    }
    double lo = std::min(seg.s_start, seg.s_end);
    double hi = std::max(seg.s_start, seg.s_end);
    if (s_pause == seg.s_start) {
      out.path.segments.push_back({pause_duration, s_pause, s_pause});
      out.path.segments.push_back(seg);
      inserted = true;
    } else if (s_pause >= lo && s_pause <= hi && seg.s_start != seg.s_end) {
      double frac = (s_pause - seg.s_start) / (seg.s_end - seg.s_start);
      if (frac > 0.0 && frac <= 1.0) {
        if (frac < 1.0) {
          out.path.segments.push_back({seg.duration * frac, seg.s_start, s_pause});
          out.path.segments.push_back({pause_duration, s_pause, s_pause});
          out.path.segments.push_back({seg.duration * (1.0 - frac), s_pause, seg.s_end});
        } else {
          out.path.segments.push_back(seg);
          out.path.segments.push_back({pause_duration, s_pause, s_pause});
        }
        inserted = true;
      } else {
        out.path.segments.push_back(seg);
      }
    } else {
      out.path.segments.push_back(seg);
    }
  }
  if (!inserted) throw parameter_error("base path never attains s_pause");
  out.path.validate();
  return out;
}

// JSON schema:
// {"A":{"kind":"linear"} | {"knots":[[s,v],...]}, "B":..., "C":..., "g":...,
//  "catalyst_pairs":[[i,j,w],...], "path":[[duration,s0,s1],...]}
// "kind":"linear" selects the role default (A: 1-s, B: s, C: 1, g: 0).
inline Schedule schedule_from_json(const nlohmann::json& j) {
  auto envelope = [&](const char* key, Envelope fallback) {
    if (!j.contains(key)) return fallback;
    const auto& e = j[key];
    if (e.contains("knots")) {
      std::vector<std::pair<double, double>> knots;
      for (const auto& kv : e["knots"]) knots.push_back({kv.at(0).get<double>(), kv.at(1).get<double>()});
      return Envelope::from_knots(std::move(knots));
    }
    if (e.contains("kind") && e["kind"] == "linear") return fallback;
    throw format_error(std::string("envelope '") + key + "' needs \"kind\":\"linear\" or \"knots\"");
  };
  Schedule sch;
  sch.A = envelope("A", Envelope::linear_down());
  sch.B = envelope("B", Envelope::linear_up());
  sch.C = envelope("C", Envelope::constant(1.0));
  if (j.contains("catalyst_pairs") && !j["catalyst_pairs"].empty()) {
    CatalystTerm cat;
    for (const auto& p : j["catalyst_pairs"])
      cat.pairs.push_back({p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<double>()});
    cat.g = envelope("g", Envelope::constant(0.0));
    cat.validate();
    sch.catalyst = std::move(cat);
  }
  if (!j.contains("path")) throw format_error("schedule needs a \"path\"");
  for (const auto& seg : j["path"])
    sch.path.segments.push_back(
        {seg.at(0).get<double>(), seg.at(1).get<double>(), seg.at(2).get<double>()});
  sch.path.validate();
  return sch;
}

}  // namespace annealkit
