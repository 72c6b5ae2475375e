#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "annealkit/schedule.hpp"

using namespace annealkit;

TEST_CASE("envelope construction and evaluation") {
  Envelope tab = Envelope::from_knots({{0.0, 1.0}, {1.0, 0.0}});
  Envelope lin = Envelope::linear_down();
  for (int k = 0; k <= 10; ++k) {
    double s = k / 10.0;
    CHECK(tab(s) == doctest::Approx(lin(s)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(Envelope::from_knots({{0.0, 1.0}}), parameter_error);
  CHECK_THROWS_AS(Envelope::from_knots({{0.1, 1.0}, {1.0, 0.0}}), parameter_error);
  CHECK_THROWS_AS(Envelope::from_knots({{0.0, 1.0}, {0.5, 2.0}, {0.5, 3.0}, {1.0, 0.0}}),
                  parameter_error);
}

TEST_CASE("linear forward endpoints") {
  Schedule sch = linear_forward(2.0);
  SchedulePoint p0 = evaluate(sch, 0.0);
  CHECK(p0.A == doctest::Approx(1.0));
  CHECK(p0.B == doctest::Approx(0.0));
  SchedulePoint pm = evaluate(sch, 1.0);
  CHECK(pm.s == doctest::Approx(0.5));
  CHECK(pm.A == doctest::Approx(0.5));
  CHECK(pm.B == doctest::Approx(0.5));
  SchedulePoint p1 = evaluate(sch, 2.0);
  CHECK(p1.A == doctest::Approx(0.0));
  CHECK(p1.B == doctest::Approx(1.0));
  CHECK(p1.C == doctest::Approx(1.0));
  CHECK_THROWS_AS(linear_forward(0.0), parameter_error);
  CHECK_THROWS_AS(evaluate(sch, 3.0), parameter_error);
}

TEST_CASE("reverse path shape") {
  Schedule v = reverse_path(0.4, 1.0, 0.0, 2.0);
  CHECK(v.total_duration() == doctest::Approx(3.0));
  CHECK(v.path.s_at(0.0) == doctest::Approx(1.0));
  CHECK(v.path.s_at(1.0) == doctest::Approx(0.4));
  CHECK(v.path.s_at(3.0) == doctest::Approx(1.0));

  Schedule held = reverse_path(0.4, 1.0, 2.0, 1.0);
  CHECK(held.total_duration() == doctest::Approx(4.0));
  CHECK(held.path.s_at(2.0) == doctest::Approx(0.4));  // mid-hold
  CHECK_THROWS_AS(reverse_path(1.5, 1.0, 0.0, 1.0), parameter_error);
}

TEST_CASE("pause insertion") {
  Schedule base = linear_forward(1.0);
  Schedule paused = with_pause(base, 0.5, 0.25);
  CHECK(paused.total_duration() == doctest::Approx(1.25));
  // s constant across the inserted window
  CHECK(paused.path.s_at(0.5) == doctest::Approx(0.5));
  CHECK(paused.path.s_at(0.6) == doctest::Approx(0.5));
  CHECK(paused.path.s_at(0.75) == doctest::Approx(0.5));
  // outside the window the s-profile matches the base after a time shift
  for (int k = 0; k <= 101; ++k) {
    double t = k / 101.0;
    double expect = base.path.s_at(t);
    double got = t <= 0.5 ? paused.path.s_at(t) : paused.path.s_at(t + 0.25);
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
  }
  // envelopes untouched
  CHECK(paused.A(0.3) == doctest::Approx(base.A(0.3)));
  CHECK_THROWS_AS(with_pause(reverse_path(0.5, 1, 0, 1), 0.2, 1.0), parameter_error);
}

TEST_CASE("path continuity is enforced") {
  SPath broken;
  broken.segments = {{1.0, 0.0, 0.5}, {1.0, 0.6, 1.0}};
  CHECK_THROWS_AS(broken.validate(), parameter_error);
  SPath out_of_range;
  out_of_range.segments = {{1.0, 0.0, 1.2}};
  CHECK_THROWS_AS(out_of_range.validate(), parameter_error);
}

TEST_CASE("catalyst envelope boundary") {
  CatalystTerm cat;
  cat.pairs = {{0, 1, 0.5}};
  cat.g = Envelope::from_knots({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}});
  CHECK_NOTHROW(cat.validate());
  CHECK(std::abs(cat.g(0.0)) <= 1e-12);
  CHECK(std::abs(cat.g(1.0)) <= 1e-12);

  Schedule sch = linear_forward(2.0);
  sch.catalyst = cat;
  SchedulePoint mid = evaluate(sch, 1.0);  // s = 0.5
  CHECK(mid.g == doctest::Approx(1.0));

  CatalystTerm bad;
  bad.pairs = {{0, 1, 1.0}};
  bad.g = Envelope::constant(0.3);
  CHECK_THROWS_AS(bad.validate(), parameter_error);
  CatalystTerm self;
  self.pairs = {{1, 1, 1.0}};
  CHECK_THROWS_AS(self.validate(), parameter_error);
}

TEST_CASE("boundary warnings advisory only") {
  Schedule fine = linear_forward(1.0);
  CHECK(boundary_warnings(fine).empty());
  Schedule flipped = linear_forward(1.0);
  flipped.A = Envelope::linear_up();
  flipped.B = Envelope::linear_down();
  CHECK(boundary_warnings(flipped).size() == 2);
}

TEST_CASE("h-gain envelope is carried through") {
  Schedule sch = linear_forward(1.0);
  sch.C = Envelope::from_knots({{0.0, 1.0}, {1.0, 3.0}});
  CHECK(evaluate(sch, 1.0).C == doctest::Approx(3.0));
}

TEST_CASE("schedule json parsing") {
  auto j = nlohmann::json::parse(R"({
    "A": {"kind": "linear"},
    "B": {"knots": [[0.0, 0.0], [0.5, 0.2], [1.0, 1.0]]},
    "catalyst_pairs": [[0, 1, 0.7]],
    "g": {"knots": [[0.0, 0.0], [0.5, 1.0], [1.0, 0.0]]},
    "path": [[2.0, 0.0, 1.0]]
  })");
  Schedule sch = schedule_from_json(j);
  CHECK(sch.A(0.0) == doctest::Approx(1.0));
  CHECK(sch.B(0.5) == doctest::Approx(0.2));
  REQUIRE(sch.catalyst.has_value());
  CHECK(std::get<2>(sch.catalyst->pairs[0]) == doctest::Approx(0.7));
  CHECK(sch.total_duration() == doctest::Approx(2.0));

  CHECK_THROWS_AS(schedule_from_json(nlohmann::json::parse(R"({"A":{"kind":"linear"}})")),
                  format_error);
  CHECK_THROWS_AS(
      schedule_from_json(nlohmann::json::parse(R"({"A":{"kind":"cubic"},"path":[[1,0,1]]})")),
      format_error);
}
