#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "annealkit/baseline.hpp"
#include "annealkit/model.hpp"

using namespace annealkit;

TEST_CASE("single variable settles") {
  IsingModel m(1);
  m.add_h(0, 1.0);
  SaParams params;
  params.sweeps = 100;
  SampleSet s = simulated_annealing(m, params, 1);
  REQUIRE(s.entries.size() == 1);
  CHECK(s.entries[0].config.spin(0) == -1);
}

TEST_CASE("zero-coupling model separates") {
  IsingModel m(4);
  m.add_h(0, 1.0);
  m.add_h(1, -2.0);
  m.add_h(2, 0.5);
  m.add_h(3, -0.25);
  SaParams params;
  params.sweeps = 200;
  SampleSet s = simulated_annealing(m, params, 9);
  REQUIRE(s.entries.size() == 1);
  const SpinConfig& c = s.entries[0].config;
  CHECK(c.spin(0) == -1);
  CHECK(c.spin(1) == 1);
  CHECK(c.spin(2) == -1);
  CHECK(c.spin(3) == 1);
}

TEST_CASE("finds the n=16 glass optimum with restarts") {
  IsingModel m = random_spin_glass(16, 7, CouplingLaw::pm_one, 1.0);
  GroundResult g = brute_force_ground(m);
  SaParams params;
  params.restarts = 200;
  SampleSet s = simulated_annealing(m, params, 7);
  CHECK(s.best_energy() == doctest::Approx(g.min_energy));
  CHECK(s.total_reads == 200);
}

TEST_CASE("determinism and restart-prefix consistency") {
  IsingModel m = random_spin_glass(12, 3, CouplingLaw::uniform, 1.0);
  SaParams params;
  params.sweeps = 300;
  params.restarts = 20;
  SampleSet a = simulated_annealing(m, params, 5);
  SampleSet b = simulated_annealing(m, params, 5);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].config == b.entries[i].config);
    CHECK(a.entries[i].count == b.entries[i].count);
  }
  // best-so-far is nonincreasing in the restart count (derived seeds make
  // restart r identical regardless of the total)
  double prev = std::numeric_limits<double>::infinity();
  for (int r = 1; r <= 20; r += 3) {
    SaParams pr = params;
    pr.restarts = r;
    double best = simulated_annealing(m, pr, 5).best_energy();
    CHECK(best <= prev + 1e-12);
    prev = best;
  }
}

TEST_CASE("parameter validation") {
  IsingModel m(2);
  m.add_J(0, 1, 1.0);
  SaParams bad;
  bad.beta0 = 10.0;
  bad.beta1 = 0.1;
  CHECK_THROWS_AS(simulated_annealing(m, bad, 0), parameter_error);
  SaParams zero;
  zero.sweeps = 0;
  CHECK_THROWS_AS(simulated_annealing(m, zero, 0), parameter_error);
}

TEST_CASE("near-constant beta sampling approaches Boltzmann weights") {
  IsingModel m(2);
  m.add_h(0, 0.5);
  m.add_J(0, 1, 0.8);
  const double beta = 1.0;
  // exact partition function over the four states
  std::map<std::uint32_t, double> p;
  double z = 0.0;
  for (std::uint32_t mask = 0; mask < 4; ++mask) {
    double w = std::exp(-beta * ising_energy(m, SpinConfig(mask, 2)));
    p[mask] = w;
    z += w;
  }
  for (auto& [mask, w] : p) w /= z;

  SaParams params;
  params.beta0 = beta;
  params.beta1 = beta * (1.0 + 1e-9);
  params.sweeps = 50;
  params.restarts = 20000;
  SampleSet s = simulated_annealing(m, params, 123);
  for (std::uint32_t mask = 0; mask < 4; ++mask) {
    long long count = 0;
    for (const auto& e : s.entries)
      if (e.config.bits == mask) count = e.count;
    double expect = params.restarts * p[mask];
    double sigma = std::sqrt(params.restarts * p[mask] * (1.0 - p[mask]));
    CHECK(std::abs(count - expect) <= 4.0 * sigma + 1.0);
  }
}

TEST_CASE("greedy descent") {
  IsingModel m(1);
  m.add_h(0, 1.0);
  CHECK(greedy_descent(m, SpinConfig::from_spins({1})).spin(0) == -1);

  // local minimum is a fixpoint
  IsingModel ring(4);
  for (int i = 0; i < 4; ++i) ring.add_J(i, (i + 1) % 4, -1.0);
  SpinConfig aligned = SpinConfig::from_spins({1, 1, 1, 1});
  CHECK(greedy_descent(ring, aligned) == aligned);

  // descent never raises the energy
  IsingModel glass = random_spin_glass(10, 21, CouplingLaw::uniform, 1.0);
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    SpinConfig start(mask * 37u % 1024u, 10);
    SpinConfig end = greedy_descent(glass, start);
    CHECK(ising_energy(glass, end) <= ising_energy(glass, start) + 1e-12);
  }
}
