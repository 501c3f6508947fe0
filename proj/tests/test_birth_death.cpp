// Apache License, Version 2.0, refer to LICENSE.txt

#include <catch2/catch_amalgamated.hpp>

#include "dgnet/birth_death.hpp"
#include "support/stats.hpp"

using namespace dgnet;

namespace {

PiecewiseConstantPath constant_path(double v) {
  PiecewiseConstantPath p;
  p.values = {v};
  return p;
}

}  // namespace

TEST_CASE("zero weights produce no events") {
  Rng rng = make_rng(1);
  std::vector<PiecewiseConstantPath> paths{constant_path(0.0), constant_path(0.0)};
  const auto log = simulate_birth_death(paths, 1.0, 10.0, rng);
  REQUIRE(log.events.empty());
}

TEST_CASE("event log is ordered and counts stay consistent") {
  Rng rng = make_rng(2);
  PiecewiseConstantPath varying;
  varying.times = {0.0, 5.0, 12.0};
  varying.values = {1.0, 0.2, 2.0};
  std::vector<PiecewiseConstantPath> paths{varying, constant_path(0.8),
                                           constant_path(1.5)};
  const auto log = simulate_birth_death(paths, 0.7, 20.0, rng);
  REQUIRE(!log.events.empty());
  std::map<PairKey, long> counts;
  double last_time = 0.0;
  for (const auto& e : log.events) {
    REQUIRE(e.time >= last_time);
    last_time = e.time;
    long& n = counts[e.pair];
    n += e.birth ? 1 : -1;
    REQUIRE(n >= 0);
    REQUIRE(e.count_after == n);
  }
}

TEST_CASE("deaths only follow births of the same pair") {
  Rng rng = make_rng(3);
  std::vector<PiecewiseConstantPath> paths{constant_path(1.2), constant_path(0.9)};
  const auto log = simulate_birth_death(paths, 2.0, 50.0, rng);
  long births = 0, deaths = 0;
  for (const auto& e : log.events) (e.birth ? births : deaths)++;
  REQUIRE(births >= deaths);
  REQUIRE(births > 0);
}

TEST_CASE("stationary mean count matches birth rate over death rate") {
  Rng rng = make_rng(4);
  std::vector<PiecewiseConstantPath> paths{constant_path(1.0), constant_path(1.0)};
  const double rho = 2.0, horizon = 2000.0;
  const auto log = simulate_birth_death(paths, rho, horizon, rng);
  // batch means over 40 windows of the time average
  const int batches = 40;
  std::vector<double> means;
  const PairKey p(0, 1);
  std::vector<InteractionEvent> ev = log.pair_events(p);
  std::size_t idx = 0;
  long n = 0;
  for (int b = 0; b < batches; ++b) {
    const double a = horizon * b / batches;
    const double bnd = horizon * (b + 1) / batches;
    double integral = 0.0, last = a;
    while (idx < ev.size() && ev[idx].time < bnd) {
      integral += static_cast<double>(n) * (ev[idx].time - last);
      last = ev[idx].time;
      n += ev[idx].birth ? 1 : -1;
      ++idx;
    }
    integral += static_cast<double>(n) * (bnd - last);
    means.push_back(integral / (bnd - a));
  }
  const auto m = testsupport::moments(means);
  // birth rate 2 w_i w_j = 2, lifetime rate 2 -> stationary mean 1
  REQUIRE(testsupport::within_z(m.mean, 1.0, m.se_mean));
  REQUIRE(log.time_average(p) == Catch::Approx(m.mean).margin(1e-9));
}

TEST_CASE("bad inputs are rejected") {
  Rng rng = make_rng(5);
  std::vector<PiecewiseConstantPath> paths{constant_path(1.0), constant_path(1.0)};
  REQUIRE_THROWS_AS(simulate_birth_death(paths, 0.0, 10.0, rng), std::invalid_argument);
  REQUIRE_THROWS_AS(simulate_birth_death(paths, 1.0, -1.0, rng), std::invalid_argument);
  PiecewiseConstantPath bad;
  bad.times = {1.0};
  bad.values = {1.0};
  REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  PiecewiseConstantPath neg;
  neg.values = {-0.5};
  REQUIRE_THROWS_AS(neg.validate(), std::invalid_argument);
}
