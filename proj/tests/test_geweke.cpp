// Apache License, Version 2.0, refer to LICENSE.txt

#include <catch2/catch_amalgamated.hpp>

#include "dgnet/geweke.hpp"

using namespace dgnet;

TEST_CASE("too few samples are rejected") {
  GewekeConfig cfg;
  cfg.n_samples = 500;
  REQUIRE_THROWS_AS(geweke_test(cfg), std::invalid_argument);
}

TEST_CASE("forward draws satisfy the state invariants") {
  GewekeConfig cfg;
  Rng rng = make_rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    McmcState s = detail::geweke_forward(cfg, rng);
    REQUIRE_NOTHROW(s.check_invariants());
    // data regeneration keeps them too
    detail::geweke_data_step(s, rng);
    REQUIRE_NOTHROW(s.check_invariants());
  }
}

TEST_CASE("zero-sweep successive chain equals the marginal chain") {
  GewekeConfig cfg;
  cfg.n_samples = 1200;
  cfg.sweeps_per_sample = 0;
  const auto report = geweke_test(cfg);
  for (const auto& row : report.rows) {
    REQUIRE(row.mc_mean == row.sc_mean);
    REQUIRE(row.z_mean == 0.0);
  }
}

TEST_CASE("harness smoke run stays roughly calibrated") {
  GewekeConfig cfg;
  cfg.K = 3;
  cfg.T = 3;
  cfg.n_samples = 2000;
  cfg.sweeps_per_sample = 3;
  cfg.seed = 5;
  const auto report = geweke_test(cfg);
  REQUIRE(report.forward_accept_rate > 0.02);
  // loose gate; the acceptance suite runs the calibrated version
  REQUIRE(report.max_abs_z() < 8.0);
}
