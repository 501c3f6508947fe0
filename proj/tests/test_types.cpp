// Apache License, Version 2.0, refer to LICENSE.txt

#include <catch2/catch_amalgamated.hpp>

#include "dgnet/types.hpp"

using namespace dgnet;

TEST_CASE("hyper parameter validation") {
  HyperParams hp{3.0, 1.0, 20.0, 0.1, {}};
  REQUIRE_NOTHROW(hp.validate());
  REQUIRE(hp.forget_prob(1) == Catch::Approx(std::exp(-0.1)));
  hp.delta = {2.0};
  REQUIRE(hp.forget_prob(1) == Catch::Approx(std::exp(-0.2)));
  hp.rho = -0.5;
  REQUIRE_THROWS_AS(hp.validate(), std::invalid_argument);
  hp.rho = 0.0;
  hp.delta = {0.0};
  REQUIRE_THROWS_AS(hp.validate(), std::invalid_argument);
}

TEST_CASE("pair keys normalize orientation") {
  REQUIRE(PairKey(3, 1) == PairKey(1, 3));
  REQUIRE(PairKey(2, 2).self_loop());
  REQUIRE(PairKey(1, 3) < PairKey(2, 2));
}

TEST_CASE("interaction tensor invariants") {
  InteractionTensor n;
  n.T = 2;
  n.n_new.resize(2);
  n.n_old.resize(2);
  n.n_new[0][PairKey(0, 1)] = 3;
  n.n_new[1][PairKey(0, 1)] = 1;
  n.n_old[1][PairKey(0, 1)] = 2;
  REQUIRE_NOTHROW(n.validate());

  SECTION("multiplicities sum to twice the new-interaction count") {
    n.n_new[0][PairKey(1, 2)] = 2;
    n.n_new[0][PairKey(3, 3)] = 1;  // self pair contributes two endpoints
    const auto m = n.multiplicities(0);
    long total = 0, d_star = 0;
    for (const auto& [k, v] : m) total += v;
    for (const auto& [p, v] : n.n_new[0]) d_star += v;
    REQUIRE(total == 2 * d_star);
    REQUIRE(m.at(3) == 2);
  }

  SECTION("remembered interactions cannot exceed the previous total") {
    n.n_old[1][PairKey(0, 1)] = 4;
    REQUIRE_THROWS_AS(n.validate(), std::invalid_argument);
  }

  SECTION("the first slice keeps no memories") {
    n.n_old[0][PairKey(0, 1)] = 1;
    REQUIRE_THROWS_AS(n.validate(), std::invalid_argument);
  }
}

TEST_CASE("graph derives from interactions") {
  InteractionTensor n;
  n.T = 1;
  n.n_new.resize(1);
  n.n_old.resize(1);
  n.n_new[0][PairKey(0, 1)] = 2;
  n.n_new[0][PairKey(1, 4)] = 1;
  const auto g = DynamicGraph::from_interactions(n);
  REQUIRE(g.edge_count(0) == 2);
  REQUIRE(g.node_count(0) == 3);
}

TEST_CASE("observed network validation") {
  ObservedNetwork net;
  net.kind = ObservationKind::Binary;
  net.T = 1;
  net.data.resize(1);
  net.data[0][PairKey(0, 1)] = 1;
  REQUIRE_NOTHROW(net.validate());
  net.data[0][PairKey(0, 2)] = 2;
  REQUIRE_THROWS_AS(net.validate(), std::invalid_argument);
  net.data[0][PairKey(0, 2)] = 1;
  net.data[0][PairKey(3, 3)] = 1;
  REQUIRE_THROWS_AS(net.validate(), std::invalid_argument);  // self loop
  net.allow_self_loops = true;
  REQUIRE_NOTHROW(net.validate());
}

TEST_CASE("weight chain accessors") {
  WeightChain wc;
  wc.T = 2;
  wc.w.resize(2);
  wc.w_star = {0.5, 0.25};
  wc.w[0][3] = 1.5;
  REQUIRE(wc.at(0, 3) == 1.5);
  REQUIRE(wc.at(0, 4) == 0.0);
  REQUIRE(wc.total_mass(0) == Catch::Approx(2.0));
  REQUIRE_NOTHROW(wc.validate());
  wc.w[1][0] = 0.0;
  REQUIRE_THROWS_AS(wc.validate(), std::invalid_argument);
}
