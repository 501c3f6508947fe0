// Apache License, Version 2.0, refer to LICENSE.txt

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "dgnet/model.hpp"
#include "dgnet/rng.hpp"
#include "support/quadrature.hpp"
#include "support/stats.hpp"

using namespace dgnet;

TEST_CASE("transition atom mass") {
  const auto d = weight_transition_density(0.0, 1.0, 1.0, 1.0);
  REQUIRE(d.atom == Catch::Approx(std::exp(-1.0)));
  REQUIRE(d.density == 0.0);
}

TEST_CASE("transition atom plus continuous part integrates to one") {
  const double phi = 2.0, tau = 1.0, w = 0.7;
  const double atom = std::exp(-phi * w);
  const double cont = testsupport::integrate_positive_axis(
      [&](double x) { return weight_transition_density(x, w, phi, tau).density; }, 8.0);
  REQUIRE(atom + cont == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("transition normalization holds over random parameters") {
  Rng rng = make_rng(7);
  for (int i = 0; i < 4; ++i) {
    const double phi = 0.2 + 6.0 * uniform01(rng);
    const double tau = 0.3 + 3.0 * uniform01(rng);
    const double w = 0.05 + 3.0 * uniform01(rng);
    const double atom = std::exp(-phi * w);
    const double cont = testsupport::integrate_positive_axis(
        [&](double x) { return weight_transition_density(x, w, phi, tau).density; }, 12.0);
    REQUIRE(atom + cont == Catch::Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("transition density matches the mixture simulation") {
  // histogram of positive draws from the count/gamma mixture vs closed form
  const double phi = 2.0, tau = 1.0, w = 0.7;
  Rng rng = make_rng(99);
  const int n = 1000000;
  const double hi = 4.0;
  const int bins = 50;
  std::vector<long> hist(bins, 0);
  long positive = 0;
  for (int i = 0; i < n; ++i) {
    const long c = sample_poisson(rng, phi * w);
    if (c == 0) continue;
    const double x = sample_gamma(rng, static_cast<double>(c), phi + tau);
    ++positive;
    if (x < hi) ++hist[static_cast<int>(x / hi * bins)];
  }
  for (int b = 0; b < bins; ++b) {
    const double lo = hi * b / bins, up = hi * (b + 1) / bins;
    const double p = testsupport::integrate(
        [&](double x) { return weight_transition_density(x, w, phi, tau).density; },
        std::max(lo, 1e-12), up, 1e-12);
    const double se = std::sqrt(p * (1.0 - p) / n) + 1e-12;
    REQUIRE(std::abs(static_cast<double>(hist[b]) / n - p) < 3.0 * se);
  }
  REQUIRE(positive > 0);
}

TEST_CASE("root transition integrates to one") {
  const double alpha = 3.0, phi = 5.0, tau = 1.0, w = 2.0;
  const double total = testsupport::integrate_positive_axis(
      [&](double x) { return root_weight_transition_density(x, w, alpha, phi, tau); },
      16.0);
  REQUIRE(total == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("root transition is nonnegative on a log-spaced grid") {
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(-8.0 + 12.0 * i / 999.0);
    REQUIRE(root_weight_transition_density(x, 1.3, 2.5, 0.8, 1.7) >= 0.0);
  }
}

TEST_CASE("root transition at alpha=1 matches the poisson-gamma mixture") {
  const double alpha = 1.0, phi = 3.0, tau = 1.0, w = 0.9;
  Rng rng = make_rng(777);
  const int n = 1000000;
  const double hi = 3.0;
  const int bins = 40;
  std::vector<long> hist(bins, 0);
  for (int i = 0; i < n; ++i) {
    const long c = sample_poisson(rng, phi * w);
    const double x = sample_gamma(rng, alpha + static_cast<double>(c), phi + tau);
    if (x < hi) ++hist[static_cast<int>(x / hi * bins)];
  }
  for (int b = 0; b < bins; ++b) {
    const double lo = hi * b / bins, up = hi * (b + 1) / bins;
    const double p = testsupport::integrate(
        [&](double x) { return root_weight_transition_density(x, w, alpha, phi, tau); },
        std::max(lo, 1e-12), up, 1e-12);
    const double se = std::sqrt(p * (1.0 - p) / n) + 1e-12;
    REQUIRE(std::abs(static_cast<double>(hist[b]) / n - p) < 3.5 * se);
  }
}

TEST_CASE("edge probability basics") {
  std::vector<double> z{0.0};
  REQUIRE(edge_prob_from_history(z, z, 0.5) == 0.0);
  // strong forgetting keeps only the current term
  std::vector<double> wi{0.9, 0.4}, wj{0.2, 0.8};
  const double p = edge_prob_from_history(wi, wj, 50.0);
  REQUIRE(p == Catch::Approx(1.0 - std::exp(-2.0 * 0.4 * 0.8)).epsilon(1e-12));
  REQUIRE_THROWS_AS(edge_prob_from_history(std::vector<double>{-1.0}, z, 0.5),
                    std::invalid_argument);
}

TEST_CASE("edge probability matches forward simulation") {
  const double rho = 0.7;
  std::vector<double> wi{0.8, 0.3, 0.6}, wj{0.5, 0.9, 0.4};
  const double p = edge_prob_from_history(wi, wj, rho);
  Rng rng = make_rng(5150);
  const int n = 100000;
  const double pi = std::exp(-rho);
  int hits = 0;
  for (int r = 0; r < n; ++r) {
    long count = 0;
    for (std::size_t t = 0; t < wi.size(); ++t) {
      count = sample_binomial(rng, count, pi);
      count += sample_poisson(rng, 2.0 * wi[t] * wj[t]);
    }
    if (count > 0) ++hits;
  }
  const double se = std::sqrt(p * (1.0 - p) / n);
  REQUIRE(std::abs(static_cast<double>(hits) / n - p) < 3.0 * se);
}

TEST_CASE("persistence probabilities") {
  std::vector<double> wi{0.8, 0.3}, wj{0.5, 0.9};
  const auto probs = edge_persistence_probs(wi, wj, 0.6);
  REQUIRE(probs.appear ==
          Catch::Approx(1.0 - std::exp(-2.0 * 0.3 * 0.9)).epsilon(1e-12));
  std::vector<double> zi{0.5, 0.0};
  REQUIRE(edge_persistence_probs(zi, wj, 0.6).appear == 0.0);
  REQUIRE_THROWS_AS(edge_persistence_probs(std::vector<double>{1.0},
                                           std::vector<double>{1.0}, 0.5),
                    std::invalid_argument);
}

TEST_CASE("persistence and appearance compose to the marginal") {
  Rng rng = make_rng(42);
  for (int rep = 0; rep < 20; ++rep) {
    const int t = 2 + static_cast<int>(uniform01(rng) * 5);
    std::vector<double> wi(t), wj(t);
    for (int s = 0; s < t; ++s) {
      wi[s] = 0.1 + uniform01(rng);
      wj[s] = 0.1 + uniform01(rng);
    }
    const double rho = 0.2 + 2.0 * uniform01(rng);
    const auto probs = edge_persistence_probs(wi, wj, rho);
    std::vector<double> wi_prev(wi.begin(), wi.end() - 1);
    std::vector<double> wj_prev(wj.begin(), wj.end() - 1);
    const double p_prev = edge_prob_from_history(wi_prev, wj_prev, rho);
    const double p_now = edge_prob_from_history(wi, wj, rho);
    const double composed = probs.stay * p_prev + probs.appear * (1.0 - p_prev);
    REQUIRE(std::abs(composed - p_now) < 1e-10);
  }
}

namespace {

WeightSliceParams one_node_params(double m, double c_cur, double c_prev, double phi,
                                  double tau, bool has_prev, bool has_next) {
  WeightSliceParams p;
  p.multiplicity = {m};
  p.count_cur = {c_cur};
  p.count_prev = {c_prev};
  p.alpha = 1.5;
  p.phi = phi;
  p.tau = tau;
  p.has_prev = has_prev;
  p.has_next = has_next;
  return p;
}

}  // namespace

TEST_CASE("slice log posterior matches the hand expansion") {
  // K=1, m=2, c=1, c'=0, doubling the weight:
  //   diff = (m+c+c'-1) log 2 - rate*w - ((2w+ws)^2 - (w+ws)^2)
  const double w = 0.3, ws = 0.5, phi = 2.0, tau = 1.0;
  const auto p = one_node_params(2, 1, 0, phi, tau, true, true);
  const double rate = tau + 2.0 * phi;
  std::vector<double> w1{w}, w2{2.0 * w};
  const double diff = log_posterior_weights(w2, ws, p) - log_posterior_weights(w1, ws, p);
  const double hand = 2.0 * std::log(2.0) - rate * w -
                      ((2.0 * w + ws) * (2.0 * w + ws) - (w + ws) * (w + ws));
  REQUIRE(diff == Catch::Approx(hand).epsilon(1e-12));
}

TEST_CASE("slice log posterior is permutation invariant") {
  WeightSliceParams p;
  p.multiplicity = {2, 0, 5};
  p.count_cur = {1, 3, 0};
  p.count_prev = {0, 1, 2};
  p.alpha = 2.0;
  p.phi = 1.5;
  p.tau = 0.8;
  p.has_prev = true;
  p.has_next = true;
  std::vector<double> w{0.4, 1.2, 0.05};
  const double base = log_posterior_weights(w, 0.3, p);

  WeightSliceParams q = p;
  q.multiplicity = {5, 2, 0};
  q.count_cur = {0, 1, 3};
  q.count_prev = {2, 0, 1};
  std::vector<double> wp{0.05, 0.4, 1.2};
  REQUIRE(log_posterior_weights(wp, 0.3, q) == Catch::Approx(base).epsilon(1e-13));
}

TEST_CASE("slice log posterior decreases at large weights") {
  const auto p = one_node_params(3, 2, 1, 2.0, 1.0, true, true);
  double prev = log_posterior_weights(std::vector<double>{1.0}, 0.5, p);
  REQUIRE(std::isfinite(prev));
  for (double w : {5.0, 10.0, 50.0, 200.0}) {
    const double cur = log_posterior_weights(std::vector<double>{w}, 0.5, p);
    REQUIRE(std::isfinite(cur));
    REQUIRE(cur < prev);
    prev = cur;
  }
}

TEST_CASE("boundary slices drop one coupling from the rate") {
  const auto interior = one_node_params(1, 1, 1, 2.0, 1.0, true, true);
  const auto first = one_node_params(1, 1, 0, 2.0, 1.0, false, true);
  const auto last = one_node_params(1, 0, 1, 2.0, 1.0, true, false);
  REQUIRE(interior.rate() == Catch::Approx(5.0));
  REQUIRE(first.rate() == Catch::Approx(3.0));
  REQUIRE(last.rate() == Catch::Approx(3.0));
}
