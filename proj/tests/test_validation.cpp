// Apache License, Version 2.0, refer to LICENSE.txt

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dgnet/gradient_check.hpp"
#include "dgnet/sparsity.hpp"

using namespace dgnet;

TEST_CASE("finite differences are exact on a quadratic") {
  auto f = [](std::span<const double> x) {
    return -0.5 * (3.0 * x[0] * x[0] + x[1] * x[1]) + 2.0 * x[0] - x[1];
  };
  std::vector<double> x{0.7, -0.3};
  std::vector<double> grad{-3.0 * x[0] + 2.0, -x[1] - 1.0};
  REQUIRE(check_gradient(f, grad, x, 1e-4 * 0.01) < 1e-10);
}

namespace {

WeightSliceParams random_params(Rng& rng, std::size_t k, bool interior) {
  WeightSliceParams p;
  p.alpha = 0.5 + 2.0 * uniform01(rng);
  p.phi = 0.5 + 4.0 * uniform01(rng);
  p.tau = 0.5 + 2.0 * uniform01(rng);
  p.has_prev = interior;
  p.has_next = true;
  for (std::size_t i = 0; i < k; ++i) {
    p.multiplicity.push_back(static_cast<double>(static_cast<int>(uniform01(rng) * 4)));
    p.count_cur.push_back(static_cast<double>(1 + static_cast<int>(uniform01(rng) * 3)));
    p.count_prev.push_back(
        interior ? static_cast<double>(static_cast<int>(uniform01(rng) * 3)) : 0.0);
  }
  p.multiplicity[0] = std::max(1.0, p.multiplicity[0]);  // keep an m term active
  return p;
}

}  // namespace

TEST_CASE("slice gradient agrees with finite differences on random states") {
  Rng rng = make_rng(41);
  const std::vector<std::size_t> sizes{1, 3, 10};
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t k = sizes[static_cast<std::size_t>(rep) % sizes.size()];
    const auto params = random_params(rng, k, rep % 2 == 0);
    std::vector<double> w(k);
    for (auto& v : w) v = 0.05 + 2.0 * uniform01(rng);
    const double w_star = 0.1 + uniform01(rng);
    REQUIRE(check_weight_gradient(w, w_star, params, 1e-5) < 1e-6);
  }
}

TEST_CASE("a corrupted gradient is flagged") {
  Rng rng = make_rng(42);
  const auto params = random_params(rng, 3, true);
  std::vector<double> w{0.4, 1.1, 0.2};
  const double w_star = 0.6;
  std::vector<double> y(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) y[i] = std::log(w[i]);
  auto log_target_y = [&](std::span<const double> yv) {
    std::vector<double> wv(yv.size());
    double jac = 0.0;
    for (std::size_t i = 0; i < yv.size(); ++i) {
      wv[i] = std::exp(yv[i]);
      jac += yv[i];
    }
    return log_posterior_weights(wv, w_star, params) + jac;
  };
  std::vector<double> grad(w.size());
  grad_log_posterior_weights_y(w, w_star, params, grad);
  for (std::size_t i = 0; i < w.size(); ++i) grad[i] -= params.multiplicity[i];  // drop m
  REQUIRE(check_gradient(log_target_y, grad, y, 1e-5) > 1e-2);
}

TEST_CASE("edge density falls along a short alpha ladder") {
  HyperParams base{1.0, 1.0, 10.0, 0.5, {}};
  const auto rows = sparsity_experiment({2.0, 16.0}, base, 2, 8, 7);
  REQUIRE(rows.size() == 2);
  REQUIRE(strictly_decreasing_medians(rows));
}

TEST_CASE("degenerate alpha rows are skipped, not crashed") {
  HyperParams base{1.0, 1.0, 2.0, 0.5, {}};
  const auto rows = sparsity_experiment({0.1}, base, 1, 10, 11);
  REQUIRE(rows[0].skipped + static_cast<int>(rows[0].ratios.size()) == 10);
  REQUIRE(rows[0].skipped > 0);  // tiny alpha leaves many snapshots empty
}

TEST_CASE("constant-weight control stays dense") {
  HyperParams base{1.0, 1.0, 10.0, 0.5, {}};
  const auto rows = sparsity_dense_control({2.0, 8.0, 32.0}, 50, base, 2, 8, 13);
  REQUIRE(!strictly_decreasing_medians(rows));
  for (const auto& r : rows) REQUIRE(r.median_ratio > 0.2);  // near-complete graphs
}
