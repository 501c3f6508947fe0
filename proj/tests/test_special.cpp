// Apache License, Version 2.0, refer to LICENSE.txt

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dgnet/special.hpp"

using namespace dgnet;

namespace {

// Independent term-by-term series oracle.
double series_oracle(double order, double x, int terms) {
  double sum = 0.0;
  for (int m = 0; m < terms; ++m) {
    const double lg = std::lgamma(static_cast<double>(m) + order + 1.0);
    if (!std::isfinite(lg)) continue;  // pole of the gamma function
    sum += std::exp((2.0 * m + order) * std::log(0.5 * x) -
                    std::lgamma(static_cast<double>(m) + 1.0) - lg);
  }
  return sum;
}

}  // namespace

TEST_CASE("order zero at the origin") {
  REQUIRE(bessel_i(0.0, 0.0) == 1.0);
  REQUIRE(bessel_i(2.0, 0.0) == 0.0);
  REQUIRE(log_bessel_i(0.0, 0.0) == 0.0);
}

TEST_CASE("integer-order symmetry") {
  for (double x : {0.5, 2.0, 10.0})
    REQUIRE(bessel_i(-1.0, x) == Catch::Approx(bessel_i(1.0, x)).epsilon(1e-14));
}

TEST_CASE("series value against the 50-term oracle") {
  const double oracle = series_oracle(1.0, 2.0, 50);
  REQUIRE(std::abs(bessel_i(1.0, 2.0) - oracle) < 1e-10);
  REQUIRE(std::abs(bessel_i(1.0, 2.0) - 1.5906368546373291) < 1e-10);
  REQUIRE(std::abs(bessel_i(-1.0, 2.0) - 1.5906368546373291) < 1e-10);
  REQUIRE(std::abs(bessel_i(0.0, 1.0) - series_oracle(0.0, 1.0, 50)) < 1e-12);
  REQUIRE(std::abs(bessel_i(2.5, 3.0) - series_oracle(2.5, 3.0, 60)) < 1e-10);
}

TEST_CASE("linear and log-space evaluation agree") {
  for (double order : {-1.0, -0.3, 0.0, 0.7, 1.0, 3.5, 10.0}) {
    for (double x : {1e-3, 0.1, 1.0, 5.0, 20.0, 45.0}) {
      const double lin = bessel_i(order, x);
      const double lg = log_bessel_i(order, x);
      if (lin > 0.0)
        REQUIRE(std::abs(std::log(lin) - lg) < 1e-10 * std::max(1.0, std::abs(lg)));
    }
  }
}

TEST_CASE("large arguments go through log space without overflow") {
  const double lg = log_bessel_i(0.0, 800.0);
  // asymptotically log I_0(x) ~ x - log(sqrt(2 pi x))
  REQUIRE(lg == Catch::Approx(800.0 - 0.5 * std::log(2.0 * M_PI * 800.0)).epsilon(1e-3));
  REQUIRE(std::isinf(bessel_i(0.0, 800.0)));  // linear overflow is the caller's signal
  const double big = log_bessel_i(2.0, 4000.0);
  REQUIRE(std::isfinite(big));
}

TEST_CASE("invalid inputs are rejected") {
  REQUIRE_THROWS_AS(bessel_i(0.0, -1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(bessel_i(std::nan(""), 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(bessel_i(0.0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(bessel_i(-2.5, 1.0), std::domain_error);
}

TEST_CASE("fractional negative orders above -1 follow the series") {
  const double v = bessel_i(-0.5, 1.5);
  REQUIRE(std::abs(v - series_oracle(-0.5, 1.5, 60)) < 1e-10 * v);
}
