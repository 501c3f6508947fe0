// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "dgnet/rng.hpp"

namespace dgnet {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(what);
}

// ---------------------------------------------------------------------------
// Samplers. All draws are pure functions of (parameters, rng).
// ---------------------------------------------------------------------------

inline double sample_gamma(Rng& rng, double shape, double rate) {
  require(shape > 0.0 && std::isfinite(shape), "sample_gamma: shape must be > 0");
  require(rate > 0.0 && std::isfinite(rate), "sample_gamma: rate must be > 0");
  // std::gamma_distribution is parameterized by scale.
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

inline long sample_poisson(Rng& rng, double mean) {
  require(mean >= 0.0 && std::isfinite(mean), "sample_poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  return std::poisson_distribution<long>(mean)(rng);
}

inline long sample_binomial(Rng& rng, long n, double p) {
  require(n >= 0, "sample_binomial: n must be >= 0");
  require(p >= 0.0 && p <= 1.0, "sample_binomial: p must be in [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  return std::binomial_distribution<long>(n, p)(rng);
}

// Zero-truncated Poisson, support {1, 2, ...}. Sequential inversion for small
// rates (rejection would need ~1/rate tries there), rejection otherwise.
inline long sample_ztpoisson(Rng& rng, double rate) {
  require(rate > 0.0 && std::isfinite(rate), "sample_ztpoisson: rate must be > 0");
  if (rate < 30.0) {
    const double u = uniform01(rng) * (-std::expm1(-rate));  // U(0, 1-e^-rate)
    double cdf = 0.0;
    double pk = std::exp(-rate) * rate;  // P(X=1) before truncation
    for (long k = 1; k < 4000; ++k) {
      cdf += pk;
      if (u < cdf) return k;
      pk *= rate / static_cast<double>(k + 1);
    }
    return 4000;  // cumulative rounding fallback, probability ~0
  }
  for (;;) {
    const long k = sample_poisson(rng, rate);
    if (k >= 1) return k;
  }
}

inline double sample_beta(Rng& rng, double a, double b) {
  const double x = sample_gamma(rng, a, 1.0);
  const double y = sample_gamma(rng, b, 1.0);
  return x / (x + y);
}

// ---------------------------------------------------------------------------
// Log densities / pmfs.
// ---------------------------------------------------------------------------

inline double gamma_logpdf(double x, double shape, double rate) {
  require(shape > 0.0 && rate > 0.0, "gamma_logpdf: shape and rate must be > 0");
  if (x <= 0.0) return kNegInf;
  return shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
         std::lgamma(shape);
}

inline double poisson_logpmf(long k, double mean) {
  require(mean >= 0.0, "poisson_logpmf: mean must be >= 0");
  if (k < 0) return kNegInf;
  if (mean == 0.0) return k == 0 ? 0.0 : kNegInf;
  return static_cast<double>(k) * std::log(mean) - mean -
         std::lgamma(static_cast<double>(k) + 1.0);
}

inline double ztpoisson_logpmf(long k, double rate) {
  require(rate > 0.0, "ztpoisson_logpmf: rate must be > 0");
  if (k < 1) return kNegInf;
  return poisson_logpmf(k, rate) - std::log1p(-std::exp(-rate));
}

inline double lchoose(long n, long k) {
  if (k < 0 || k > n) return kNegInf;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

inline double binomial_logpmf(long k, long n, double p) {
  require(n >= 0 && p >= 0.0 && p <= 1.0, "binomial_logpmf: bad parameters");
  if (k < 0 || k > n) return kNegInf;
  if (p == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p == 1.0) return k == n ? 0.0 : kNegInf;
  return lchoose(n, k) + static_cast<double>(k) * std::log(p) +
         static_cast<double>(n - k) * std::log1p(-p);
}

inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// ---------------------------------------------------------------------------
// Generic scalar MCMC building blocks.
// ---------------------------------------------------------------------------

// One slice-sampling update (stepping out + shrinkage, Neal 2003) for an
// unnormalized log density on the real line.
inline double slice_sample(Rng& rng, double x0,
                           const std::function<double(double)>& log_density,
                           double width = 1.0, int max_steps = 64) {
  const double logp0 = log_density(x0);
  if (!std::isfinite(logp0))
    throw std::runtime_error("slice_sample: log density not finite at start");
  const double log_y = logp0 + std::log(uniform01(rng));
  double lo = x0 - width * uniform01(rng);
  double hi = lo + width;
  for (int s = 0; s < max_steps && log_density(lo) > log_y; ++s) lo -= width;
  for (int s = 0; s < max_steps && log_density(hi) > log_y; ++s) hi += width;
  for (int s = 0; s < 1000; ++s) {
    const double x1 = lo + (hi - lo) * uniform01(rng);
    if (log_density(x1) > log_y) return x1;
    if (x1 < x0) lo = x1; else hi = x1;
  }
  return x0;
}

// Metropolis accept/reject from a log ratio; guards the single exponentiation.
inline bool mh_accept(Rng& rng, double log_r) {
  if (std::isnan(log_r)) return false;
  if (log_r >= 0.0) return true;
  return uniform01(rng) < std::exp(log_r);
}

}  // namespace dgnet
