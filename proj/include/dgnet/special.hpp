// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dgnet/distributions.hpp"

namespace dgnet {

// Modified Bessel function of the first kind,
//   I_a(x) = sum_{m>=0} (x/2)^{2m+a} / (m! Gamma(m+a+1)),
// evaluated by direct series summation with term-ratio recursion.
// Supported orders: a >= -1, plus negative integers via I_{-n} = I_n.
// The series is summed until the next term falls below 1e-15 of the running
// sum, with a hard cap of 10^4 terms.

namespace detail {

inline constexpr int kBesselMaxTerms = 10000;
inline constexpr double kBesselRelTol = 1e-15;

inline double normalize_bessel_order(double order) {
  const double rounded = std::nearbyint(order);
  if (order < 0.0 && rounded == order) return -order;  // integer symmetry
  if (order < -1.0)
    throw std::domain_error("bessel_i: order < -1 and non-integer unsupported");
  return order;
}

}  // namespace detail

inline double log_bessel_i(double order, double x) {
  require_finite(order, "log_bessel_i: order must be finite");
  require_finite(x, "log_bessel_i: x must be finite");
  require(x >= 0.0, "log_bessel_i: x must be >= 0");
  const double a = detail::normalize_bessel_order(order);
  if (x == 0.0) {
    if (a == 0.0) return 0.0;
    if (a > 0.0) return kNegInf;
    return std::numeric_limits<double>::infinity();  // a in (-1,0)
  }
  const double log_half_x = std::log(0.5 * x);
  // Skip leading terms with Gamma(m+a+1) at a pole (only a == -1, m == 0).
  const long m0 = (a == -1.0) ? 1 : 0;
  // The terms rise until m(m+a) reaches (x/2)^2: anchor the summation at the
  // peak and extend both ways until the contributions are negligible.
  require(x < 1e12, "log_bessel_i: argument too large");
  long m_peak = static_cast<long>(std::floor(0.5 * (-a + std::sqrt(a * a + x * x))));
  if (m_peak < m0) m_peak = m0;
  auto log_term_at = [&](long m) {
    return (2.0 * static_cast<double>(m) + a) * log_half_x -
           std::lgamma(static_cast<double>(m) + 1.0) -
           std::lgamma(static_cast<double>(m) + a + 1.0);
  };
  const double log_peak = log_term_at(m_peak);
  const double cutoff = -42.0;  // e^-42 of the peak term
  double acc = 1.0;
  double lt = log_peak;
  for (long m = m_peak; m > m0; --m) {
    lt += std::log(static_cast<double>(m)) + std::log(static_cast<double>(m) + a) -
          2.0 * log_half_x;
    if (!(lt - log_peak > cutoff)) break;
    acc += std::exp(lt - log_peak);
  }
  lt = log_peak;
  bool converged = false;
  for (long m = m_peak; m < m_peak + detail::kBesselMaxTerms; ++m) {
    lt += 2.0 * log_half_x - std::log(static_cast<double>(m) + 1.0) -
          std::log(static_cast<double>(m) + 1.0 + a);
    if (lt - log_peak < cutoff) {
      converged = true;
      break;
    }
    acc += std::exp(lt - log_peak);
  }
  if (!converged) throw std::runtime_error("log_bessel_i: series did not converge");
  return log_peak + std::log(acc);
}

inline double bessel_i(double order, double x) {
  require_finite(order, "bessel_i: order must be finite");
  require_finite(x, "bessel_i: x must be finite");
  require(x >= 0.0, "bessel_i: x must be >= 0");
  const double a = detail::normalize_bessel_order(order);
  if (x == 0.0) {
    if (a == 0.0) return 1.0;
    if (a > 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  if (x > 50.0) return std::exp(log_bessel_i(a, x));  // avoid linear overflow
  const double half_x_sq = 0.25 * x * x;
  int m0 = 0;
  if (a == -1.0) m0 = 1;
  double term = std::exp((2.0 * m0 + a) * std::log(0.5 * x) -
                         std::lgamma(static_cast<double>(m0) + 1.0) -
                         std::lgamma(static_cast<double>(m0) + a + 1.0));
  double sum = term;
  for (int m = m0; m < detail::kBesselMaxTerms; ++m) {
    const double mp1 = static_cast<double>(m) + 1.0;
    term *= half_x_sq / (mp1 * (mp1 + a));
    sum += term;
    if (term < detail::kBesselRelTol * sum && mp1 * (mp1 + a) > half_x_sq)
      return sum;
  }
  throw std::runtime_error("bessel_i: series did not converge");
}

}  // namespace dgnet
