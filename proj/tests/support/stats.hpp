// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <vector>

namespace testsupport {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double se_mean = 0.0;  // standard error of the mean
  double se_var = 0.0;   // standard error of the sample variance
  std::size_t n = 0;
};

inline Moments moments(const std::vector<double>& x) {
  Moments m;
  m.n = x.size();
  if (x.empty()) return m;
  const double n = static_cast<double>(x.size());
  for (double v : x) m.mean += v;
  m.mean /= n;
  double m2 = 0, m4 = 0;
  for (double v : x) {
    const double d = v - m.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m.var = m2 / (n - 1.0);
  m.se_mean = std::sqrt(m.var / n);
  // Var(s^2) ~ (mu4 - var^2) / n
  m.se_var = std::sqrt(std::max(0.0, m4 / n - m.var * m.var) / n);
  return m;
}

inline bool within_z(double estimate, double truth, double se, double z = 3.0) {
  return std::abs(estimate - truth) <= z * se;
}

}  // namespace testsupport
