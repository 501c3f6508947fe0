// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace testsupport {

// Adaptive Simpson quadrature; test-side oracle, independent of the library.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_impl(const std::function<double(double)>& f, double a,
                                    double b, double fa, double fm, double fb,
                                    double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10, int depth = 40) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, b, fa, fm, fb);
  return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Integral over (0, inf) for a density-like integrand that decays
// exponentially: extends the upper limit until the tail is negligible.
inline double integrate_positive_axis(const std::function<double(double)>& f,
                                      double initial_hi = 8.0, double tol = 1e-10) {
  double hi = initial_hi;
  double total = integrate(f, 1e-12, hi, tol);
  for (int i = 0; i < 60; ++i) {
    const double ext = integrate(f, hi, hi * 2.0, tol);
    total += ext;
    hi *= 2.0;
    if (std::abs(ext) < tol && std::abs(f(hi)) < 1e-300) break;
  }
  return total;
}

}  // namespace testsupport
