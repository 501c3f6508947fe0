// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "dgnet/model.hpp"

namespace dgnet {

// Central finite differences against an analytic gradient; returns the worst
// relative error, with small components compared on an absolute scale.
inline double check_gradient(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> analytic,
                             std::span<const double> x, double h) {
  require(h > 0.0 && h <= 1e-3, "check_gradient: h must be in (0, 1e-3]");
  std::vector<double> xp(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < xp.size(); ++i) {
    const double orig = xp[i];
    xp[i] = orig + h;
    const double fp = f(xp);
    xp[i] = orig - h;
    const double fm = f(xp);
    xp[i] = orig;
    const double fd = (fp - fm) / (2.0 * h);
    const double err = std::abs(fd - analytic[i]) / std::max(1.0, std::abs(analytic[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

// Specialization for the weight-slice target in log-weight coordinates: the
// finite differences touch only the density evaluator, never the analytic
// gradient path.
inline double check_weight_gradient(std::span<const double> w, double w_star,
                                    const WeightSliceParams& params, double h) {
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
  return check_gradient(log_target_y, grad, y, h);
}

}  // namespace dgnet
