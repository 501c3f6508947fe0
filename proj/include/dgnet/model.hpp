// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "dgnet/special.hpp"
#include "dgnet/types.hpp"

namespace dgnet {

// ---------------------------------------------------------------------------
// Weight transition law with the latent count marginalized out.
//
// Given w > 0 at one step, the next weight is 0 with probability e^{-phi w}
// (the count was zero) and otherwise has the Bessel-series density below.
// ---------------------------------------------------------------------------

struct TransitionDensity {
  double atom = 0.0;     // point mass at next weight == 0
  double density = 0.0;  // continuous density at next weight > 0
};

inline double weight_transition_logdensity(double w_next, double w_cur,
                                           double phi, double tau) {
  require(w_cur > 0.0 && std::isfinite(w_cur), "weight_transition: w_cur must be > 0");
  require(w_next > 0.0 && std::isfinite(w_next), "weight_transition: w_next must be > 0");
  require(phi > 0.0 && tau > 0.0, "weight_transition: phi and tau must be > 0");
  const double q = w_next * phi * w_cur * (tau + phi);
  return log_bessel_i(-1.0, 2.0 * std::sqrt(q)) +
         0.5 * (std::log(phi) + std::log(tau + phi) + std::log(w_cur) -
                std::log(w_next)) -
         phi * (w_next + w_cur) - tau * w_next;
}

inline TransitionDensity weight_transition_density(double w_next, double w_cur,
                                                   double phi, double tau) {
  require(w_next >= 0.0 && std::isfinite(w_next), "weight_transition: w_next must be >= 0");
  require(w_cur > 0.0 && std::isfinite(w_cur), "weight_transition: w_cur must be > 0");
  TransitionDensity out;
  out.atom = std::exp(-phi * w_cur);
  if (w_next > 0.0)
    out.density = std::exp(weight_transition_logdensity(w_next, w_cur, phi, tau));
  return out;
}

// Transition density of the remainder mass; always continuous since alpha > 0.
inline double root_weight_transition_logdensity(double w_next, double w_cur,
                                                double alpha, double phi,
                                                double tau) {
  require(w_next > 0.0 && w_cur > 0.0, "root_weight_transition: weights must be > 0");
  require(alpha > 0.0 && phi > 0.0 && tau > 0.0,
          "root_weight_transition: alpha, phi, tau must be > 0");
  const double q = w_next * phi * w_cur * (tau + phi);
  return log_bessel_i(alpha - 1.0, 2.0 * std::sqrt(q)) +
         0.5 * (alpha + 1.0) * std::log(tau + phi) +
         0.5 * (alpha - 1.0) * (std::log(w_next) - std::log(phi * w_cur)) -
         phi * (w_next + w_cur) - tau * w_next;
}

inline double root_weight_transition_density(double w_next, double w_cur,
                                             double alpha, double phi,
                                             double tau) {
  return std::exp(root_weight_transition_logdensity(w_next, w_cur, alpha, phi, tau));
}

// ---------------------------------------------------------------------------
// Closed-form edge probabilities from a pair of weight paths (unit gaps).
// ---------------------------------------------------------------------------

inline double pair_intensity(std::span<const double> wi, std::span<const double> wj,
                             double rho) {
  require(!wi.empty() && wi.size() == wj.size(),
          "pair_intensity: paths must be nonempty with equal length");
  require(rho >= 0.0, "pair_intensity: rho must be >= 0");
  const std::size_t t = wi.size();
  double lambda = 0.0;
  for (std::size_t k = 0; k < t; ++k) {
    const double a = wi[t - 1 - k];
    const double b = wj[t - 1 - k];
    require(a >= 0.0 && b >= 0.0, "pair_intensity: weights must be >= 0");
    lambda += std::exp(-static_cast<double>(k) * rho) * a * b;
  }
  return lambda;
}

inline double edge_prob_from_history(std::span<const double> wi,
                                     std::span<const double> wj, double rho) {
  return -std::expm1(-2.0 * pair_intensity(wi, wj, rho));
}

struct PersistenceProbs {
  double stay = 0.0;    // Pr(edge at t | edge at t-1)
  double appear = 0.0;  // Pr(edge at t | no edge at t-1)
};

inline PersistenceProbs edge_persistence_probs(std::span<const double> wi,
                                               std::span<const double> wj,
                                               double rho) {
  require(wi.size() >= 2 && wi.size() == wj.size(),
          "edge_persistence_probs: need paths of length >= 2");
  const double ab = wi.back() * wj.back();
  const double lambda_prev =
      pair_intensity(wi.first(wi.size() - 1), wj.first(wj.size() - 1), rho);
  PersistenceProbs out;
  out.appear = -std::expm1(-2.0 * ab);
  const double pi = std::exp(-rho);
  // Pr(n_t = 0 | n_{t-1} >= 1) = e^{-2ab} (e^{-2 pi l} - e^{-2l}) / (1 - e^{-2l});
  // the ratio tends to (1 - pi) as the prior intensity l vanishes.
  double ratio;
  if (lambda_prev > 0.0) {
    ratio = std::exp(-2.0 * pi * lambda_prev) * std::expm1(-2.0 * (1.0 - pi) * lambda_prev) /
            std::expm1(-2.0 * lambda_prev);
  } else {
    ratio = 1.0 - pi;
  }
  out.stay = 1.0 - std::exp(-2.0 * ab) * ratio;
  return out;
}

// ---------------------------------------------------------------------------
// Per-time joint posterior of the tracked weights and the remainder mass,
// up to normalization. The chain couplings present at a slice are explicit so
// first/last slices use single-neighbor shapes and rates.
// ---------------------------------------------------------------------------

struct WeightSliceParams {
  std::vector<double> multiplicity;  // m_ti over new interactions
  std::vector<double> count_cur;     // counts coupling this slice forward
  std::vector<double> count_prev;    // counts coupling the previous slice in
  double root_count_cur = 0.0;
  double root_count_prev = 0.0;
  double alpha = 1.0;
  double phi = 0.0;
  double tau = 1.0;
  bool has_prev = false;  // a count slice couples t-1 -> t
  bool has_next = false;  // a count slice couples t -> t+1

  double rate() const {
    return tau + phi * (static_cast<double>(has_prev) + static_cast<double>(has_next));
  }
  double node_shape(std::size_t i) const {
    return multiplicity[i] + count_cur[i] + count_prev[i];
  }
  double root_shape() const { return alpha + root_count_cur + root_count_prev; }
};

inline double log_posterior_weights(std::span<const double> w, double w_star,
                                    const WeightSliceParams& p) {
  require(w.size() == p.multiplicity.size() && w.size() == p.count_cur.size() &&
              w.size() == p.count_prev.size(),
          "log_posterior_weights: size mismatch");
  require(w_star > 0.0, "log_posterior_weights: w_star must be > 0");
  const double rate = p.rate();
  double sum_w = 0.0;
  double lp = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    require(w[i] > 0.0, "log_posterior_weights: weights must be > 0");
    lp += (p.node_shape(i) - 1.0) * std::log(w[i]);
    sum_w += w[i];
  }
  lp -= rate * sum_w;
  lp += (p.root_shape() - 1.0) * std::log(w_star) - rate * w_star;
  const double tot = sum_w + w_star;
  lp -= tot * tot;
  return lp;
}

// Gradient of the slice log posterior in y = log w coordinates (including the
// change-of-variables term), with the remainder mass held fixed.
inline void grad_log_posterior_weights_y(std::span<const double> w, double w_star,
                                         const WeightSliceParams& p,
                                         std::span<double> grad) {
  require(grad.size() == w.size(), "grad_log_posterior_weights_y: size mismatch");
  const double rate = p.rate();
  double sum_w = 0.0;
  for (double v : w) sum_w += v;
  const double pull = rate + 2.0 * (sum_w + w_star);
  for (std::size_t i = 0; i < w.size(); ++i)
    grad[i] = p.node_shape(i) - w[i] * pull;
}

}  // namespace dgnet
